#include "dlstrata/weyl.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace dls {

std::string WeylCtx::name() const {
    const char* t = "ABCD";
    std::string s(1, t[static_cast<int>(type)]);
    s += std::to_string(rank);
    if (twisted) s = "2" + s;
    return s;
}

WeylElem::WeylElem(WeylCtx ctx, std::vector<int> image, std::vector<int> word)
    : ctx_(ctx), img_(std::move(image)), word_(std::move(word)) {
    const int n = ctx_.points();
    if (static_cast<int>(img_.size()) != n) throw WeylError("signed permutation has wrong size");
    std::vector<char> seen(n + 1, 0);
    int neg = 0;
    for (int v : img_) {
        int a = std::abs(v);
        if (a < 1 || a > n || seen[a]) throw WeylError("not a signed permutation");
        seen[a] = 1;
        if (v < 0) ++neg;
    }
    if (ctx_.type == WeylType::A && neg) throw WeylError("type A element with sign changes");
    if (ctx_.type == WeylType::D && neg % 2) throw WeylError("type D element with odd sign changes");
}

WeylElem WeylElem::identity(const WeylCtx& ctx) {
    std::vector<int> img(ctx.points());
    for (int i = 0; i < ctx.points(); ++i) img[i] = i + 1;
    return WeylElem(ctx, img);
}

WeylElem WeylElem::simple(const WeylCtx& ctx, int i) {
    if (i < 1 || i > ctx.rank) throw WeylError("simple reflection index out of range");
    std::vector<int> img(ctx.points());
    for (int j = 0; j < ctx.points(); ++j) img[j] = j + 1;
    const int m = ctx.rank;
    if (ctx.type == WeylType::A || i < m) {
        std::swap(img[i - 1], img[i]);
    } else if (ctx.type == WeylType::D) {
        if (m < 2) throw WeylError("type D needs rank at least 2");
        img[m - 2] = -m;
        img[m - 1] = -(m - 1);
    } else {
        img[m - 1] = -m;
    }
    return WeylElem(ctx, img, {i});
}

bool WeylElem::is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
        if (img_[i] != static_cast<int>(i) + 1) return false;
    return true;
}

WeylElem WeylElem::operator*(const WeylElem& o) const {
    if (!(ctx_ == o.ctx_)) throw WeylError("elements of different Weyl groups");
    std::vector<int> img(img_.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        int v = o.img_[i];
        int a = img_[std::abs(v) - 1];
        img[i] = v > 0 ? a : -a;
    }
    std::vector<int> w = word_;
    w.insert(w.end(), o.word_.begin(), o.word_.end());
    return WeylElem(ctx_, img, w);
}

WeylElem WeylElem::inverse() const {
    std::vector<int> img(img_.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        int v = img_[i];
        img[std::abs(v) - 1] = v > 0 ? static_cast<int>(i) + 1 : -static_cast<int>(i) - 1;
    }
    std::vector<int> w(word_.rbegin(), word_.rend());
    return WeylElem(ctx_, img, w);
}

std::string BasisVec::str() const {
    std::string s = sign < 0 ? "-" : "";
    s += kind;
    if (kind != 'v') s += "_" + std::to_string(index);
    return s;
}

WeylElem from_word(const WeylCtx& ctx, const std::vector<int>& word) {
    WeylElem w = WeylElem::identity(ctx);
    for (int s : word) w = w * WeylElem::simple(ctx, s);
    return w;
}

BasisVec act(const WeylElem& w, BasisVec b) {
    const int n = w.ctx().points();
    if (b.kind == 'v') {
        if (w.ctx().type != WeylType::B) throw WeylError("anisotropic vector only in type B");
        int neg = 0;
        for (int v : w.image()) neg += v < 0;
        if (neg % 2) b.sign = -b.sign;
        return b;
    }
    if (b.index < 1 || b.index > n) throw WeylError("basis index out of range");
    int v = w(b.index);
    if (w.ctx().type == WeylType::A) {
        if (b.kind != 'e') throw WeylError("type A acts on e_i only");
        return {'e', v, b.sign};
    }
    bool flip = v < 0;
    char k = b.kind;
    if (flip) k = k == 'e' ? 'f' : 'e';
    return {k, std::abs(v), b.sign};
}

namespace {

// first nonzero coefficient of the image of a positive root is negative
bool sends_negative(const WeylElem& w, int i, int si, int j, int sj) {
    // root si*eps_i + sj*eps_j (j == 0: multiple of eps_i)
    int a = w(i), b = j ? w(j) : 0;
    int ca = si * (a > 0 ? 1 : -1), pa = std::abs(a);
    if (!j) return ca < 0;
    int cb = sj * (b > 0 ? 1 : -1), pb = std::abs(b);
    return pa < pb ? ca < 0 : cb < 0;
}

}  // namespace

int length(const WeylElem& w) {
    const WeylType t = w.ctx().type;
    const int n = w.ctx().points();
    int len = 0;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (sends_negative(w, i, 1, j, -1)) ++len;
            if (t != WeylType::A && sends_negative(w, i, 1, j, 1)) ++len;
        }
        if ((t == WeylType::B || t == WeylType::C) && sends_negative(w, i, 1, 0, 0)) ++len;
    }
    return len;
}

bool is_left_descent(const WeylElem& w, int s) {
    return length(WeylElem::simple(w.ctx(), s) * w) < length(w);
}

bool is_right_descent(const WeylElem& w, int s) {
    return length(w * WeylElem::simple(w.ctx(), s)) < length(w);
}

std::vector<int> reduced_word(const WeylElem& w) {
    std::vector<int> out;
    WeylElem x(w.ctx(), w.image());
    int len = length(x);
    while (len > 0) {
        for (int s = 1; s <= x.ctx().rank; ++s) {
            WeylElem y = WeylElem::simple(x.ctx(), s) * x;
            int l = length(y);
            if (l < len) {
                out.push_back(s);
                x = WeylElem(y.ctx(), y.image());
                len = l;
                break;
            }
        }
    }
    return out;
}

std::set<int> support(const WeylElem& w) {
    auto word = reduced_word(w);
    return std::set<int>(word.begin(), word.end());
}

ParabolicIndex full_index(const WeylCtx& ctx) {
    ParabolicIndex I{ctx, {}};
    for (int s = 1; s <= ctx.rank; ++s) I.gens.insert(s);
    return I;
}

ParabolicIndex twist(const ParabolicIndex& I) {
    if (!I.ctx.twisted) return I;
    const int m = I.ctx.rank;
    ParabolicIndex J{I.ctx, {}};
    for (int s : I.gens) J.gens.insert(s == m ? m - 1 : s == m - 1 ? m : s);
    return J;
}

int longest_length(const ParabolicIndex& I) {
    WeylElem w = WeylElem::identity(I.ctx);
    int len = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int s : I.gens) {
            WeylElem y = w * WeylElem::simple(I.ctx, s);
            int l = length(y);
            if (l > len) {
                w = WeylElem(y.ctx(), y.image());
                len = l;
                grew = true;
            }
        }
    }
    return len;
}

bool is_min_double_coset(const WeylElem& w, const ParabolicIndex& I, const ParabolicIndex& J) {
    for (int s : I.gens)
        if (is_left_descent(w, s)) return false;
    for (int s : J.gens)
        if (is_right_descent(w, s)) return false;
    return true;
}

int dl_dimension(const ParabolicIndex& I, const WeylElem& w) {
    ParabolicIndex J = twist(I);
    if (!is_min_double_coset(w, I, J))
        throw WeylError("element is not minimal in its double coset");
    ParabolicIndex K{I.ctx, {}};
    WeylElem wi = w.inverse();
    for (int s : I.gens) {
        WeylElem c = wi * WeylElem::simple(I.ctx, s) * w;
        for (int t : J.gens)
            if (c == WeylElem::simple(I.ctx, t)) {
                K.gens.insert(s);
                break;
            }
    }
    return length(w) + longest_length(J) - longest_length(K);
}

bool irreducible(const ParabolicIndex& I, const WeylElem& w) {
    ParabolicIndex J0{I.ctx, I.gens};
    for (int s : support(w)) J0.gens.insert(s);
    for (int s : twist(J0).gens) J0.gens.insert(s);
    return J0.gens.size() == static_cast<std::size_t>(I.ctx.rank);
}

std::string to_string(Family f) {
    switch (f) {
        case Family::W: return "w";
        case Family::WPrime: return "wprime";
        case Family::G: return "g";
        case Family::WLambda: return "wLambda";
        case Family::WLambdaPrime: return "wLambdaPrime";
    }
    return "w";
}

namespace {

// ascending run from..to, empty when to < from
void up(std::vector<int>& out, int from, int to) {
    for (int i = from; i <= to; ++i) out.push_back(i);
}

// descending run from..to, empty when from < to
void down(std::vector<int>& out, int from, int to) {
    for (int i = from; i >= to; --i) out.push_back(i);
}

std::vector<int> g_word(const WeylCtx& ctx, int i, int sign) {
    const int m = ctx.rank;
    if (i < 1 || i > m) throw WeylError("g_i index out of range");
    std::vector<int> w;
    if (ctx.type == WeylType::D) {
        if (i == m) return {sign > 0 ? m - 1 : m};
        up(w, i, m - 2);
        w.push_back(m);
        w.push_back(m - 1);
        down(w, m - 2, i);
        return w;
    }
    up(w, i, m);
    down(w, m - 1, i);
    return w;
}

}  // namespace

std::vector<int> family_word(const WeylCtx& ctx, Family f, const FamilyParams& p) {
    std::vector<int> w;
    if (ctx.type == WeylType::A) {
        // global indices shifted so that s_{t2+1} is the first simple reflection
        const int o = p.t2, t1 = p.t2 + ctx.rank + 1;
        if (f != Family::W) throw WeylError("type A supports only the w family");
        if (!(p.t2 <= p.s && p.s <= p.h && p.h <= p.r && p.r <= t1))
            throw WeylError("linear parameters out of range");
        for (int i = p.h; i <= p.r - 1; ++i) w.push_back(i - o);
        for (int i = p.h - 1; i >= p.s + 1; --i) w.push_back(i - o);
        return w;
    }
    const int T = ctx.rank;
    switch (f) {
        case Family::G:
            return g_word(ctx, p.i, p.sign);
        case Family::W: {
            if (!(0 <= p.s && p.s <= p.h && p.h < p.r && p.r <= T))
                throw WeylError("w_rs needs 0 <= s <= h < r <= t");
            up(w, T - p.h, T - p.s - 1);
            auto g = g_word(ctx, T - p.s, p.sign);
            w.insert(w.end(), g.begin(), g.end());
            down(w, T - p.h - 1, T - p.r + 1);
            return w;
        }
        case Family::WPrime: {
            if (!(0 <= p.s && p.s < p.h && p.h < p.r && p.r <= T))
                throw WeylError("w'_rs needs 0 <= s < h < r <= t");
            if (ctx.type == WeylType::D && p.sign < 0) {
                if (p.s != 0 || p.h != 1) throw WeylError("w'^- is defined only for s = 0, h = 1");
                w.push_back(T);
                down(w, T - 2, T - p.r + 1);
                return w;
            }
            down(w, T - p.h, T - p.r + 1);
            up(w, T - p.h + 1, T - p.s - 1);
            return w;
        }
        case Family::WLambda: {
            if (!(0 <= p.h && p.h < T)) throw WeylError("w_Lambda needs h < t");
            return g_word(ctx, T - p.h, p.sign);
        }
        case Family::WLambdaPrime: {
            if (!(0 < p.h && p.h < T)) throw WeylError("w'_Lambda needs 0 < h < t");
            return {T - p.h};
        }
    }
    return w;
}

WeylElem build_family(const WeylCtx& ctx, Family f, const FamilyParams& p) {
    auto word = family_word(ctx, f, p);
    for (int s : word)
        if (s < 1 || s > ctx.rank) throw WeylError("family word leaves the simple reflections");
    return from_word(ctx, word);
}

ParabolicIndex stratum_index(const WeylCtx& ctx, int r, int s, int t2) {
    ParabolicIndex I = full_index(ctx);
    if (ctx.type == WeylType::A) {
        for (int j = s; j <= r; ++j) I.gens.erase(j - t2);
        return I;
    }
    const int T = ctx.rank;
    for (int d = T - r; d <= T - s; ++d) {
        if (d < 1) continue;
        if (ctx.type == WeylType::D && d == T - 1) {
            I.gens.erase(T - 1);
            I.gens.erase(T);
        } else {
            I.gens.erase(d);
        }
    }
    return I;
}

std::vector<std::pair<BasisVec, BasisVec>> diagram_action(int t, Family f, int r, int s, int h) {
    if (f != Family::W && f != Family::WPrime) throw WeylError("diagrams exist for w and w' only");
    const int a = t - r + 1, b = t - h, c = t - s;
    std::vector<std::pair<BasisVec, BasisVec>> out;
    for (char k : {'e', 'f'}) {
        const char o = k == 'e' ? 'f' : 'e';
        for (int i = 1; i <= t; ++i) {
            BasisVec x{k, i, 1}, y = x;
            if (i >= a && i <= c) {
                if (f == Family::W && s == h) {
                    y = i == a ? BasisVec{o, b, 1} : BasisVec{k, i - 1, 1};
                } else if (i == a) {
                    y = {k, b + 1, 1};
                } else if (i <= b) {
                    y = {k, i - 1, 1};
                } else if (i < c) {
                    y = {k, i + 1, 1};
                } else {
                    y = f == Family::W ? BasisVec{o, b, 1} : BasisVec{k, b, 1};
                }
            }
            out.push_back({x, y});
        }
    }
    return out;
}

std::vector<std::pair<WeylElem, int>> enumerate_group(const WeylCtx& ctx) {
    std::vector<std::pair<WeylElem, int>> out;
    std::map<std::vector<int>, int> seen;
    WeylElem id = WeylElem::identity(ctx);
    out.push_back({id, 0});
    seen[id.image()] = 0;
    for (std::size_t head = 0; head < out.size(); ++head) {
        for (int s = 1; s <= ctx.rank; ++s) {
            WeylElem y = out[head].first * WeylElem::simple(ctx, s);
            if (seen.count(y.image())) continue;
            seen[y.image()] = out[head].second + 1;
            out.push_back({y, out[head].second + 1});
        }
    }
    return out;
}

}  // namespace dls
