#include "dlstrata/strata.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "dlstrata/gf.hpp"
#include "dlstrata/linalg.hpp"

namespace dls {

std::string to_string(CaseKind c) {
    switch (c) {
        case CaseKind::Z: return "z";
        case CaseKind::Y: return "y";
        case CaseKind::ZY: return "zy";
    }
    return "z";
}

CaseKind case_from_string(const std::string& s) {
    if (s == "z" || s == "Z") return CaseKind::Z;
    if (s == "y" || s == "Y") return CaseKind::Y;
    if (s == "zy" || s == "ZY") return CaseKind::ZY;
    throw StrataError("unknown case: " + s + " (expected z, y or zy)");
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::W: return "w";
        case Kind::WPrime: return "wprime";
        case Kind::Id: return "id";
    }
    return "id";
}

std::string to_string(MemberRoute r) {
    switch (r) {
        case MemberRoute::Generator: return "generator";
        case MemberRoute::BruteForce: return "brute-force";
        case MemberRoute::Orbit: return "orbit";
    }
    return "generator";
}

MemberRoute route_from_string(const std::string& s) {
    if (s == "generator") return MemberRoute::Generator;
    if (s == "brute-force" || s == "brute") return MemberRoute::BruteForce;
    if (s == "orbit") return MemberRoute::Orbit;
    throw StrataError("unknown member route: " + s);
}

std::string StratumLabel::str() const {
    std::string o = to_string(kind) + "(" + std::to_string(r) + "," + std::to_string(s) + ")";
    if (sign > 0) o += "+";
    if (sign < 0) o += "-";
    return o;
}

// ---------------------------------------------------------------- config

void StrataConfig::validate() const {
    if (p < 3 || !is_prime(p)) throw StrataError("p must be an odd prime");
    if (e < 1 || k < 1) throw StrataError("field degrees e and k must be at least 1");
    auto even = [](int v, const char* name) {
        if (v < 0) throw StrataError(std::string(name) + " must be non-negative");
        if (v % 2 != 0) throw StrataError(std::string(name) + " must be even (types are even)");
    };
    switch (kind) {
        case CaseKind::Z:
            even(t, "t");
            even(h, "h");
            if (h > t) throw StrataError("Z case needs t >= h");
            break;
        case CaseKind::Y:
            even(t, "t");
            even(h, "h");
            if (n < 1) throw StrataError("Y case needs n >= 1");
            if (t > h) throw StrataError("Y case needs t <= h");
            if (h > 2 * (n / 2)) throw StrataError("Y case needs h <= 2 floor(n/2)");
            break;
        case CaseKind::ZY:
            even(t1, "t1");
            even(t2, "t2");
            even(h, "h");
            if (!(t2 <= h && h <= t1)) throw StrataError("ZY case needs t2 <= h <= t1");
            break;
    }
    if (form) {
        if (kind != CaseKind::Y || (n - t) % 2 != 0)
            throw StrataError("form override applies only to the even orthogonal (Y) case");
        if (*form != FormKind::SymSplit && *form != FormKind::SymNonsplit)
            throw StrataError("form override must be split or non-split");
        if (*form == FormKind::SymNonsplit && n - t < 2)
            throw StrataError("non-split form needs dimension n-t >= 2");
    }
}

int StrataConfig::T() const {
    switch (kind) {
        case CaseKind::Z: return t / 2;
        case CaseKind::Y: return n / 2 - t / 2;
        case CaseKind::ZY: return t1 / 2;
    }
    return 0;
}

int StrataConfig::H() const {
    switch (kind) {
        case CaseKind::Z: return h / 2;
        case CaseKind::Y: return n / 2 - h / 2;
        case CaseKind::ZY: return h / 2;
    }
    return 0;
}

FormKind StrataConfig::space_kind() const {
    switch (kind) {
        case CaseKind::Z: return FormKind::Symplectic;
        case CaseKind::ZY: return FormKind::None;
        case CaseKind::Y:
            if ((n - t) % 2 != 0) return FormKind::SymOdd;
            if (form) return *form;
            return (h == n && n - t >= 2) ? FormKind::SymNonsplit : FormKind::SymSplit;
    }
    return FormKind::None;
}

std::size_t StrataConfig::space_dim() const {
    switch (kind) {
        case CaseKind::Z: return static_cast<std::size_t>(t);
        case CaseKind::Y: return static_cast<std::size_t>(n - t);
        case CaseKind::ZY: return static_cast<std::size_t>((t1 - t2) / 2);
    }
    return 0;
}

unsigned StrataConfig::working_degree() const {
    if (space_kind() == FormKind::SymNonsplit && k % 2 != 0) return 2 * k;
    return k;
}

std::uint64_t StrataConfig::q() const { return ipow(p, e); }

bool StrataConfig::signed_case() const {
    if (kind != CaseKind::Y || (n - t) % 2 != 0 || n - t == 0) return false;
    FormKind f = space_kind();
    return (f == FormKind::SymNonsplit && h == n) || (f == FormKind::SymSplit && h == n - 2);
}

json StrataConfig::to_json() const {
    json j;
    j["case"] = to_string(kind);
    if (kind == CaseKind::Y) j["n"] = n;
    j["h"] = h;
    if (kind == CaseKind::ZY) {
        j["t1"] = t1;
        j["t2"] = t2;
    } else {
        j["t"] = t;
    }
    j["p"] = p;
    j["e"] = e;
    j["q"] = q();
    j["k"] = k;
    j["form"] = to_string(space_kind());
    j["space_dim"] = space_dim();
    j["T"] = T();
    j["H"] = H();
    return j;
}

Instance Instance::make(const StrataConfig& cfg) {
    cfg.validate();
    Instance I;
    I.cfg = cfg;
    I.k = cfg.k;
    auto F = FieldCtx::make(cfg.p, cfg.e, cfg.working_degree());
    I.space = FormedSpace::build(F, cfg.space_kind(), cfg.space_dim());
    return I;
}

// ---------------------------------------------------------------- classification

bool member(const Instance& I, const Subspace& U) {
    if (U.space() != I.space) throw StrataError("subspace does not live in the configured space");
    const std::size_t d = static_cast<std::size_t>(I.cfg.member_dim());
    if (U.dim() != d) throw StrataError("member test: dimension " + std::to_string(U.dim()) +
                                        " differs from the configured " + std::to_string(d));
    if (I.space->formed() && !is_isotropic(U)) return false;
    return intersect(U, apply_phi(U)).dim() + 1 >= d;
}

int component_sign(const Subspace& F) {
    const auto& sp = F.space();
    if (sp->kind() != FormKind::SymSplit && sp->kind() != FormKind::SymNonsplit)
        throw StrataError("component sign needs an even orthogonal space");
    const std::size_t m = sp->half();
    if (F.dim() != m || !is_isotropic(F))
        throw StrataError("component sign needs a maximal isotropic subspace");
    Mat ref(m, sp->dim());
    for (std::size_t i = 0; i < m; ++i) ref(i, i) = 1;
    std::size_t c = intersect(F, Subspace(sp, F.k(), ref)).dim();
    return (c % 2) == (m % 2) ? +1 : -1;
}

Classification classify_flag(const Instance& I, const Subspace& U) {
    const StrataConfig& cfg = I.cfg;
    const bool formed = I.space->formed();
    Classification c;
    c.down.push_back(U);
    while (!is_phi_stable(c.down.back())) {
        const Subspace& F = c.down.back();
        Subspace G = intersect(F, apply_phi(F));
        if (G.dim() + 1 != F.dim())
            throw StrataError("downward chain step drops dimension by " +
                              std::to_string(F.dim() - G.dim()));
        c.down.push_back(std::move(G));
    }
    c.label.r = cfg.T() - static_cast<int>(c.down.back().dim());

    c.up.push_back(U);
    while (true) {
        const Subspace& F = c.up.back();
        if (is_phi_stable(F)) {
            c.label.kind = !formed ? Kind::W : (c.up.size() == 1 ? Kind::Id : Kind::WPrime);
            break;
        }
        Subspace S = sum(F, apply_phi(F));
        if (S.dim() != F.dim() + 1)
            throw StrataError("upward chain step raises dimension by " +
                              std::to_string(S.dim() - F.dim()));
        if (formed && !is_isotropic(S)) {
            c.label.kind = Kind::W;
            break;
        }
        c.up.push_back(std::move(S));
    }
    c.label.s = cfg.T() - static_cast<int>(c.up.back().dim());

    if (cfg.signed_case()) {
        if (cfg.space_kind() == FormKind::SymNonsplit && c.label.kind == Kind::W)
            c.label.sign = component_sign(U);
        else if (cfg.space_kind() == FormKind::SymSplit && c.label.kind == Kind::WPrime &&
                 c.label.s == 0)
            c.label.sign = component_sign(c.up.back());
    }
    return c;
}

StratumLabel classify(const Instance& I, const Subspace& U) { return classify_flag(I, U).label; }

Kind kr_class(const Instance& I, const Subspace& U) {
    if (is_phi_stable(U)) return Kind::Id;
    if (!I.space->formed()) return Kind::W;
    return is_isotropic(sum(U, apply_phi(U))) ? Kind::WPrime : Kind::W;
}

// ---------------------------------------------------------------- member streams

namespace {

struct Work {
    std::uint64_t used = 0, budget = 0;
    void tick(std::uint64_t n = 1) {
        used += n;
        if (used > budget) throw BudgetExceeded("member enumeration budget exceeded");
    }
};

Subspace rewrap(const Instance& I, const Subspace& U) { return Subspace(I.space, I.k, U.basis()); }

std::vector<Subspace> rational_isotropic(const Instance& I, std::size_t d, Work& w) {
    std::vector<Subspace> out;
    std::uint64_t left = w.budget > w.used ? w.budget - w.used : 0;
    std::uint64_t n = enumerate_subspaces(
        I.space, d, 1, I.space->formed(),
        [&](const Subspace& U) {
            out.push_back(rewrap(I, U));
            return true;
        },
        left);
    w.tick(n);
    return out;
}

// Members whose chain U cap Phi U is rational: W + <c> for rational W of dim d-1.
// With keep_level, only those U with U + Phi^-1 U isotropic are reported.
void extend_rational(const Instance& I, const Subspace& W, const Mat& Rinv, bool keep_level,
                     const std::function<void(Subspace)>& out, Work& work) {
    const FormedSpace& sp = *I.space;
    const FieldCtx& F = sp.F();
    const std::size_t n = sp.dim();
    const bool formed = sp.formed();
    const Mat& G = sp.rational_gram();

    // W and its perp in rational coordinates (entries in GF(q))
    Mat Wr = mul(F, W.basis(), Rinv);
    Mat perp_r = formed ? (Wr.rows ? nullspace(F, mul(F, Wr, G)) : Mat::identity(n))
                        : Mat::identity(n);
    Mat acc = Wr;
    std::size_t rk = rank(F, acc);
    Mat C(0, n);
    for (std::size_t i = 0; i < perp_r.rows; ++i) {
        Mat trial = acc;
        trial.append_row(perp_r.row(i));
        std::size_t r2 = rank(F, trial);
        if (r2 > rk) {
            acc = std::move(trial);
            rk = r2;
            C.append_row(perp_r.row(i));
        }
    }
    const std::size_t c = C.rows;
    if (c == 0) return;
    Mat GC = formed ? mul(F, mul(F, C, G), transpose(C)) : Mat(c, c);
    Mat CR = mul(F, C, sp.rational_basis());  // complement in standard coordinates

    const std::vector<Elt> alpha = F.subfield(I.k);
    const std::size_t A = alpha.size();
    // cheap candidate vectors are not charged one by one, but their number is bounded
    long double cand = 0;
    for (std::size_t i = 0; i < c; ++i) cand = cand * A + 1;
    if (cand > 64.0L * work.budget) throw BudgetExceeded("member enumeration budget exceeded");
    std::vector<Elt> a(c), fa(c);
    std::vector<std::size_t> idx(c);
    for (std::size_t lead = 0; lead < c; ++lead) {
        std::fill(a.begin(), a.end(), 0);
        a[lead] = 1;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t j = lead + 1; j < c; ++j) a[j] = alpha[idx[j]];
            bool rational = true;
            for (std::size_t j = lead + 1; j < c && rational; ++j)
                if (F.frob(a[j]) != a[j]) rational = false;
            bool ok = !rational;
            if (ok && formed && !sp.alternating() && bilinear(F, GC, a.data(), a.data()) != 0)
                ok = false;
            if (ok && formed && keep_level) {
                for (std::size_t j = 0; j < c; ++j) fa[j] = F.frob_inv(a[j]);
                if (bilinear(F, GC, a.data(), fa.data()) != 0) ok = false;
            }
            if (ok) {
                work.tick();
                Mat rows = W.basis();
                if (rows.rows == 0) rows = Mat(0, n);
                std::vector<Elt> v(n, 0);
                for (std::size_t j = 0; j < c; ++j)
                    if (a[j])
                        for (std::size_t t = 0; t < n; ++t)
                            v[t] = F.add(v[t], F.mul(a[j], CR(j, t)));
                rows.append_row(v.data());
                out(Subspace(I.space, I.k, std::move(rows)));
            }
            std::size_t j = c;
            bool done = true;
            while (j > lead + 1) {
                --j;
                if (++idx[j] < A) {
                    done = false;
                    break;
                }
                idx[j] = 0;
            }
            if (done) break;
        }
    }
}

// Members whose down chain ends at the rational root W (W itself when dim W = d).
void members_from_root(const Instance& I, const Subspace& W, const Mat& Rinv,
                       const std::function<void(const Subspace&)>& emit, Work& work) {
    const std::size_t d = static_cast<std::size_t>(I.cfg.member_dim());
    const bool formed = I.space->formed();
    const std::size_t b = W.dim();
    if (b == d) {
        emit(W);
        return;
    }
    // level j: non-stable X of dim j with X cap Phi X of dim j-1 and X + Phi^-1 X isotropic
    std::vector<Subspace> level;
    extend_rational(I, W, Rinv, b + 1 < d,
                    [&](Subspace U) {
                        if (b + 1 == d)
                            emit(U);
                        else
                            level.push_back(std::move(U));
                    },
                    work);
    for (std::size_t j = b + 2; j <= d; ++j) {
        const bool last = j == d;
        std::vector<Subspace> next;
        for (const auto& X : level) {
            work.tick();
            Subspace V = sum(X, apply_phi_inv(X));
            if (V.dim() != j) throw StrataError("generator: unexpected dimension jump");
            if (is_phi_stable(V)) continue;
            if (!last && formed && !is_isotropic(sum(V, apply_phi_inv(V)))) continue;
            if (last)
                emit(V);
            else
                next.push_back(std::move(V));
        }
        level = std::move(next);
    }
}

Subspace standard_root(const Instance& I, std::size_t b) {
    Mat m(b, I.space->dim());
    for (std::size_t i = 0; i < b; ++i) m(i, i) = 1;
    return Subspace(I.space, I.k, m);
}

std::uint64_t rational_count(const Instance& I, std::size_t b, Work& work) {
    if (auto c = count_oracle(I.space, b, 1, I.space->formed())) return *c;
    return rational_isotropic(I, b, work).size();
}

}  // namespace

long double generator_estimate(const Instance& I) {
    const std::size_t d = static_cast<std::size_t>(I.cfg.member_dim());
    const std::size_t n = I.space->dim();
    const long double Q = std::pow(static_cast<long double>(I.cfg.q()), I.k);
    long double total = 0;
    for (std::size_t b = 0; b <= d; ++b) {
        auto roots = count_oracle(I.space, b, 1, I.space->formed());
        long double r = roots ? static_cast<long double>(*roots) : 1e18L;
        std::size_t c = I.space->formed() ? n - 2 * b : n - b;
        long double lines = b == d ? 1 : (std::pow(Q, static_cast<long double>(c)) - 1) / (Q - 1);
        total += r * lines;
    }
    return total;
}

std::uint64_t for_each_member(const Instance& I, MemberRoute route, const MemberFn& fn,
                              std::uint64_t budget) {
    Work work{0, budget};
    const std::size_t d = static_cast<std::size_t>(I.cfg.member_dim());
    std::uint64_t emitted = 0;
    if (route == MemberRoute::Generator || route == MemberRoute::Orbit) {
        const Mat Rinv = inverse(I.space->F(), I.space->rational_basis());
        for (std::size_t b = 0; b <= d; ++b) {
            if (route == MemberRoute::Orbit) {
                const std::uint64_t wgt = rational_count(I, b, work);
                if (wgt == 0) continue;
                members_from_root(I, standard_root(I, b), Rinv,
                                  [&](const Subspace& U) {
                                      ++emitted;
                                      work.tick();
                                      fn(U, wgt);
                                  },
                                  work);
                continue;
            }
            for (const auto& W : rational_isotropic(I, b, work))
                members_from_root(I, W, Rinv,
                                  [&](const Subspace& U) {
                                      ++emitted;
                                      work.tick();
                                      fn(U, 1);
                                  },
                                  work);
        }
        return emitted;
    }
    enumerate_subspaces(
        I.space, d, I.k, I.space->formed(),
        [&](const Subspace& U) {
            if (member(I, U)) {
                ++emitted;
                fn(U, 1);
            }
            return true;
        },
        budget);
    return emitted;
}

StratumCounts stratum_counts(const StrataConfig& cfg, MemberRoute route, std::uint64_t budget) {
    Instance I = Instance::make(cfg);
    StratumCounts out;
    out.route = route;
    // duplicates are detected on 64-bit canonical-form hashes
    std::vector<std::uint64_t> seen;
    for_each_member(
        I, route,
        [&](const Subspace& U, std::uint64_t wgt) {
            out.total += wgt;
            ++out.enumerated;
            seen.push_back(U.hash());
            StratumLabel L = classify(I, U);
            Kind kr = kr_class(I, U);
            out.counts[L] += wgt;
            out.kr[{kr, L}] += wgt;
            if (I.space->formed() && kr != predicted_kr(cfg, L)) {
                ++out.kr_mismatches;
                if (!out.first_bad)
                    out.first_bad = json{{"kr_mismatch", subspace_to_json(U)}, {"label", L.str()}};
            }
            // Phi swaps the two families of maximal isotropics in the non-split form
            StratumLabel LP = classify(I, apply_phi(U));
            if (I.space->kind() == FormKind::SymNonsplit) LP.sign = -LP.sign;
            if (LP != L) {
                ++out.equivariance_failures;
                if (!out.first_bad)
                    out.first_bad = json{{"phi_equivariance", subspace_to_json(U)},
                                         {"label", L.str()},
                                         {"label_of_phi", LP.str()}};
            }
        },
        budget);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
        if (seen[i] == seen[i - 1]) {
            ++out.duplicates;
            if (!out.first_bad) out.first_bad = json{{"duplicate_hash", seen[i]}};
        }
    return out;
}

// ---------------------------------------------------------------- index sets

std::set<StratumLabel> expected_labels(const StrataConfig& cfg) {
    cfg.validate();
    const int T = cfg.T(), H = cfg.H();
    std::set<StratumLabel> out;
    if (cfg.kind == CaseKind::ZY) {
        out.insert({H, H, Kind::W, 0});
        for (int i = H + 1; i <= T; ++i)
            for (int j = cfg.floor_s(); j < H; ++j) out.insert({i, j, Kind::W, 0});
        return out;
    }
    const FormKind f = cfg.space_kind();
    const bool split = f == FormKind::SymSplit, nonsplit = f == FormKind::SymNonsplit;
    const bool sgn = cfg.signed_case();
    auto add = [&](int r, int s, Kind k, bool signed_label) {
        if (signed_label) {
            out.insert({r, s, k, +1});
            out.insert({r, s, k, -1});
        } else {
            out.insert({r, s, k, 0});
        }
    };
    for (int i = H + 1; i <= T; ++i) {
        for (int j = split ? 1 : 0; j <= H; ++j) add(i, j, Kind::W, sgn && nonsplit);
        for (int j = nonsplit ? 1 : 0; j < H; ++j) add(i, j, Kind::WPrime, sgn && split && j == 0);
    }
    if (!(nonsplit && H == 0)) add(H, H, Kind::Id, false);
    return out;
}

int label_dimension(const StrataConfig& cfg, const StratumLabel& L) {
    if (cfg.kind == CaseKind::ZY) return L.r == L.s ? 0 : L.r - L.s - 1;
    const bool typeD = cfg.kind == CaseKind::Y && cfg.space_kind() != FormKind::SymOdd;
    switch (L.kind) {
        case Kind::Id: return 0;
        case Kind::WPrime: return L.r - L.s - 1;
        case Kind::W: return L.r + L.s - (typeD ? 1 : 0);
    }
    return 0;
}

Kind predicted_kr(const StrataConfig& cfg, const StratumLabel& L) {
    if (L.kind == Kind::Id) return Kind::Id;
    if (cfg.kind == CaseKind::ZY) return L.r == L.s ? Kind::Id : Kind::W;
    return (L.kind == Kind::W && L.s == cfg.H()) ? Kind::W : Kind::WPrime;
}

std::set<StratumLabel> closure(const StrataConfig& cfg, const StratumLabel& L, bool literal) {
    const auto all = expected_labels(cfg);
    const int H = cfg.H();
    std::set<StratumLabel> out;
    for (const auto& B : all) {
        bool in = false;
        if (cfg.kind == CaseKind::ZY) {
            in = L.s <= B.s && B.s <= H && H <= B.r && B.r <= L.r;
        } else if (L.kind == Kind::Id) {
            in = B.kind == Kind::Id;
        } else if (L.kind == Kind::WPrime) {
            in = B.kind == Kind::Id ||
                 (B.kind == Kind::WPrime && L.s <= B.s && B.r <= L.r &&
                  (L.sign == 0 || B.sign == 0 || B.sign == L.sign));
        } else {
            bool j_ok = literal ? (L.s <= B.s && B.s <= H) : (B.s <= L.s);
            in = B.kind == Kind::Id || (B.kind == Kind::WPrime && B.r <= L.r) ||
                 (B.kind == Kind::W && j_ok && B.r <= L.r &&
                  (L.sign == 0 || B.sign == 0 || B.sign == L.sign));
        }
        if (in) out.insert(B);
    }
    return out;
}

// ---------------------------------------------------------------- witnesses

namespace {

std::uint64_t mix(std::uint64_t seed, const StratumLabel& L) {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (int v : {L.r, L.s, static_cast<int>(L.kind), L.sign}) {
        h ^= static_cast<std::uint64_t>(v + 1000);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Solves A y = b over F_p (rows of A are F_p digit equations); random point of the solution set.
std::optional<std::vector<unsigned>> solve_fp(const FieldCtx& Fp, Mat aug, std::size_t nvar,
                                              std::mt19937_64& rng) {
    std::vector<std::size_t> piv;
    rref(Fp, aug, &piv);
    if (std::find(piv.begin(), piv.end(), nvar) != piv.end()) return std::nullopt;
    std::vector<unsigned> x(nvar, 0);
    std::vector<char> is_piv(nvar, 0);
    for (auto pc : piv) is_piv[pc] = 1;
    for (std::size_t j = 0; j < nvar; ++j)
        if (!is_piv[j]) x[j] = static_cast<unsigned>(rng() % Fp.p());
    for (std::size_t i = 0; i < piv.size(); ++i) {
        Elt v = aug(i, nvar);
        for (std::size_t j = 0; j < nvar; ++j)
            if (!is_piv[j] && aug(i, j)) v = Fp.sub(v, Fp.mul(aug(i, j), x[j]));
        x[piv[i]] = v;
    }
    return x;
}

class WitnessBuilder {
public:
    WitnessBuilder(const Instance& I, std::mt19937_64& rng)
        : I_(I), sp_(*I.space), F_(sp_.F()), rng_(rng), n_(sp_.dim()), m_(sp_.half()) {
        Fp_ = FieldCtx::make(F_.p(), 1, 1);
        alpha_ = F_.subfield(I.k);
    }

    Elt random_elt() { return alpha_[rng_() % alpha_.size()]; }
    Elt random_nonzero() {
        Elt v = 0;
        while (v == 0) v = random_elt();
        return v;
    }
    std::size_t e_idx(int i) const { return static_cast<std::size_t>(i - 1); }
    std::size_t f_idx(int i) const { return m_ + static_cast<std::size_t>(i - 1); }

    std::vector<Elt> phi_pow(std::vector<Elt> z, int j) const {
        for (int t = 0; t < j; ++t) z = sp_.phi(z.data());
        return z;
    }

    Subspace orbit_span(const Mat& base, std::vector<Elt> z, int count) const {
        Mat rows = base;
        for (int t = 0; t < count; ++t) {
            rows.append_row(z.data());
            z = sp_.phi(z.data());
        }
        return Subspace(I_.space, I_.k, rows);
    }

    Mat basis_rows(int upto) const {
        Mat b(0, n_);
        std::vector<Elt> v(n_);
        for (int i = 1; i <= upto; ++i) {
            std::fill(v.begin(), v.end(), 0);
            v[e_idx(i)] = 1;
            b.append_row(v.data());
        }
        return b;
    }

    // z with (z, Phi^j z) = 0 for j in js, over the pairs lo..hi of the standard basis.
    std::optional<std::vector<Elt>> solve_orbit_isotropic(
        int lo, int hi, const std::vector<int>& js,
        const std::function<bool(const std::vector<Elt>&)>& accept) {
        const bool nonsplit = sp_.kind() == FormKind::SymNonsplit;
        const int mm = static_cast<int>(m_);
        std::vector<Elt> z(n_, 0);
        std::vector<std::size_t> unknown;
        for (int i = lo; i <= hi; ++i) {
            if (nonsplit && i == mm) {
                z[f_idx(i)] = random_elt();
                continue;
            }
            z[e_idx(i)] = random_nonzero();
            unknown.push_back(f_idx(i));
        }
        if (sp_.kind() == FormKind::SymOdd) z[n_ - 1] = random_nonzero();

        const unsigned deg = F_.degree();
        const bool enum_alpha = nonsplit && hi == mm;
        std::vector<Elt> alphas;
        if (enum_alpha) {
            alphas = alpha_;
            std::shuffle(alphas.begin(), alphas.end(), rng_);
        } else {
            alphas.push_back(0);
        }
        for (Elt a : alphas) {
            if (enum_alpha) z[e_idx(mm)] = a;
            auto eval = [&](const std::vector<Elt>& y) {
                std::vector<Elt> zz = z;
                for (std::size_t u = 0; u < unknown.size(); ++u) zz[unknown[u]] = y[u];
                std::vector<Elt> vals;
                for (int j : js) vals.push_back(sp_.form(zz.data(), phi_pow(zz, j).data()));
                return vals;
            };
            const std::size_t nvar = unknown.size() * deg;
            const std::size_t neq = js.size() * deg;
            std::vector<Elt> zero_y(unknown.size(), 0);
            auto f0 = eval(zero_y);
            Mat aug(neq, nvar + 1);
            for (std::size_t u = 0; u < unknown.size(); ++u)
                for (unsigned l = 0; l < deg; ++l) {
                    std::vector<Elt> y(unknown.size(), 0);
                    y[u] = static_cast<Elt>(ipow(F_.p(), l));
                    auto fy = eval(y);
                    for (std::size_t t = 0; t < js.size(); ++t) {
                        Elt diff = F_.sub(fy[t], f0[t]);
                        for (unsigned b = 0; b < deg; ++b)
                            aug(t * deg + b, u * deg + l) = F_.digit(diff, b);
                    }
                }
            for (std::size_t t = 0; t < js.size(); ++t) {
                Elt rhs = F_.neg(f0[t]);
                for (unsigned b = 0; b < deg; ++b) aug(t * deg + b, nvar) = F_.digit(rhs, b);
            }
            for (int draw = 0; draw < 4; ++draw) {
                auto sol = solve_fp(*Fp_, aug, nvar, rng_);
                if (!sol) break;
                for (std::size_t u = 0; u < unknown.size(); ++u) {
                    Elt v = 0;
                    for (unsigned l = 0; l < deg; ++l)
                        v += static_cast<Elt>((*sol)[u * deg + l] * ipow(F_.p(), l));
                    z[unknown[u]] = v;
                }
                if (accept(z)) return z;
            }
        }
        return std::nullopt;
    }

    // a member whose label matches L up to sign (the caller fixes the sign via Phi)
    bool good(const Subspace& U, const StratumLabel& L) const {
        if (U.dim() != static_cast<std::size_t>(I_.cfg.member_dim()) || !member(I_, U)) return false;
        StratumLabel a = classify(I_, U);
        a.sign = L.sign;
        return a == L;
    }

    std::optional<Subspace> build(const StratumLabel& L) {
        const StrataConfig& cfg = I_.cfg;
        const int T = cfg.T(), H = cfg.H();
        if (L.kind == Kind::Id || (cfg.kind == CaseKind::ZY && L.r == L.s))
            return Subspace(I_.space, I_.k, basis_rows(T - H));
        Mat base = basis_rows(T - L.r);
        const int a = L.r - H;
        if (cfg.kind == CaseKind::ZY || L.kind == Kind::WPrime) {
            std::vector<Elt> z(n_, 0);
            for (int i = T - L.r + 1; i <= T - L.s; ++i) z[e_idx(i)] = random_elt();
            if (L.sign < 0) std::swap(z[e_idx(T)], z[f_idx(T)]);
            return orbit_span(base, z, a);
        }
        std::vector<int> js;
        for (int j = sp_.alternating() ? 1 : 0; j < L.r - L.s; ++j) js.push_back(j);
        auto z = solve_orbit_isotropic(T - L.r + 1, T, js, [&](const std::vector<Elt>& cand) {
            return good(orbit_span(base, cand, a), L);
        });
        if (!z) return std::nullopt;
        return orbit_span(base, *z, a);
    }

private:
    const Instance& I_;
    const FormedSpace& sp_;
    const FieldCtx& F_;
    std::mt19937_64& rng_;
    std::size_t n_, m_;
    FieldPtr Fp_;
    std::vector<Elt> alpha_;
};

}  // namespace

std::optional<Witness> witness(const StrataConfig& cfg, const StratumLabel& L, std::uint64_t seed,
                               unsigned max_degree) {
    cfg.validate();
    std::mt19937_64 rng(mix(seed, L));
    const bool nonsplit = cfg.space_kind() == FormKind::SymNonsplit;
    int need = 1;
    if (L.kind == Kind::W && cfg.kind != CaseKind::ZY) need = L.r - L.s + 1;
    if (L.kind == Kind::WPrime || (cfg.kind == CaseKind::ZY && L.r != L.s)) need = L.r - L.s;
    unsigned K = static_cast<unsigned>(std::max(need, 1));
    if (nonsplit && K % 2) ++K;
    for (; K <= max_degree; K += nonsplit ? 2 : 1) {
        long double order = 1;
        for (unsigned i = 0; i < K * cfg.e; ++i) order *= cfg.p;
        if (order > (1u << 20)) break;
        StrataConfig c2 = cfg;
        c2.k = K;
        Instance I = Instance::make(c2);
        WitnessBuilder b(I, rng);
        // non-split w points first appear at K = 2(r - s) and are sparse there
        const bool sparse = nonsplit && L.kind == Kind::W && K >= 2u * static_cast<unsigned>(L.r - L.s);
        const int attempts = sparse ? 96 : 24;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            auto U = b.build(L);
            if (!U || U->dim() != static_cast<std::size_t>(cfg.member_dim()) || !member(I, *U))
                continue;
            if (classify(I, *U) == L) return Witness{*U, K};
            Subspace V = apply_phi(*U);
            if (L.sign != 0 && classify(I, V) == L) return Witness{V, K};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- serialization

json subspace_to_json(const Subspace& U) {
    const auto& sp = *U.space();
    const FieldCtx& F = sp.F();
    json j;
    j["space"] = {{"kind", to_string(sp.kind())},
                  {"dim", sp.dim()},
                  {"p", F.p()},
                  {"e", F.e()},
                  {"degree", F.k()}};
    j["k"] = U.k();
    json rows = json::array();
    for (std::size_t i = 0; i < U.dim(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < sp.dim(); ++c) {
            json coeffs = json::array();
            for (unsigned b = 0; b < F.degree(); ++b) coeffs.push_back(F.digit(U.basis()(i, c), b));
            row.push_back(coeffs);
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

Subspace subspace_from_json(const SpacePtr& space, const json& j) {
    const FieldCtx& F = space->F();
    if (j.contains("space")) {
        const auto& s = j.at("space");
        if (s.at("kind").get<std::string>() != to_string(space->kind()) ||
            s.at("dim").get<std::size_t>() != space->dim())
            throw StrataError("subspace file describes a different space");
        if (s.contains("degree") && s.at("degree").get<unsigned>() != F.k())
            throw StrataError("subspace file uses a different working field degree");
    }
    unsigned k = j.value("k", 1u);
    Mat m(0, space->dim());
    for (const auto& row : j.at("rows")) {
        if (row.size() != space->dim()) throw StrataError("subspace row has the wrong length");
        std::vector<Elt> v(space->dim(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& x = row[c];
            Elt val = 0;
            if (x.is_array()) {
                if (x.size() > F.degree()) throw StrataError("coefficient vector too long");
                for (std::size_t b = 0; b < x.size(); ++b) {
                    unsigned d = x[b].get<unsigned>();
                    if (d >= F.p()) throw StrataError("coefficient out of range");
                    val += static_cast<Elt>(d * ipow(F.p(), static_cast<unsigned>(b)));
                }
            } else {
                long long iv = x.get<long long>();
                val = F.from_int(iv);
            }
            v[c] = val;
        }
        m.append_row(v.data());
    }
    Subspace U(space, k, m);
    if (U.dim() != m.rows) throw StrataError("subspace rows are linearly dependent");
    return U;
}

// ---------------------------------------------------------------- reports

namespace {

json labels_json(const std::set<StratumLabel>& s) {
    json a = json::array();
    for (const auto& L : s) a.push_back(L.str());
    return a;
}

std::set<StratumLabel> top_labels(const StrataConfig& cfg, const std::set<StratumLabel>& all) {
    int best = -1;
    for (const auto& L : all) best = std::max(best, label_dimension(cfg, L));
    std::set<StratumLabel> out;
    for (const auto& L : all)
        if (label_dimension(cfg, L) == best) out.insert(L);
    return out;
}

void add_index_checks(Report& rep, const StrataConfig& cfg, const std::set<StratumLabel>& realized,
                      std::uint64_t seed) {
    const auto expected = expected_labels(cfg);

    json outside = json::array();
    for (const auto& L : realized)
        if (!expected.count(L)) outside.push_back(L.str());
    rep.add_bool("labels_within_index_set", outside.empty(),
                 outside.empty() ? json{{"realized", labels_json(realized)}}
                                 : json{{"witness", {{"labels_outside", outside}}}});

    json degrees = json::object(), missing = json::array();
    for (const auto& L : expected) {
        if (realized.count(L)) {
            degrees[L.str()] = cfg.k;
            continue;
        }
        auto w = witness(cfg, L, seed);
        if (w)
            degrees[L.str()] = w->degree;
        else
            missing.push_back(L.str());
    }
    rep.add_bool("index_set_witnessed", missing.empty(),
                 missing.empty() ? json{{"expected", labels_json(expected)}, {"witness_degree", degrees}}
                                 : json{{"witness", {{"labels_without_witness", missing}}}});

    const auto tops = top_labels(cfg, expected);
    std::set<StratumLabel> cl, lit;
    for (const auto& L : tops) {
        auto c = closure(cfg, L);
        cl.insert(c.begin(), c.end());
        auto c2 = closure(cfg, L, true);
        lit.insert(c2.begin(), c2.end());
    }
    json lit_missing = json::array();
    for (const auto& L : expected)
        if (!lit.count(L)) lit_missing.push_back(L.str());
    rep.add_bool("top_closure_index_set", cl == expected,
                 {{"top", labels_json(tops)},
                  {"closure_size", cl.size()},
                  {"expected_size", expected.size()},
                  {"literal_reading_misses", lit_missing}});

    json bad = json::array();
    for (const auto& L : expected)
        for (const auto& B : closure(cfg, L))
            if (B != L && label_dimension(cfg, B) >= label_dimension(cfg, L))
                bad.push_back({{"stratum", L.str()}, {"boundary", B.str()}});
    json dims = json::object();
    for (const auto& L : expected) dims[L.str()] = label_dimension(cfg, L);
    rep.add_bool("dimension_monotonicity", bad.empty(),
                 bad.empty() ? json{{"dimensions", dims}} : json{{"witness", bad}});
}

void add_kr_check(Report& rep, const StrataConfig& cfg, const StratumCounts& sc) {
    if (cfg.kind == CaseKind::ZY) return;
    json tab = json::array();
    std::uint64_t non_w = 0;
    for (const auto& [key, cnt] : sc.kr) {
        tab.push_back({{"kr", to_string(key.first)}, {"label", key.second.str()}, {"count", cnt}});
        if (key.first != Kind::W) non_w += cnt;
    }
    rep.tables["kr_crosstab"] = tab;
    bool ok = sc.kr_mismatches == 0;
    json data = {{"mismatches", sc.kr_mismatches}};
    // t = h = n is the worst point alone, which is rational
    if (cfg.kind == CaseKind::Y && cfg.h == cfg.n && cfg.t < cfg.h) {
        data["z_cap_y_members"] = non_w;
        ok = ok && non_w == 0;
    }
    if (!ok && sc.first_bad) data["witness"] = *sc.first_bad;
    rep.add_bool("kr_refinement", ok, data);
}

void add_sign_check(Report& rep, const StrataConfig& cfg, const StratumCounts& sc,
                    std::uint64_t seed) {
    if (!cfg.signed_case()) return;
    std::map<std::pair<int, int>, std::array<std::uint64_t, 2>> per;
    std::uint64_t plus = 0, minus = 0, unsigned_forbidden = 0;
    const bool top_case = cfg.space_kind() == FormKind::SymNonsplit;
    for (const auto& [L, c] : sc.counts) {
        if (L.sign > 0) plus += c, per[{L.r, L.s}][0] += c;
        if (L.sign < 0) minus += c, per[{L.r, L.s}][1] += c;
        if (top_case && L.kind != Kind::W) unsigned_forbidden += c;
    }
    bool balanced = true;
    for (const auto& [rs, pm] : per) balanced = balanced && pm[0] == pm[1];
    // with no signed points over GF(q^k), both classes must still be witnessed
    bool nonempty = plus > 0 && minus > 0;
    json wit = json::object();
    if (plus == 0 && minus == 0) {
        nonempty = true;
        for (const auto& L : expected_labels(cfg))
            if (L.sign != 0) {
                auto w = witness(cfg, L, seed);
                wit[L.str()] = w ? json(w->degree) : json(nullptr);
                nonempty = nonempty && w.has_value();
            }
    }
    bool ok = nonempty && plus == minus && balanced && unsigned_forbidden == 0;
    json data = {{"plus", plus},
                 {"minus", minus},
                 {"per_label_balanced", balanced},
                 {"id_or_wprime_members", unsigned_forbidden},
                 {"signed_kind", top_case ? "w" : "wprime"}};
    if (!wit.empty()) data["witness_degree"] = wit;
    rep.add_bool("sign_classes", ok, data);
}

void fill_counts(Report& rep, const StratumCounts& sc) {
    for (const auto& [L, c] : sc.counts) rep.counts.push_back({L.str(), c});
}

}  // namespace

Report count_report(const StrataConfig& cfg, const VerifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.command = "strata count";
    rep.config = cfg.to_json();
    rep.config["route"] = to_string(opt.route);
    try {
        auto sc = stratum_counts(cfg, opt.route, opt.budget);
        fill_counts(rep, sc);
        rep.tables["members"] = sc.total;
        rep.add_bool("partition", sc.duplicates == 0,
                     {{"members", sc.total}, {"duplicates", sc.duplicates}});
    } catch (const BudgetExceeded& e) {
        rep.add("partition", Status::Inconclusive, {{"reason", e.what()}});
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

Report verify_decomposition(const StrataConfig& cfg, const VerifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    Report rep;
    rep.command = "strata verify";
    rep.config = cfg.to_json();
    rep.config["route"] = to_string(opt.route);
    rep.config["seed"] = opt.seed;

    StratumCounts sc;
    bool have = false;
    json fallback;
    auto run = [&](MemberRoute r) {
        sc = stratum_counts(cfg, r, opt.budget);
        have = true;
    };
    try {
        try {
            if (opt.route == MemberRoute::Generator &&
                generator_estimate(Instance::make(cfg)) > static_cast<long double>(opt.budget))
                throw BudgetExceeded("generator estimate exceeds budget");
            run(opt.route);
        } catch (const BudgetExceeded& e) {
            if (opt.route != MemberRoute::Generator) throw;
            fallback = std::string("generator over budget, counted by orbit route");
            run(MemberRoute::Orbit);
        }
    } catch (const BudgetExceeded& e) {
        rep.add("partition", Status::Inconclusive, {{"reason", e.what()}});
    } catch (const StrataError& e) {
        rep.add("partition", Status::Fail, {{"witness", {{"error", e.what()}}}});
    }

    std::set<StratumLabel> realized;
    if (have) {
        fill_counts(rep, sc);
        for (const auto& [L, c] : sc.counts) realized.insert(L);
        rep.tables["members"] = sc.total;
        rep.tables["route"] = to_string(sc.route);

        std::uint64_t sum = 0;
        for (const auto& [L, c] : sc.counts) sum += c;
        json pdata = {{"members", sc.total},
                      {"visited", sc.enumerated},
                      {"labelled", sum},
                      {"duplicates", sc.duplicates}};
        if (!fallback.is_null()) pdata["note"] = fallback;
        bool ok = sc.duplicates == 0 && sum == sc.total;

        // stable members are exactly the rational isotropic subspaces
        Instance I = Instance::make(cfg);
        auto oracle = count_oracle(I.space, static_cast<std::size_t>(cfg.member_dim()), 1,
                                   I.space->formed());
        if (oracle) {
            std::uint64_t stable = 0;
            for (const auto& [L, c] : sc.counts)
                if (L.kind == Kind::Id || (cfg.kind == CaseKind::ZY && L.r == L.s)) stable += c;
            pdata["stable_members"] = stable;
            pdata["rational_oracle"] = *oracle;
            ok = ok && stable == *oracle;
        }
        if (!ok && sc.first_bad) pdata["witness"] = *sc.first_bad;
        rep.add_bool("partition", ok, pdata);

        // independent member streams must give the same per-label counts
        if (opt.cross_check) {
            std::vector<MemberRoute> others;
            for (auto r : {MemberRoute::Generator, MemberRoute::Orbit, MemberRoute::BruteForce}) {
                if (r == sc.route) continue;
                if (r == MemberRoute::Generator && !fallback.is_null()) continue;
                if (r == MemberRoute::BruteForce &&
                    enumeration_estimate(I.space, static_cast<std::size_t>(cfg.member_dim()),
                                         cfg.k, I.space->formed()) > 2e6L)
                    continue;
                others.push_back(r);
            }
            json agreed = json::array(), diff = json::array();
            bool inconclusive = false;
            for (auto other : others) {
                try {
                    auto sc2 = stratum_counts(cfg, other, opt.budget);
                    std::set<StratumLabel> keys;
                    for (const auto& [L, c] : sc.counts) keys.insert(L);
                    for (const auto& [L, c] : sc2.counts) keys.insert(L);
                    bool same = true;
                    for (const auto& L : keys) {
                        auto a = sc.counts.count(L) ? sc.counts.at(L) : 0;
                        auto b = sc2.counts.count(L) ? sc2.counts.at(L) : 0;
                        if (a != b) {
                            same = false;
                            diff.push_back({{"route", to_string(other)},
                                            {"label", L.str()},
                                            {to_string(sc.route), a},
                                            {to_string(other), b}});
                        }
                    }
                    if (same) agreed.push_back(to_string(other));
                } catch (const BudgetExceeded&) {
                    inconclusive = true;
                }
            }
            if (!diff.empty())
                rep.add("route_agreement", Status::Fail, {{"witness", diff}});
            else if (!others.empty())
                rep.add("route_agreement",
                        inconclusive && agreed.empty() ? Status::Inconclusive : Status::Pass,
                        {{"agreeing_routes", agreed}});
        }

        bool eq = sc.equivariance_failures == 0;
        json edata = {{"failures", sc.equivariance_failures}};
        if (!eq && sc.first_bad) edata["witness"] = *sc.first_bad;
        rep.add_bool("phi_equivariance", eq, edata);
    }

    add_index_checks(rep, cfg, realized, opt.seed);
    if (have) {
        add_kr_check(rep, cfg, sc);
        add_sign_check(rep, cfg, sc, opt.seed);
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace dls
