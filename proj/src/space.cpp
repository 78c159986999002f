#include "dlstrata/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dls {

std::string to_string(FormKind k) {
    switch (k) {
        case FormKind::Symplectic: return "symplectic";
        case FormKind::SymSplit: return "symmetric-even-split";
        case FormKind::SymNonsplit: return "symmetric-even-nonsplit";
        case FormKind::SymOdd: return "symmetric-odd";
        case FormKind::None: return "none";
    }
    return "none";
}

FormKind form_kind_from_string(const std::string& s) {
    for (auto k : {FormKind::Symplectic, FormKind::SymSplit, FormKind::SymNonsplit,
                   FormKind::SymOdd, FormKind::None})
        if (to_string(k) == s) return k;
    throw SpaceError("unknown form kind: " + s);
}

SpacePtr FormedSpace::build(FieldPtr ctx, FormKind kind, std::size_t dim) {
    auto sp = std::make_shared<FormedSpace>();
    const FieldCtx& F = *ctx;
    sp->ctx_ = ctx;
    sp->kind_ = kind;
    sp->dim_ = dim;
    sp->gram_ = Mat(dim, dim);
    sp->perm_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) sp->perm_[i] = i;
    const bool even = dim % 2 == 0;
    const std::size_t m = dim / 2;
    switch (kind) {
        case FormKind::Symplectic:
            if (!even) throw SpaceError("symplectic space needs even dimension");
            for (std::size_t i = 0; i < m; ++i) {
                sp->gram_(i, m + i) = 1;
                sp->gram_(m + i, i) = F.neg(1);
            }
            break;
        case FormKind::SymSplit:
        case FormKind::SymNonsplit:
            if (!even) throw SpaceError("even orthogonal space needs even dimension");
            for (std::size_t i = 0; i < m; ++i) sp->gram_(i, m + i) = sp->gram_(m + i, i) = 1;
            if (kind == FormKind::SymNonsplit) {
                if (m == 0) throw SpaceError("non-split space needs dimension at least 2");
                if (F.k() % 2 != 0)
                    throw SpaceError("non-split space needs a working field containing GF(q^2)");
                std::swap(sp->perm_[m - 1], sp->perm_[2 * m - 1]);
                sp->perm_trivial_ = false;
            }
            break;
        case FormKind::SymOdd:
            if (even) throw SpaceError("odd orthogonal space needs odd dimension");
            for (std::size_t i = 0; i < m; ++i) sp->gram_(i, m + i) = sp->gram_(m + i, i) = 1;
            sp->gram_(2 * m, 2 * m) = 1;
            break;
        case FormKind::None:
            break;
    }
    sp->rational_ = Mat::identity(dim);
    if (!sp->perm_trivial_) {
        // e_m + f_m and d e_m + d^q f_m with d in GF(q^2) \ GF(q)
        Elt d = 0;
        for (Elt v : F.subfield(2))
            if (F.frob(v) != v) {
                d = v;
                break;
            }
        std::size_t a = m - 1, b = 2 * m - 1;
        for (std::size_t j = 0; j < dim; ++j) sp->rational_(a, j) = sp->rational_(b, j) = 0;
        sp->rational_(a, a) = 1;
        sp->rational_(a, b) = 1;
        sp->rational_(b, a) = d;
        sp->rational_(b, b) = F.frob(d);
    }
    sp->rational_gram_ = mul(F, mul(F, sp->rational_, sp->gram_), transpose(sp->rational_));
    return sp;
}

std::vector<Elt> FormedSpace::phi(const Elt* x) const {
    std::vector<Elt> y(dim_);
    for (std::size_t i = 0; i < dim_; ++i) y[perm_[i]] = ctx_->frob(x[i]);
    return y;
}

std::vector<Elt> FormedSpace::phi_inv(const Elt* x) const {
    std::vector<Elt> y(dim_);
    for (std::size_t i = 0; i < dim_; ++i) y[i] = ctx_->frob_inv(x[perm_[i]]);
    return y;
}

std::string FormedSpace::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(" << dim_ << ") over " << ctx_->describe();
    return os.str();
}

Subspace::Subspace(SpacePtr space, unsigned k, Mat rows) : space_(std::move(space)), k_(k) {
    if (rows.rows == 0) rows.cols = space_->dim();
    if (rows.cols != space_->dim()) throw SpaceError("subspace ambient dimension mismatch");
    rref(space_->F(), rows);
    rows_ = std::move(rows);
}

Subspace Subspace::zero(SpacePtr space, unsigned k) {
    std::size_t n = space->dim();
    return Subspace(std::move(space), k, Mat(0, n));
}

Subspace Subspace::full(SpacePtr space, unsigned k) {
    std::size_t n = space->dim();
    return Subspace(std::move(space), k, Mat::identity(n));
}

std::size_t Subspace::hash() const {
    std::uint64_t h = 1469598103934665603ull ^ rows_.rows;
    for (Elt v : rows_.a) {
        h ^= v;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

bool Subspace::contains_vector(const Elt* v) const {
    const FieldCtx& F = space_->F();
    const std::size_t n = rows_.cols;
    std::vector<Elt> x(v, v + n);
    for (std::size_t i = 0; i < rows_.rows; ++i) {
        const Elt* r = rows_.row(i);
        std::size_t p = 0;
        while (r[p] == 0) ++p;
        Elt f = x[p];
        if (!f) continue;
        Elt nf = F.neg(f);
        for (std::size_t j = p; j < n; ++j)
            if (r[j]) x[j] = F.add(x[j], F.mul(nf, r[j]));
    }
    return std::all_of(x.begin(), x.end(), [](Elt e) { return e == 0; });
}

bool Subspace::contains(const Subspace& w) const {
    for (std::size_t i = 0; i < w.dim(); ++i)
        if (!contains_vector(w.basis().row(i))) return false;
    return true;
}

namespace {

void check_same(const Subspace& u, const Subspace& w) {
    if (u.space() != w.space()) throw SpaceError("subspaces live in different spaces");
}

}  // namespace

Subspace apply_phi(const Subspace& u) {
    const auto& sp = u.space();
    Mat m(0, sp->dim());
    for (std::size_t i = 0; i < u.dim(); ++i) m.append_row(sp->phi(u.basis().row(i)).data());
    return Subspace(sp, u.k(), std::move(m));
}

Subspace apply_phi_inv(const Subspace& u) {
    const auto& sp = u.space();
    Mat m(0, sp->dim());
    for (std::size_t i = 0; i < u.dim(); ++i) m.append_row(sp->phi_inv(u.basis().row(i)).data());
    return Subspace(sp, u.k(), std::move(m));
}

Subspace sum(const Subspace& u, const Subspace& w) {
    check_same(u, w);
    return Subspace(u.space(), u.k(), stack(u.basis(), w.basis()));
}

Subspace intersect(const Subspace& u, const Subspace& w) {
    check_same(u, w);
    const std::size_t n = u.space()->dim();
    if (u.dim() == 0 || w.dim() == 0) return Subspace::zero(u.space(), u.k());
    Mat z(u.dim() + w.dim(), 2 * n);
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) z(i, j) = z(i, n + j) = u.basis()(i, j);
    for (std::size_t i = 0; i < w.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) z(u.dim() + i, j) = w.basis()(i, j);
    rref(u.space()->F(), z);
    Mat out(0, n);
    for (std::size_t i = 0; i < z.rows; ++i) {
        const Elt* r = z.row(i);
        if (std::all_of(r, r + n, [](Elt e) { return e == 0; })) out.append_row(r + n);
    }
    return Subspace(u.space(), u.k(), std::move(out));
}

Subspace perp(const Subspace& u) {
    const auto& sp = u.space();
    if (!sp->formed()) throw SpaceError("perp needs a formed space");
    if (u.dim() == 0) return Subspace::full(sp, u.k());
    Mat ug = mul(sp->F(), u.basis(), sp->gram());
    return Subspace(sp, u.k(), nullspace(sp->F(), ug));
}

bool is_isotropic(const Subspace& u) {
    const auto& sp = u.space();
    if (!sp->formed()) throw SpaceError("isotropy needs a formed space");
    const Mat& b = u.basis();
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = sp->alternating() ? i + 1 : i; j < b.rows; ++j)
            if (sp->form(b.row(i), b.row(j)) != 0) return false;
    return true;
}

bool is_phi_stable(const Subspace& u) {
    const auto& sp = u.space();
    for (std::size_t i = 0; i < u.dim(); ++i)
        if (!u.contains_vector(sp->phi(u.basis().row(i)).data())) return false;
    return true;
}

std::uint64_t enumerate_subspaces(const SpacePtr& space, std::size_t d, unsigned k,
                                  bool isotropic_only,
                                  const std::function<bool(const Subspace&)>& fn,
                                  std::uint64_t budget) {
    const FieldCtx& F = space->F();
    const std::size_t n = space->dim();
    if (d > n) return 0;
    if (isotropic_only && !space->formed()) throw SpaceError("isotropy filter needs a formed space");
    const std::vector<Elt> alpha = F.subfield(k);
    const std::size_t A = alpha.size();
    const Mat& G = space->rational_gram();
    const bool alt = space->alternating();
    const bool standard = space->rational_is_standard();

    std::uint64_t emitted = 0, nodes = 0;
    bool stop = false;
    std::vector<std::size_t> piv(d);
    for (std::size_t i = 0; i < d; ++i) piv[i] = i;

    auto emit = [&](const Mat& rows) {
        ++emitted;
        if (standard) {
            if (!fn(Subspace(space, k, rows))) stop = true;
        } else {
            if (!fn(Subspace(space, k, mul(F, rows, space->rational_basis())))) stop = true;
        }
    };

    while (!stop) {
        Mat rows(d, n);
        std::vector<char> is_piv(n, 0);
        for (std::size_t i = 0; i < d; ++i) {
            rows(i, piv[i]) = 1;
            is_piv[piv[i]] = 1;
        }
        std::vector<std::vector<std::size_t>> free(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free[i].push_back(j);

        std::function<void(std::size_t)> dfs = [&](std::size_t i) {
            if (stop) return;
            if (i == d) {
                emit(rows);
                return;
            }
            const auto& fr = free[i];
            std::vector<std::size_t> idx(fr.size(), 0);
            while (true) {
                for (std::size_t t = 0; t < fr.size(); ++t) rows(i, fr[t]) = alpha[idx[t]];
                if (++nodes > budget) throw BudgetExceeded("subspace enumeration budget exceeded");
                bool ok = true;
                if (isotropic_only) {
                    for (std::size_t j = 0; j < i && ok; ++j)
                        if (bilinear(F, G, rows.row(i), rows.row(j)) != 0) ok = false;
                    if (ok && !alt && bilinear(F, G, rows.row(i), rows.row(i)) != 0) ok = false;
                }
                if (ok) dfs(i + 1);
                if (stop) return;
                bool done = true;
                for (std::size_t t = fr.size(); t > 0; --t) {
                    if (++idx[t - 1] < A) {
                        done = false;
                        break;
                    }
                    idx[t - 1] = 0;
                }
                if (done) break;
            }
            for (std::size_t t = 0; t < fr.size(); ++t) rows(i, fr[t]) = 0;
        };
        dfs(0);

        // next pivot combination
        if (d == 0) break;
        std::size_t i = d;
        while (i > 0 && piv[i - 1] == n - d + (i - 1)) --i;
        if (i == 0) break;
        ++piv[i - 1];
        for (std::size_t j = i; j < d; ++j) piv[j] = piv[j - 1] + 1;
    }
    return emitted;
}

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

u128 sat_mul(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    if (a > u128(kSat) / b) return kSat;
    return a * b;
}

u128 pow128(std::uint64_t b, std::uint64_t e) {
    u128 r = 1;
    while (e--) r = sat_mul(r, b);
    return r;
}

}  // namespace

std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t d, std::uint64_t Q) {
    if (d > n) return 0;
    u128 r = 1;
    for (std::uint64_t i = 0; i < d; ++i) {
        u128 num = pow128(Q, n - i) - 1;
        u128 den = pow128(Q, i + 1) - 1;
        if (r >= kSat || num >= kSat) return kSat;
        u128 t = sat_mul(r, num);
        if (t >= kSat) return kSat;
        r = t / den;
    }
    return r >= kSat ? kSat : static_cast<std::uint64_t>(r);
}

std::optional<std::uint64_t> count_oracle(const SpacePtr& space, std::size_t d, unsigned k,
                                          bool isotropic_only) {
    const std::uint64_t Q = ipow(space->F().q(), k);
    const std::size_t n = space->dim();
    if (!isotropic_only) return gaussian_binomial(n, d, Q);
    std::size_t r = 0;
    int e = 0;
    switch (space->kind()) {
        case FormKind::None: return std::nullopt;
        case FormKind::Symplectic: r = n / 2; e = 1; break;
        case FormKind::SymOdd: r = n / 2; e = 1; break;
        case FormKind::SymSplit: r = n / 2; e = 0; break;
        case FormKind::SymNonsplit:
            if (k % 2 == 0) { r = n / 2; e = 0; }
            else { r = n / 2 - 1; e = 2; }
            break;
    }
    if (d > r) return 0;
    u128 c = gaussian_binomial(r, d, Q);
    for (std::size_t i = r - d + 1; i <= r; ++i)
        c = sat_mul(c, pow128(Q, i + e - 1) + 1);
    return c >= kSat ? kSat : static_cast<std::uint64_t>(c);
}

long double enumeration_estimate(const SpacePtr& space, std::size_t d, unsigned k,
                                 bool isotropic_only) {
    const long double Q = std::pow(static_cast<long double>(space->F().q()), k);
    const std::size_t n = space->dim();
    if (!isotropic_only || !space->formed())
        return static_cast<long double>(gaussian_binomial(n, d, static_cast<std::uint64_t>(Q)));
    long double est = 0;
    for (std::size_t j = 0; j < d; ++j) {
        auto c = count_oracle(space, j, k, true);
        long double prefixes = c ? static_cast<long double>(*c) : 1.0L;
        est += prefixes * std::pow(Q, static_cast<long double>(n - j - 1));
    }
    return est;
}

}  // namespace dls
