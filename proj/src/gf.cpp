#include "dlstrata/gf.hpp"

#include <algorithm>
#include <sstream>

namespace dls {

namespace {

using Poly = std::vector<unsigned>;  // low degree first

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a modulo monic b over F_p
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        unsigned lead = a.back();
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            unsigned sub = static_cast<unsigned>((std::uint64_t(lead) * b[i]) % p);
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<unsigned>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    return poly_mod(std::move(r), m, p);
}

Poly to_poly(std::uint64_t v, unsigned p, unsigned d) {
    Poly r(d, 0);
    for (unsigned i = 0; i < d; ++i) {
        r[i] = static_cast<unsigned>(v % p);
        v /= p;
    }
    trim(r);
    return r;
}

std::uint64_t from_poly(const Poly& a, unsigned p) {
    std::uint64_t v = 0, pw = 1;
    for (unsigned c : a) {
        v += c * pw;
        pw *= p;
    }
    return v;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

bool is_irreducible(unsigned p, const std::vector<unsigned>& f) {
    Poly m = f;
    trim(m);
    if (m.size() < 2 || m.back() != 1) return false;
    const unsigned d = static_cast<unsigned>(m.size() - 1);
    if (d == 1) return true;
    for (unsigned dd = 1; dd <= d / 2; ++dd) {
        const std::uint64_t count = ipow(p, dd);
        for (std::uint64_t v = 0; v < count; ++v) {
            Poly g = to_poly(v, p, dd);
            g.resize(dd, 0);
            g.push_back(1);
            if (poly_mod(m, g, p).empty()) return false;
        }
    }
    return true;
}

FieldPtr FieldCtx::make(unsigned p, unsigned e, unsigned k, std::vector<unsigned> modulus) {
    if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
    if (p == 2) throw FieldError("characteristic 2 is not supported");
    if (e == 0 || k == 0) throw FieldError("extension degree must be at least 1");
    const unsigned d = e * k;
    const std::uint64_t order = ipow(p, d);
    if (order > (1u << 21)) throw FieldError("field too large: " + std::to_string(order));

    Poly m;
    if (modulus.empty()) {
        const std::uint64_t count = ipow(p, d);
        for (std::uint64_t v = 0; v < count; ++v) {
            Poly g = to_poly(v, p, d);
            g.resize(d, 0);
            g.push_back(1);
            if (is_irreducible(p, g)) {
                m = g;
                break;
            }
        }
    } else {
        m = modulus;
        for (auto& c : m) c %= p;
        if (m.size() == d) m.push_back(1);
        if (m.size() != d + 1 || m.back() != 1)
            throw FieldError("modulus must be monic of degree " + std::to_string(d));
        if (!is_irreducible(p, m)) throw FieldError("modulus is reducible");
    }

    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->e_ = e;
    ctx->k_ = k;
    ctx->q_ = ipow(p, e);
    ctx->order_ = order;
    ctx->modulus_.assign(m.begin(), m.end());
    const std::uint32_t n = static_cast<std::uint32_t>(order);
    const std::uint32_t m1 = n - 1;
    ctx->m1_ = m1;

    // smallest primitive element by index
    std::vector<std::uint64_t> primes;
    {
        std::uint64_t r = m1;
        for (std::uint64_t f = 2; f * f <= r; ++f)
            if (r % f == 0) {
                primes.push_back(f);
                while (r % f == 0) r /= f;
            }
        if (r > 1) primes.push_back(r);
    }
    auto powmod = [&](const Poly& g, std::uint64_t ex) {
        Poly r{1}, b = g;
        while (ex) {
            if (ex & 1) r = poly_mulmod(r, b, m, p);
            b = poly_mulmod(b, b, m, p);
            ex >>= 1;
        }
        return r;
    };
    Elt gen = 1;
    for (std::uint64_t cand = 1; cand < order; ++cand) {
        Poly g = to_poly(cand, p, d);
        bool ok = true;
        for (auto r : primes)
            if (from_poly(powmod(g, m1 / r), p) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            gen = static_cast<Elt>(cand);
            break;
        }
    }
    std::vector<std::uint32_t> pw(m1);
    {
        Poly g = to_poly(gen, p, d), cur{1};
        for (std::uint32_t i = 0; i < m1; ++i) {
            pw[i] = static_cast<std::uint32_t>(from_poly(cur, p));
            cur = poly_mulmod(cur, g, m, p);
        }
    }
    ctx->gen_ = gen;
    ctx->exp_.assign(2 * std::size_t(m1) + 1, 0);
    ctx->log_.assign(n, kNone);
    for (std::uint32_t i = 0; i < m1; ++i) {
        ctx->exp_[i] = pw[i];
        ctx->exp_[i + m1] = pw[i];
        ctx->log_[pw[i]] = i;
    }
    ctx->exp_[2 * std::size_t(m1)] = pw[0];

    ctx->neg_.assign(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        Poly a = to_poly(v, p, d);
        for (auto& c : a) c = (p - c) % p;
        ctx->neg_[v] = static_cast<Elt>(from_poly(a, p));
    }
    ctx->zech_.assign(m1, kNone);
    for (std::uint32_t i = 0; i < m1; ++i) {
        Poly a = to_poly(pw[i], p, d);
        a.resize(std::max<std::size_t>(a.size(), 1), 0);
        a[0] = (a[0] + 1) % p;
        trim(a);
        std::uint64_t v = from_poly(a, p);
        ctx->zech_[i] = v == 0 ? kNone : ctx->log_[v];
    }
    ctx->frob_.assign(n, 0);
    for (std::uint32_t v = 1; v < n; ++v)
        ctx->frob_[v] = ctx->exp_[(std::uint64_t(ctx->log_[v]) * (ctx->q_ % m1)) % m1];
    ctx->frob_inv_.assign(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        ctx->frob_inv_[ctx->frob_[v]] = v;
        if (ctx->frob_[v] == v) ctx->base_.push_back(v);
    }
    ctx->base_gen_ = ctx->exp_[m1 / static_cast<std::uint32_t>(ctx->q_ - 1) % m1];
    return ctx;
}

Elt FieldCtx::from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elt>(r);
}

Elt FieldCtx::pow(Elt a, std::uint64_t n) const {
    if (n == 0) return 1;
    if (a == 0) return 0;
    return exp_[(std::uint64_t(log_[a]) * (n % m1_)) % m1_];
}

Elt FieldCtx::frob_pow(Elt a, int j) const {
    const int kk = static_cast<int>(k_);
    j %= kk;
    if (j < 0) j += kk;
    for (int i = 0; i < j; ++i) a = frob_[a];
    return a;
}

unsigned FieldCtx::digit(Elt a, unsigned i) const {
    std::uint64_t v = a;
    for (unsigned t = 0; t < i; ++t) v /= p_;
    return static_cast<unsigned>(v % p_);
}

std::vector<Elt> FieldCtx::subfield(unsigned j) const {
    if (j == 0 || k_ % j != 0) throw FieldError("subfield degree must divide k");
    std::vector<Elt> out;
    for (Elt v = 0; v < order_; ++v)
        if (frob_pow(v, static_cast<int>(j)) == v) out.push_back(v);
    return out;
}

std::vector<Elt> FieldCtx::enumerate(std::uint64_t bound) const {
    if (order_ > bound) throw BudgetExceeded("field enumeration bound exceeded");
    std::vector<Elt> out(order_);
    for (Elt v = 0; v < order_; ++v) out[v] = v;
    return out;
}

std::string FieldCtx::describe() const {
    std::ostringstream os;
    os << "GF(" << p_ << "^" << degree() << ")";
    return os.str();
}

std::vector<unsigned> FieldElem::coeffs() const {
    std::vector<unsigned> out(ctx_->degree());
    for (unsigned i = 0; i < out.size(); ++i) out[i] = ctx_->digit(v_, i);
    return out;
}

const FieldCtx& FieldElem::same(const FieldElem& o) const {
    if (!ctx_ || ctx_ != o.ctx_) throw FieldError("arithmetic across different field contexts");
    return *ctx_;
}

FieldElem FieldElem::operator+(const FieldElem& o) const { return {ctx_, same(o).add(v_, o.v_)}; }
FieldElem FieldElem::operator-(const FieldElem& o) const { return {ctx_, same(o).sub(v_, o.v_)}; }
FieldElem FieldElem::operator*(const FieldElem& o) const { return {ctx_, same(o).mul(v_, o.v_)}; }
FieldElem FieldElem::operator/(const FieldElem& o) const { return {ctx_, same(o).div(v_, o.v_)}; }
FieldElem FieldElem::operator-() const { return {ctx_, ctx_->neg(v_)}; }
bool FieldElem::operator==(const FieldElem& o) const {
    same(o);
    return v_ == o.v_;
}

FieldElem inv(const FieldElem& a) { return {a.ctx(), a.ctx()->inv(a.value())}; }
FieldElem frobenius(const FieldElem& a) { return {a.ctx(), a.ctx()->frob(a.value())}; }
FieldElem pow(const FieldElem& a, std::uint64_t n) { return {a.ctx(), a.ctx()->pow(a.value(), n)}; }

std::vector<FieldElem> enumerate(const FieldPtr& ctx, std::uint64_t bound) {
    std::vector<FieldElem> out;
    for (Elt v : ctx->enumerate(bound)) out.emplace_back(ctx, v);
    return out;
}

}  // namespace dls
