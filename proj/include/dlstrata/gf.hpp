#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dls {

// Elements are encoded as integers: sum c_i p^i for the polynomial sum c_i x^i.
using Elt = std::uint32_t;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FieldCtx;
using FieldPtr = std::shared_ptr<const FieldCtx>;

bool is_prime(std::uint64_t n);
std::uint64_t ipow(std::uint64_t b, unsigned e);

// Irreducibility by exhaustive trial division over monic factors of degree <= deg/2.
bool is_irreducible(unsigned p, const std::vector<unsigned>& monic_coeffs);

class FieldCtx {
public:
    // modulus: coefficients c_0..c_{d-1}, c_d = 1 implied (d = e*k); empty = auto.
    static FieldPtr make(unsigned p, unsigned e, unsigned k,
                         std::vector<unsigned> modulus = {});

    unsigned p() const { return p_; }
    unsigned e() const { return e_; }
    unsigned k() const { return k_; }
    unsigned degree() const { return e_ * k_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t order() const { return order_; }
    const std::vector<unsigned>& modulus() const { return modulus_; }

    Elt zero() const { return 0; }
    Elt one() const { return 1; }
    Elt from_int(long long v) const;

    Elt add(Elt a, Elt b) const {
        if (a == 0) return b;
        if (b == 0) return a;
        std::uint32_t la = log_[a], lb = log_[b];
        std::uint32_t d = lb >= la ? lb - la : lb + m1_ - la;
        std::uint32_t z = zech_[d];
        if (z == kNone) return 0;
        return exp_[la + z];
    }
    Elt neg(Elt a) const { return neg_[a]; }
    Elt sub(Elt a, Elt b) const { return add(a, neg_[b]); }
    Elt mul(Elt a, Elt b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Elt inv(Elt a) const {
        if (a == 0) throw FieldError("inverse of zero");
        return exp_[(m1_ - log_[a]) % m1_];
    }
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    Elt pow(Elt a, std::uint64_t n) const;
    // x -> x^q
    Elt frob(Elt a) const { return frob_[a]; }
    Elt frob_inv(Elt a) const { return frob_inv_[a]; }
    // x -> x^(q^j), j may be negative
    Elt frob_pow(Elt a, int j) const;

    Elt generator() const { return gen_; }
    // coefficient i of the polynomial representative
    unsigned digit(Elt a, unsigned i) const;

    // fixed field of x -> x^(q^j); j must divide k
    std::vector<Elt> subfield(unsigned j) const;
    // fixed field of frob, i.e. the embedded GF(q), ascending
    const std::vector<Elt>& base_elements() const { return base_; }
    // image of the generator of GF(q)^* fixed at construction
    Elt base_generator_image() const { return base_gen_; }

    std::vector<Elt> enumerate(std::uint64_t bound = 1u << 20) const;
    std::string describe() const;

private:
    FieldCtx() = default;
    static constexpr std::uint32_t kNone = 0xffffffffu;
    unsigned p_ = 0, e_ = 0, k_ = 0;
    std::uint64_t q_ = 0, order_ = 0;
    std::uint32_t m1_ = 0;
    std::vector<unsigned> modulus_;
    std::vector<std::uint32_t> log_, exp_, zech_;
    std::vector<Elt> neg_, frob_, frob_inv_;
    std::vector<Elt> base_;
    Elt gen_ = 0, base_gen_ = 0;
};

// Value type carrying its context; cross-context arithmetic throws.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(FieldPtr ctx, Elt v) : ctx_(std::move(ctx)), v_(v) {}

    const FieldPtr& ctx() const { return ctx_; }
    Elt value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    std::vector<unsigned> coeffs() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem operator-() const;
    bool operator==(const FieldElem& o) const;
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

private:
    const FieldCtx& same(const FieldElem& o) const;
    FieldPtr ctx_;
    Elt v_ = 0;
};

FieldElem inv(const FieldElem& a);
FieldElem frobenius(const FieldElem& a);
FieldElem pow(const FieldElem& a, std::uint64_t n);
std::vector<FieldElem> enumerate(const FieldPtr& ctx, std::uint64_t bound = 1u << 20);

}  // namespace dls
