#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlstrata/gf.hpp"
#include "dlstrata/linalg.hpp"

namespace dls {

enum class FormKind { Symplectic, SymSplit, SymNonsplit, SymOdd, None };

std::string to_string(FormKind k);
FormKind form_kind_from_string(const std::string& s);

struct SpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FormedSpace;
using SpacePtr = std::shared_ptr<const FormedSpace>;

// Standard basis e_1..e_m, f_1..f_m (then the anisotropic vector for SymOdd).
// Phi acts as entrywise q-power followed by the basis permutation perm.
class FormedSpace {
public:
    static SpacePtr build(FieldPtr ctx, FormKind kind, std::size_t dim);

    const FieldPtr& ctx() const { return ctx_; }
    const FieldCtx& F() const { return *ctx_; }
    FormKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    // Witt-style half rank m (dim/2 rounded down)
    std::size_t half() const { return dim_ / 2; }
    bool formed() const { return kind_ != FormKind::None; }
    bool alternating() const { return kind_ == FormKind::Symplectic; }
    const Mat& gram() const { return gram_; }
    const std::vector<std::size_t>& perm() const { return perm_; }
    // rows: an F_q-rational basis in standard coordinates
    const Mat& rational_basis() const { return rational_; }
    const Mat& rational_gram() const { return rational_gram_; }
    bool rational_is_standard() const { return perm_trivial_; }

    Elt form(const Elt* x, const Elt* y) const { return bilinear(*ctx_, gram_, x, y); }
    std::vector<Elt> phi(const Elt* x) const;
    std::vector<Elt> phi_inv(const Elt* x) const;
    std::string describe() const;

private:
    FieldPtr ctx_;
    FormKind kind_ = FormKind::None;
    std::size_t dim_ = 0;
    Mat gram_, rational_, rational_gram_;
    std::vector<std::size_t> perm_;
    bool perm_trivial_ = true;
};

// Subspace over the working field, stored as its reduced row echelon basis.
// k records the extension degree of the point field GF(q^k).
class Subspace {
public:
    Subspace() = default;
    Subspace(SpacePtr space, unsigned k, Mat rows);  // rows are reduced on construction

    static Subspace zero(SpacePtr space, unsigned k);
    static Subspace full(SpacePtr space, unsigned k);

    const SpacePtr& space() const { return space_; }
    unsigned k() const { return k_; }
    std::size_t dim() const { return rows_.rows; }
    const Mat& basis() const { return rows_; }
    bool operator==(const Subspace& o) const { return rows_ == o.rows_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    std::size_t hash() const;
    bool contains(const Subspace& w) const;
    bool contains_vector(const Elt* v) const;

private:
    SpacePtr space_;
    unsigned k_ = 1;
    Mat rows_;
};

struct SubspaceHash {
    std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

Subspace apply_phi(const Subspace& u);
Subspace apply_phi_inv(const Subspace& u);
Subspace sum(const Subspace& u, const Subspace& w);
Subspace intersect(const Subspace& u, const Subspace& w);
Subspace perp(const Subspace& u);
bool is_isotropic(const Subspace& u);
bool is_phi_stable(const Subspace& u);

// Streams every d-dimensional GF(q^k)-rational subspace exactly once (optionally
// only isotropic ones). Order: pivot sets lexicographic, then free entries in field
// order, both in rational coordinates. Callback returns false to stop early.
// Throws BudgetExceeded when more than budget search nodes would be visited.
std::uint64_t enumerate_subspaces(const SpacePtr& space, std::size_t d, unsigned k,
                                  bool isotropic_only,
                                  const std::function<bool(const Subspace&)>& fn,
                                  std::uint64_t budget = 10'000'000);

std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t d, std::uint64_t Q);
// Closed-form count, or nullopt where no standard formula applies.
std::optional<std::uint64_t> count_oracle(const SpacePtr& space, std::size_t d, unsigned k,
                                          bool isotropic_only);
// Upper estimate of the search effort for enumerate_subspaces.
long double enumeration_estimate(const SpacePtr& space, std::size_t d, unsigned k,
                                 bool isotropic_only);

}  // namespace dls
