#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlstrata/gf.hpp"
#include "dlstrata/linalg.hpp"
#include "dlstrata/report.hpp"

namespace dls {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computed valuation left the representable window; callers report inconclusive.
struct GuardTrip : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// R = GF(q^s)[pi]/(pi^(2N)); elements are coefficient vectors of length 2N.
// conj: pi -> -pi; sigma: coefficientwise x -> x^q.
using Elem = std::vector<Elt>;

class TruncRing;
using RingPtr = std::shared_ptr<const TruncRing>;

class TruncRing {
public:
    static RingPtr make(unsigned p, unsigned e, unsigned s, unsigned N);

    const FieldPtr& field() const { return F_; }
    const FieldCtx& F() const { return *F_; }
    unsigned N() const { return N_; }
    unsigned len() const { return 2 * N_; }
    unsigned s() const { return F_->k(); }

    Elem zero() const { return Elem(len(), 0); }
    Elem constant(Elt c) const;
    Elem pi_pow(unsigned k) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem conj(const Elem& a) const;
    Elem sigma(const Elem& a) const;
    // a^-1 for a unit (nonzero constant term)
    Elem inv(const Elem& a) const;
    int valuation(const Elem& a) const;  // len() for zero

private:
    FieldPtr F_;
    unsigned N_ = 0;
};

// Hermitian space R^n with Gram H over the prime field and tau = A o sigma.
// Standard basis: e_1..e_m, f_1..f_m (h(e_i, f_i) = 1), then v with h(v, v) = 1 if n is odd.
// h(x, y) = sum x_i H_ij conj(y_j).
class HermSpace;
using HermPtr = std::shared_ptr<const HermSpace>;

// A is stored column-wise: column j is the image of basis vector j.
using RMat = std::vector<std::vector<Elem>>;  // [row][col]

class HermSpace {
public:
    // throws LatticeError unless h(tau x, tau y) = sigma(h(x, y)) on basis pairs
    static HermPtr make(RingPtr ring, int n, RMat tau_matrix);
    static HermPtr standard(RingPtr ring, int n);  // tau = sigma

    const RingPtr& ring() const { return ring_; }
    const TruncRing& R() const { return *ring_; }
    int n() const { return n_; }
    int m() const { return n_ / 2; }
    const Mat& gram() const { return gram_; }
    const RMat& tau_matrix() const { return A_; }
    // coordinates of a vector: n * len() field elements, index i * len() + j
    std::size_t vec_len() const { return static_cast<std::size_t>(n_) * R().len(); }

    Elem form(const Elt* x, const Elt* y) const;  // truncated h(x, y) of scaled vectors
    // coefficient of pi^j in h(pi^-N x, pi^-N y), -2N <= j <= 2N - 2, using full products
    Elt true_form_coeff(const Elt* x, const Elt* y, int j) const;
    std::vector<Elt> tau(const Elt* x) const;
    std::vector<Elt> apply(const RMat& g, const Elt* x) const;  // linear, no sigma
    bool axioms_hold() const;
    json to_json() const;

private:
    RingPtr ring_;
    int n_ = 0;
    Mat gram_;
    RMat A_;
};

RMat identity_rmat(const TruncRing& R, int n);
RMat rmat_mul(const TruncRing& R, const RMat& a, const RMat& b);

// Integral unitary generators of the standard space (each preserves h).
struct UnitaryGen {
    std::string name;
    RMat mat;
};
// The finite generator set used for exhaustive runs.
std::vector<UnitaryGen> unitary_generators(const RingPtr& ring, int n);
// A random product of 1..depth generators with random parameters, drawn from the
// prime field when prime_only (then the product commutes with sigma).
RMat random_unitary(const RingPtr& ring, int n, std::mt19937_64& rng, int depth = 4,
                    bool prime_only = false);

// Lattice L = pi^-N (X + pi^2N O^n) for a pi-stable subspace X of R^n, stored as the
// reduced row echelon basis of X over GF(q^s). Equality is basis equality.
class TruncLattice {
public:
    TruncLattice() = default;
    TruncLattice(HermPtr space, Mat basis);  // reduces and closes under pi

    // span of pi^v_i b_i
    static TruncLattice standard(HermPtr space, const std::vector<int>& vals);
    // standard vertex lattice of type t: pi f_i for i <= t/2
    static TruncLattice standard_vertex(HermPtr space, int t);
    static TruncLattice from_vectors(HermPtr space, const std::vector<std::vector<Elt>>& gens);
    // rows already span a pi-stable subspace
    static TruncLattice from_closed(HermPtr space, Mat rows);

    const HermPtr& space() const { return sp_; }
    const Mat& basis() const { return X_; }
    // length over the residue field of X, so [L : L'] = length(L) - length(L')
    std::size_t length() const { return X_.rows; }
    bool contains(const TruncLattice& o) const;
    bool operator==(const TruncLattice& o) const { return X_ == o.X_; }
    bool operator!=(const TruncLattice& o) const { return !(*this == o); }
    std::size_t hash() const;
    json to_json() const;
    // both L and the representable neighbours pi L, pi^-1 L fit the window
    bool interior() const;

private:
    HermPtr sp_;
    Mat X_;
};

TruncLattice sum(const TruncLattice& a, const TruncLattice& b);
TruncLattice intersect(const TruncLattice& a, const TruncLattice& b);
TruncLattice dual_sharp(const TruncLattice& L);
TruncLattice tau_image(const TruncLattice& L);
TruncLattice apply_unitary(const RMat& g, const TruncLattice& L);
TruncLattice pi_mul(const TruncLattice& L);  // throws GuardTrip
TruncLattice pi_inv(const TruncLattice& L);  // throws GuardTrip
// [big : small] for small inside big
long index_of(const TruncLattice& big, const TruncLattice& small);
// type when pi L# <= L <= L#
std::optional<int> vertex_type(const TruncLattice& L);
bool tau_stable(const TruncLattice& L);

struct TauChain {
    int c = 0;
    std::vector<TruncLattice> chain;  // T_0 .. T_c
    std::vector<long> steps;          // [T_{i+1} : T_i]
    bool unit_steps() const;
};
TauChain tau_chain(const TruncLattice& M);

enum class Dichotomy { CaseY, CaseZ, Both };
std::string to_string(Dichotomy d);

struct DichotomyResult {
    Dichotomy predicted = Dichotomy::Both;
    int subcase = 0;  // which of the four criteria decided (3 and 4 together give 34)
    int h = 0;        // [M# : M]
    int c = 0, d = 0;
    bool y_holds = false, z_holds = false;
    std::optional<int> type_y, type_z;  // types of T_c(M) and T_d(M#)#
    bool unit_steps = true;             // all chain indices equal 1
    bool same_index = true;             // [M+tau M:M]=1 implies the same for M#
    bool kr_alternative = true;         // tau(M) <= M# or tau(pi M#) <= M
    bool verified = false;              // predicted cases hold and every side check passed
    std::string failure;
    json to_json() const;
};

// Hypotheses: pi M# <= M <= M# and [M + tau M : M] <= 1 (LatticeError otherwise).
DichotomyResult crucial_dichotomy(const TruncLattice& M);
bool dichotomy_hypotheses(const TruncLattice& M);

struct InducedForms {
    Mat symplectic;  // on L#/L
    Mat symmetric;   // on L/pi L#
};
// Gram matrices over the residue field in a fixed basis of each quotient.
InducedForms induced_forms(const TruncLattice& L);

// Every lattice between bot and top (pi top <= bot <= top) passing keep, optionally
// only those with [L : bot] = dim. Throws BudgetExceeded past budget candidates.
std::uint64_t enumerate_between(const TruncLattice& bot, const TruncLattice& top,
                                const std::function<bool(const TruncLattice&)>& keep,
                                const std::function<void(const TruncLattice&)>& fn,
                                std::optional<std::size_t> dim = std::nullopt,
                                std::uint64_t budget = 10'000'000);
// True when pi a <= b.
bool pi_contained(const TruncLattice& a, const TruncLattice& b);

// Points of the strata over the residue field of the ring: lattices M of type h with
// [M + tau M : M] <= 1 and Lambda <= M <= M# <= Lambda# (Z) or
// pi Lambda# <= pi M# <= M <= Lambda (Y).
std::vector<TruncLattice> z_points(const TruncLattice& lambda, int h);
std::vector<TruncLattice> y_points(const TruncLattice& lambda, int h);

struct DichotomyOptions {
    std::uint64_t seed = 0;
    int trials = 1000;   // hypothesis-satisfying random instances wanted
    int max_n = 4;
    unsigned N = 8;      // truncation 2N
    std::uint64_t budget = 10'000'000;
    bool exhaustive = true;
};
Report dichotomy_report(const DichotomyOptions& opt);

struct InclusionOptions {
    int max_n = 4;
    unsigned p = 3;
    std::uint64_t budget = 10'000'000;
};
Report inclusions_report(const InclusionOptions& opt);

}  // namespace dls
