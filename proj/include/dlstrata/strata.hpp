#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlstrata/report.hpp"
#include "dlstrata/space.hpp"

namespace dls {

struct StrataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Z: symplectic space of dim t; Y: symmetric space of dim n-t; ZY: formless of dim (t1-t2)/2.
enum class CaseKind { Z, Y, ZY };
std::string to_string(CaseKind c);
CaseKind case_from_string(const std::string& s);

struct StrataConfig {
    CaseKind kind = CaseKind::Z;
    int n = 0, h = 0, t = 0, t1 = 0, t2 = 0;
    unsigned p = 3, e = 1, k = 1;
    std::optional<FormKind> form;  // Y only: override split / non-split

    // throws StrataError naming the violated precondition
    void validate() const;

    // T and H are the hatted rank and level of the Weyl data:
    // Z: (t/2, h/2); Y: (n/2 - t/2, n/2 - h/2); ZY: (t1/2, h/2).
    int T() const;
    int H() const;
    int member_dim() const { return T() - H(); }
    // lowest admissible s (ZY: t2/2, otherwise 0)
    int floor_s() const { return kind == CaseKind::ZY ? t2 / 2 : 0; }
    FormKind space_kind() const;
    std::size_t space_dim() const;
    // degree of the working field over GF(q): k, or lcm(k, 2) for a non-split form
    unsigned working_degree() const;
    std::uint64_t q() const;
    // both signs occur (h = n non-split, or h = n-2 split)
    bool signed_case() const;
    json to_json() const;
};

enum class Kind { W, WPrime, Id };
std::string to_string(Kind k);

struct StratumLabel {
    int r = 0, s = 0;
    Kind kind = Kind::Id;
    int sign = 0;  // +1, -1, or 0 for n/a

    auto operator<=>(const StratumLabel&) const = default;
    std::string str() const;
};

// The configured space over the working field, built once per run.
struct Instance {
    StrataConfig cfg;
    SpacePtr space;
    unsigned k = 1;  // point field degree recorded on subspaces
    static Instance make(const StrataConfig& cfg);
};

bool member(const Instance& I, const Subspace& U);

struct Classification {
    StratumLabel label;
    std::vector<Subspace> down;  // U, U cap Phi U, ... (last one Phi-stable)
    std::vector<Subspace> up;    // U, U + Phi U, ... (last one is the top)
};

Classification classify_flag(const Instance& I, const Subspace& U);
StratumLabel classify(const Instance& I, const Subspace& U);
Kind kr_class(const Instance& I, const Subspace& U);
// maximal isotropic F of an even orthogonal space: + iff dim(F cap span(e_1..e_m)) = m mod 2
int component_sign(const Subspace& F);

// Generator: every member, grown from its rational root W (the Phi-stable end of the
// down chain) by W + line, then X -> X + Phi^-1 X.
// BruteForce: every isotropic subspace of the member dimension, filtered by member().
// Orbit: only the roots span(e_1..e_b); each member found is weighted by the number of
// rational isotropic b-spaces (the rational group is transitive on them and preserves labels).
enum class MemberRoute { Generator, BruteForce, Orbit };
std::string to_string(MemberRoute r);
MemberRoute route_from_string(const std::string& s);

using MemberFn = std::function<void(const Subspace&, std::uint64_t weight)>;

// Calls fn on every member over GF(q^k) exactly once (deterministic order); returns the
// number of calls. Throws BudgetExceeded when the work counter passes budget.
std::uint64_t for_each_member(const Instance& I, MemberRoute route, const MemberFn& fn,
                              std::uint64_t budget);

// Rough number of subspaces the generator route touches.
long double generator_estimate(const Instance& I);

struct StratumCounts {
    std::map<StratumLabel, std::uint64_t> counts;
    std::map<std::pair<Kind, StratumLabel>, std::uint64_t> kr;  // (kr_class, label)
    std::uint64_t total = 0;       // weighted member count
    std::uint64_t enumerated = 0;  // subspaces actually visited
    MemberRoute route = MemberRoute::Generator;
    std::uint64_t duplicates = 0;
    std::uint64_t equivariance_failures = 0;
    std::uint64_t kr_mismatches = 0;  // kr_class disagreeing with predicted_kr
    std::optional<json> first_bad;    // witness of the first violation
};

StratumCounts stratum_counts(const StrataConfig& cfg, MemberRoute route = MemberRoute::Generator,
                             std::uint64_t budget = 10'000'000);

// The full index set of the decomposition for this configuration.
std::set<StratumLabel> expected_labels(const StrataConfig& cfg);
// Dimension of the stratum with this label.
int label_dimension(const StrataConfig& cfg, const StratumLabel& L);
// Labels in the closure of L (L included), restricted to expected_labels.
// literal = true reads the w-relation with s <= j instead of j <= s.
std::set<StratumLabel> closure(const StrataConfig& cfg, const StratumLabel& L, bool literal = false);
// KR class that every member with this label has.
Kind predicted_kr(const StrataConfig& cfg, const StratumLabel& L);

struct Witness {
    Subspace U;
    unsigned degree = 0;  // K with U defined over GF(q^K)
};

// An explicitly constructed member with the given label over some GF(q^K).
std::optional<Witness> witness(const StrataConfig& cfg, const StratumLabel& L, std::uint64_t seed,
                               unsigned max_degree = 12);

json subspace_to_json(const Subspace& U);
Subspace subspace_from_json(const SpacePtr& space, const json& j);

struct VerifyOptions {
    std::uint64_t budget = 10'000'000;
    std::uint64_t seed = 0;
    MemberRoute route = MemberRoute::Generator;
    // also run the other member route and compare (only if cheap enough)
    bool cross_check = true;
};

Report verify_decomposition(const StrataConfig& cfg, const VerifyOptions& opt = {});
Report count_report(const StrataConfig& cfg, const VerifyOptions& opt = {});

}  // namespace dls
