#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlstrata/report.hpp"

namespace dls {

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Affine charts at the worst point. Shapes (hatted a = x/2):
//   Z:  (e1 | f1 | Z13), (t1^ - h^) x (t1^ + h^), rank <= 1, Z13 = H Z13^t H
//   Y:  F2, (h^ - t2^) x (n - h), rank <= 1
//   ZY: f12, (t1^ - h^) x (h^ - t2^), rank <= 1
//   PiModular: affine space of dimension n/2 - t2^ - 1
enum class ChartFamily { Z, Y, ZY, PiModular };
std::string to_string(ChartFamily f);
ChartFamily chart_family_from_string(const std::string& s);

struct ChartSpec {
    ChartFamily family = ChartFamily::ZY;
    int n = 0, h = 0, t1 = 0, t2 = 0;
    unsigned q = 3;

    void validate() const;
    int rows() const;
    int cols() const;
    // all matrix entries, and the free ones once the symmetric block is imposed
    int entries() const;
    int free_entries() const;
    json to_json() const;
};

// number of a x b matrices over F_q of rank <= 1
std::uint64_t rank1_closed_form(int a, int b, std::uint64_t q);
// same, for a x (a + c) with the leading a x a block fixed by X -> H X^t H
std::uint64_t symmetric_block_closed_form(int a, int c, std::uint64_t q);
std::uint64_t rank1_brute_force(int a, int b, unsigned q);

// exact F_q-point count by enumerating the free entries; q must be prime
std::uint64_t chart_count(const ChartSpec& spec, std::uint64_t budget = 100'000'000);
std::uint64_t chart_closed_form(const ChartSpec& spec);
// round(log(N(5) / N(3)) / log(5/3)) from brute-force counts at q = 3 and 5
int growth_exponent(const ChartSpec& spec, std::uint64_t budget = 100'000'000);

struct StrataDims {
    std::optional<int> z, y, zy;
};
int dim_z(int h, int t1);
int dim_y(int n, int h, int t2);
int dim_zy(int h, int t1, int t2);
// components are filled where the parameters admit the stratum
StrataDims strata_dims(int n, int h, std::optional<int> t1, std::optional<int> t2);
int chart_dimension(const ChartSpec& spec);

enum class Truth { False, True, NotApplicable };
std::string to_string(Truth t);

struct Predicates {
    Truth smooth_z = Truth::NotApplicable, smooth_y = Truth::NotApplicable,
          smooth_zy = Truth::NotApplicable;
    Truth gorenstein_z = Truth::NotApplicable, gorenstein_y = Truth::NotApplicable,
          gorenstein_zy = Truth::NotApplicable;
    json to_json() const;
};

// The numeric smoothness and Gorenstein criteria as stated; predicates whose
// hypotheses fail are NotApplicable.
Predicates predicates(int n, int h, std::optional<int> t1, std::optional<int> t2);

// h-vector of the chart's homogeneous coordinate ring (a normal toric ring), and
// whether it is symmetric, which for these Cohen-Macaulay domains means Gorenstein.
std::vector<long long> chart_h_vector(const ChartSpec& spec);
bool gorenstein_by_h_vector(const ChartSpec& spec);

// Allowed vertex lattice types for the hermitian space (n, eps).
struct VertexTypeTable {
    int n = 0;
    int eps = 1;
    int t_max() const;
    std::vector<int> types() const;
    bool allowed(int t) const;
};

void validate_rz(int n, int h, int eps);
// dimension of the reduced locus, by case analysis
int rz_dim(int n, int h, int eps);
// max over allowed types of the stratum dimensions (0 for the worst point)
int rz_dim_from_types(int n, int h, int eps);
// the case formula with the printed constants: special case h = n-2, eps = -1 gives
// n/2 - 2 and the second general term is n - h/2 + 1
int rz_dim_printed(int n, int h, int eps);

Report reconcile(const ChartSpec& spec, std::uint64_t budget = 100'000'000);
// every valid chart shape with at most max_entries matrix entries and n <= max_n
std::vector<ChartSpec> chart_shapes(int max_entries = 10, int max_n = 12);
Report reconcile_sweep(int max_entries = 10, int max_n = 12, std::uint64_t budget = 100'000'000);
Report rzdim_report(int n, int h, int eps);

}  // namespace dls
