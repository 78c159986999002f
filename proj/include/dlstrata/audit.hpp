#pragma once

#include "dlstrata/report.hpp"

namespace dls {

struct WeylAuditOptions {
    int max_t = 6;  // hatted rank of the symplectic Weyl group
    int brute_rank = 3;
    // 0: no point counts; 1: C_2 only (K = 2, 4); 2: adds C_3 with h = 4 (K = 2, 3)
    int growth_level = 1;
    std::uint64_t budget = 1'000'000'000;
};

// Lengths, reducedness, double-coset minimality, relative-position diagrams and DL
// dimensions of the w and w' families in type C, brute-force agreement at small rank,
// and the w' dimension from point-count growth in the extension degree.
Report weyl_audit(const WeylAuditOptions& opt = {});

}  // namespace dls
