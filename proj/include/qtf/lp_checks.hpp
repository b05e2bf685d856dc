#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtf/littlewood_paley.hpp"

namespace qtf {

// One row of the lp-report: lhs / rhs of an inequality and their ratio.
// The ratios are statistical evidence (the underlying constants are
// existential, never pinned); CI compares them against frozen thresholds.
struct RatioReport {
    std::string check;
    int grid_n = 0;
    std::uint64_t seed = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

// |D_q u|_{L^b} <= 2^{d(1/a-1/b)q} |D_q u|_{L^a} plus the two-sided
// derivative form and the (S_q - S_q') variant.
std::vector<RatioReport> check_bernstein(GridPtr grid, int trials,
                                         std::uint64_t seed);

// |[D_q, u]v|_{L^2} vs 2^-q |grad u|_{L^4} |v|_{L^4}
std::vector<RatioReport> check_commutator(GridPtr grid, int trials,
                                          std::uint64_t seed);

// |ab|_{H^{s+t-d/2}} vs |a|_{H^s} |b|_{H^t}; requires |s|,|t| < d/2, s+t > 0
std::vector<RatioReport> check_product_law(GridPtr grid, double s, double t,
                                           int trials, std::uint64_t seed);

// |S_N f|_{L^inf} vs |f|_{L^2} + sqrt(N) |grad f|_{L^2}
std::vector<RatioReport> check_sqrt_n(GridPtr grid, int trials,
                                      std::uint64_t seed);

// |f|_{L^{2p}} vs sqrt(p) |f|_{L^2}^{1/p} |grad f|_{L^2}^{1-1/p}, d = 2
std::vector<RatioReport> check_l2p(GridPtr grid, int trials,
                                   std::uint64_t seed);

double max_ratio(const std::vector<RatioReport>& rows);

}  // namespace qtf
