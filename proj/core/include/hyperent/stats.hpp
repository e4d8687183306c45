#pragma once

// Small statistics toolbox for the estimators and their sanity tests.

#include <cstdint>
#include <vector>

namespace hyperent {

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

// Chi-squared survival function P(X >= x) for `dof` degrees of freedom.
double chi2_sf(double x, double dof);

struct Chi2Result {
    double chi2 = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

// Pearson homogeneity test: are the row distributions of a contingency table
// identical?  Rows or columns with zero total are dropped before computing
// the statistic.
Chi2Result chi2_homogeneity(const std::vector<std::vector<uint64_t>>& counts);

}  // namespace hyperent
