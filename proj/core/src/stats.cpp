#include "hyperent/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperent {

namespace {

// Series expansion of P(a, x); converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x); converges fast for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
    if (dof <= 0.0) throw std::invalid_argument("chi2_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(dof / 2.0, x / 2.0);
}

Chi2Result chi2_homogeneity(const std::vector<std::vector<uint64_t>>& counts) {
    if (counts.empty() || counts[0].empty())
        throw std::invalid_argument("chi2_homogeneity: empty table");
    const size_t cols = counts[0].size();
    for (const auto& row : counts)
        if (row.size() != cols) throw std::invalid_argument("chi2_homogeneity: ragged table");

    std::vector<double> row_sums(counts.size(), 0.0), col_sums(cols, 0.0);
    double total = 0.0;
    for (size_t r = 0; r < counts.size(); ++r)
        for (size_t c = 0; c < cols; ++c) {
            const double v = static_cast<double>(counts[r][c]);
            row_sums[r] += v;
            col_sums[c] += v;
            total += v;
        }

    int live_rows = 0, live_cols = 0;
    for (double s : row_sums) live_rows += (s > 0.0);
    for (double s : col_sums) live_cols += (s > 0.0);

    Chi2Result result;
    result.dof = static_cast<double>(live_rows - 1) * static_cast<double>(live_cols - 1);
    if (total == 0.0 || result.dof <= 0.0) {
        result.dof = 0.0;
        return result;  // degenerate table carries no evidence
    }

    for (size_t r = 0; r < counts.size(); ++r) {
        if (row_sums[r] == 0.0) continue;
        for (size_t c = 0; c < cols; ++c) {
            if (col_sums[c] == 0.0) continue;
            const double expected = row_sums[r] * col_sums[c] / total;
            const double diff = static_cast<double>(counts[r][c]) - expected;
            result.chi2 += diff * diff / expected;
        }
    }
    result.p_value = chi2_sf(result.chi2, result.dof);
    return result;
}

}  // namespace hyperent
