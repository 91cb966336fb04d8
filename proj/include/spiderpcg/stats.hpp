#pragma once

#include <span>
#include <stdexcept>

namespace spiderpcg {

class StatsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// I_x(a, b), the regularized incomplete beta function.
/// Continued fraction (modified Lentz), using the symmetry relation for
/// x beyond the mean so the fraction converges quickly.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    int dof = 0;
};

/// Two-tailed paired-samples t-test on a - b.
/// Throws StatsError for unequal lengths, n < 2, or equal nonzero differences
/// (zero variance). Identical samples give t = 0, p = 1.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

} // namespace spiderpcg
