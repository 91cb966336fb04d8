#include "spiderpcg/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace spiderpcg {

namespace {

double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIterations = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return h;
        }
    }
    throw StatsError("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0)) {
        throw StatsError("incomplete beta requires a > 0 and b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw StatsError("incomplete beta requires x in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x)
                             + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof)
{
    if (!(dof > 0.0)) {
        throw StatsError("t distribution requires positive degrees of freedom");
    }
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    // P(|T| > |t|) = I_{dof / (dof + t^2)}(dof / 2, 1 / 2)
    const double tail = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
    return t >= 0.0 ? 1.0 - 0.5 * tail : 0.5 * tail;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw StatsError("paired t-test needs samples of equal length");
    }
    const std::size_t n = a.size();
    if (n < 2) {
        throw StatsError("paired t-test needs at least two pairs");
    }
    std::vector<double> diff(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = a[i] - b[i];
        mean += diff[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    bool all_zero = true;
    for (double d : diff) {
        ss += (d - mean) * (d - mean);
        all_zero = all_zero && d == 0.0;
    }
    const int dof = static_cast<int>(n) - 1;
    if (all_zero) {
        return TTestResult{0.0, 1.0, dof};
    }
    const double sd = std::sqrt(ss / dof);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
        throw StatsError("paired differences have zero variance");
    }
    const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const double p = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
    return TTestResult{t, p, dof};
}

} // namespace spiderpcg
