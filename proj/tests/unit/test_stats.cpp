#include <doctest.h>

#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <vector>

#include "spiderpcg/stats.hpp"

using namespace spiderpcg;

TEST_CASE("incomplete beta agrees with Boost.Math")
{
    for (double a : {0.5, 1.0, 2.5, 7.0, 49.5}) {
        for (double b : {0.5, 1.0, 3.0, 12.0}) {
            for (int k = 0; k <= 20; ++k) {
                const double x = k / 20.0;
                CHECK(regularized_incomplete_beta(a, b, x)
                      == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), StatsError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), StatsError);
}

TEST_CASE("t distribution CDF agrees with references to 1e-9")
{
    // Frozen from scipy.stats.t.cdf.
    CHECK(std::abs(student_t_cdf(0.5, 3) - 0.6742760175759246) < 1e-9);
    CHECK(std::abs(student_t_cdf(2.0, 10) - 0.9633059826146297) < 1e-9);
    CHECK(std::abs(student_t_cdf(4.242640687119285, 4) - 0.9933822002181586) < 1e-9);
    CHECK(std::abs(student_t_cdf(-1.3, 7) - 0.11738391769618858) < 1e-9);
    CHECK(std::abs(student_t_cdf(3.0, 99) - 0.9982922460392106) < 1e-9);

    for (int dof : {1, 2, 5, 17, 99, 250}) {
        const boost::math::students_t dist(dof);
        for (int k = -40; k <= 40; ++k) {
            const double t = k * 0.25;
            CHECK(std::abs(student_t_cdf(t, dof) - boost::math::cdf(dist, t)) < 1e-9);
        }
    }
    CHECK(student_t_cdf(0.0, 6) == doctest::Approx(0.5));
}

TEST_CASE("paired t-test reference vector")
{
    const std::vector<double> diffs{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> zeros(5, 0.0);
    const TTestResult r = paired_ttest(diffs, zeros);
    // scipy.stats.ttest_rel: t = 4.242640687119285, p = 0.013235599563682695
    CHECK(r.t == doctest::Approx(4.242640687119285).epsilon(1e-12));
    CHECK(std::abs(r.p - 0.013235599563682695) < 1e-9);
    CHECK(r.dof == 4);

    const std::vector<double> a{3.5, 4.0, 6.25, 2.0, 5.5, 7.0};
    const std::vector<double> b{4.0, 3.0, 7.5, 2.5, 5.0, 9.0};
    const TTestResult s = paired_ttest(a, b);
    CHECK(s.t == doctest::Approx(-1.0204450448215527).epsilon(1e-12));
    CHECK(std::abs(s.p - 0.3543263529453923) < 1e-9);

    const TTestResult swapped = paired_ttest(b, a);
    CHECK(swapped.t == doctest::Approx(-s.t));
    CHECK(swapped.p == doctest::Approx(s.p));
}

TEST_CASE("paired t-test edge cases")
{
    const std::vector<double> a{1.0, 2.0, 3.0};
    const TTestResult same = paired_ttest(a, a);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);

    const std::vector<double> shifted{2.0, 3.0, 4.0};
    CHECK_THROWS_AS(paired_ttest(a, shifted), StatsError);
    CHECK_THROWS_AS(paired_ttest(std::vector<double>{1.0}, std::vector<double>{2.0}), StatsError);
    CHECK_THROWS_AS(paired_ttest(a, std::vector<double>{1.0, 2.0}), StatsError);
}
