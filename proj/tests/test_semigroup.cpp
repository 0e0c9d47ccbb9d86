#include <cmath>
#include <vector>

#include "adelic/padic.hpp"
#include "adelic/semigroup.hpp"
#include "doctest.h"

using namespace adelic;

namespace {

// Geometric profile values tabulated over [m_lo, m_hi].
JumpProfile tabulate(const JumpProfile& g, int m_lo, int m_hi) {
    std::vector<double> vals;
    for (int m = m_lo; m <= m_hi; ++m) vals.push_back(g.a(m));
    return JumpProfile::table(g.q(), m_lo, std::move(vals));
}

}  // namespace

TEST_CASE("jump profile: schedule values and validation") {
    JumpProfile g = JumpProfile::geometric(2, 1.0, 2.0);
    CHECK(g.a(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.a(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(JumpProfile::geometric(3, 3.0, 1.0).a(-1) == doctest::Approx(9.0).epsilon(1e-15));

    CHECK_THROWS_AS(JumpProfile::geometric(2, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpProfile::geometric(2, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpProfile::geometric(1, 1.0, 1.0), std::invalid_argument);

    JumpProfile t = JumpProfile::table(2, -1, {4.0, 1.0, 0.25});
    CHECK(t.a(-1) == 4.0);
    CHECK(t.a(1) == 0.25);
    CHECK_THROWS_AS(t.a(2), std::out_of_range);
    CHECK_THROWS_AS(t.a(-2), std::out_of_range);
    CHECK_THROWS_AS(JumpProfile::table(2, 0, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(JumpProfile::table(2, 0, {1.0, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(t.alpha(), std::logic_error);
}

TEST_CASE("p_series: boundary values and monotone decay") {
    JumpProfile g = JumpProfile::geometric(2, 1.0, 2.0);

    KernelValue at0 = p_series(g, 0, 0.0, 1e-10);
    CHECK(at0.value == 1.0);
    CHECK(at0.trunc_error == 0.0);
    CHECK(p_series(tabulate(g, -1, 10), 0, 0.0, 1e-6).value == 1.0);

    // 1 - P_0(t) <= t a(0).
    for (double t : {0.1, 0.5, 1.0}) {
        KernelValue v = p_series(g, 0, t, 1e-12);
        CHECK(1.0 - v.value <= t * g.a(0) + v.trunc_error);
        CHECK(v.value >= 0.0);
        CHECK(v.value <= 1.0);
    }

    CHECK(p_series(g, 0, 2.0, 1e-12).value < p_series(g, 0, 1.0, 1e-12).value);

    // Table mode reproduces the geometric values while inside the window.
    JumpProfile t = tabulate(g, -2, 60);
    CHECK(p_series(t, 0, 0.7, 1e-10).value ==
          doctest::Approx(p_series(g, 0, 0.7, 1e-10).value).epsilon(1e-12));
    // Narrow windows cannot support the requested truncation depth.
    CHECK_THROWS_AS(p_series(tabulate(g, 0, 3), 0, 0.5, 1e-10), std::out_of_range);

    CHECK_THROWS_AS(p_series(g, 0, -1.0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(p_series(g, 0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("transition kernel: start conditions, row sums, radius monotonicity") {
    JumpProfile g = JumpProfile::geometric(2, 1.0, 2.0);

    CHECK(transition_prob(DistanceClass::inside(), 0, 0.0, g, 1e-10).value == 1.0);
    CHECK(transition_prob(DistanceClass::outside(1), 0, 0.0, g, 1e-10).value == 0.0);
    CHECK_THROWS_AS(DistanceClass::outside(0), std::invalid_argument);

    // Total probability telescopes: P_M(t) + sum_m count(m) kernel(m) -> 1,
    // from below (truncation only ever removes mass).
    const double t = 0.5, tol = 1e-11;
    double total = p_series(g, 0, t, tol).value;
    for (int m = 1; m <= 60; ++m) {
        total += static_cast<double>(count_balls_at_distance(2, m)) *
                 transition_prob(DistanceClass::outside(m), 0, t, g, tol).value;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(total <= 1.0 + 1e-12);

    // Nested balls: kernel mass grows with the radius.
    for (int M = -3; M <= 5; ++M) {
        for (double tt : {0.1, 0.5, 1.0, 2.0}) {
            double small = p_series(g, M, tt, 1e-12).value;
            double large = p_series(g, M + 1, tt, 1e-12).value;
            CHECK(large >= small - 2e-12);
        }
    }

    // Kernel values sit in [0,1] with certified truncation error.
    KernelValue k = transition_prob(DistanceClass::outside(3), 0, 0.7, g, 1e-9);
    CHECK(k.value >= 0.0);
    CHECK(k.value <= 1.0);
    CHECK(k.trunc_error <= 2e-9);
}

TEST_CASE("generator: closed form and finite-difference consistency") {
    JumpProfile g = JumpProfile::geometric(2, 1.0, 2.0);

    CHECK(generator_indicator(DistanceClass::inside(), 0, g) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(generator_indicator(DistanceClass::outside(1), 0, g) ==
          doctest::Approx(0.75).epsilon(1e-15));

    auto fd_error = [&](DistanceClass where, double t) {
        double indicator = where.is_inside ? 1.0 : 0.0;
        double fd = (transition_prob(where, 0, t, g, 1e-14).value - indicator) / t;
        double h = generator_indicator(where, 0, g);
        return std::fabs(fd - h) / std::fabs(h);
    };

    for (DistanceClass where : {DistanceClass::inside(), DistanceClass::outside(1),
                                DistanceClass::outside(2)}) {
        CHECK(fd_error(where, 1e-4) <= 1e-3);

        // First-order error shrinks linearly: slope ~ 1 on a log-log grid.
        std::vector<double> ts = {1e-2, 1e-3, 1e-4};
        std::vector<double> errs;
        for (double t : ts) errs.push_back(fd_error(where, t));
        double slope = std::log(errs.front() / errs.back()) / std::log(ts.front() / ts.back());
        CHECK(slope >= 0.9);
        CHECK(slope <= 1.1);
    }
}

TEST_CASE("chapman-kolmogorov: identity at t=0 and semigroup property") {
    JumpProfile g1 = JumpProfile::geometric(2, 1.0, 2.0);
    CHECK(check_chapman_kolmogorov(g1, 0, 0.0, 0.0, 8) == 0.0);

    double e1 = check_chapman_kolmogorov(g1, 0, 0.3, 0.3, 20);
    CHECK(e1 >= 0.0);
    CHECK(e1 <= 1e-6);

    JumpProfile g2 = JumpProfile::geometric(3, 2.0, 1.5);
    double e2 = check_chapman_kolmogorov(g2, 0, 0.1, 0.7, 20);
    CHECK(e2 <= 1e-6);

    // Also exact away from resolution zero.
    CHECK(check_chapman_kolmogorov(g1, -2, 0.2, 0.4, 20) <= 1e-6);

    CHECK_THROWS_AS(check_chapman_kolmogorov(g1, 0, 0.1, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_chapman_kolmogorov(g1, 0, -0.1, 0.1, 10), std::invalid_argument);
}
