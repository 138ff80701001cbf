#include <doctest.h>

#include <cmath>

#include "ymflow/fit.hpp"

using namespace ymflow;

namespace {

FlowSeries power_law_series(double expo, double coef, int n_rows) {
    FlowSeries s;
    s.cols = {"step", "t", "dt", "B_L2", "Aprime_L2", "B_L6", "rho", "lambda", "psi"};
    for (int i = 1; i <= n_rows; ++i) {
        double t = 1e-4 * std::pow(1.2, i);
        s.rows.push_back({double(i), t, 0, coef * std::pow(t, expo), 1, 1, 0, 1, t});
    }
    return s;
}

}  // namespace

TEST_SUITE("fit") {

TEST_CASE("exact power law is recovered to machine precision") {
    FlowSeries s = power_law_series(-0.5, 2.0, 60);
    auto ts = s.times();
    FitResult f = fit_scaling_exponent(s, "B_L2", ts.front(), ts.back(), 0.5);
    CHECK(std::abs(f.slope + 0.5) <= 1e-12);
    CHECK(std::abs(f.intercept - std::log(2.0)) <= 1e-10);
    CHECK(f.residual_rms <= 1e-12);
    CHECK(f.bounded);  // t^{1/2} t^{-1/2} is constant
}

TEST_CASE("bounded flag reacts to the weight exponent") {
    FlowSeries s = power_law_series(-0.5, 1.0, 60);
    auto ts = s.times();
    // wrong weight: t^{1.5} * t^{-0.5} = t varies far more than 3x
    FitResult f = fit_scaling_exponent(s, "B_L2", ts.front(), ts.back(), 1.5);
    CHECK(!f.bounded);
}

TEST_CASE("window and sample validation") {
    FlowSeries s = power_law_series(-0.5, 1.0, 12);
    auto ts = s.times();
    CHECK_THROWS_AS(fit_scaling_exponent(s, "B_L2", ts[0], ts[4], 0.5), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaling_exponent(s, "B_L2", ts.back(), ts.front(), 0.5),
                    std::invalid_argument);

    FlowSeries neg = power_law_series(-0.5, -1.0, 20);
    CHECK_THROWS_AS(fit_scaling_exponent(neg, "B_L2", neg.times().front(), neg.times().back(),
                                         0.5),
                    std::invalid_argument);
}

TEST_CASE("default window drops the transient and spans a decade") {
    FlowSeries s = power_law_series(-0.5, 1.0, 80);
    auto [lo, hi] = default_fit_window(s, 4, 16);
    auto ts = s.times();
    auto steps = s.column("step");
    // the first 4 steps are excluded
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (steps[i] <= 4) CHECK(ts[i] < lo);
    CHECK(hi >= 10.0 * lo * (1 - 1e-12));
    std::size_t count = 0;
    for (double t : ts)
        if (t >= lo && t <= hi) ++count;
    CHECK(count >= 16);
}

}  // TEST_SUITE
