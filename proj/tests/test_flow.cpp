#include <doctest.h>

#include <cmath>

#include "ymflow/flow.hpp"
#include "ymflow/initial.hpp"

using namespace ymflow;

namespace {

FlowSeries synthetic_series(const std::vector<double>& ts,
                            const std::vector<double>& b2,
                            const std::vector<double>& aprime) {
    FlowSeries s;
    s.cols = {"step", "t", "dt", "B_L2", "Aprime_L2", "B_L6", "rho", "lambda", "psi"};
    for (std::size_t i = 0; i < ts.size(); ++i)
        s.rows.push_back({static_cast<double>(i), ts[i], 0.0, b2[i], aprime[i], 0, 0, 0, 0});
    return s;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("rhs vanishes at the trivial connection") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    Connection A = zero_connection(g, GroupSpec::su2());
    CHECK(l2_norm(flow_rhs(A)) == 0.0);
}

TEST_CASE("u1 rhs equals the linear heat operator") {
    GridSpec g{{5, 4, 6}, 0.2, Bc::Periodic};
    FormField a(1, g, GroupSpec::u1());
    a.fill_random(3, 1.0);
    Connection A(a);
    FormField want = codifferential(exterior_derivative(A.a));
    want *= -1.0;
    FormField got = flow_rhs(A);
    got -= want;
    CHECK(got.max_cell_norm() == 0.0);
}

TEST_CASE("pure gradient data is stationary") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    GroupSpec u1 = GroupSpec::u1();
    FormField phi(0, g, u1);
    phi.fill_random(5, 1.0);
    Connection A(exterior_derivative(phi));
    CHECK(l2_norm(flow_rhs(A)) <= 1e-13 / (g.h * g.h));
}

TEST_CASE("single-mode amplitude factor matches the exponential to O(dt^5)") {
    GridSpec g{{8, 8, 8}, 0.125, Bc::Periodic};
    std::array<int, 3> m{1, 0, 0};
    Connection A0 = u1_single_mode(g, m, 1, 1.0);
    double lam = u1_mode_eigenvalue(g, m);
    double a0 = l2_norm(A0.a);
    for (double dt : {2e-3, 1e-3}) {
        FlowState st;
        st.A = A0;
        step(st, dt);
        double ratio = l2_norm(st.A.a) / a0;
        double z = lam * dt;
        CHECK(std::abs(ratio - std::exp(-z)) <= std::pow(z, 5) / 60.0 + 1e-15);
    }
}

TEST_CASE("dt halving reduces the end-time error about 16x") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    Connection A0 = fourier_smooth_connection(g, GroupSpec::su2(), 9, 0.4);
    double T = 0.02;
    auto integrate = [&](double dt) {
        FlowState st;
        st.A = A0;
        long n = std::lround(T / dt);
        for (long i = 0; i < n; ++i) step(st, dt);
        return st.A;
    };
    Connection c1 = integrate(T / 16), c2 = integrate(T / 32), c3 = integrate(T / 64);
    FormField d12 = c1.a;
    d12 -= c2.a;
    FormField d23 = c2.a;
    d23 -= c3.a;
    double ratio = l2_norm(d12) / l2_norm(d23);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("zero initial data produces a zero series") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::su2());
    p.t_max = 0.01;
    FlowResult r = run_flow(zero_connection(g, GroupSpec::su2()), p);
    CHECK(!r.blew_up);
    for (auto& row : r.series.rows) {
        CHECK(row[r.series.col("B_L2")] == 0.0);
        CHECK(row[r.series.col("rho")] == 0.0);
        CHECK(row[r.series.col("lambda")] == 1.0);
    }
}

TEST_CASE("u1 multi-mode decay matches the Fourier oracle") {
    GridSpec g{{8, 8, 8}, 0.125, Bc::Periodic};
    Connection m1 = u1_single_mode(g, {1, 0, 0}, 1, 0.8);
    Connection m2 = u1_single_mode(g, {0, 2, 0}, 2, 0.5);
    Connection m3 = u1_single_mode(g, {0, 0, 1}, 0, 0.3);
    FormField a = m1.a;
    a += m2.a;
    a += m3.a;
    Connection A0(a);
    double l1 = u1_mode_eigenvalue(g, {1, 0, 0});
    double l2 = u1_mode_eigenvalue(g, {0, 2, 0});
    double l3 = u1_mode_eigenvalue(g, {0, 0, 1});
    double b1 = l2_norm(curvature(m1)), b2 = l2_norm(curvature(m2)),
           b3 = l2_norm(curvature(m3));

    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::u1());
    p.dt_override = 1e-3 * g.h * g.h;
    p.t_max = 0.005;
    p.record_every = 16;
    FlowResult r = run_flow(A0, p);
    CHECK(!r.blew_up);
    auto ts = r.series.times();
    auto bl = r.series.column("B_L2");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double want = std::sqrt(b1 * b1 * std::exp(-2 * l1 * ts[i]) +
                                b2 * b2 * std::exp(-2 * l2 * ts[i]) +
                                b3 * b3 * std::exp(-2 * l3 * ts[i]));
        CHECK(std::abs(bl[i] - want) <= 1e-8 * want);
    }
}

TEST_CASE("su2 energy norm is nonincreasing along a run") {
    GridSpec g{{8, 8, 8}, 0.125, Bc::Periodic};
    Connection A0 = fourier_smooth_connection(g, GroupSpec::su2(), 13, 0.5);
    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::su2());
    p.t_max = 0.05;
    FlowResult r = run_flow(A0, p);
    CHECK(!r.blew_up);
    auto b = r.series.column("B_L2");
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        CHECK(b[i + 1] <= b[i] * (1 + 1e-10));
}

TEST_CASE("action quadrature closed forms") {
    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(0.01 * i);

    // |B|^2 = 1: rho(t) = sqrt(t)
    std::vector<double> ones(ts.size(), 1.0), zeros(ts.size(), 0.0);
    FlowSeries s1 = synthetic_series(ts, ones, zeros);
    for (double t : {0.1, 0.25, 0.4})
        CHECK(action_rho(s1, t) == doctest::Approx(std::sqrt(t)).epsilon(1e-13));

    // |B|^2 = s: rho(t) = t^{3/2}/3 (piecewise-linear-exact integrand)
    std::vector<double> blin(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) blin[i] = std::sqrt(ts[i]);
    FlowSeries s2 = synthetic_series(ts, blin, zeros);
    for (double t : {0.1, 0.25, 0.4})
        CHECK(std::abs(action_rho(s2, t) - std::pow(t, 1.5) / 3.0) <= 1e-10);

    CHECK(action_rho(s1, 0.0) == 0.0);
    CHECK_THROWS_AS(action_rho(s1, 1.0), std::invalid_argument);
}

TEST_CASE("psi closed forms") {
    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(0.005 * i);
    std::vector<double> zeros(ts.size(), 0.0);
    GfsConstants k = GfsConstants::make(1.0, GroupSpec::su2());

    FlowSeries s0 = synthetic_series(ts, zeros, zeros);
    CHECK(psi_functions(s0, 0.1, k, 0.0).psi == doctest::Approx(0.1).epsilon(1e-14));

    double beta = 0.7;
    std::vector<double> b(ts.size(), beta);
    FlowSeries sb = synthetic_series(ts, b, zeros);
    double b4 = std::pow(beta, 4.0);
    PsiPair pp = psi_functions(sb, 0.1, k, 2.5);
    CHECK(pp.psi == doctest::Approx(0.1 + k.gamma * b4 * 0.1).epsilon(1e-13));
    CHECK(pp.psi_n == doctest::Approx(0.1 + (k.gamma + 2.5) * b4 * 0.1).epsilon(1e-13));
}

TEST_CASE("energy identity residual on exact synthetic data") {
    // d/dt |B|^2 = -2 |A'|^2 with |B|^2 = 1 - 2t, |A'| = 1; rho matches FA0
    std::vector<double> ts, b, g;
    for (int i = 0; i <= 30; ++i) {
        double t = 0.01 * i;
        ts.push_back(t);
        b.push_back(std::sqrt(1.0 - 2.0 * t));
        g.push_back(1.0);
    }
    FlowSeries s = synthetic_series(ts, b, g);
    int rc = s.col("rho");
    for (std::size_t i = 0; i < ts.size(); ++i)
        s.rows[i][rc] = std::sqrt(ts[i]) - (2.0 / 3.0) * std::pow(ts[i], 1.5);
    EnergyReport rep = energy_identity_residual(s);
    CHECK(rep.max_interval_rel <= 1e-12);
    CHECK(rep.max_fa0_rel <= 1e-12);
}

TEST_CASE("u1 single-mode run satisfies the action identity to 1e-8") {
    GridSpec g{{16, 16, 16}, 1.0 / 16, Bc::Periodic};
    Connection A0 = u1_single_mode(g, {1, 0, 0}, 1, 1.0);
    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::u1());
    p.dt_override = 1e-3 * g.h * g.h;
    p.t_max = 0.004;
    p.record_every = 1;
    FlowResult r = run_flow(A0, p);
    CHECK(!r.blew_up);
    EnergyReport rep = energy_identity_residual(r.series);
    CHECK(rep.max_fa0_rel <= 1e-8);
}

TEST_CASE("blow-up detection keeps the partial series") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    FormField a(1, g, GroupSpec::su2());
    a.fill_random(17, 50.0);
    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::su2());
    p.dt_override = 50.0 * g.h * g.h;  // far beyond the stability limit
    p.t_max = 10.0;
    FlowResult r = run_flow(Connection(a), p);
    CHECK(r.blew_up);
    CHECK(!r.series.rows.empty());
    CHECK(!r.error.empty());
}

TEST_CASE("lambda and psi are dominated by functions of the action") {
    GridSpec g{{8, 8, 8}, 0.125, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    GfsConstants k = GfsConstants::make(1.0, su2);
    Connection A0 = fourier_smooth_connection(g, su2, 29, 0.5);
    FlowParams p;
    p.gfs = k;
    p.t_max = 0.05;
    p.record_every = 1;
    FlowResult r = run_flow(A0, p);
    CHECK(!r.blew_up);
    auto ts = r.series.times();
    auto lam = r.series.column("lambda");
    auto psi = r.series.column("psi");
    auto rho = r.series.column("rho");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        double t = ts[i];
        // t lambda(t) <= lambda_M t + gamma rho^2, psi <= lambda_M t + 2 gamma rho^2
        double dom1 = t + k.gamma * rho[i] * rho[i];
        double dom2 = t + 2.0 * k.gamma * rho[i] * rho[i];
        CHECK(t * lam[i] <= dom1 * (1.0 + 1e-6));
        CHECK(psi[i] <= dom2 * (1.0 + 1e-6));
    }
}

TEST_CASE("flow preserves box boundary conditions and dissipation") {
    GroupSpec su2 = GroupSpec::su2();
    for (Bc bc : {Bc::Dirichlet, Bc::Neumann}) {
        GridSpec g{{6, 6, 6}, 1.0 / 6, bc};
        Connection A0 = fourier_smooth_connection(g, su2, 31, 0.4);
        FlowParams p;
        p.gfs = GfsConstants::make(1.0, su2);
        p.t_max = 0.02;
        FlowResult r = run_flow(A0, p);
        CHECK(!r.blew_up);
        if (bc == Bc::Dirichlet) {
            CHECK(r.final_state.A.a.tangential_is_zero());
            CHECK(curvature(r.final_state.A).tangential_is_zero(1e-14));
        }
        auto b = r.series.column("B_L2");
        for (std::size_t i = 0; i + 1 < b.size(); ++i)
            CHECK(b[i + 1] <= b[i] * (1 + 1e-10));
    }
}

TEST_CASE("series rows are strictly increasing in t and rho is nondecreasing") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    Connection A0 = fourier_smooth_connection(g, GroupSpec::su2(), 23, 0.4);
    FlowParams p;
    p.gfs = GfsConstants::make(1.0, GroupSpec::su2());
    p.t_max = 0.02;
    p.record_every = 3;
    FlowResult r = run_flow(A0, p);
    auto ts = r.series.times();
    auto rho = r.series.column("rho");
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        CHECK(ts[i + 1] > ts[i]);
        CHECK(rho[i + 1] >= rho[i]);
    }
}

}  // TEST_SUITE
