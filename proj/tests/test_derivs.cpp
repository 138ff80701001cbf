#include <doctest.h>

#include <cmath>

#include "ymflow/derivs.hpp"
#include "ymflow/initial.hpp"

using namespace ymflow;

TEST_SUITE("derivs") {

TEST_CASE("coefficient table seeds and spot values") {
    CoeffTables t = build_coeff_tables(8);
    // first-order rows empty
    for (int i = 1; i <= 7; ++i) {
        CHECK(t.get(t.c, 1, i) == 0);
        CHECK(t.get(t.cbar, 1, i) == 0);
        CHECK(t.get(t.ctilde, 1, i) == 0);
        CHECK(t.get(t.ctilde, 2, i) == 0);
    }
    CHECK(t.get(t.c, 2, 1) == 1);
    CHECK(t.get(t.cbar, 2, 1) == 1);
    CHECK(t.get(t.c, 3, 1) == 2);
    CHECK(t.get(t.c, 3, 2) == 1);
    CHECK(t.get(t.c, 3, 1) + t.get(t.c, 3, 2) == 3);  // symmetrized P_3 coefficient
    CHECK(t.get(t.ctilde, 3, 1) == 1);
    CHECK(t.get(t.chat, 2, 1) == 2);
    CHECK(t.get(t.chat, 3, 1) == 3);
    CHECK(t.get(t.chat, 3, 2) == 3);
}

TEST_CASE("recurrence tables equal the symbolic oracle up to order 8") {
    CoeffTables t = build_coeff_tables(8);
    LeibnizTables o = leibniz_oracle(8);
    std::string why;
    CHECK_MESSAGE(tables_match_oracle(t, o, &why), why);
}

TEST_CASE("low-order fields vanish as required") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    CoeffTables tbl = build_coeff_tables(5);
    Connection A = fourier_smooth_connection(g, su2, 3, 0.5);
    DerivStack st = compute_derivative_stack(A, 4, tbl);

    CHECK(l2_norm(eval_lower_order(LowerOrderKind::P, 1, st, tbl)) == 0.0);
    CHECK(l2_norm(eval_lower_order(LowerOrderKind::Q, 1, st, tbl)) == 0.0);
    CHECK(l2_norm(eval_lower_order(LowerOrderKind::R, 1, st, tbl)) == 0.0);
    CHECK(l2_norm(eval_lower_order(LowerOrderKind::R, 2, st, tbl)) == 0.0);
    CHECK(l2_norm(eval_lower_order(LowerOrderKind::S, 0, st, tbl)) == 0.0);
    CHECK(l2_norm(eval_lower_order(LowerOrderKind::Qhat, 2, st, tbl)) == 0.0);

    // S_1 = [B ^ A']
    FormField s1 = eval_lower_order(LowerOrderKind::S, 1, st, tbl);
    s1 -= bracket_wedge(st.B_deriv(0), st.A_deriv(1));
    CHECK(s1.max_cell_norm() == 0.0);
}

TEST_CASE("abelian lower-order terms vanish at every order") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    CoeffTables tbl = build_coeff_tables(5);
    Connection A = fourier_smooth_connection(g, GroupSpec::u1(), 5, 0.8);
    DerivStack st = compute_derivative_stack(A, 4, tbl);
    for (int n = 1; n <= 4; ++n) {
        CHECK(l2_norm(eval_lower_order(LowerOrderKind::P, n, st, tbl)) == 0.0);
        CHECK(l2_norm(eval_lower_order(LowerOrderKind::Q, n, st, tbl)) == 0.0);
        CHECK(l2_norm(eval_lower_order(LowerOrderKind::R, n, st, tbl)) == 0.0);
        CHECK(l2_norm(eval_lower_order(LowerOrderKind::S, n, st, tbl)) == 0.0);
    }
}

TEST_CASE("stack of the trivial connection is zero") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    CoeffTables tbl = build_coeff_tables(4);
    DerivStack st = compute_derivative_stack(zero_connection(g, GroupSpec::su2()), 3, tbl);
    for (int k = 1; k <= 3; ++k) {
        CHECK(l2_norm(st.A_deriv(k)) == 0.0);
        CHECK(l2_norm(st.B_deriv(k)) == 0.0);
    }
}

TEST_CASE("abelian stack equals repeated operator application") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    GroupSpec u1 = GroupSpec::u1();
    CoeffTables tbl = build_coeff_tables(5);
    FormField a(1, g, u1);
    a.fill_random(7, 1.0);
    Connection A(a);
    DerivStack st = compute_derivative_stack(A, 4, tbl);

    FormField cur = A.a;
    for (int k = 1; k <= 4; ++k) {
        FormField nxt = codifferential(exterior_derivative(cur));
        nxt *= -1.0;
        FormField diff = nxt;
        diff -= st.A_deriv(k);
        CHECK(diff.max_cell_norm() <= 1e-12 * nxt.max_cell_norm() + 1e-300);
        cur = nxt;
    }
}

TEST_CASE("second derivative matches a central time difference of the flow") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    CoeffTables tbl = build_coeff_tables(3);
    Connection A0 = fourier_smooth_connection(g, su2, 11, 0.3);

    double dt = 1e-3 * g.h * g.h;
    long center = 96;
    std::vector<long> dsteps{32, 16};
    FlowState st;
    st.A = A0;
    std::vector<Connection> minus(dsteps.size(), A0), plus(dsteps.size(), A0);
    Connection mid = A0;
    for (long s = 1; s <= center + 32; ++s) {
        step(st, dt);
        for (std::size_t i = 0; i < dsteps.size(); ++i) {
            if (s == center - dsteps[i]) minus[i] = st.A;
            if (s == center + dsteps[i]) plus[i] = st.A;
        }
        if (s == center) mid = st.A;
    }
    DerivStack sc = compute_derivative_stack(mid, 2, tbl);
    std::vector<double> mism;
    for (std::size_t i = 0; i < dsteps.size(); ++i) {
        DerivStack sm = compute_derivative_stack(minus[i], 1, tbl);
        DerivStack sp = compute_derivative_stack(plus[i], 1, tbl);
        FormField fd = sp.A_deriv(1);
        fd -= sm.A_deriv(1);
        fd *= 1.0 / (2.0 * dsteps[i] * dt);
        fd -= sc.A_deriv(2);
        mism.push_back(l2_norm(fd) / l2_norm(sc.A_deriv(2)));
    }
    double order = std::log2(mism[0] / mism[1]);
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
}

TEST_CASE("abelian consequence identities are exact") {
    GridSpec g{{8, 8, 8}, 0.125, Bc::Periodic};
    CoeffTables tbl = build_coeff_tables(4);
    Connection A = fourier_smooth_connection(g, GroupSpec::u1(), 13, 0.6);
    DerivStack st = compute_derivative_stack(A, 3, tbl);
    for (int n = 1; n <= 3; ++n) {
        IdentityResiduals ir = identity_residuals(st, n, tbl);
        CHECK(ir.codiff_rel <= 1e-12);
        CHECK(ir.d_rel <= 1e-12);
    }
}

TEST_CASE("X1 and Y0 vanish exactly; Y1 matches the direct expression") {
    GridSpec g{{6, 6, 6}, 1.0 / 6, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    GfsConstants k = GfsConstants::make(1.3, su2);
    CoeffTables tbl = build_coeff_tables(3);
    Connection A = fourier_smooth_connection(g, su2, 17, 0.5);
    DerivStack st = compute_derivative_stack(A, 2, tbl);

    CHECK(xy_terms(st, 1, k, tbl).X == 0.0);
    CHECK(xy_terms(st, 0, k, tbl).Y == 0.0);

    // Y_1 = |[A' -| B]|_2^2 + kappa^2 |[A' ^ A']|_{6/5}^2 + |[B ^ A']|_2^2
    const FormField& Ap = st.A_deriv(1);
    const FormField& B = st.B_deriv(0);
    double q2 = l2_norm(interior_bracket(Ap, B));
    double p2 = lp_norm(bracket_wedge(Ap, Ap), 1.2);
    double s1 = l2_norm(bracket_wedge(B, Ap));
    double want = q2 * q2 + k.kappa * k.kappa * p2 * p2 + s1 * s1;
    CHECK(xy_terms(st, 1, k, tbl).Y == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("P evaluation is invariant under reindexing i <-> n-i") {
    GridSpec g{{5, 5, 5}, 0.2, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    CoeffTables tbl = build_coeff_tables(5);
    Connection A = fourier_smooth_connection(g, su2, 19, 0.5);
    DerivStack st = compute_derivative_stack(A, 4, tbl);

    CoeffTables rev = tbl;
    for (int n = 2; n <= 4; ++n)
        for (int i = 1; i <= n - 1; ++i) rev.c[n][i] = tbl.get(tbl.c, n, n - i);
    for (int n = 2; n <= 4; ++n) {
        FormField a = eval_lower_order(LowerOrderKind::P, n, st, tbl);
        FormField b = eval_lower_order(LowerOrderKind::P, n, st, rev);
        a -= b;
        // identical up to the accumulation order of bitwise-equal terms
        double scale = 0.0;
        for (int i = 1; i <= n - 1; ++i)
            scale += tbl.get(tbl.c, n, i) *
                     st.A_deriv(i).max_cell_norm() * st.A_deriv(n - i).max_cell_norm();
        CHECK(a.max_cell_norm() <= 1e-13 * scale);
    }
}

TEST_CASE("theorem quantities: zero flow and the action identity row") {
    // zero data: everything zero
    {
        FlowSeries s;
        s.cols = {"step", "t", "dt", "B_L2", "Aprime_L2", "B_L6", "rho", "lambda", "psi"};
        for (int i = 0; i <= 10; ++i)
            s.rows.push_back({double(i), 0.01 * i, 0.01, 0, 0, 0, 0, 1, 0.01 * i});
        TheoremQuantities q = theorem_quantities(s, 0, 0.05);
        CHECK(q.Cn.boundary == 0.0);
        CHECK(q.Cn.integral == 0.0);
    }
    // synthetic exact-identity data: boundary + 2*integral equals rho
    {
        FlowSeries s;
        s.cols = {"step", "t", "dt", "B_L2", "Aprime_L2", "B_L6", "rho", "lambda", "psi"};
        for (int i = 0; i <= 30; ++i) {
            double t = 0.01 * i;
            double rho = std::sqrt(t) - (2.0 / 3.0) * std::pow(t, 1.5);
            s.rows.push_back({double(i), t, 0.01, std::sqrt(1.0 - 2.0 * t), 1.0, 0, rho, 1, t});
        }
        for (double t : {0.1, 0.2, 0.3}) {
            TheoremQuantities q = theorem_quantities(s, 0, t);
            double rho = std::sqrt(t) - (2.0 / 3.0) * std::pow(t, 1.5);
            CHECK(q.Cn.boundary + 2.0 * q.Cn.integral == doctest::Approx(rho).epsilon(1e-12));
        }
    }
}

TEST_CASE("theorem rows on an abelian mode match the closed-form oracle") {
    // A(t) = e^{-lam t} A0, so every weighted row reduces to
    // t^a lam^{2n} e^{-2 lam t} c0 + c1 int_0^t s^a lam^{2m} e^{-2 lam s} ds
    GridSpec g{{16, 16, 16}, 1.0 / 16, Bc::Periodic};
    std::array<int, 3> m{1, 0, 0};
    Connection A0 = u1_single_mode(g, m, 1, 1.0);
    double lam = u1_mode_eigenvalue(g, m);
    double a0 = l2_norm(A0.a), b0 = l2_norm(curvature(A0));

    GfsConstants k = GfsConstants::make(1.0, GroupSpec::u1());
    DerivRecorder rec(2, k);
    FlowParams p;
    p.gfs = k;
    p.dt_override = 1e-3 * g.h * g.h;
    p.t_max = 0.002;
    p.record_every = 1;
    FlowResult r = run_flow(A0, p, &rec);
    REQUIRE(!r.blew_up);

    // adaptive Simpson for the exact weighted integrals
    auto simpson = [](auto f, double a, double b, int n) {
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += f(a + (b - a) * i / n) * (i % 2 ? 4.0 : 2.0);
        return s * (b - a) / (3.0 * n);
    };
    auto ts = r.series.times();
    double t = ts.back();
    for (int n = 1; n <= 1; ++n) {
        TheoremQuantities q = theorem_quantities(r.series, n, t);
        double em = 2.0 * n - 0.5;
        double want_bnd = std::pow(t, em) * std::pow(lam, 2.0 * n) * std::exp(-2 * lam * t) *
                          a0 * a0;
        auto integrand = [&](double s) {
            return std::pow(s, em) * std::pow(lam, 2.0 * n) * std::exp(-2 * lam * s) * b0 * b0;
        };
        double want_int = simpson(integrand, 0.0, t, 4096);
        CHECK(q.An.boundary == doctest::Approx(want_bnd).epsilon(1e-8));
        CHECK(q.An.integral == doctest::Approx(want_int).epsilon(1e-8));
        CHECK(q.An.boundary >= 0.0);
        CHECK(q.Cn.boundary >= 0.0);
        CHECK(q.Dn.total() >= 0.0);
        CHECK(q.En.total() >= 0.0);
        CHECK(q.Fn.total() >= 0.0);
    }
}

TEST_CASE("lower-order bounds hold on random stacks") {
    CoeffTables tbl = build_coeff_tables(5);
    std::uint64_t seed = 100;
    for (int trial = 0; trial < 10; ++trial) {
        GridSpec g{{5, 5, 5}, 0.2, trial % 2 ? Bc::Periodic : Bc::Neumann};
        FormField a(1, g, GroupSpec::su2());
        a.fill_random(seed++, 0.7);
        DerivStack st = compute_derivative_stack(Connection(a), 4, tbl);
        for (int n = 1; n <= 4; ++n)
            for (auto& chk : lower_order_bound_check(st, n, tbl)) {
                CHECK_MESSAGE(chk.ok, chk.name, " n=", n, " lhs=", chk.lhs, " rhs=", chk.rhs);
            }
    }
    // abelian: 0 <= 0 throughout
    GridSpec g{{5, 5, 5}, 0.2, Bc::Periodic};
    FormField a(1, g, GroupSpec::u1());
    a.fill_random(seed, 0.7);
    DerivStack st = compute_derivative_stack(Connection(a), 4, tbl);
    for (int n = 1; n <= 4; ++n)
        for (auto& chk : lower_order_bound_check(st, n, tbl)) {
            CHECK(chk.lhs == 0.0);
            CHECK(chk.ok);
        }
}

TEST_CASE("stack depth errors") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    CoeffTables tbl = build_coeff_tables(3);
    Connection A = fourier_smooth_connection(g, GroupSpec::su2(), 29, 0.4);
    DerivStack st = compute_derivative_stack(A, 2, tbl);
    CHECK_THROWS_AS(eval_lower_order(LowerOrderKind::S, 3, st, tbl), std::invalid_argument);
    CHECK_THROWS_AS(identity_residuals(st, 3, tbl), std::invalid_argument);
    CHECK_THROWS_AS((void)st.A_deriv(3), std::invalid_argument);
}

}  // TEST_SUITE
