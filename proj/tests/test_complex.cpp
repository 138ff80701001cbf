#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ymflow/dec.hpp"

using namespace ymflow;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Dense matrix of a linear field operator, built by applying it to basis fields.
template <typename Op>
Eigen::MatrixXd dense_operator(int deg_in, const GridSpec& g, const GroupSpec& grp, Op&& op) {
    FormField probe(deg_in, g, grp);
    const std::size_t n_in = probe.size();
    FormField out0 = op(probe);
    const std::size_t n_out = out0.size();
    Eigen::MatrixXd M(n_out, n_in);
    for (std::size_t j = 0; j < n_in; ++j) {
        FormField e(deg_in, g, grp);
        e.raw()[j] = 1.0;
        FormField r = op(e);
        for (std::size_t i = 0; i < n_out; ++i) M(i, j) = r.raw()[i];
    }
    return M;
}

}  // namespace

TEST_SUITE("complex") {

TEST_CASE("d of constant 0-form vanishes") {
    for (Bc bc : {Bc::Periodic, Bc::Neumann}) {
        GridSpec g{{4, 4, 4}, 0.25, bc};
        FormField w(0, g, GroupSpec::su2());
        for (std::size_t i = 0; i < w.size(); ++i) w.raw()[i] = 1.75;
        CHECK(exterior_derivative(w).max_cell_norm() == 0.0);
    }
}

TEST_CASE("d o d = 0 for every bc") {
    std::uint64_t seed = 10;
    for (Bc bc : {Bc::Periodic, Bc::Dirichlet, Bc::Neumann}) {
        GridSpec g{{5, 4, 3}, 0.2, bc};
        for (int p = 0; p <= 1; ++p) {
            FormField w(p, g, GroupSpec::su2());
            w.fill_random(seed++, 1.0);
            FormField dd = exterior_derivative(exterior_derivative(w));
            CHECK(dd.max_cell_norm() <= 1e-13 * w.max_cell_norm() / (g.h * g.h));
        }
    }
}

TEST_CASE("single edge coboundary pattern on the periodic 2-cube") {
    GridSpec g{{2, 2, 2}, 0.5, Bc::Periodic};
    FormField w(1, g, GroupSpec::u1());
    w.at(0, 0, 1, 1, 1) = 1.0;  // x-edge at (1,1,1)
    FormField d = exterior_derivative(w);
    // four incident faces, +-1/h, from the hand enumeration of the incidences:
    // faces spanning (x,y) at y in {1, 0} and (x,z) at z in {1, 0}
    double invh = 1.0 / g.h;
    CHECK(d.at(0, 0, 1, 1, 1) == doctest::Approx(invh));   // (x,y) face anchored (1,1,1)
    CHECK(d.at(0, 0, 1, 0, 1) == doctest::Approx(-invh));  // (x,y) face anchored (1,0,1)
    CHECK(d.at(1, 0, 1, 1, 1) == doctest::Approx(invh));   // (x,z) face anchored (1,1,1)
    CHECK(d.at(1, 0, 1, 1, 0) == doctest::Approx(-invh));  // (x,z) face anchored (1,1,0)
    int nonzero = 0;
    for (std::size_t i = 0; i < d.size(); ++i) nonzero += d.raw()[i] != 0.0;
    CHECK(nonzero == 4);
}

TEST_CASE("codifferential is the exact adjoint for every degree, bc, group") {
    std::uint64_t seed = 20;
    for (Bc bc : {Bc::Periodic, Bc::Dirichlet, Bc::Neumann}) {
        for (auto grp : {GroupSpec::u1(), GroupSpec::su2()}) {
            GridSpec g{{4, 5, 3}, 0.3, bc};
            for (int p = 0; p <= 2; ++p) {
                for (int trial = 0; trial < 20; ++trial) {
                    FormField a(p, g, grp), b(p + 1, g, grp);
                    a.fill_random(seed++, 1.0);
                    b.fill_random(seed++, 1.0);
                    double lhs = inner(exterior_derivative(a), b);
                    double rhs = inner(a, codifferential(b));
                    CHECK(std::abs(lhs - rhs) <= 1e-12 * l2_norm(a) * l2_norm(b) + 1e-300);
                }
            }
        }
    }
}

TEST_CASE("codifferential of a constant 1-form vanishes (periodic)") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    FormField w(1, g, GroupSpec::u1());
    for (std::size_t i = 0; i < w.size(); ++i) w.raw()[i] = 0.3;
    CHECK(codifferential(w).max_cell_norm() <= 1e-15 / g.h);
}

TEST_CASE("Dirichlet operators preserve the zero tangential trace") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Dirichlet};
    std::uint64_t seed = 30;
    for (int p = 0; p <= 2; ++p) {
        FormField w(p, g, GroupSpec::su2());
        w.fill_random(seed++, 1.0);
        CHECK(w.tangential_is_zero());
        CHECK(exterior_derivative(w).tangential_is_zero());
        if (p >= 1) CHECK(codifferential(w).tangential_is_zero());
    }
}

TEST_CASE("dense spectrum of d*d on 1-forms matches the symbol (4^3, u1)") {
    const int n = 4;
    GridSpec g{{n, n, n}, 1.0 / n, Bc::Periodic};
    GroupSpec u1 = GroupSpec::u1();
    Eigen::MatrixXd M = dense_operator(1, g, u1, [](const FormField& w) {
        return codifferential(exterior_derivative(w));
    });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());

    std::vector<double> want;
    for (int m0 = 0; m0 < n; ++m0)
        for (int m1 = 0; m1 < n; ++m1)
            for (int m2 = 0; m2 < n; ++m2) {
                double lam = laplace_symbol(g, m0, m1, m2);
                // two divergence-free polarizations plus one gradient zero mode
                want.push_back(lam);
                want.push_back(lam == 0.0 ? 0.0 : lam);
                want.push_back(0.0);
            }
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10).scale(1.0 / (g.h * g.h)));
}

TEST_CASE("lp norms") {
    GridSpec g{{4, 4, 4}, 0.25, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    FormField zero(1, g, su2);
    CHECK(lp_norm(zero, 2.0) == 0.0);
    CHECK(lp_norm(zero, kInf) == 0.0);

    // constant 1-form: |w|_p = |v| (3 L^3)^{1/p}
    FormField w(1, g, su2);
    for (int o = 0; o < 3; ++o)
        for (std::size_t i = 0; i < w.cells(o); ++i) {
            w.plane(o, 0)[i] = 0.6;
            w.plane(o, 2)[i] = 0.8;
        }
    double vol = g.volume();
    for (double p : {2.0, 3.0, 6.0, 1.2}) {
        double want = 1.0 * std::pow(3.0 * vol, 1.0 / p);
        CHECK(lp_norm(w, p) == doctest::Approx(want).epsilon(1e-13));
    }
    CHECK(lp_norm(w, kInf) == doctest::Approx(1.0));

    CHECK_THROWS_AS(lp_norm(w, 4.0), std::invalid_argument);

    std::uint64_t seed = 40;
    for (int trial = 0; trial < 100; ++trial) {
        FormField r(1, g, su2);
        r.fill_random(seed++, 1.3);
        double n3 = lp_norm(r, 3.0);
        CHECK(n3 * n3 <= lp_norm(r, 2.0) * lp_norm(r, 6.0) * (1 + 1e-12));
    }
}

TEST_CASE("spectral Sobolev norm") {
    const int n = 4;
    GridSpec g{{n, n, n}, 1.0 / n, Bc::Periodic};
    GroupSpec u1 = GroupSpec::u1();

    std::uint64_t seed = 50;
    FormField w(1, g, u1);
    w.fill_random(seed, 1.0);
    CHECK(sobolev_norm(w, 0.0) == doctest::Approx(lp_norm(w, 2.0)).epsilon(1e-13));

    FormField c(1, g, u1);
    for (std::size_t i = 0; i < c.size(); ++i) c.raw()[i] = 0.7;
    for (double a : {0.25, 0.5, 1.0})
        CHECK(sobolev_norm(c, a) == doctest::Approx(lp_norm(c, 2.0)).epsilon(1e-13));

    // dense route: (1 + d*d)^{a/2} on 0-forms via eigendecomposition
    Eigen::MatrixXd L = dense_operator(0, g, u1, [](const FormField& f) {
        return codifferential(exterior_derivative(f));
    });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (L + L.transpose()));
    for (double a : {0.5, 1.0}) {
        Eigen::VectorXd lam = es.eigenvalues();
        Eigen::MatrixXd pow = es.eigenvectors();
        Eigen::VectorXd d = (lam.array() + 1.0).pow(a / 2.0);
        Eigen::MatrixXd Pa = pow * d.asDiagonal() * pow.transpose();

        FormField s(1, g, u1);
        s.fill_random(seed + 1, 1.0);
        double total = 0.0;
        double h3 = g.h * g.h * g.h;
        for (int o = 0; o < 3; ++o) {
            Eigen::VectorXd f(s.cells(o));
            for (std::size_t i = 0; i < s.cells(o); ++i) f(i) = s.plane(o, 0)[i];
            total += h3 * (Pa * f).squaredNorm();
        }
        CHECK(sobolev_norm(s, a) == doctest::Approx(std::sqrt(total)).epsilon(1e-10));
    }

    // monotone in a
    FormField r(1, g, u1);
    r.fill_random(seed + 2, 1.0);
    double prev = sobolev_norm(r, 0.0);
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
        double cur = sobolev_norm(r, a);
        CHECK(cur >= prev * (1 - 1e-13));
        prev = cur;
    }

    GridSpec gn{{4, 4, 4}, 0.25, Bc::Neumann};
    FormField wn(1, gn, u1);
    CHECK_THROWS_AS(sobolev_norm(wn, 0.5), std::invalid_argument);
}

TEST_CASE("degree errors") {
    GridSpec g{{3, 3, 3}, 0.3, Bc::Periodic};
    FormField top(3, g, GroupSpec::u1());
    CHECK_THROWS_AS(exterior_derivative(top), std::invalid_argument);
    FormField bot(0, g, GroupSpec::u1());
    CHECK_THROWS_AS(codifferential(bot), std::invalid_argument);
}

}  // TEST_SUITE
