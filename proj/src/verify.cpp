#include "ymflow/verify.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "ymflow/derivs.hpp"
#include "ymflow/fit.hpp"
#include "ymflow/gauge.hpp"
#include "ymflow/initial.hpp"
#include "ymflow/io.hpp"

namespace ymflow {

namespace {

void add(SuiteResult& r, const std::string& name, bool pass, double value, double threshold,
         const std::string& detail = "") {
    r.lines.push_back({name, pass, value, threshold, detail});
}

// value <= threshold
void add_le(SuiteResult& r, const std::string& name, double value, double threshold,
            const std::string& detail = "") {
    add(r, name, value <= threshold, value, threshold, detail);
}

// value >= threshold
void add_ge(SuiteResult& r, const std::string& name, double value, double threshold,
            const std::string& detail = "") {
    add(r, name, value >= threshold, value, threshold, detail);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

// --------------------------------------------------------------- adjointness

SuiteResult verify_adjointness() {
    SuiteResult res{"adjointness", {}};
    const int n = 8;
    const double h = 1.0 / n;
    int field_count = 100;

    for (Bc bc : {Bc::Periodic, Bc::Dirichlet, Bc::Neumann}) {
        for (auto group : {GroupSpec::u1(), GroupSpec::su2()}) {
            GridSpec grid{{n, n, n}, h, bc};
            std::string tag = bc_name(bc) + "/" + (group.label == Group::U1 ? "u1" : "su2");
            double worst_adj = 0.0, worst_dd = 0.0, worst_cov = 0.0;
            std::uint64_t seed = 42;
            Connection A = fourier_smooth_connection(grid, group, 7, 0.4);
            for (int trial = 0; trial < field_count; ++trial) {
                for (int p = 0; p <= 2; ++p) {
                    FormField alpha(p, grid, group), beta(p + 1, grid, group);
                    alpha.fill_random(seed++, 1.0);
                    beta.fill_random(seed++, 1.0);
                    double lhs = inner(exterior_derivative(alpha), beta);
                    double rhs = inner(alpha, codifferential(beta));
                    double scale = l2_norm(alpha) * l2_norm(beta);
                    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::max(scale, 1e-300));

                    double clhs = inner(covariant_d(A, alpha), beta);
                    double crhs = inner(alpha, covariant_codifferential(A, beta));
                    worst_cov = std::max(worst_cov, std::abs(clhs - crhs) / std::max(scale, 1e-300));

                    if (p <= 1) {
                        FormField dd = exterior_derivative(exterior_derivative(alpha));
                        double lim = alpha.max_cell_norm() / (h * h);
                        worst_dd = std::max(worst_dd, dd.max_cell_norm() / std::max(lim, 1e-300));
                    }
                }
            }
            add_le(res, "adjointness " + tag, worst_adj, 1e-12, "max |<da,b>-<a,d*b>| / |a||b|");
            add_le(res, "covariant adjointness " + tag, worst_cov, 1e-12);
            add_le(res, "d(d w) " + tag, worst_dd, 1e-13, "max |dd w|_inf * h^2 / |w|_inf");
        }
    }
    return res;
}

// -------------------------------------------------------------------- energy

namespace {

double fourier_oracle_worst(const FlowSeries& s, double lam, double b0) {
    double worst = 0.0;
    auto ts = s.times();
    auto b = s.column("B_L2");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double want = b0 * std::exp(-lam * ts[i]);
        worst = std::max(worst, std::abs(b[i] - want) / want);
    }
    return worst;
}

double fa0_max_rel(const Connection& A0, double dt, double t_max, const GfsConstants& k) {
    FlowParams p;
    p.gfs = k;
    p.dt_override = dt;
    p.t_max = t_max;
    p.record_every = 1;
    FlowResult r = run_flow(A0, p);
    if (r.blew_up) return std::nan("");
    return energy_identity_residual(r.series).max_fa0_rel;
}

}  // namespace

SuiteResult verify_energy_oracle() {
    SuiteResult res{"energy.oracle", {}};

    // Abelian single-mode decay law
    {
        const int n = 16;
        GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
        std::array<int, 3> m{1, 0, 0};
        Connection A0 = u1_single_mode(grid, m, 1, 1.0);
        double lam = u1_mode_eigenvalue(grid, m);
        FlowParams p;
        p.gfs = GfsConstants::make(1.0, GroupSpec::u1());
        p.dt_override = 1e-3 * grid.h * grid.h;
        p.t_max = 0.01;
        p.record_every = 8;
        FlowResult r = run_flow(A0, p);
        double b0 = l2_norm(curvature(A0));
        double worst = r.blew_up ? std::nan("") : fourier_oracle_worst(r.series, lam, b0);
        add_le(res, "u1 single-mode decay law", worst, 1e-8,
               "max rel deviation from exp(-lambda_k t), lambda_k=" + std::to_string(lam));
    }
    return res;
}

SuiteResult verify_energy_identity() {
    SuiteResult res{"energy.identity", {}};
    {
        const int n = 16;
        GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
        GroupSpec su2 = GroupSpec::su2();
        GfsConstants k = GfsConstants::make(1.0, su2);
        Connection A0 = fourier_smooth_connection(grid, su2, 11, 0.3);
        double dt = 0.015 * grid.h * grid.h;
        double t_max = 0.03;

        FlowParams p;
        p.gfs = k;
        p.dt_override = dt;
        p.t_max = t_max;
        p.record_every = 1;
        FlowResult r = run_flow(A0, p);
        bool ok = !r.blew_up;
        EnergyReport er = energy_identity_residual(r.series);
        add_le(res, "su2 FA0 defect", ok ? er.max_fa0_rel : std::nan(""), 1e-4,
               "max |t^1/2 |B|^2 + 2 int s^1/2 |A'|^2 - rho| / rho");

        double d1 = er.max_fa0_rel;
        double d2 = fa0_max_rel(A0, dt / 2.0, t_max, k);
        double order = std::log2(d1 / d2);
        add_ge(res, "su2 FA0 defect order under dt halving", order, 1.8,
               "log2(defect(dt)/defect(dt/2)), second-order expected");

        auto b = r.series.column("B_L2");
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < b.size(); ++i)
            worst = std::max(worst, (b[i + 1] - b[i]) / std::max(b[i], 1e-300));
        add_le(res, "su2 |B|_2 nonincreasing", worst, 1e-10, "max relative row-to-row increase");
    }
    return res;
}

// ----------------------------------------------------------------- recursion

namespace {

// Integrate to t_center and collect the states needed for central time
// differences at the given multiples of dt.
struct FdProbe {
    std::vector<double> deltas;
    std::vector<Connection> minus, plus;
    Connection center;
};

FdProbe fd_probe(const Connection& A0, double dt, long center_steps,
                 const std::vector<long>& delta_steps) {
    FdProbe pr;
    FlowState st;
    st.A = A0;
    long max_delta = 0;
    for (long d : delta_steps) max_delta = std::max(max_delta, d);
    pr.minus.resize(delta_steps.size(), A0);
    pr.plus.resize(delta_steps.size(), A0);
    pr.center = A0;
    for (long s = 1; s <= center_steps + max_delta; ++s) {
        step(st, dt);
        for (std::size_t i = 0; i < delta_steps.size(); ++i) {
            if (s == center_steps - delta_steps[i]) pr.minus[i] = st.A;
            if (s == center_steps + delta_steps[i]) pr.plus[i] = st.A;
        }
        if (s == center_steps) pr.center = st.A;
    }
    for (long d : delta_steps) pr.deltas.push_back(d * dt);
    return pr;
}

}  // namespace

SuiteResult verify_recursion_tables() {
    SuiteResult res{"recursion.tables", {}};
    {
        CoeffTables t = build_coeff_tables(8);
        LeibnizTables o = leibniz_oracle(8);
        std::string why;
        bool ok = tables_match_oracle(t, o, &why);
        add(res, "coefficient tables == Leibniz oracle (n <= 8)", ok, ok ? 0 : 1, 0, why);
        add(res, "cbar_21 == 1", t.get(t.cbar, 2, 1) == 1,
            static_cast<double>(t.get(t.cbar, 2, 1)), 1);
        long long c3 = t.get(t.c, 3, 1) + t.get(t.c, 3, 2);
        add(res, "c_31 + c_32 == 3", c3 == 3, static_cast<double>(c3), 3);
    }
    return res;
}

SuiteResult verify_recursion_fd() {
    SuiteResult res{"recursion.fd", {}};
    {
        const int n = 8;
        GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
        GroupSpec su2 = GroupSpec::su2();
        Connection A0 = fourier_smooth_connection(grid, su2, 23, 0.25);
        double dt = 1e-3 * grid.h * grid.h;
        long center = 192;
        std::vector<long> dsteps{48, 24, 12};
        FdProbe pr = fd_probe(A0, dt, center, dsteps);
        CoeffTables tbl = build_coeff_tables(4);

        for (int k = 2; k <= 3; ++k) {
            DerivStack stc = compute_derivative_stack(pr.center, k, tbl);
            std::vector<double> mism;
            for (std::size_t i = 0; i < pr.deltas.size(); ++i) {
                DerivStack sm = compute_derivative_stack(pr.minus[i], k - 1, tbl);
                DerivStack sp = compute_derivative_stack(pr.plus[i], k - 1, tbl);
                FormField fd = sp.A_deriv(k - 1);
                fd -= sm.A_deriv(k - 1);
                fd *= 1.0 / (2.0 * pr.deltas[i]);
                FormField diff = fd;
                diff -= stc.A_deriv(k);
                mism.push_back(l2_norm(diff) / std::max(l2_norm(stc.A_deriv(k)), 1e-300));
            }
            for (std::size_t i = 0; i + 1 < mism.size(); ++i) {
                double order = std::log2(mism[i] / mism[i + 1]);
                bool ok = std::abs(order - 2.0) <= 0.3;
                add(res, "A^(" + std::to_string(k) + ") vs central FD, order (pair " +
                             std::to_string(i) + ")",
                    ok, order, 2.0, "target 2.0 +- 0.3");
            }
        }
    }
    return res;
}

SuiteResult verify_recursion_refine() {
    SuiteResult res{"recursion.refine", {}};
    {
        GroupSpec su2 = GroupSpec::su2();
        CoeffTables tbl = build_coeff_tables(4);
        std::vector<int> ns{8, 16, 32};
        std::vector<std::vector<double>> rc(4), rd(4);  // per order n=1..3
        for (int gi = 0; gi < 3; ++gi) {
            GridSpec grid{{ns[gi], ns[gi], ns[gi]}, 1.0 / ns[gi], Bc::Periodic};
            Connection A = fourier_smooth_connection(grid, su2, 31, 0.3);
            DerivStack st = compute_derivative_stack(A, 3, tbl);
            for (int k = 1; k <= 3; ++k) {
                IdentityResiduals ir = identity_residuals(st, k, tbl);
                rc[k].push_back(ir.codiff_rel);
                rd[k].push_back(ir.d_rel);
            }
        }
        for (int k = 1; k <= 3; ++k) {
            std::vector<double> lh{std::log(1.0 / 8), std::log(1.0 / 16), std::log(1.0 / 32)};
            std::vector<double> lc, ld;
            for (double v : rc[k]) lc.push_back(std::log(v));
            for (double v : rd[k]) ld.push_back(std::log(v));
            add_ge(res, "codifferential identity residual order, n=" + std::to_string(k),
                   lsq_slope(lh, lc), 1.0, "relative residual slope in h");
            add_ge(res, "derivative identity residual order, n=" + std::to_string(k),
                   lsq_slope(lh, ld), 1.0);
        }

        // abelian case is exact
        GridSpec grid{{16, 16, 16}, 1.0 / 16, Bc::Periodic};
        Connection A = fourier_smooth_connection(grid, GroupSpec::u1(), 31, 0.5);
        DerivStack st = compute_derivative_stack(A, 3, tbl);
        double worst = 0.0;
        for (int k = 1; k <= 3; ++k) {
            IdentityResiduals ir = identity_residuals(st, k, tbl);
            worst = std::max({worst, ir.codiff_rel, ir.d_rel});
        }
        add_le(res, "u1 identity residuals", worst, 1e-12);
    }
    return res;
}

// --------------------------------------------------------------------- gauge

SuiteResult verify_gauge() {
    SuiteResult res{"gauge", {}};
    GroupSpec su2 = GroupSpec::su2();
    GfsConstants k = GfsConstants::make(1.0, su2);

    std::vector<int> ns{8, 16, 32};
    std::vector<double> worst_dev;
    for (int n : ns) {
        GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
        Connection A = fourier_smooth_connection(grid, su2, 51, 0.3);
        GaugeField g = gauge_smooth(grid, su2, 99, 0.15, 1);
        auto rows = gauge_invariance_report(A, g, 2, k, 16);
        double worst = 0.0;
        for (auto& r : rows) worst = std::max(worst, r.rel);
        worst_dev.push_back(worst);
    }
    std::vector<double> lh, lv;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        lh.push_back(std::log(1.0 / ns[i]));
        lv.push_back(std::log(worst_dev[i]));
    }
    double slope = lsq_slope(lh, lv);
    add(res, "su2 observable deviation refinement order", std::abs(slope - 2.0) <= 0.4, slope,
        2.0, "target 2.0 +- 0.4; deviations " + std::to_string(worst_dev[0]) + " -> " +
                 std::to_string(worst_dev[2]));

    {
        GridSpec grid{{16, 16, 16}, 1.0 / 16, Bc::Periodic};
        GroupSpec u1 = GroupSpec::u1();
        GfsConstants ku = GfsConstants::make(1.0, u1);
        Connection A = fourier_smooth_connection(grid, u1, 51, 0.5);
        double worst = 0.0;
        GaugeField gs = gauge_smooth(grid, u1, 99, 0.25);
        for (auto& r : gauge_invariance_report(A, gs, 2, ku, 16)) worst = std::max(worst, r.rel);
        GaugeField gr = rough_gauge_generator(grid, u1, 3.0, 0.5, 123, 0);
        for (auto& r : gauge_invariance_report(A, gr, 2, ku, 16)) worst = std::max(worst, r.rel);
        add_le(res, "u1 observable deviations", worst, 1e-12);
    }
    return res;
}

// ------------------------------------------------------------------ gronwall

SuiteResult verify_gronwall() {
    SuiteResult res{"gronwall", {}};
    const int n = 16;
    GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    GfsConstants k = GfsConstants::make(1.0, su2);

    GaugeField g = rough_gauge_generator(grid, su2, 3.1, 0.25, 2024, 0);
    FormField a = maurer_cartan(g);
    a += rough_divfree_perturbation(grid, su2, 3.1, 0.3, 2025);
    Connection A0(std::move(a));

    DerivRecorder rec(3, k);
    FlowParams p;
    p.gfs = k;
    p.t_max = 0.2;
    p.record_every = 8;
    FlowResult r = run_flow(A0, p, &rec);
    add(res, "rough run completed", !r.blew_up, r.t_end, p.t_max, r.error);
    if (r.blew_up) return res;

    CoeffTables tbl = build_coeff_tables(4);
    double x1max = 0.0, y0max = 0.0;
    for (double v : r.series.column("X1")) x1max = std::max(x1max, std::abs(v));
    for (double v : r.series.column("Y0")) y0max = std::max(y0max, std::abs(v));
    add_le(res, "X1 == 0 exactly", x1max, 0.0);
    add_le(res, "Y0 == 0 exactly", y0max, 0.0);

    for (int nn = 0; nn <= 2; ++nn) {
        double c_n = gronwall_cn(nn, k, su2, tbl);
        GronwallReport gr = gronwall_check(r.series, nn, k, c_n);
        if (nn >= 1)
            add_ge(res, "A-family margin, n=" + std::to_string(nn), gr.min_margin_a, -1e-6,
                   "min over recorded t of (rhs-lhs)/rhs");
        add_ge(res, "B-family margin, n=" + std::to_string(nn), gr.min_margin_b, -1e-6);
    }
    return res;
}

// -------------------------------------------------------------------- bounds

SuiteResult verify_bounds() {
    SuiteResult res{"bounds", {}};
    CoeffTables tbl = build_coeff_tables(5);
    int stacks = 200;
    int failures = 0;
    double worst_ratio = 0.0;
    std::string worst_name;

    for (int s = 0; s < stacks; ++s) {
        Bc bc = (s % 4 == 3) ? Bc::Dirichlet : ((s % 4 == 2) ? Bc::Neumann : Bc::Periodic);
        GroupSpec grp = (s % 5 == 4) ? GroupSpec::u1() : GroupSpec::su2();
        GridSpec grid{{6, 6, 6}, 1.0 / 6, bc};
        FormField a(1, grid, grp);
        a.fill_random(1000 + s, 0.8);
        Connection A(std::move(a));
        DerivStack st = compute_derivative_stack(A, 4, tbl);
        for (int nb = 1; nb <= 4; ++nb) {
            for (auto& chk : lower_order_bound_check(st, nb, tbl)) {
                double ratio = chk.rhs > 0 ? chk.lhs / chk.rhs : (chk.lhs > 0 ? 2.0 : 0.0);
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst_name = chk.name + " n=" + std::to_string(nb) + " stack " +
                                 std::to_string(s);
                }
                if (!chk.ok) ++failures;
            }
        }
    }
    add(res, "lower-order bounds on 200 random stacks, n <= 4", failures == 0,
        static_cast<double>(failures), 0, "worst lhs/rhs " + std::to_string(worst_ratio) +
                                              " at " + worst_name);
    return res;
}

// ------------------------------------------------------------------- scaling

namespace {

struct ScalingRun {
    FlowSeries series;
    bool ok = false;
};

ScalingRun scaling_run(double roughness_p, std::uint64_t seed) {
    const int n = 32;
    GridSpec grid{{n, n, n}, 1.0 / n, Bc::Periodic};
    GroupSpec su2 = GroupSpec::su2();
    GfsConstants k = GfsConstants::make(1.0, su2);

    // small pure-gauge part (its lattice curvature artifacts are quadratic
    // in the amplitude) plus the divergence-free part carrying B(0+) != 0
    GaugeField g = rough_gauge_generator(grid, su2, roughness_p, 0.02, seed, 0);
    FormField a = maurer_cartan(g);
    a += rough_divfree_perturbation(grid, su2, roughness_p, 0.25, seed + 777);
    Connection A0(std::move(a));

    // the window [5 dt, 50 dt] must sit between the lattice UV transient
    // (t ~ h^2/8, below which t^{5/2}|B'|^2 still rises) and the infrared
    // depletion of the box spectrum (which steepens |B|^2 past its rate)
    double dt = 0.025 * grid.h * grid.h;
    DerivRecorder rec(1, k);
    FlowParams p;
    p.gfs = k;
    p.dt_override = dt;
    p.t_max = 64.0 * dt;
    p.record_every = 1;
    FlowResult r = run_flow(A0, p, &rec);
    return {std::move(r.series), !r.blew_up};
}

}  // namespace

SuiteResult verify_scaling() {
    SuiteResult res{"scaling", {}};
    ScalingRun run = scaling_run(3.1, 31337);
    add(res, "rough run (p=3.1) completed", run.ok, run.ok ? 1 : 0, 1);
    if (!run.ok) return res;

    auto [t_lo, t_hi] = default_fit_window(run.series, 4, 16);

    struct Q {
        const char* col;
        double alpha;       // weight exponent for the bounded flag
        double slope_min;   // fitted slope of log(value^2) must be >= this
    };
    // columns hold norms; exponents refer to the squared quantities
    std::vector<Q> quants{{"B_L2", 0.5, -0.55}, {"Aprime_L2", 1.5, -1.55}, {"B1_L2", 2.5, -2.55}};

    FlowSeries sq = run.series;  // squared copies for the fits
    for (auto& q : quants) {
        int c = sq.col(q.col);
        for (auto& row : sq.rows) row[c] = row[c] * row[c];
    }
    for (auto& q : quants) {
        FitResult f = fit_scaling_exponent(sq, q.col, t_lo, t_hi, q.alpha, 3.0);
        add_ge(res, std::string("slope of log |") + q.col + "|^2 vs log t", f.slope, q.slope_min,
               "window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) + "], " +
                   std::to_string(f.n_samples) + " samples");
        add(res, std::string("bounded flag for t^") + std::to_string(q.alpha) + " |" + q.col +
                     "|^2",
            f.bounded, f.bounded ? 1 : 0, 1, "variation < 3x across the window");
    }

    // control: data outside the critical class may violate boundedness
    ScalingRun ctrl = scaling_run(2.0, 424242);
    add(res, "control run (p=2.0) completed", ctrl.ok, ctrl.ok ? 1 : 0, 1);
    if (ctrl.ok) {
        auto [c_lo, c_hi] = default_fit_window(ctrl.series, 4, 16);
        FlowSeries sq2 = ctrl.series;
        for (auto& q : quants) {
            int c = sq2.col(q.col);
            for (auto& row : sq2.rows) row[c] = row[c] * row[c];
        }
        bool any_violation = false;
        for (auto& q : quants) {
            FitResult f = fit_scaling_exponent(sq2, q.col, c_lo, c_hi, q.alpha, 3.0);
            any_violation = any_violation || !f.bounded;
        }
        add(res, "control p=2.0 violates a bounded flag (expected-fail path)", any_violation,
            any_violation ? 1 : 0, 1);
    }
    return res;
}

namespace {

SuiteResult concat(const std::string& name, std::initializer_list<SuiteResult> parts) {
    SuiteResult res{name, {}};
    for (auto& p : parts) res.lines.insert(res.lines.end(), p.lines.begin(), p.lines.end());
    return res;
}

}  // namespace

SuiteResult verify_energy() {
    return concat("energy", {verify_energy_oracle(), verify_energy_identity()});
}

SuiteResult verify_recursion() {
    return concat("recursion",
                  {verify_recursion_tables(), verify_recursion_fd(), verify_recursion_refine()});
}

// ----------------------------------------------------------------- plumbing

std::vector<std::string> suite_names() {
    return {"adjointness", "energy", "recursion", "gauge", "gronwall", "bounds", "scaling"};
}

SuiteResult run_suite(const std::string& name) {
    if (name == "adjointness") return verify_adjointness();
    if (name == "energy") return verify_energy();
    if (name == "energy.oracle") return verify_energy_oracle();
    if (name == "energy.identity") return verify_energy_identity();
    if (name == "recursion") return verify_recursion();
    if (name == "recursion.tables") return verify_recursion_tables();
    if (name == "recursion.fd") return verify_recursion_fd();
    if (name == "recursion.refine") return verify_recursion_refine();
    if (name == "gauge") return verify_gauge();
    if (name == "gronwall") return verify_gronwall();
    if (name == "bounds") return verify_bounds();
    if (name == "scaling") return verify_scaling();
    throw std::invalid_argument("unknown verify suite: " + name);
}

void print_suite(std::ostream& os, const SuiteResult& r) {
    for (auto& l : r.lines) {
        os << (l.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << l.name << "  value="
           << l.value << " threshold=" << l.threshold;
        if (!l.detail.empty()) os << "  (" << l.detail << ")";
        os << "\n";
    }
    os << (r.pass() ? "[PASS] " : "[FAIL] ") << "suite " << r.suite << "\n";
}

std::string suite_csv(const SuiteResult& r) {
    std::ostringstream os;
    os << "suite,check,pass,value,threshold,detail\n";
    for (auto& l : r.lines) {
        std::string d = l.detail;
        for (auto& ch : d)
            if (ch == ',') ch = ';';
        os << r.suite << "," << l.name << "," << (l.pass ? 1 : 0) << "," << l.value << ","
           << l.threshold << "," << d << "\n";
    }
    return os.str();
}

}  // namespace ymflow
