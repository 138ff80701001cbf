#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ymflow/derivs.hpp"
#include "ymflow/fit.hpp"
#include "ymflow/gauge.hpp"
#include "ymflow/initial.hpp"
#include "ymflow/io.hpp"
#include "ymflow/verify.hpp"

namespace fs = std::filesystem;
using namespace ymflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitVerify = 4;

struct CliFlags {
    std::string config_path;
    std::string group;
    std::vector<int> grid_n;
    double grid_h = -1.0;
    std::string bc;
    double t_max = -1.0;
    int n_max = -1;
    long seed = -1;
    std::string out;
    double kappa = -1.0;
    std::string init_kind;
    double amplitude = -1.0;
    double roughness_p = -1.0;
    double perturb_amplitude = -1.0;
    double cfl = -1.0;
    double dt = -1.0;
    long record_every = -1;
};

void add_common_flags(CLI::App* app, CliFlags& f) {
    app->add_option("--config", f.config_path, "JSON config file");
    app->add_option("--group", f.group, "u1 | su2");
    app->add_option("--grid-n", f.grid_n, "cells per axis (3 values)")->expected(3);
    app->add_option("--grid-h", f.grid_h, "cell edge length");
    app->add_option("--bc", f.bc, "periodic | dirichlet | neumann");
    app->add_option("--t-max", f.t_max, "flow horizon");
    app->add_option("--n-max", f.n_max, "derivative orders recorded");
    app->add_option("--seed", f.seed, "rng seed for initial data");
    app->add_option("--out", f.out, "output directory");
    app->add_option("--kappa", f.kappa, "Sobolev constant");
    app->add_option("--init", f.init_kind, "zero | fourier-smooth | rough-gauge | snapshot");
    app->add_option("--amplitude", f.amplitude, "initial-data amplitude");
    app->add_option("--roughness-p", f.roughness_p, "spectral decay exponent");
    app->add_option("--perturb-amplitude", f.perturb_amplitude, "divergence-free extra data");
    app->add_option("--cfl", f.cfl, "dt = cfl * h^2");
    app->add_option("--dt", f.dt, "explicit time step");
    app->add_option("--record-every", f.record_every, "record period in steps");
}

RunConfig resolve_config(const CliFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = parse_config_file(f.config_path);
    if (!f.group.empty()) c.group = f.group;
    if (f.grid_n.size() == 3) c.grid.n = {f.grid_n[0], f.grid_n[1], f.grid_n[2]};
    if (f.grid_h > 0) c.grid.h = f.grid_h;
    if (!f.bc.empty()) c.grid.bc = bc_from_name(f.bc);
    if (f.t_max > 0) c.t_max = f.t_max;
    if (f.n_max >= 0) c.n_max = f.n_max;
    if (f.seed >= 0) c.init.seed = static_cast<std::uint64_t>(f.seed);
    if (!f.out.empty()) c.out_dir = f.out;
    if (f.kappa > 0) c.kappa = f.kappa;
    if (!f.init_kind.empty()) c.init.kind = f.init_kind;
    if (f.amplitude >= 0) c.init.amplitude = f.amplitude;
    if (f.roughness_p > 0) c.init.roughness_p = f.roughness_p;
    if (f.perturb_amplitude >= 0) c.init.perturb_amplitude = f.perturb_amplitude;
    if (f.cfl > 0) c.cfl_safety = f.cfl;
    if (f.dt > 0) c.dt = f.dt;
    if (f.record_every >= 0) c.record_every = f.record_every;
    c.validate();
    return c;
}

FlowParams flow_params(const RunConfig& c) {
    FlowParams p;
    p.t_max = c.t_max;
    p.cfl_safety = c.cfl_safety;
    p.dt_override = c.dt;
    p.record_every = c.record_every;
    p.geo_ratio = c.geo_ratio;
    p.gfs = c.gfs();
    return p;
}

int cmd_run(const RunConfig& c) {
    fs::create_directories(c.out_dir);
    Connection A0 = build_initial_data(c);
    std::unique_ptr<DerivRecorder> rec;
    if (c.n_max >= 1) rec = std::make_unique<DerivRecorder>(c.n_max, c.gfs());
    FlowResult r = run_flow(A0, flow_params(c), rec.get());

    std::string hash = config_hash(c);
    write_series((fs::path(c.out_dir) / "series.csv").string(), r.series);
    write_snapshot((fs::path(c.out_dir) / "final.ymhf").string(), r.final_state.A,
                   r.final_state.t);
    write_text_file((fs::path(c.out_dir) / "config.json").string(), canonical_config_json(c));
    std::ostringstream rep;
    rep << "config_hash: " << hash << "\n"
        << "rows: " << r.series.rows.size() << "\n"
        << "t_end: " << r.t_end << "\n"
        << "status: " << (r.blew_up ? ("blowup: " + r.error) : "ok") << "\n";
    write_text_file((fs::path(c.out_dir) / "run.txt").string(), rep.str());
    std::cout << rep.str();
    return r.blew_up ? kExitBlowup : kExitOk;
}

int cmd_derivs(const RunConfig& c, const std::vector<double>& at_times) {
    Connection A0 = build_initial_data(c);
    CoeffTables tbl = build_coeff_tables(std::max(2, c.n_max + 1));
    int n_max = std::max(1, c.n_max);
    FlowState st;
    st.A = A0;
    double dt = c.dt ? *c.dt : c.cfl_safety * c.grid.h * c.grid.h;

    std::vector<double> targets = at_times;
    if (targets.empty()) targets = {c.t_max};
    std::sort(targets.begin(), targets.end());

    std::cout << "# config_hash: " << config_hash(c) << "\n";
    std::cout << "t";
    for (int k = 1; k <= n_max; ++k)
        std::cout << ",A" << k << "_L2,B" << k << "_L2,codiff_resid" << k << ",d_resid" << k;
    std::cout << "\n";
    std::cout.precision(17);
    for (double target : targets) {
        while (st.t < target - 1e-15 * std::max(1.0, target))
            step(st, std::min(dt, target - st.t));
        DerivStack stack = compute_derivative_stack(st.A, n_max, tbl);
        std::cout << st.t;
        for (int k = 1; k <= n_max; ++k) {
            IdentityResiduals ir = identity_residuals(stack, k, tbl);
            std::cout << "," << l2_norm(stack.A_deriv(k)) << "," << l2_norm(stack.B_deriv(k))
                      << "," << ir.codiff_rel << "," << ir.d_rel;
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& c, const std::string& suite) {
    fs::create_directories(c.out_dir);
    SuiteResult r = run_suite(suite);
    print_suite(std::cout, r);
    std::ostringstream txt;
    txt << "config_hash: " << config_hash(c) << "\n";
    print_suite(txt, r);
    write_text_file((fs::path(c.out_dir) / ("verify_" + suite + ".txt")).string(), txt.str());
    write_text_file((fs::path(c.out_dir) / ("verify_" + suite + ".csv")).string(),
                    suite_csv(r));
    return r.pass() ? kExitOk : kExitVerify;
}

int cmd_gauge_check(const RunConfig& c) {
    Connection A0 = build_initial_data(c);
    GroupSpec g = c.group_spec();
    GaugeField gf = gauge_smooth(c.grid, g, c.init.seed + 5, 0.5);
    auto rows = gauge_invariance_report(A0, gf, std::max(1, c.n_max), c.gfs(), 16);
    std::cout << "# config_hash: " << config_hash(c) << "\n";
    std::cout << "observable,value,transformed,rel_deviation\n";
    std::cout.precision(17);
    double worst = 0.0;
    for (auto& r : rows) {
        std::cout << r.name << "," << r.val_a << "," << r.val_ag << "," << r.rel << "\n";
        worst = std::max(worst, r.rel);
    }
    std::cout << "# max relative deviation: " << worst << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& series_path, const std::string& column, double t_lo, double t_hi,
            double alpha, bool square) {
    FlowSeries s = read_series(series_path);
    if (square) {
        int c = s.col(column);
        for (auto& row : s.rows) row[c] = row[c] * row[c];
    }
    if (t_lo < 0 || t_hi < 0) {
        auto [lo, hi] = default_fit_window(s);
        if (t_lo < 0) t_lo = lo;
        if (t_hi < 0) t_hi = hi;
    }
    FitResult f = fit_scaling_exponent(s, column, t_lo, t_hi, alpha);
    std::cout.precision(17);
    std::cout << "quantity: " << f.quantity << (square ? " (squared)" : "") << "\n"
              << "window: [" << f.t_lo << ", " << f.t_hi << "]  samples: " << f.n_samples << "\n"
              << "slope: " << f.slope << "\nintercept: " << f.intercept << "\nresidual_rms: "
              << f.residual_rms << "\nbounded(alpha=" << alpha << "): "
              << (f.bounded ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_oracle(const RunConfig& c, const std::vector<int>& mode, int pol) {
    std::array<int, 3> m{mode[0], mode[1], mode[2]};
    double lam = u1_mode_eigenvalue(c.grid, m);
    Connection A0 = u1_single_mode(c.grid, m, pol, c.init.amplitude);
    double b0 = l2_norm(curvature(A0));
    std::cout.precision(17);
    std::cout << "# config_hash: " << config_hash(c) << "\n";
    std::cout << "lambda_k: " << lam << "\nB_L2_at_0: " << b0 << "\n";
    std::cout << "t,B_L2_exact\n";
    int rows = 33;
    for (int i = 0; i < rows; ++i) {
        double t = c.t_max * i / (rows - 1);
        std::cout << t << "," << b0 * std::exp(-lam * t) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Yang-Mills heat-flow lattice simulator and verification harness"};
    app.require_subcommand(1);

    CliFlags f;
    std::vector<double> derivs_at;
    std::string suite;
    std::string fit_series, fit_column = "B_L2";
    double fit_tlo = -1, fit_thi = -1, fit_alpha = 0.0;
    bool fit_square = false;
    std::vector<int> oracle_mode{1, 0, 0};
    int oracle_pol = 1;

    auto* run = app.add_subcommand("run", "integrate the flow and write series + snapshot");
    add_common_flags(run, f);
    auto* derivs = app.add_subcommand("derivs", "derivative stack and identity residuals");
    add_common_flags(derivs, f);
    derivs->add_option("--at", derivs_at, "times to sample");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common_flags(verify, f);
    verify->add_option("suite", suite, "adjointness|energy|recursion|gauge|gronwall|bounds|scaling")
        ->required();
    auto* gcheck = app.add_subcommand("gauge-check", "gauge invariance report");
    add_common_flags(gcheck, f);
    auto* fit = app.add_subcommand("fit", "log-log scaling fit on a series column");
    fit->add_option("--series", fit_series, "series.csv path")->required();
    fit->add_option("--column", fit_column, "column name");
    fit->add_option("--t-lo", fit_tlo, "window start (default: earliest decade)");
    fit->add_option("--t-hi", fit_thi, "window end");
    fit->add_option("--alpha", fit_alpha, "weight exponent for the bounded flag");
    fit->add_flag("--square", fit_square, "fit the squared column");
    auto* oracle = app.add_subcommand("oracle", "abelian single-mode decay reference");
    add_common_flags(oracle, f);
    oracle->add_option("--mode", oracle_mode, "integer mode (3 values)")->expected(3);
    oracle->add_option("--pol", oracle_pol, "polarization axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(fit_series, fit_column, fit_tlo, fit_thi, fit_alpha,
                                          fit_square);
        RunConfig c = resolve_config(f);
        if (run->parsed()) return cmd_run(c);
        if (derivs->parsed()) return cmd_derivs(c, derivs_at);
        if (verify->parsed()) return cmd_verify(c, suite);
        if (gcheck->parsed()) return cmd_gauge_check(c);
        if (oracle->parsed()) return cmd_oracle(c, oracle_mode, oracle_pol);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FlowBlowup& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
