#include "ymflow/flow.hpp"

#include <algorithm>
#include <cmath>

#include "ymflow/kernels.hpp"

namespace ymflow {

int FlowSeries::col(const std::string& name) const {
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("series: missing column " + name);
}

std::vector<double> FlowSeries::column(const std::string& name) const {
    int c = col(name);
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][c];
    return v;
}

double FlowSeries::value(std::size_t row, const std::string& name) const {
    return rows.at(row)[col(name)];
}

FormField flow_rhs(const Connection& A) {
    FormField r = covariant_codifferential(A, curvature(A));
    r *= -1.0;
    return r;
}

namespace {

void check_state(const FormField& a, double t, long stepn, double threshold) {
    double m = a.max_cell_norm();
    if (!std::isfinite(m) || m > threshold) throw FlowBlowup(t, stepn, m);
}

}  // namespace

void step(FlowState& st, double dt, double blowup_threshold) {
    Connection& A = st.A;
    FormField k1 = flow_rhs(A);

    Connection A1(A.a);
    add_scaled(A1.a, k1, 0.5 * dt);
    A1.a.clamp_tangential();
    FormField k2 = flow_rhs(A1);

    Connection A2(A.a);
    add_scaled(A2.a, k2, 0.5 * dt);
    A2.a.clamp_tangential();
    FormField k3 = flow_rhs(A2);

    Connection A3(A.a);
    add_scaled(A3.a, k3, dt);
    A3.a.clamp_tangential();
    FormField k4 = flow_rhs(A3);

    kern::rk4_combine(A.a.raw(), k1.raw(), k2.raw(), k3.raw(), k4.raw(), dt / 6.0, A.a.size());
    A.a.clamp_tangential();
    st.t += dt;
    st.step_count += 1;
    st.dt = dt;
    check_state(A.a, st.t, st.step_count, blowup_threshold);
}

namespace {

std::vector<std::string> base_cols() {
    return {"step", "t", "dt", "B_L2", "Aprime_L2", "B_L6", "rho", "lambda", "psi"};
}

struct Accum {
    double rho = 0.0, psi_int = 0.0;  // psi_int = int |B|_2^4
    double last_t = 0.0, last_b2sq = 0.0, last_b4 = 0.0;
    bool first = true;

    void push(double t, double b2) {
        double b2sq = b2 * b2;
        double b4 = b2sq * b2sq;
        if (!first && t > last_t) {
            // exact weight, piecewise-linear |B|^2
            std::vector<double> ts{last_t, t}, fs{last_b2sq, b2sq};
            rho += 0.5 * weighted_integral(ts, fs, -0.5, t);
            psi_int += 0.5 * (b4 + last_b4) * (t - last_t);
        }
        last_t = t;
        last_b2sq = b2sq;
        last_b4 = b4;
        first = false;
    }
};

}  // namespace

FlowResult run_flow(const Connection& A0, const FlowParams& p, const RecordExtras* extras) {
    if (!(p.t_max > 0.0)) throw std::invalid_argument("run_flow: t_max must be positive");
    FlowResult res;
    FlowSeries& s = res.series;
    s.cols = base_cols();
    if (extras) {
        auto en = extras->names();
        s.cols.insert(s.cols.end(), en.begin(), en.end());
    }

    FlowState st;
    st.A = A0;
    st.A.a.clamp_tangential();
    double h = A0.grid().h;
    double dt = p.dt_override ? *p.dt_override : p.cfl_safety * h * h;

    Accum acc;
    auto record = [&](const FlowState& cur) {
        FormField rhs = flow_rhs(cur.A);
        FormField B = curvature(cur.A);
        double b2 = l2_norm(B);
        double b4 = b2 * b2;
        acc.push(cur.t, b2);
        std::vector<double> row;
        row.reserve(s.cols.size());
        row.push_back(static_cast<double>(cur.step_count));
        row.push_back(cur.t);
        row.push_back(cur.dt);
        row.push_back(b2);
        row.push_back(l2_norm(rhs));
        row.push_back(lp_norm(B, 6.0));
        row.push_back(acc.rho);
        row.push_back(p.gfs.lambda_m + p.gfs.gamma * b4 * b4);
        row.push_back(p.gfs.lambda_m * cur.t + p.gfs.gamma * acc.psi_int);
        if (extras) {
            auto ev = extras->values(cur.A);
            row.insert(row.end(), ev.begin(), ev.end());
        }
        for (double v : row)
            if (!std::isfinite(v)) throw FlowBlowup(cur.t, cur.step_count, v);
        s.rows.push_back(std::move(row));
    };

    try {
        record(st);  // t = 0 row
        double geo_anchor = -1.0, next_geo = -1.0;
        while (st.t < p.t_max - 1e-15 * p.t_max) {
            double dt_step = std::min(dt, p.t_max - st.t);
            step(st, dt_step, p.blowup_threshold);
            if (geo_anchor < 0.0) {
                geo_anchor = st.t;
                next_geo = geo_anchor * p.geo_ratio;
                record(st);
                continue;
            }
            bool rec = false;
            if (p.record_every > 0 && st.step_count % p.record_every == 0) rec = true;
            if (st.t >= next_geo) {
                rec = true;
                while (next_geo <= st.t) next_geo *= p.geo_ratio;
            }
            if (st.t >= p.t_max - 1e-15 * p.t_max) rec = true;
            if (rec) record(st);
        }
        res.t_end = st.t;
    } catch (const FlowBlowup& b) {
        res.blew_up = true;
        res.error = b.what();
        res.t_end = b.t;
    }
    res.final_state = std::move(st);
    return res;
}

// ---------------------------------------------------------------- quadrature

double weighted_integral(const std::vector<double>& ts, const std::vector<double>& fs,
                         double alpha, double t) {
    if (ts.size() != fs.size() || ts.empty())
        throw std::invalid_argument("weighted_integral: bad node arrays");
    if (t < ts.front() - 1e-300 || t > ts.back() * (1.0 + 1e-12) + 1e-300)
        throw std::invalid_argument("weighted_integral: t outside recorded range");
    auto mono = [alpha](double x, double k) {
        double e = alpha + k + 1.0;
        return std::pow(x, e) / e;
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        if (t <= t0) break;
        double tc = std::min(t1, t);
        if (!(t1 > t0)) continue;
        double m = (fs[i + 1] - fs[i]) / (t1 - t0);
        double a = fs[i] - m * t0;
        acc += a * (mono(tc, 0.0) - mono(t0, 0.0)) + m * (mono(tc, 1.0) - mono(t0, 1.0));
    }
    return acc;
}

double trapezoid_integral(const std::vector<double>& ts, const std::vector<double>& fs, double t) {
    return weighted_integral(ts, fs, 0.0, t);
}

double action_rho(const FlowSeries& s, double t) {
    auto b2 = s.column("B_L2");
    for (auto& v : b2) v = v * v;
    return 0.5 * weighted_integral(s.times(), b2, -0.5, t);
}

PsiPair psi_functions(const FlowSeries& s, double t, const GfsConstants& k, double c_n) {
    auto ts = s.times();
    auto b2 = s.column("B_L2");
    std::vector<double> b4(b2.size());
    for (std::size_t i = 0; i < b2.size(); ++i) {
        double q = b2[i] * b2[i];
        b4[i] = q * q;
    }
    double integral = trapezoid_integral(ts, b4, t);
    return {k.lambda_m * t + k.gamma * integral, k.lambda_m * t + (k.gamma + c_n) * integral};
}

EnergyReport energy_identity_residual(const FlowSeries& s) {
    EnergyReport rep;
    auto ts = s.times();
    auto b2 = s.column("B_L2");
    auto g = s.column("Aprime_L2");
    auto rho = s.column("rho");
    if (ts.size() < 2) throw std::invalid_argument("energy_identity_residual: need >= 2 rows");

    std::vector<double> f(ts.size()), g2(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        f[i] = b2[i] * b2[i];
        g2[i] = g[i] * g[i];
    }
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (!(ts[i + 1] > ts[i])) continue;
        double dfdt = (f[i + 1] - f[i]) / (ts[i + 1] - ts[i]);
        double r = std::abs(dfdt + g2[i] + g2[i + 1]);
        double scale = std::max({std::abs(dfdt), g2[i] + g2[i + 1], 1e-300});
        rep.interval_residual.push_back(r);
        rep.interval_residual_rel.push_back(r / scale);
        rep.max_interval_rel = std::max(rep.max_interval_rel, r / scale);
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double integ = weighted_integral(ts, g2, 0.5, ts[i]);
        double lhs = std::sqrt(std::max(ts[i], 0.0)) * f[i] + 2.0 * integ;
        double d = std::abs(lhs - rho[i]);
        rep.fa0_defect.push_back(d);
        double rel = (rho[i] > 0.0) ? d / rho[i] : d;
        rep.fa0_defect_rel.push_back(rel);
        if (i > 0) rep.max_fa0_rel = std::max(rep.max_fa0_rel, rel);
    }
    return rep;
}

}  // namespace ymflow
