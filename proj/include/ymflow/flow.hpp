#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ymflow/covariant.hpp"

namespace ymflow {

struct FlowBlowup : std::runtime_error {
    double t;
    long step;
    double max_norm;
    FlowBlowup(double t_, long step_, double m)
        : std::runtime_error("flow blow-up at t=" + std::to_string(t_) + " step " +
                             std::to_string(step_)),
          t(t_), step(step_), max_norm(m) {}
};

struct FlowState {
    double t = 0.0;
    Connection A;
    long step_count = 0;
    double dt = 0.0;
};

/// Append-only observable record; rows match cols entry-for-entry.
struct FlowSeries {
    std::vector<std::string> cols;
    std::vector<std::vector<double>> rows;
    int n_max = 0;

    int col(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    double value(std::size_t row, const std::string& name) const;
    std::vector<double> times() const { return column("t"); }
};

/// Extra per-record columns (derivative-stack norms live behind this).
class RecordExtras {
  public:
    virtual ~RecordExtras() = default;
    virtual std::vector<std::string> names() const = 0;
    virtual std::vector<double> values(const Connection& A) const = 0;
};

struct FlowParams {
    double t_max = 0.1;
    double cfl_safety = 0.1;               // dt = cfl_safety * h^2 unless dt_override
    std::optional<double> dt_override;
    long record_every = 1;                 // 0 disables the step-count trigger
    double geo_ratio = 1.189207115002721;  // 2^{1/4} schedule near t = 0
    GfsConstants gfs;
    double blowup_threshold = 1e12;
};

struct FlowResult {
    FlowSeries series;
    bool blew_up = false;
    std::string error;
    double t_end = 0.0;
    FlowState final_state;
};

/// A'(t) = -d_A* B, the L2 gradient of the energy up to sign.
FormField flow_rhs(const Connection& A);

/// One classical RK4 step; Dirichlet clamp reapplied after each stage.
void step(FlowState& st, double dt, double blowup_threshold = 1e12);

FlowResult run_flow(const Connection& A0, const FlowParams& p,
                    const RecordExtras* extras = nullptr);

// --- quadrature on recorded rows ------------------------------------------

/// Integral of s^alpha f(s) over [ts.front(), t] with f piecewise linear
/// through the nodes and the monomial weight integrated exactly.
double weighted_integral(const std::vector<double>& ts, const std::vector<double>& fs,
                         double alpha, double t);
double trapezoid_integral(const std::vector<double>& ts, const std::vector<double>& fs, double t);

/// rho(t) = (1/2) int_0^t s^{-1/2} |B(s)|_2^2 ds from the recorded rows.
double action_rho(const FlowSeries& s, double t);

struct PsiPair {
    double psi;
    double psi_n;
};
/// psi(t) = lambda_M t + gamma int |B|_2^4; psi_n adds c_n to gamma.
PsiPair psi_functions(const FlowSeries& s, double t, const GfsConstants& k, double c_n);

struct EnergyReport {
    // per recorded interval: |d/dt |B|^2 + 2|A'|^2| via trapezoid, and its
    // value relative to the larger of the two terms
    std::vector<double> interval_residual;
    std::vector<double> interval_residual_rel;
    // per recorded time: |t^{1/2}|B|^2 + 2 int s^{1/2}|A'|^2 - rho(t)|
    std::vector<double> fa0_defect;
    std::vector<double> fa0_defect_rel;
    double max_interval_rel = 0.0;
    double max_fa0_rel = 0.0;
};
EnergyReport energy_identity_residual(const FlowSeries& s);

}  // namespace ymflow
