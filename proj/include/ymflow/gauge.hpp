#pragma once

#include <cstdint>

#include "ymflow/covariant.hpp"

namespace ymflow {

/// Group-valued vertex field: unit complex phase for U(1), unit quaternion
/// for SU(2).
struct GaugeField {
    GridSpec grid;
    Group label = Group::U1;
    std::vector<double> q;  // 2 or 4 doubles per vertex

    int comps() const { return label == Group::U1 ? 2 : 4; }
    std::array<int, 3> vsize() const;
    std::size_t nvert() const;
    std::size_t vidx(int x, int y, int z) const;
    double* at(std::size_t v) { return q.data() + v * comps(); }
    const double* at(std::size_t v) const { return q.data() + v * comps(); }

    void renormalize();
    double max_unit_defect() const;
    bool boundary_is_identity(double tol = 1e-12) const;
};

GaugeField gauge_identity(const GridSpec& grid, const GroupSpec& group);

/// g(x) = exp(xi(x)) for a vertex-sampled Lie-algebra field (xi given as a
/// 0-form with the group's dim_k components).
GaugeField gauge_exp(const FormField& xi);

/// Smooth deterministic gauge field from a low-mode trig series, sampled at
/// physical vertex coordinates (refinement-consistent for fixed extent).
GaugeField gauge_smooth(const GridSpec& grid, const GroupSpec& group, std::uint64_t seed,
                        double amplitude, int max_mode = 2);

GaugeField gauge_inverse(const GaugeField& g);
GaugeField gauge_product(const GaugeField& a, const GaugeField& b);  // pointwise a*b

/// g^{-1} A g + g^{-1} dg with g averaged to edge midpoints.
Connection apply_gauge(const Connection& A, const GaugeField& g);

/// g^{-1} dg per edge via the group logarithm of g(x)^{-1} g(x+e).
FormField maurer_cartan(const GaugeField& g);

/// Pure-gauge rough data: g = exp(theta(x) e_dir) with theta a random
/// Fourier series, |theta_k| ~ |k|^{-roughness_p}. Deterministic per seed
/// and refinement-consistent (mode coefficients depend only on the mode).
GaugeField rough_gauge_generator(const GridSpec& grid, const GroupSpec& group,
                                 double roughness_p, double amplitude, std::uint64_t seed,
                                 int dir = 0);

/// Divergence-free random 1-form with the matching spectral profile
/// |v_k| ~ |k|^{1-roughness_p}; exactly in the kernel of d*.
FormField rough_divfree_perturbation(const GridSpec& grid, const GroupSpec& group,
                                     double roughness_p, double amplitude, std::uint64_t seed);

struct DeviationRow {
    std::string name;
    double val_a = 0.0, val_ag = 0.0, rel = 0.0;
};

/// Observables for A and A^g side by side with relative deviations:
/// curvature norms, derivative-stack norms up to n_max, and rho/psi along a
/// short rerun.
std::vector<DeviationRow> gauge_invariance_report(const Connection& A, const GaugeField& g,
                                                  int n_max, const GfsConstants& k,
                                                  int rerun_steps = 16);

}  // namespace ymflow
