#pragma once

#include "ymflow/dec.hpp"
#include "ymflow/field.hpp"

namespace ymflow {

/// Gauge potential: a Lie-algebra valued 1-form plus its group data.
struct Connection {
    FormField a;

    Connection() = default;
    explicit Connection(FormField f) : a(std::move(f)) {
        if (a.degree() != 1) throw std::invalid_argument("Connection: needs a 1-form");
        a.clamp_tangential();
    }
    const GridSpec& grid() const { return a.grid(); }
    const GroupSpec& group() const { return a.group(); }
};

/// [u ^ v]: wedge product with the Lie bracket on coefficients. Factor
/// components are averaged onto the target cell with equal weights, which
/// keeps [u^v] = [v^u] exact for two 1-forms.
FormField bracket_wedge(const FormField& u, const FormField& v);

/// [u -| v]: the exact discrete transpose of w -> [u ^ w] applied to v.
FormField interior_bracket(const FormField& u, const FormField& v);

/// B = dA + (1/2)[A ^ A]
FormField curvature(const Connection& A);

/// d_A w = dw + [A ^ w]
FormField covariant_d(const Connection& A, const FormField& w);

/// d_A* w = d*w + [A -| w]; exactly adjoint to covariant_d by construction.
FormField covariant_codifferential(const Connection& A, const FormField& w);

/// Gauge-covariant first Sobolev norm: centered differences plus ad A_j,
/// with A averaged onto w's cells.
double h1a_norm(const Connection& A, const FormField& w);

struct GfsConstants {
    double kappa = 1.0;
    double gamma = 0.0;   // (1/4)(3 kappa^2)^3 c^4
    double lambda_m = 1.0;

    static GfsConstants make(double kappa, const GroupSpec& g) {
        GfsConstants k;
        k.kappa = kappa;
        double t = 3.0 * kappa * kappa;
        double c4 = g.c_nonabelian * g.c_nonabelian * g.c_nonabelian * g.c_nonabelian;
        k.gamma = 0.25 * t * t * t * c4;
        return k;
    }
};

/// lambda(B) = lambda_M + gamma |B|_2^4
double gfs_lambda(const FormField& B, const GfsConstants& k);

struct GfsReport {
    double lhs = 0.0;   // |w|_6^2
    double rhs = 0.0;   // kappa^2 (|d_A w|^2 + |d_A* w|^2 + lambda |w|^2)
    double ratio = 0.0; // 0 for w == 0
};

/// Gaffney-Friedrichs-Sobolev diagnostic; reports both sides, asserts nothing.
GfsReport gfs_check(const Connection& A, const FormField& w, const GfsConstants& k);

}  // namespace ymflow
