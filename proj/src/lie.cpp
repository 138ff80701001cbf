#include "ymflow/lie.hpp"

#include <cmath>

namespace ymflow {

GroupSpec GroupSpec::u1() {
    GroupSpec g;
    g.label = Group::U1;
    g.dim_k = 1;
    g.c_nonabelian = 0.0;
    return g;
}

GroupSpec GroupSpec::su2() { return su2_scaled(1.0); }

GroupSpec GroupSpec::su2_scaled(double s) {
    GroupSpec g;
    g.label = Group::SU2;
    g.dim_k = 3;
    // [e_a, e_b] = s * eps_{abc} e_c
    g.f[0][1][2] = s;
    g.f[1][2][0] = s;
    g.f[2][0][1] = s;
    g.f[1][0][2] = -s;
    g.f[2][1][0] = -s;
    g.f[0][2][1] = -s;
    // ad x has eigenvalues {0, +-i s|x|} in this basis
    g.c_nonabelian = std::abs(s);
    return g;
}

LieVec bracket(const LieVec& x, const LieVec& y, const GroupSpec& spec) {
    if (x.dim != spec.dim_k || y.dim != spec.dim_k)
        throw std::invalid_argument("bracket: dimension mismatch");
    LieVec r;
    r.dim = spec.dim_k;
    for (int c = 0; c < spec.dim_k; ++c) {
        double s = 0.0;
        for (int a = 0; a < spec.dim_k; ++a)
            for (int b = 0; b < spec.dim_k; ++b) s += spec.f[a][b][c] * x.v[a] * y.v[b];
        r.v[c] = s;
    }
    return r;
}

double lie_inner(const LieVec& x, const LieVec& y) {
    if (x.dim != y.dim) throw std::invalid_argument("lie_inner: dimension mismatch");
    double s = 0.0;
    for (int a = 0; a < x.dim; ++a) s += x.v[a] * y.v[a];
    return s;
}

double jacobi_residual(const GroupSpec& spec) {
    double worst = 0.0;
    const int n = spec.dim_k;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = 0.0;
                    for (int e = 0; e < n; ++e)
                        s += spec.f[a][b][e] * spec.f[e][c][d] + spec.f[b][c][e] * spec.f[e][a][d] +
                             spec.f[c][a][e] * spec.f[e][b][d];
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

double gaussian(std::uint64_t& state) {
    // Box-Muller; guard the log against u1 == 0.
    double u1 = uniform01(state);
    double u2 = uniform01(state);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

// Operator 2-norm of the dim x dim matrix M via a few power iterations on M^T M.
double opnorm(const double M[3][3], int dim, std::uint64_t& state) {
    double v[3];
    for (int i = 0; i < dim; ++i) v[i] = gaussian(state);
    double lam = 0.0;
    for (int it = 0; it < 60; ++it) {
        double w[3] = {0, 0, 0}, u[3] = {0, 0, 0};
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) w[i] += M[i][j] * v[j];
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) u[i] += M[j][i] * w[j];
        double nu = 0.0;
        for (int i = 0; i < dim; ++i) nu += u[i] * u[i];
        nu = std::sqrt(nu);
        if (nu == 0.0) return 0.0;
        for (int i = 0; i < dim; ++i) v[i] = u[i] / nu;
        lam = nu;
    }
    return std::sqrt(lam);
}

bool is_scaled_epsilon(const GroupSpec& g, double& scale) {
    if (g.dim_k != 3) return false;
    scale = g.f[0][1][2];
    const int eps[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1},
                           {1, 0, 2, -1}, {2, 1, 0, -1}, {0, 2, 1, -1}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double want = 0.0;
                for (auto& e : eps)
                    if (e[0] == a && e[1] == b && e[2] == c) want = e[3] * scale;
                if (g.f[a][b][c] != want) return false;
            }
    return true;
}

}  // namespace

double ad_norm_constant(const GroupSpec& spec) {
    bool any = false;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) any = any || spec.f[a][b][c] != 0.0;
    if (!any) return 0.0;

    double exact = 0.0, scale = 0.0;
    if (is_scaled_epsilon(spec, scale)) exact = std::abs(scale);

    std::uint64_t st = 0x5eedull;
    double best = 0.0;
    for (int s = 0; s < 4096; ++s) {
        double x[3] = {0, 0, 0}, nx = 0.0;
        for (int i = 0; i < spec.dim_k; ++i) x[i] = gaussian(st);
        for (int i = 0; i < spec.dim_k; ++i) nx += x[i] * x[i];
        nx = std::sqrt(nx);
        if (nx == 0.0) continue;
        double M[3][3] = {};
        for (int ccomp = 0; ccomp < spec.dim_k; ++ccomp)
            for (int b = 0; b < spec.dim_k; ++b)
                for (int a = 0; a < spec.dim_k; ++a) M[ccomp][b] += spec.f[a][b][ccomp] * x[a] / nx;
        best = std::max(best, opnorm(M, spec.dim_k, st));
    }
    return std::max(best, exact);
}

}  // namespace ymflow
