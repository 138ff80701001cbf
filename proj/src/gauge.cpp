#include "ymflow/gauge.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>

#include "ymflow/derivs.hpp"

namespace ymflow {

namespace {

// quaternions as (w, x, y, z)
void qmul(const double* a, const double* b, double* r) {
    r[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
    r[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
    r[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1];
    r[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0];
}

void qconj(const double* a, double* r) {
    r[0] = a[0];
    r[1] = -a[1];
    r[2] = -a[2];
    r[3] = -a[3];
}

void qnormalize(double* a, int comps) {
    double s = 0.0;
    for (int i = 0; i < comps; ++i) s += a[i] * a[i];
    s = std::sqrt(s);
    if (s == 0.0) throw std::runtime_error("gauge: zero group element");
    for (int i = 0; i < comps; ++i) a[i] /= s;
}

// Basis e_a <-> i_a/2, so xi = (v0,v1,v2) maps to the pure quaternion v/2
// and exp has half-angle |v|/2.
void su2_exp(const double* v, double* q) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    double half = 0.5 * n;
    double c = std::cos(half);
    double s = (n > 1e-30) ? std::sin(half) / n : 0.5;
    q[0] = c;
    q[1] = s * v[0];
    q[2] = s * v[1];
    q[3] = s * v[2];
}

void su2_log(const double* q, double* v, double branch_tol = 1e-6) {
    double vn = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    double ang = std::atan2(vn, q[0]);  // in [0, pi]
    if (ang >= M_PI - branch_tol)
        throw std::runtime_error("gauge logarithm near the branch cut");
    double s = (vn > 1e-30) ? 2.0 * ang / vn : 2.0;
    v[0] = s * q[1];
    v[1] = s * q[2];
    v[2] = s * q[3];
}

// Rotation matrix of the unit quaternion acting on Lie coefficients.
void qrot(const double* q, double R[3][3]) {
    double w = q[0], x = q[1], y = q[2], z = q[3];
    R[0][0] = 1 - 2 * (y * y + z * z);
    R[0][1] = 2 * (x * y - w * z);
    R[0][2] = 2 * (x * z + w * y);
    R[1][0] = 2 * (x * y + w * z);
    R[1][1] = 1 - 2 * (x * x + z * z);
    R[1][2] = 2 * (y * z - w * x);
    R[2][0] = 2 * (x * z - w * y);
    R[2][1] = 2 * (y * z + w * x);
    R[2][2] = 1 - 2 * (x * x + y * y);
}

}  // namespace

std::array<int, 3> GaugeField::vsize() const {
    std::array<int, 3> s;
    for (int i = 0; i < 3; ++i) s[i] = grid.periodic() ? grid.n[i] : grid.n[i] + 1;
    return s;
}

std::size_t GaugeField::nvert() const {
    auto s = vsize();
    return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

std::size_t GaugeField::vidx(int x, int y, int z) const {
    auto s = vsize();
    return (static_cast<std::size_t>(x) * s[1] + y) * s[2] + z;
}

void GaugeField::renormalize() {
    for (std::size_t v = 0; v < nvert(); ++v) qnormalize(at(v), comps());
}

double GaugeField::max_unit_defect() const {
    double worst = 0.0;
    for (std::size_t v = 0; v < nvert(); ++v) {
        double s = 0.0;
        for (int i = 0; i < comps(); ++i) s += at(v)[i] * at(v)[i];
        worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
    }
    return worst;
}

bool GaugeField::boundary_is_identity(double tol) const {
    if (grid.periodic()) return true;
    auto s = vsize();
    for (int x = 0; x < s[0]; ++x)
        for (int y = 0; y < s[1]; ++y)
            for (int z = 0; z < s[2]; ++z) {
                bool bnd = x == 0 || x == s[0] - 1 || y == 0 || y == s[1] - 1 || z == 0 ||
                           z == s[2] - 1;
                if (!bnd) continue;
                const double* g = at(vidx(x, y, z));
                double d = std::abs(g[0] - 1.0);
                for (int i = 1; i < comps(); ++i) d = std::max(d, std::abs(g[i]));
                if (d > tol) return false;
            }
    return true;
}

GaugeField gauge_identity(const GridSpec& grid, const GroupSpec& group) {
    GaugeField g;
    g.grid = grid;
    g.label = group.label;
    g.q.assign(g.nvert() * g.comps(), 0.0);
    for (std::size_t v = 0; v < g.nvert(); ++v) g.at(v)[0] = 1.0;
    return g;
}

GaugeField gauge_exp(const FormField& xi) {
    if (xi.degree() != 0) throw std::invalid_argument("gauge_exp: needs a 0-form");
    GaugeField g = gauge_identity(xi.grid(), xi.group());
    for (std::size_t v = 0; v < g.nvert(); ++v) {
        if (g.label == Group::U1) {
            double th = xi.raw()[v];
            g.at(v)[0] = std::cos(th);
            g.at(v)[1] = std::sin(th);
        } else {
            double vec[3] = {xi.plane(0, 0)[v], xi.plane(0, 1)[v], xi.plane(0, 2)[v]};
            su2_exp(vec, g.at(v));
        }
    }
    return g;
}

GaugeField gauge_smooth(const GridSpec& grid, const GroupSpec& group, std::uint64_t seed,
                        double amplitude, int max_mode) {
    FormField xi(0, grid, group);
    auto s = xi.osize(0);
    for (int a = 0; a < group.dim_k; ++a) {
        std::uint64_t st = seed ^ (0xabcdull + a);
        for (int m0 = -max_mode; m0 <= max_mode; ++m0)
            for (int m1 = -max_mode; m1 <= max_mode; ++m1)
                for (int m2 = -max_mode; m2 <= max_mode; ++m2) {
                    if (m0 == 0 && m1 == 0 && m2 == 0) continue;
                    double amp = amplitude * gaussian(st) /
                                 (1.0 + m0 * m0 + m1 * m1 + m2 * m2);
                    double ph = 2.0 * M_PI * uniform01(st);
                    double* p = xi.plane(0, a);
                    for (int x = 0; x < s[0]; ++x)
                        for (int y = 0; y < s[1]; ++y)
                            for (int z = 0; z < s[2]; ++z) {
                                double arg = 2.0 * M_PI *
                                                 (m0 * x * grid.h / grid.extent(0) +
                                                  m1 * y * grid.h / grid.extent(1) +
                                                  m2 * z * grid.h / grid.extent(2)) +
                                             ph;
                                p[xi.cidx(0, x, y, z)] += amp * std::cos(arg);
                            }
                }
    }
    if (grid.bc == Bc::Dirichlet) xi.clamp_tangential();
    return gauge_exp(xi);
}

GaugeField gauge_inverse(const GaugeField& g) {
    GaugeField r = g;
    for (std::size_t v = 0; v < g.nvert(); ++v) {
        if (g.label == Group::U1) r.at(v)[1] = -g.at(v)[1];
        else qconj(g.at(v), r.at(v));
    }
    return r;
}

GaugeField gauge_product(const GaugeField& a, const GaugeField& b) {
    if (!(a.grid == b.grid) || a.label != b.label)
        throw std::invalid_argument("gauge_product: mismatched fields");
    GaugeField r = a;
    for (std::size_t v = 0; v < a.nvert(); ++v) {
        if (a.label == Group::U1) {
            const double *x = a.at(v), *y = b.at(v);
            double re = x[0] * y[0] - x[1] * y[1];
            double im = x[0] * y[1] + x[1] * y[0];
            r.at(v)[0] = re;
            r.at(v)[1] = im;
        } else {
            qmul(a.at(v), b.at(v), r.at(v));
        }
        qnormalize(r.at(v), r.comps());
    }
    return r;
}

FormField maurer_cartan(const GaugeField& g) {
    GroupSpec grp = (g.label == Group::U1) ? GroupSpec::u1() : GroupSpec::su2();
    FormField mc(1, g.grid, grp);
    auto vs = g.vsize();
    const bool per = g.grid.periodic();
    const double invh = 1.0 / g.grid.h;
    for (int d = 0; d < 3; ++d) {
        auto es = mc.osize(d);
        for (int x = 0; x < es[0]; ++x)
            for (int y = 0; y < es[1]; ++y)
                for (int z = 0; z < es[2]; ++z) {
                    int c2[3] = {x, y, z};
                    c2[d] += 1;
                    if (per && c2[d] == vs[d]) c2[d] = 0;
                    const double* ga = g.at(g.vidx(x, y, z));
                    const double* gb = g.at(g.vidx(c2[0], c2[1], c2[2]));
                    if (g.label == Group::U1) {
                        // phase of conj(ga) * gb, wrapped to (-pi, pi]
                        double re = ga[0] * gb[0] + ga[1] * gb[1];
                        double im = ga[0] * gb[1] - ga[1] * gb[0];
                        double ang = std::atan2(im, re);
                        if (std::abs(ang) >= M_PI - 1e-6)
                            throw std::runtime_error("gauge logarithm near the branch cut");
                        mc.at(d, 0, x, y, z) = ang * invh;
                    } else {
                        double inv[4], u[4], v[3];
                        qconj(ga, inv);
                        qmul(inv, gb, u);
                        qnormalize(u, 4);
                        su2_log(u, v);
                        for (int a = 0; a < 3; ++a) mc.at(d, a, x, y, z) = v[a] * invh;
                    }
                }
    }
    mc.clamp_tangential();
    return mc;
}

Connection apply_gauge(const Connection& A, const GaugeField& g) {
    if (!(A.grid() == g.grid)) throw std::invalid_argument("apply_gauge: grid mismatch");
    if (A.group().label != g.label) throw std::invalid_argument("apply_gauge: group mismatch");
    if (A.grid().bc == Bc::Dirichlet && !g.boundary_is_identity())
        throw std::invalid_argument("apply_gauge: Dirichlet runs need g = identity on the boundary");

    FormField mc = maurer_cartan(g);
    FormField out(1, A.grid(), A.group());
    auto vs = g.vsize();
    const bool per = A.grid().periodic();

    for (int d = 0; d < 3; ++d) {
        auto es = out.osize(d);
        for (int x = 0; x < es[0]; ++x)
            for (int y = 0; y < es[1]; ++y)
                for (int z = 0; z < es[2]; ++z) {
                    int c2[3] = {x, y, z};
                    c2[d] += 1;
                    if (per && c2[d] == vs[d]) c2[d] = 0;
                    if (A.group().label == Group::U1) {
                        // abelian adjoint action is trivial
                        out.at(d, 0, x, y, z) = A.a.at(d, 0, x, y, z) + mc.at(d, 0, x, y, z);
                    } else {
                        // midpoint group element, then coefficient rotation
                        const double* ga = g.at(g.vidx(x, y, z));
                        const double* gb = g.at(g.vidx(c2[0], c2[1], c2[2]));
                        double mid[4];
                        for (int i = 0; i < 4; ++i) mid[i] = ga[i] + gb[i];
                        qnormalize(mid, 4);
                        double R[3][3];
                        qrot(mid, R);
                        double vin[3], vout[3] = {0, 0, 0};
                        for (int a = 0; a < 3; ++a) vin[a] = A.a.at(d, a, x, y, z);
                        // Ad_{g^{-1}} = R(g)^T
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b) vout[a] += R[b][a] * vin[b];
                        for (int a = 0; a < 3; ++a)
                            out.at(d, a, x, y, z) = vout[a] + mc.at(d, a, x, y, z);
                    }
                }
    }
    return Connection(std::move(out));
}

// ------------------------------------------------------------ rough data

namespace {

std::uint64_t mode_seed(std::uint64_t seed, int m0, int m1, int m2, int channel) {
    std::uint64_t key = (static_cast<std::uint64_t>(m0 + 512) << 40) ^
                        (static_cast<std::uint64_t>(m1 + 512) << 24) ^
                        (static_cast<std::uint64_t>(m2 + 512) << 8) ^
                        static_cast<std::uint64_t>(channel);
    std::uint64_t st = seed ^ (key * 0x2545f4914f6cdd1dull);
    splitmix64(st);
    return st;
}

struct ModeIter {
    // signed mode m_i in (-n_i/2, n_i/2), Nyquist planes excluded
    static bool signed_mode(const GridSpec& g, int i0, int i1, int i2, int m[3]) {
        const int idx[3] = {i0, i1, i2};
        for (int j = 0; j < 3; ++j) {
            int n = g.n[j];
            int s = idx[j] > n / 2 ? idx[j] - n : idx[j];
            if (2 * std::abs(s) == n) return false;  // Nyquist
            m[j] = s;
        }
        return !(m[0] == 0 && m[1] == 0 && m[2] == 0);
    }
    static bool canonical(const int m[3]) {
        for (int j = 0; j < 3; ++j) {
            if (m[j] > 0) return true;
            if (m[j] < 0) return false;
        }
        return false;
    }
};

}  // namespace

GaugeField rough_gauge_generator(const GridSpec& grid, const GroupSpec& group,
                                 double roughness_p, double amplitude, std::uint64_t seed,
                                 int dir) {
    if (!grid.periodic())
        throw std::invalid_argument("rough_gauge_generator: periodic grids only");
    if (dir < 0 || dir >= group.dim_k)
        throw std::invalid_argument("rough_gauge_generator: bad Lie direction");
    const int n0 = grid.n[0], n1 = grid.n[1], n2 = grid.n[2];
    const std::size_t N = static_cast<std::size_t>(n0) * n1 * n2;

    std::vector<std::complex<double>> spec(N, 0.0);
    if (amplitude != 0.0) {
        for (int i0 = 0; i0 < n0; ++i0)
            for (int i1 = 0; i1 < n1; ++i1)
                for (int i2 = 0; i2 < n2; ++i2) {
                    int m[3];
                    if (!ModeIter::signed_mode(grid, i0, i1, i2, m)) continue;
                    if (!ModeIter::canonical(m)) continue;
                    double k2 = 0.0;
                    for (int j = 0; j < 3; ++j) {
                        double kj = 2.0 * M_PI * m[j] / grid.extent(j);
                        k2 += kj * kj;
                    }
                    double sigma = amplitude * std::pow(std::sqrt(k2), -roughness_p);
                    std::uint64_t st = mode_seed(seed, m[0], m[1], m[2], 0);
                    std::complex<double> z(gaussian(st), gaussian(st));
                    z *= sigma * M_SQRT1_2;
                    auto put = [&](int a, int b, int c, std::complex<double> v) {
                        int ia = (a + n0) % n0, ib = (b + n1) % n1, ic = (c + n2) % n2;
                        spec[(static_cast<std::size_t>(ia) * n1 + ib) * n2 + ic] = v;
                    };
                    put(m[0], m[1], m[2], z);
                    put(-m[0], -m[1], -m[2], std::conj(z));
                }
        fftw_plan plan =
            fftw_plan_dft_3d(n0, n1, n2, reinterpret_cast<fftw_complex*>(spec.data()),
                             reinterpret_cast<fftw_complex*>(spec.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    FormField xi(0, grid, group);
    for (std::size_t v = 0; v < N; ++v) xi.plane(0, dir)[v] = spec[v].real();
    return gauge_exp(xi);
}

FormField rough_divfree_perturbation(const GridSpec& grid, const GroupSpec& group,
                                     double roughness_p, double amplitude, std::uint64_t seed) {
    if (!grid.periodic())
        throw std::invalid_argument("rough_divfree_perturbation: periodic grids only");
    const int n0 = grid.n[0], n1 = grid.n[1], n2 = grid.n[2];
    const std::size_t N = static_cast<std::size_t>(n0) * n1 * n2;
    FormField out(1, grid, group);
    if (amplitude == 0.0) return out;

    std::vector<std::vector<std::complex<double>>> spec(
        3, std::vector<std::complex<double>>(N, 0.0));

    for (int a = 0; a < group.dim_k; ++a) {
        for (auto& s : spec) std::fill(s.begin(), s.end(), 0.0);
        for (int i0 = 0; i0 < n0; ++i0)
            for (int i1 = 0; i1 < n1; ++i1)
                for (int i2 = 0; i2 < n2; ++i2) {
                    int m[3];
                    if (!ModeIter::signed_mode(grid, i0, i1, i2, m)) continue;
                    if (!ModeIter::canonical(m)) continue;
                    double k2 = 0.0;
                    std::complex<double> D[3];
                    for (int j = 0; j < 3; ++j) {
                        double kj = 2.0 * M_PI * m[j] / grid.extent(j);
                        k2 += kj * kj;
                        D[j] = (std::polar(1.0, kj * grid.h) - 1.0) / grid.h;
                    }
                    double sigma = amplitude * std::pow(std::sqrt(k2), 1.0 - roughness_p);
                    std::uint64_t st = mode_seed(seed, m[0], m[1], m[2], 16 + a);
                    std::complex<double> v[3];
                    for (int j = 0; j < 3; ++j)
                        v[j] = sigma * M_SQRT1_2 * std::complex<double>(gaussian(st), gaussian(st));
                    // project onto the kernel of the discrete divergence symbol
                    std::complex<double> vd = 0.0;
                    double dd = 0.0;
                    for (int j = 0; j < 3; ++j) {
                        vd += v[j] * std::conj(D[j]);
                        dd += std::norm(D[j]);
                    }
                    if (dd > 0.0)
                        for (int j = 0; j < 3; ++j) v[j] -= D[j] * (vd / dd);
                    auto put = [&](int j, int a0, int b0, int c0, std::complex<double> z) {
                        int ia = (a0 + n0) % n0, ib = (b0 + n1) % n1, ic = (c0 + n2) % n2;
                        spec[j][(static_cast<std::size_t>(ia) * n1 + ib) * n2 + ic] = z;
                    };
                    for (int j = 0; j < 3; ++j) {
                        put(j, m[0], m[1], m[2], v[j]);
                        put(j, -m[0], -m[1], -m[2], std::conj(v[j]));
                    }
                }
        for (int j = 0; j < 3; ++j) {
            fftw_plan plan =
                fftw_plan_dft_3d(n0, n1, n2, reinterpret_cast<fftw_complex*>(spec[j].data()),
                                 reinterpret_cast<fftw_complex*>(spec[j].data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
            fftw_execute(plan);
            fftw_destroy_plan(plan);
            for (std::size_t i = 0; i < N; ++i) out.plane(j, a)[i] = spec[j][i].real();
        }
    }
    return out;
}

std::vector<DeviationRow> gauge_invariance_report(const Connection& A, const GaugeField& g,
                                                  int n_max, const GfsConstants& k,
                                                  int rerun_steps) {
    Connection Ag = apply_gauge(A, g);
    std::vector<DeviationRow> rows;
    auto add = [&](const std::string& name, double a, double b) {
        double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        if (a == 0.0 && b == 0.0) rel = 0.0;
        rows.push_back({name, a, b, rel});
    };

    FormField B = curvature(A), Bg = curvature(Ag);
    add("B_L2", l2_norm(B), l2_norm(Bg));
    add("B_L6", lp_norm(B, 6.0), lp_norm(Bg, 6.0));
    add("B0_H1A", h1a_norm(A, B), h1a_norm(Ag, Bg));

    if (n_max >= 1) {
        DerivRecorder rec(n_max, k);
        auto names = rec.names();
        auto va = rec.values(A);
        auto vg = rec.values(Ag);
        for (std::size_t i = 2; i < names.size(); ++i) add(names[i], va[i], vg[i]);
    }

    if (rerun_steps > 0) {
        FlowParams p;
        p.gfs = k;
        double dt = 0.1 * A.grid().h * A.grid().h;
        p.dt_override = dt;
        p.t_max = rerun_steps * dt;
        FlowResult ra = run_flow(A, p), rg = run_flow(Ag, p);
        if (!ra.blew_up && !rg.blew_up) {
            std::size_t last = ra.series.rows.size() - 1;
            add("rho_rerun", ra.series.value(last, "rho"), rg.series.value(last, "rho"));
            add("psi_rerun", ra.series.value(last, "psi"), rg.series.value(last, "psi"));
            add("B_L2_rerun", ra.series.value(last, "B_L2"), rg.series.value(last, "B_L2"));
            add("lambda_rerun", ra.series.value(last, "lambda"),
                rg.series.value(last, "lambda"));
        }
    }
    return rows;
}

}  // namespace ymflow
