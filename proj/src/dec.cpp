#include "ymflow/dec.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>

#include "ymflow/kernels.hpp"

namespace ymflow {

FormField exterior_derivative(const FormField& w) {
    const int p = w.degree();
    if (p >= 3) throw std::invalid_argument("exterior_derivative: degree 3 input");
    const GridSpec& g = w.grid();
    FormField out(p + 1, g, w.group());
    const double invh = 1.0 / g.h;
    const bool per = g.periodic();

    for (int oo = 0; oo < n_orientations(p + 1); ++oo) {
        const int omask = orient_mask(p + 1, oo);
        const auto os = out.osize(oo);
        for (int d = 0; d < 3; ++d) {
            if (!((omask >> d) & 1)) continue;
            const int imask = omask & ~(1 << d);
            const int io = mask_orient(p, imask);
            const double s = coboundary_sign(omask, d) * invh;
            const auto is = w.osize(io);
            for (int a = 0; a < w.dim_k(); ++a) {
                const double* src = w.plane(io, a);
                double* dst = out.plane(oo, a);
                kern::parallel_for(os[0], [&](std::size_t xb, std::size_t xe) {
                    for (int x = static_cast<int>(xb); x < static_cast<int>(xe); ++x) {
                        int xp = x + (d == 0);
                        if (per && xp == is[0]) xp = 0;
                        for (int y = 0; y < os[1]; ++y) {
                            int yp = y + (d == 1);
                            if (per && yp == is[1]) yp = 0;
                            for (int z = 0; z < os[2]; ++z) {
                                int zp = z + (d == 2);
                                if (per && zp == is[2]) zp = 0;
                                dst[out.cidx(oo, x, y, z)] +=
                                    s * (src[w.cidx(io, xp, yp, zp)] - src[w.cidx(io, x, y, z)]);
                            }
                        }
                    }
                });
            }
        }
    }
    out.clamp_tangential();
    return out;
}

FormField codifferential(const FormField& w) {
    const int q = w.degree();
    if (q == 0) throw std::invalid_argument("codifferential: degree 0 input");
    const GridSpec& g = w.grid();
    FormField out(q - 1, g, w.group());
    const double invh = 1.0 / g.h;
    const bool per = g.periodic();

    for (int oo = 0; oo < n_orientations(q - 1); ++oo) {
        const int omask = orient_mask(q - 1, oo);
        const auto os = out.osize(oo);
        for (int d = 0; d < 3; ++d) {
            if ((omask >> d) & 1) continue;
            const int imask = omask | (1 << d);
            const int io = mask_orient(q, imask);
            const double s = coboundary_sign(imask, d) * invh;
            const auto is = w.osize(io);
            for (int a = 0; a < w.dim_k(); ++a) {
                const double* src = w.plane(io, a);
                double* dst = out.plane(oo, a);
                // transpose of the forward difference: src(x - e_d) - src(x),
                // one-sided at box boundaries
                kern::parallel_for(os[0], [&](std::size_t xb, std::size_t xe) {
                    for (int x = static_cast<int>(xb); x < static_cast<int>(xe); ++x) {
                        int xm = x - (d == 0);
                        bool norear = false, nofront = false;
                        if (d == 0) {
                            if (per) { if (xm < 0) xm = is[0] - 1; }
                            else { norear = xm < 0; nofront = x > is[0] - 1; }
                        }
                        for (int y = 0; y < os[1]; ++y) {
                            int ym = y - (d == 1);
                            bool nr = norear, nf = nofront;
                            if (d == 1) {
                                if (per) { if (ym < 0) ym = is[1] - 1; }
                                else { nr = ym < 0; nf = y > is[1] - 1; }
                            }
                            for (int z = 0; z < os[2]; ++z) {
                                int zm = z - (d == 2);
                                bool nr2 = nr, nf2 = nf;
                                if (d == 2) {
                                    if (per) { if (zm < 0) zm = is[2] - 1; }
                                    else { nr2 = zm < 0; nf2 = z > is[2] - 1; }
                                }
                                double acc = 0.0;
                                if (!nr2) acc += src[w.cidx(io, xm, ym, zm)];
                                if (!nf2) acc -= src[w.cidx(io, x, y, z)];
                                dst[out.cidx(oo, x, y, z)] += s * acc;
                            }
                        }
                    }
                });
            }
        }
    }
    out.clamp_tangential();
    return out;
}

double laplace_symbol(const GridSpec& g, int m0, int m1, int m2) {
    const int m[3] = {m0, m1, m2};
    double lam = 0.0;
    for (int i = 0; i < 3; ++i) {
        double s = std::sin(M_PI * m[i] / g.n[i]) * 2.0 / g.h;
        lam += s * s;
    }
    return lam;
}

double sobolev_norm(const FormField& w, double a) {
    if (!w.grid().periodic())
        throw std::invalid_argument("sobolev_norm: only periodic grids are supported");
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("sobolev_norm: a must be in [0,1]");
    const GridSpec& g = w.grid();
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const std::size_t N = static_cast<std::size_t>(n0) * n1 * n2;

    std::vector<std::complex<double>> buf(N);
    fftw_plan plan = fftw_plan_dft_3d(n0, n1, n2, reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    std::vector<double> weight(N);
    for (int m0 = 0; m0 < n0; ++m0)
        for (int m1 = 0; m1 < n1; ++m1)
            for (int m2 = 0; m2 < n2; ++m2)
                weight[(static_cast<std::size_t>(m0) * n1 + m1) * n2 + m2] =
                    std::pow(1.0 + laplace_symbol(g, m0, m1, m2), a);

    double h3 = g.h * g.h * g.h;
    double total = 0.0;
    for (int o = 0; o < n_orientations(w.degree()); ++o) {
        for (int c = 0; c < w.dim_k(); ++c) {
            const double* src = w.plane(o, c);
            for (std::size_t i = 0; i < N; ++i) buf[i] = src[i];
            fftw_execute(plan);
            for (std::size_t i = 0; i < N; ++i) total += weight[i] * std::norm(buf[i]);
        }
    }
    fftw_destroy_plan(plan);
    return std::sqrt(h3 * total / static_cast<double>(N));
}

}  // namespace ymflow
