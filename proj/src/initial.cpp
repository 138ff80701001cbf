#include "ymflow/initial.hpp"

#include <cmath>

namespace ymflow {

Connection zero_connection(const GridSpec& grid, const GroupSpec& group) {
    return Connection(FormField(1, grid, group));
}

Connection fourier_smooth_connection(const GridSpec& grid, const GroupSpec& group,
                                     std::uint64_t seed, double amplitude, int max_mode) {
    FormField a(1, grid, group);
    for (int d = 0; d < 3; ++d) {
        auto s = a.osize(d);
        for (int c = 0; c < group.dim_k; ++c) {
            std::uint64_t st = seed ^ (0x51edull + 7 * d + 31 * c);
            for (int m0 = -max_mode; m0 <= max_mode; ++m0)
                for (int m1 = -max_mode; m1 <= max_mode; ++m1)
                    for (int m2 = -max_mode; m2 <= max_mode; ++m2) {
                        if (m0 == 0 && m1 == 0 && m2 == 0) continue;
                        double amp = amplitude * gaussian(st) /
                                     (1.0 + m0 * m0 + m1 * m1 + m2 * m2);
                        double ph = 2.0 * M_PI * uniform01(st);
                        double* p = a.plane(d, c);
                        for (int x = 0; x < s[0]; ++x)
                            for (int y = 0; y < s[1]; ++y)
                                for (int z = 0; z < s[2]; ++z) {
                                    // edge midpoint in physical coordinates
                                    double px = (x + 0.5 * (d == 0)) * grid.h;
                                    double py = (y + 0.5 * (d == 1)) * grid.h;
                                    double pz = (z + 0.5 * (d == 2)) * grid.h;
                                    double arg = 2.0 * M_PI *
                                                     (m0 * px / grid.extent(0) +
                                                      m1 * py / grid.extent(1) +
                                                      m2 * pz / grid.extent(2)) +
                                                 ph;
                                    p[a.cidx(d, x, y, z)] += amp * std::cos(arg);
                                }
                    }
        }
    }
    a.clamp_tangential();
    return Connection(std::move(a));
}

Connection u1_single_mode(const GridSpec& grid, const std::array<int, 3>& m, int pol_axis,
                          double amplitude) {
    if (!grid.periodic()) throw std::invalid_argument("u1_single_mode: periodic grids only");
    if (m[pol_axis] != 0)
        throw std::invalid_argument("u1_single_mode: need m[pol_axis] == 0 for an exact mode");
    FormField a(1, grid, GroupSpec::u1());
    auto s = a.osize(pol_axis);
    double* p = a.plane(pol_axis, 0);
    for (int x = 0; x < s[0]; ++x)
        for (int y = 0; y < s[1]; ++y)
            for (int z = 0; z < s[2]; ++z) {
                double arg = 2.0 * M_PI *
                             (m[0] * static_cast<double>(x) / grid.n[0] +
                              m[1] * static_cast<double>(y) / grid.n[1] +
                              m[2] * static_cast<double>(z) / grid.n[2]);
                p[a.cidx(pol_axis, x, y, z)] = amplitude * std::cos(arg);
            }
    return Connection(std::move(a));
}

double u1_mode_eigenvalue(const GridSpec& grid, const std::array<int, 3>& m) {
    double lam = 0.0;
    for (int i = 0; i < 3; ++i) {
        double s = 2.0 / grid.h * std::sin(M_PI * m[i] / grid.n[i]);
        lam += s * s;
    }
    return lam;
}

}  // namespace ymflow
