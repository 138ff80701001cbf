#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace ymflow {

enum class Group { U1, SU2 };

/// Coefficient vector in an orthonormal basis of the Lie algebra.
/// dim is 1 for u(1), 3 for su(2); unused slots stay zero.
struct LieVec {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    int dim = 0;

    double norm2() const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += v[a] * v[a];
        return s;
    }
};

/// Gauge group metadata: structure constants f[a][b][c] in an orthonormal
/// basis, plus the non-commutativity constant c = sup{ |ad x| : |x| <= 1 }.
struct GroupSpec {
    Group label = Group::U1;
    int dim_k = 1;
    double f[3][3][3] = {};
    double c_nonabelian = 0.0;

    static GroupSpec u1();
    static GroupSpec su2();
    /// su(2) with structure constants scaled by s (c scales accordingly).
    static GroupSpec su2_scaled(double s);

    bool abelian() const { return c_nonabelian == 0.0; }
};

LieVec bracket(const LieVec& x, const LieVec& y, const GroupSpec& spec);
double lie_inner(const LieVec& x, const LieVec& y);

/// sup over unit x of the operator norm of ad x. Exact for the shipped
/// groups, dense random sampling for generic structure-constant tables.
double ad_norm_constant(const GroupSpec& spec);

/// Max Jacobi-identity defect of the stored structure constants.
double jacobi_residual(const GroupSpec& spec);

/// splitmix64 step; the deterministic RNG used throughout the project.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform double in [0,1).
inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (explicit formula for reproducibility).
double gaussian(std::uint64_t& state);

}  // namespace ymflow
