#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ymflow/lie.hpp"

namespace ymflow {

enum class Bc { Periodic, Dirichlet, Neumann };

struct GridSpec {
    std::array<int, 3> n{2, 2, 2};  // cells per axis
    double h = 1.0;                 // cell edge length
    Bc bc = Bc::Periodic;

    bool periodic() const { return bc == Bc::Periodic; }
    double extent(int i) const { return n[i] * h; }
    double volume() const { return extent(0) * extent(1) * extent(2); }
    void validate() const {
        if (n[0] < 2 || n[1] < 2 || n[2] < 2) throw std::invalid_argument("grid.n: need n_i >= 2");
        if (!(h > 0.0)) throw std::invalid_argument("grid.h: must be positive");
    }
    bool operator==(const GridSpec& o) const {
        return n == o.n && h == o.h && bc == o.bc;
    }
};

// p-cells are indexed by an orientation (the set of axes the cell spans,
// kept as a 3-bit mask) and an anchor vertex. Component ordering follows
// increasing-axis convention for the form basis.
inline int n_orientations(int p) { return (p == 0 || p == 3) ? 1 : 3; }

inline int orient_mask(int p, int o) {
    switch (p) {
        case 0: return 0;
        case 1: return 1 << o;
        case 2: {
            static const int m[3] = {0b011, 0b101, 0b110};
            return m[o];
        }
        case 3: return 0b111;
    }
    throw std::invalid_argument("orient_mask: bad degree");
}

inline int mask_orient(int p, int mask) {
    for (int o = 0; o < n_orientations(p); ++o)
        if (orient_mask(p, o) == mask) return o;
    throw std::invalid_argument("mask_orient: bad mask");
}

/// Sign of moving dx^d into its sorted slot of the span `mask` (d in mask).
inline int coboundary_sign(int mask, int d) {
    int lower = mask & ((1 << d) - 1);
    return (__builtin_popcount(lower) % 2 == 0) ? 1 : -1;
}

/// Lie-algebra valued p-form sampled on the p-cells of the box complex.
/// Storage: one scalar plane per (orientation, Lie component), z fastest.
class FormField {
  public:
    FormField() = default;
    FormField(int degree, const GridSpec& grid, const GroupSpec& group);

    int degree() const { return degree_; }
    const GridSpec& grid() const { return grid_; }
    const GroupSpec& group() const { return group_; }
    int dim_k() const { return group_.dim_k; }

    /// Cells per axis for orientation o (box grids store n+1 planes along
    /// axes the cell does not span).
    std::array<int, 3> osize(int o) const;
    std::size_t cells(int o) const;
    std::size_t total_cells() const;

    double* plane(int o, int a) { return data_.data() + plane_off_[o] + a * cells(o); }
    const double* plane(int o, int a) const { return data_.data() + plane_off_[o] + a * cells(o); }

    std::size_t cidx(int o, int x, int y, int z) const {
        auto s = osize(o);
        return (static_cast<std::size_t>(x) * s[1] + y) * s[2] + z;
    }
    double& at(int o, int a, int x, int y, int z) { return plane(o, a)[cidx(o, x, y, z)]; }
    double at(int o, int a, int x, int y, int z) const { return plane(o, a)[cidx(o, x, y, z)]; }

    double* raw() { return data_.data(); }
    const double* raw() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    void zero();
    /// Zero all cells lying inside the boundary planes (Dirichlet storage
    /// contract). No-op for periodic grids.
    void clamp_tangential();
    bool tangential_is_zero(double tol = 0.0) const;

    void fill_random(std::uint64_t seed, double amplitude);
    bool finite() const;
    double max_cell_norm() const;

    FormField& operator+=(const FormField& o);
    FormField& operator-=(const FormField& o);
    FormField& operator*=(double a);

  private:
    int degree_ = 0;
    GridSpec grid_;
    GroupSpec group_;
    std::array<std::size_t, 3> plane_off_{0, 0, 0};
    std::vector<double> data_;
};

void check_same_shape(const FormField& a, const FormField& b, const char* what);

/// y += a*x
void add_scaled(FormField& y, const FormField& x, double a);

/// Weighted L2 pairing: h^3 * sum over cells of <a(cell), b(cell)>_k.
double inner(const FormField& a, const FormField& b);
double l2_norm(const FormField& a);

/// Lp norm with per-cell Lie norm; p in {2, 3, 6, 6/5, inf} (inf as
/// std::numeric_limits<double>::infinity()).
double lp_norm(const FormField& a, double p);

}  // namespace ymflow
