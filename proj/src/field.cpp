#include "ymflow/field.hpp"

#include <cmath>
#include <limits>

#include "ymflow/kernels.hpp"

namespace ymflow {

FormField::FormField(int degree, const GridSpec& grid, const GroupSpec& group)
    : degree_(degree), grid_(grid), group_(group) {
    if (degree < 0 || degree > 3) throw std::invalid_argument("FormField: degree must be 0..3");
    grid.validate();
    std::size_t off = 0;
    for (int o = 0; o < n_orientations(degree_); ++o) {
        plane_off_[o] = off;
        off += cells(o) * group_.dim_k;
    }
    data_.assign(off, 0.0);
}

std::array<int, 3> FormField::osize(int o) const {
    int mask = orient_mask(degree_, o);
    std::array<int, 3> s;
    for (int i = 0; i < 3; ++i) {
        bool spans = (mask >> i) & 1;
        s[i] = (grid_.periodic() || spans) ? grid_.n[i] : grid_.n[i] + 1;
    }
    return s;
}

std::size_t FormField::cells(int o) const {
    auto s = osize(o);
    return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

std::size_t FormField::total_cells() const {
    std::size_t t = 0;
    for (int o = 0; o < n_orientations(degree_); ++o) t += cells(o);
    return t;
}

void FormField::zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void FormField::clamp_tangential() {
    if (grid_.bc != Bc::Dirichlet) return;
    for (int o = 0; o < n_orientations(degree_); ++o) {
        int mask = orient_mask(degree_, o);
        auto s = osize(o);
        for (int a = 0; a < dim_k(); ++a) {
            double* p = plane(o, a);
            for (int x = 0; x < s[0]; ++x)
                for (int y = 0; y < s[1]; ++y)
                    for (int z = 0; z < s[2]; ++z) {
                        bool bnd = (!((mask >> 0) & 1) && (x == 0 || x == grid_.n[0])) ||
                                   (!((mask >> 1) & 1) && (y == 0 || y == grid_.n[1])) ||
                                   (!((mask >> 2) & 1) && (z == 0 || z == grid_.n[2]));
                        if (bnd) p[cidx(o, x, y, z)] = 0.0;
                    }
        }
    }
}

bool FormField::tangential_is_zero(double tol) const {
    if (grid_.bc != Bc::Dirichlet) return true;
    for (int o = 0; o < n_orientations(degree_); ++o) {
        int mask = orient_mask(degree_, o);
        auto s = osize(o);
        for (int a = 0; a < dim_k(); ++a) {
            const double* p = plane(o, a);
            for (int x = 0; x < s[0]; ++x)
                for (int y = 0; y < s[1]; ++y)
                    for (int z = 0; z < s[2]; ++z) {
                        bool bnd = (!((mask >> 0) & 1) && (x == 0 || x == grid_.n[0])) ||
                                   (!((mask >> 1) & 1) && (y == 0 || y == grid_.n[1])) ||
                                   (!((mask >> 2) & 1) && (z == 0 || z == grid_.n[2]));
                        if (bnd && std::abs(p[cidx(o, x, y, z)]) > tol) return false;
                    }
        }
    }
    return true;
}

void FormField::fill_random(std::uint64_t seed, double amplitude) {
    std::uint64_t st = seed ^ 0x9e3779b97f4a7c15ull;
    for (auto& v : data_) v = amplitude * gaussian(st);
    clamp_tangential();
}

bool FormField::finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double FormField::max_cell_norm() const {
    double best = 0.0;
    for (int o = 0; o < n_orientations(degree_); ++o) {
        std::size_t nc = cells(o);
        for (std::size_t i = 0; i < nc; ++i) {
            double s = 0.0;
            for (int a = 0; a < dim_k(); ++a) {
                double v = plane(o, a)[i];
                s += v * v;
            }
            best = std::max(best, s);
        }
    }
    return std::sqrt(best);
}

FormField& FormField::operator+=(const FormField& o) {
    check_same_shape(*this, o, "+=");
    kern::add_scaled(data_.data(), o.data_.data(), 1.0, data_.size());
    return *this;
}

FormField& FormField::operator-=(const FormField& o) {
    check_same_shape(*this, o, "-=");
    kern::add_scaled(data_.data(), o.data_.data(), -1.0, data_.size());
    return *this;
}

FormField& FormField::operator*=(double a) {
    kern::scale(data_.data(), a, data_.size());
    return *this;
}

void check_same_shape(const FormField& a, const FormField& b, const char* what) {
    if (a.degree() != b.degree() || !(a.grid() == b.grid()) || a.dim_k() != b.dim_k())
        throw std::invalid_argument(std::string(what) + ": field shape mismatch");
}

void add_scaled(FormField& y, const FormField& x, double a) {
    check_same_shape(y, x, "add_scaled");
    kern::add_scaled(y.raw(), x.raw(), a, y.size());
}

double inner(const FormField& a, const FormField& b) {
    check_same_shape(a, b, "inner");
    double h = a.grid().h;
    return h * h * h * kern::dot(a.raw(), b.raw(), a.size());
}

double l2_norm(const FormField& a) {
    double h = a.grid().h;
    return std::sqrt(h * h * h * kern::sumsq(a.raw(), a.size()));
}

double lp_norm(const FormField& a, double p) {
    const double inf = std::numeric_limits<double>::infinity();
    if (p == 2.0) return l2_norm(a);
    if (p == inf) return a.max_cell_norm();
    if (!(p == 3.0 || p == 6.0 || p == 1.2))
        throw std::invalid_argument("lp_norm: exponent must be one of 2, 3, 6, 6/5, inf");
    double h = a.grid().h;
    double w = h * h * h;
    double acc = 0.0;
    for (int o = 0; o < n_orientations(a.degree()); ++o) {
        std::size_t nc = a.cells(o);
        for (std::size_t i = 0; i < nc; ++i) {
            double s = 0.0;
            for (int c = 0; c < a.dim_k(); ++c) {
                double v = a.plane(o, c)[i];
                s += v * v;
            }
            acc += w * std::pow(s, 0.5 * p);
        }
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace ymflow
