#pragma once

#include <cstddef>
#include <functional>
#include <string>

// Flat array kernels behind the field arithmetic. Scalar versions are the
// reference; AVX2 versions are selected at runtime when the CPU supports
// them (override with YMFLOW_SIMD=scalar|avx2). Element-wise kernels are
// structured so both paths round identically; reductions may differ in
// summation order only.

namespace ymflow::kern {

namespace scalar {
void axpby(double a, const double* x, double b, double* y, std::size_t n);
void scale(double* x, double a, std::size_t n);
void add_scaled(double* y, const double* x, double a, std::size_t n);  // y += a*x
void rk4_combine(double* y, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt6, std::size_t n);
double sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// out_c += s * (a x b)_c on three separate component planes (su(2) bracket).
void cross3_acc(double* o0, double* o1, double* o2, const double* a0, const double* a1,
                const double* a2, const double* b0, const double* b1, const double* b2,
                double s, std::size_t n);
void mul_acc(double* o, const double* x, const double* y, double s, std::size_t n);  // o += s*x.*y
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpby(double a, const double* x, double b, double* y, std::size_t n);
void scale(double* x, double a, std::size_t n);
void add_scaled(double* y, const double* x, double a, std::size_t n);
void rk4_combine(double* y, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt6, std::size_t n);
double sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void cross3_acc(double* o0, double* o1, double* o2, const double* a0, const double* a1,
                const double* a2, const double* b0, const double* b1, const double* b2,
                double s, std::size_t n);
void mul_acc(double* o, const double* x, const double* y, double s, std::size_t n);
}  // namespace avx2
#endif

bool avx2_available();

/// Name of the active backend ("scalar" or "avx2").
const std::string& active_backend();

/// Worker count from YMFLOW_WORKERS (default 1).
int worker_count();

/// Run fn over [0, n) split into contiguous slabs, one per worker. Slab
/// boundaries depend only on n and the worker count, and callers write
/// disjoint output ranges, so results are bit-identical for any count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Dispatched entry points.
void axpby(double a, const double* x, double b, double* y, std::size_t n);
void scale(double* x, double a, std::size_t n);
void add_scaled(double* y, const double* x, double a, std::size_t n);
void rk4_combine(double* y, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt6, std::size_t n);
double sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void cross3_acc(double* o0, double* o1, double* o2, const double* a0, const double* a1,
                const double* a2, const double* b0, const double* b1, const double* b2,
                double s, std::size_t n);
void mul_acc(double* o, const double* x, const double* y, double s, std::size_t n);

}  // namespace ymflow::kern
