#include "ymflow/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace ymflow::kern {

// ---------------------------------------------------------------- scalar

namespace scalar {

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

void scale(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void add_scaled(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void rk4_combine(double* y, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt6, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        y[i] = std::fma(dt6, s, y[i]);
    }
}

double sumsq(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s = std::fma(x[i], x[i], s);
    return s;
}

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s = std::fma(x[i], y[i], s);
    return s;
}

void cross3_acc(double* o0, double* o1, double* o2, const double* a0, const double* a1,
                const double* a2, const double* b0, const double* b1, const double* b2,
                double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        o0[i] += s * (a1[i] * b2[i] - a2[i] * b1[i]);
        o1[i] += s * (a2[i] * b0[i] - a0[i] * b2[i]);
        o2[i] += s * (a0[i] * b1[i] - a1[i] * b0[i]);
    }
}

void mul_acc(double* o, const double* x, const double* y, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) o[i] = std::fma(s * x[i], y[i], o[i]);
}

}  // namespace scalar

// ------------------------------------------------------------------ avx2

#if defined(__x86_64__) || defined(_M_X64)

namespace avx2 {

__attribute__((target("avx2,fma"))) void axpby(double a, const double* x, double b, double* y,
                                               std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

__attribute__((target("avx2,fma"))) void scale(double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

__attribute__((target("avx2,fma"))) void add_scaled(double* y, const double* x, double a,
                                                    std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

__attribute__((target("avx2,fma"))) void rk4_combine(double* y, const double* k1,
                                                     const double* k2, const double* k3,
                                                     const double* k4, double dt6,
                                                     std::size_t n) {
    const __m256d two = _mm256_set1_pd(2.0), vd = _mm256_set1_pd(dt6);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_loadu_pd(k1 + i);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k2 + i), s);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k3 + i), s);
        s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vd, s, _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        double s = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        y[i] = std::fma(dt6, s, y[i]);
    }
}

__attribute__((target("avx2,fma"))) double sumsq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s = std::fma(x[i], x[i], s);
    return s;
}

__attribute__((target("avx2,fma"))) double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s = std::fma(x[i], y[i], s);
    return s;
}

__attribute__((target("avx2,fma"))) void cross3_acc(double* o0, double* o1, double* o2,
                                                    const double* a0, const double* a1,
                                                    const double* a2, const double* b0,
                                                    const double* b1, const double* b2, double s,
                                                    std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_loadu_pd(a0 + i), x1 = _mm256_loadu_pd(a1 + i),
                x2 = _mm256_loadu_pd(a2 + i);
        __m256d y0 = _mm256_loadu_pd(b0 + i), y1 = _mm256_loadu_pd(b1 + i),
                y2 = _mm256_loadu_pd(b2 + i);
        __m256d c0 = _mm256_sub_pd(_mm256_mul_pd(x1, y2), _mm256_mul_pd(x2, y1));
        __m256d c1 = _mm256_sub_pd(_mm256_mul_pd(x2, y0), _mm256_mul_pd(x0, y2));
        __m256d c2 = _mm256_sub_pd(_mm256_mul_pd(x0, y1), _mm256_mul_pd(x1, y0));
        _mm256_storeu_pd(o0 + i, _mm256_fmadd_pd(vs, c0, _mm256_loadu_pd(o0 + i)));
        _mm256_storeu_pd(o1 + i, _mm256_fmadd_pd(vs, c1, _mm256_loadu_pd(o1 + i)));
        _mm256_storeu_pd(o2 + i, _mm256_fmadd_pd(vs, c2, _mm256_loadu_pd(o2 + i)));
    }
    for (; i < n; ++i) {
        o0[i] += s * (a1[i] * b2[i] - a2[i] * b1[i]);
        o1[i] += s * (a2[i] * b0[i] - a0[i] * b2[i]);
        o2[i] += s * (a0[i] * b1[i] - a1[i] * b0[i]);
    }
}

__attribute__((target("avx2,fma"))) void mul_acc(double* o, const double* x, const double* y,
                                                 double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d sx = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
        __m256d vo = _mm256_fmadd_pd(sx, _mm256_loadu_pd(y + i), _mm256_loadu_pd(o + i));
        _mm256_storeu_pd(o + i, vo);
    }
    for (; i < n; ++i) o[i] = std::fma(s * x[i], y[i], o[i]);
}

}  // namespace avx2

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

bool avx2_available() { return false; }

#endif

// -------------------------------------------------------------- dispatch

namespace {

struct Backend {
    void (*axpby)(double, const double*, double, double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
    void (*add_scaled)(double*, const double*, double, std::size_t);
    void (*rk4_combine)(double*, const double*, const double*, const double*, const double*,
                        double, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*cross3_acc)(double*, double*, double*, const double*, const double*, const double*,
                       const double*, const double*, const double*, double, std::size_t);
    void (*mul_acc)(double*, const double*, const double*, double, std::size_t);
    std::string name;
};

Backend pick_backend() {
    Backend b{scalar::axpby, scalar::scale, scalar::add_scaled, scalar::rk4_combine,
              scalar::sumsq, scalar::dot,   scalar::cross3_acc, scalar::mul_acc,
              "scalar"};
    bool want_avk = avx2_available();
    if (const char* env = std::getenv("YMFLOW_SIMD")) {
        std::string v(env);
        if (v == "scalar") want_avk = false;
        else if (v == "avx2" && !avx2_available()) want_avk = false;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (want_avk)
        b = Backend{avx2::axpby, avx2::scale, avx2::add_scaled, avx2::rk4_combine,
                    avx2::sumsq, avx2::dot,   avx2::cross3_acc, avx2::mul_acc,
                    "avx2"};
#endif
    return b;
}

const Backend& backend() {
    static const Backend b = pick_backend();
    return b;
}

}  // namespace

const std::string& active_backend() { return backend().name; }

int worker_count() {
    static const int n = [] {
        if (const char* env = std::getenv("YMFLOW_WORKERS")) {
            int v = std::atoi(env);
            if (v >= 1 && v <= 64) return v;
        }
        return 1;
    }();
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const int w = worker_count();
    if (w <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::size_t chunk = (n + w - 1) / w;
    std::vector<std::thread> pool;
    for (int i = 1; i < w; ++i) {
        std::size_t b = i * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    fn(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
    backend().axpby(a, x, b, y, n);
}
void scale(double* x, double a, std::size_t n) { backend().scale(x, a, n); }
void add_scaled(double* y, const double* x, double a, std::size_t n) {
    backend().add_scaled(y, x, a, n);
}
void rk4_combine(double* y, const double* k1, const double* k2, const double* k3,
                 const double* k4, double dt6, std::size_t n) {
    backend().rk4_combine(y, k1, k2, k3, k4, dt6, n);
}
double sumsq(const double* x, std::size_t n) { return backend().sumsq(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return backend().dot(x, y, n); }
void cross3_acc(double* o0, double* o1, double* o2, const double* a0, const double* a1,
                const double* a2, const double* b0, const double* b1, const double* b2, double s,
                std::size_t n) {
    backend().cross3_acc(o0, o1, o2, a0, a1, a2, b0, b1, b2, s, n);
}
void mul_acc(double* o, const double* x, const double* y, double s, std::size_t n) {
    backend().mul_acc(o, x, y, s, n);
}

}  // namespace ymflow::kern
