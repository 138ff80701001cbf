#include <doctest.h>

#include <cmath>
#include <vector>

#include "ymflow/kernels.hpp"
#include "ymflow/lie.hpp"

using namespace ymflow;

namespace {

std::vector<double> randvec(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    std::uint64_t st = seed;
    for (auto& x : v) x = gaussian(st);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

#if defined(__x86_64__) || defined(_M_X64)

TEST_CASE("avx2 equivalence") {
    if (!kern::avx2_available()) {
        MESSAGE("avx2 not available on this host; skipping");
        return;
    }
    const std::size_t n = 1021;  // odd length exercises the tail loop
    auto x = randvec(n, 1), y0 = randvec(n, 2);

    SUBCASE("axpby is bit-identical") {
        auto ys = y0, yv = y0;
        kern::scalar::axpby(1.7, x.data(), -0.3, ys.data(), n);
        kern::avx2::axpby(1.7, x.data(), -0.3, yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == yv[i]);
    }
    SUBCASE("add_scaled is bit-identical") {
        auto ys = y0, yv = y0;
        kern::scalar::add_scaled(ys.data(), x.data(), 0.37, n);
        kern::avx2::add_scaled(yv.data(), x.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == yv[i]);
    }
    SUBCASE("rk4_combine is bit-identical") {
        auto k1 = randvec(n, 3), k2 = randvec(n, 4), k3 = randvec(n, 5), k4 = randvec(n, 6);
        auto ys = y0, yv = y0;
        kern::scalar::rk4_combine(ys.data(), k1.data(), k2.data(), k3.data(), k4.data(), 0.01, n);
        kern::avx2::rk4_combine(yv.data(), k1.data(), k2.data(), k3.data(), k4.data(), 0.01, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == yv[i]);
    }
    SUBCASE("reductions agree to rounding") {
        double ss = kern::scalar::sumsq(x.data(), n);
        double sv = kern::avx2::sumsq(x.data(), n);
        CHECK(std::abs(ss - sv) <= 1e-13 * ss);
        double ds = kern::scalar::dot(x.data(), y0.data(), n);
        double dv = kern::avx2::dot(x.data(), y0.data(), n);
        CHECK(std::abs(ds - dv) <= 1e-13 * (std::abs(ds) + 1.0));
    }
    SUBCASE("cross3_acc matches") {
        auto a0 = randvec(n, 7), a1 = randvec(n, 8), a2 = randvec(n, 9);
        auto b0 = randvec(n, 10), b1 = randvec(n, 11), b2 = randvec(n, 12);
        auto os0 = randvec(n, 13), os1 = randvec(n, 14), os2 = randvec(n, 15);
        auto ov0 = os0, ov1 = os1, ov2 = os2;
        kern::scalar::cross3_acc(os0.data(), os1.data(), os2.data(), a0.data(), a1.data(),
                                 a2.data(), b0.data(), b1.data(), b2.data(), -1.25, n);
        kern::avx2::cross3_acc(ov0.data(), ov1.data(), ov2.data(), a0.data(), a1.data(),
                               a2.data(), b0.data(), b1.data(), b2.data(), -1.25, n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(os0[i] - ov0[i]) <= 1e-15 * (std::abs(os0[i]) + 1.0));
            CHECK(std::abs(os1[i] - ov1[i]) <= 1e-15 * (std::abs(os1[i]) + 1.0));
            CHECK(std::abs(os2[i] - ov2[i]) <= 1e-15 * (std::abs(os2[i]) + 1.0));
        }
    }
    SUBCASE("mul_acc is bit-identical") {
        auto os = y0, ov = y0;
        kern::scalar::mul_acc(os.data(), x.data(), y0.data(), 0.5, n);
        kern::avx2::mul_acc(ov.data(), x.data(), y0.data(), 0.5, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(os[i] == ov[i]);
    }
}

#endif

TEST_CASE("scalar reference sanity") {
    std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    kern::scalar::axpby(2.0, x.data(), 1.0, y.data(), 3);
    CHECK(y[0] == 6.0);
    CHECK(y[2] == 12.0);
    CHECK(kern::scalar::sumsq(x.data(), 3) == doctest::Approx(14.0));
    CHECK(kern::scalar::dot(x.data(), y.data(), 3) == doctest::Approx(6.0 + 2 * 9 + 3 * 12));
}

TEST_CASE("dispatch reports a backend") {
    CHECK((kern::active_backend() == "scalar" || kern::active_backend() == "avx2"));
}

}  // TEST_SUITE
