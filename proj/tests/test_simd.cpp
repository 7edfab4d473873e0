#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "hdanova/simd.hpp"

using namespace hdanova;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    std::vector<double> v(n);
    for (double& x : v) x = unif(rng);
    return v;
}

// Runs fn under both dispatch levels and hands back the two results.
template <typename Fn>
auto both_levels(Fn&& fn) {
    auto prev = simd::force_isa(simd::IsaLevel::Scalar);
    auto scalar = fn();
    simd::force_isa(simd::detected_isa());
    auto vectorized = fn();
    simd::force_isa(prev);
    return std::pair{scalar, vectorized};
}

}  // namespace

TEST_CASE("dot agrees across dispatch levels") {
    std::mt19937_64 rng(1);
    for (std::size_t n : {0, 1, 3, 4, 7, 8, 17, 250, 1001}) {
        auto a = random_vec(n, rng);
        auto b = random_vec(n, rng);
        auto [s, v] = both_levels([&] { return simd::dot(a, b); });
        CHECK(v == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("add and sub agree across dispatch levels") {
    std::mt19937_64 rng(2);
    for (std::size_t n : {1, 5, 8, 63, 200}) {
        auto x = random_vec(n, rng);
        auto acc0 = random_vec(n, rng);
        auto [s, v] = both_levels([&] {
            auto acc = acc0;
            simd::add(acc, x);
            simd::sub(acc, x);
            simd::add(acc, x);
            return acc;
        });
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(v[i] == doctest::Approx(s[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("axpy agrees across dispatch levels") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {1, 4, 9, 128, 333}) {
        auto x = random_vec(n, rng);
        auto y0 = random_vec(n, rng);
        auto [s, v] = both_levels([&] {
            auto y = y0;
            simd::axpy(2.5, x, y);
            return y;
        });
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(v[i] == doctest::Approx(s[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("kahan accumulation agrees across dispatch levels and compensates") {
    const std::size_t n = 16;
    auto [s, v] = both_levels([&] {
        std::vector<double> acc(n, 0.0), comp(n, 0.0);
        std::vector<double> big(n, 1e16), tiny(n, 1.0), neg(n, -1e16);
        simd::kahan_add(acc, comp, big);
        for (int r = 0; r < 10; ++r) simd::kahan_add(acc, comp, tiny);
        simd::kahan_add(acc, comp, neg);
        return acc;
    });
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(s[i] == doctest::Approx(10.0));  // naive summation would lose the 1s
        CHECK(v[i] == doctest::Approx(s[i]).epsilon(1e-15));
    }
}

TEST_CASE("force_isa falls back to scalar when the level is unavailable") {
    auto prev = simd::force_isa(simd::IsaLevel::Avx2);
    CHECK((simd::active_isa() == simd::detected_isa() ||
           simd::active_isa() == simd::IsaLevel::Scalar));
    simd::force_isa(prev);
}
