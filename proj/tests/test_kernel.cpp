#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hdanova/errors.hpp"
#include "hdanova/kernel.hpp"
#include "oracles.hpp"

using namespace hdanova;

namespace {

std::vector<double> grid_0_10() {
    std::vector<double> g;
    for (int i = 0; i <= 100; ++i) g.push_back(0.1 * i);
    return g;
}

double half_at_zero(double x) { return x == 0.0 ? 0.5 : std::exp(-0.5 * x * x); }
double bump(double x) {
    double a = std::abs(x);
    if (a <= 1.0) return 1.0 - 0.5 * a * (1.0 - a);  // increasing on part of [0,1]
    return std::exp(-0.5 * x * x);
}

}  // namespace

TEST_CASE("gaussian kernel values") {
    KernelSpec spec;
    CHECK(kernel_eval(spec, 0.0) == 1.0);
    CHECK(kernel_eval(spec, 1.0) == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK(kernel_eval(spec, -2.0) == kernel_eval(spec, 2.0));
    CHECK(kernel_eval(spec, 2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK_THROWS_AS(kernel_eval(spec, std::numeric_limits<double>::quiet_NaN()),
                    InvalidArgument);
    CHECK_THROWS_AS(kernel_eval(spec, std::numeric_limits<double>::infinity()),
                    InvalidArgument);
}

TEST_CASE("kernel names round-trip") {
    CHECK(kernel_from_name("gaussian").kind == KernelKind::Gaussian);
    CHECK(kernel_name(KernelSpec{}) == std::string("gaussian"));
    CHECK_THROWS_AS(kernel_from_name("bartlett"), InvalidArgument);
}

TEST_CASE("gram of a single point is the identity") {
    ToeplitzGram g = gram(KernelSpec{}, 1, 7.0);
    CHECK(g(0, 0) == 1.0);
    CHECK(g.factor(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("gram approaches the all-ones matrix for huge bandwidth") {
    ToeplitzGram g = gram(KernelSpec{}, 3, 1e12);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(g(i, j) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("gram entries are toeplitz and unit diagonal") {
    ToeplitzGram g = gram(KernelSpec{}, 40, 6.0);
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(g(i, i) == 1.0);
        for (std::size_t j = 0; j < 40; ++j) {
            std::size_t lag = i >= j ? i - j : j - i;
            CHECK(g(i, j) == g.entry[lag]);
        }
    }
}

TEST_CASE("factor reproduces the gram within jitter tolerance") {
    for (double h : {1.0, 5.0, 50.0}) {
        ToeplitzGram g = gram(KernelSpec{}, 64, h);
        for (std::size_t i = 0; i < 64; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k <= j; ++k) acc += g.factor(i, k) * g.factor(j, k);
                double target = g(i, j) + (i == j ? g.jitter : 0.0);
                CHECK(acc == doctest::Approx(target).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("gram minimum eigenvalue stays above -1e-8") {
    for (std::size_t t : {64, 128}) {
        for (double h : {1.0, 5.0, 50.0, static_cast<double>(t)}) {
            ToeplitzGram g = gram(KernelSpec{}, t, h);
            double lmin = min_eigenvalue_symmetric(g.dense());
            CHECK(lmin >= -1e-8);
        }
    }
}

#if HDANOVA_HAVE_EIGEN
TEST_CASE("jacobi minimum eigenvalue matches an independent eigensolver") {
    std::mt19937_64 rng(21);
    for (std::size_t n : {3, 10, 33}) {
        Matrix a = oracles::random_matrix(n, n, rng);
        Matrix sym(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (a(i, j) + a(j, i));
        }
        CHECK(min_eigenvalue_symmetric(sym) ==
              doctest::Approx(oracles::min_eigenvalue(sym)).epsilon(1e-9));
    }
    ToeplitzGram g = gram(KernelSpec{}, 200, 50.0);
    double ours = min_eigenvalue_symmetric(g.dense());
    double reference = oracles::min_eigenvalue(g.dense());
    CHECK(ours >= -1e-8);
    CHECK(reference >= -1e-8);
    CHECK(std::abs(ours - reference) <= 1e-8);
}
#endif

TEST_CASE("admissibility check") {
    auto grid = grid_0_10();
    CHECK(check_admissible(KernelSpec{}, grid));
    CHECK_FALSE(check_admissible(&half_at_zero, grid));
    CHECK_FALSE(check_admissible(&bump, grid));
}

TEST_CASE("gram argument validation") {
    CHECK_THROWS_AS(gram(KernelSpec{}, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(gram(KernelSpec{}, 4, 0.0), InvalidArgument);
    CHECK_THROWS_AS(gram(KernelSpec{}, 4, -2.0), InvalidArgument);
}
