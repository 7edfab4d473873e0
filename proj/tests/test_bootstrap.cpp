#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hdanova/bootstrap.hpp"
#include "hdanova/errors.hpp"
#include "hdanova/rng.hpp"
#include "oracles.hpp"

using namespace hdanova;

TEST_CASE("sample_weights of length one is a standard normal draw") {
    ToeplitzGram g = gram(KernelSpec{}, 1, 5.0);
    std::mt19937_64 rng(7);
    auto w = sample_weights(1, g, rng);
    std::mt19937_64 rng2(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    CHECK(w.size() == 1);
    CHECK(w[0] == doctest::Approx(normal(rng2) * g.factor(0, 0)).epsilon(1e-15));
}

TEST_CASE("sample_weights is deterministic for a fixed stream") {
    ToeplitzGram g = gram(KernelSpec{}, 20, 4.0);
    auto r1 = make_stream(99, 1, 2, 3);
    auto r2 = make_stream(99, 1, 2, 3);
    auto w1 = sample_weights(20, g, r1);
    auto w2 = sample_weights(20, g, r2);
    CHECK(w1 == w2);
    CHECK_THROWS_AS(sample_weights(19, g, r1), ShapeMismatch);
}

TEST_CASE("sample covariance of the weights matches the gram") {
    const std::size_t n = 50;
    const std::size_t draws = 100000;
    ToeplitzGram g = gram(KernelSpec{}, n, 10.0);
    std::mt19937_64 rng(1234);
    std::vector<double> acc(n * n, 0.0);
    for (std::size_t s = 0; s < draws; ++s) {
        auto w = sample_weights(n, g, rng);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) acc[i * n + j] += w[i] * w[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double sample_cov = acc[i * n + j] / static_cast<double>(draws);
            CHECK(std::abs(sample_cov - g(i, j)) < 0.02);
        }
    }
}

TEST_CASE("bootstrap_statistic vanishes on zero inputs") {
    SecondOrderResiduals sor;
    sor.band = {1, 2};
    sor.per_group = {{0.0, 0.0, 0.0}, {0.0, 0.0}};
    std::vector<std::vector<double>> weights = {{1.0, -2.0, 0.5}, {0.7, 0.9}};
    std::vector<std::size_t> lengths = {4, 3};
    CHECK(bootstrap_statistic(sor, weights, lengths, 5, 3) == 0.0);

    sor.per_group = {{1.0, 2.0, 3.0}, {4.0, 5.0}};
    weights = {{0.0, 0.0, 0.0}, {0.0, 0.0}};
    CHECK(bootstrap_statistic(sor, weights, lengths, 5, 3) == 0.0);

    weights = {{0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(bootstrap_statistic(sor, weights, lengths, 5, 3), ShapeMismatch);
}

TEST_CASE("bootstrap_statistic matches a from-scratch scalar composition") {
    // K = 2, T = 6 per group, d = 1, B = 1, B1 = 2
    SecondOrderResiduals sor;
    sor.band = {1, 2};
    sor.per_group = {{0.3, -0.7, 0.2, 1.1, -0.4}, {0.9, 0.1, -0.6, 0.5, 0.8}};
    std::vector<std::vector<double>> weights = {{0.25, -1.5, 0.75, 2.0, -0.3},
                                                {1.2, -0.2, 0.4, -0.9, 0.6}};
    std::vector<std::size_t> lengths = {6, 6};
    const std::size_t d = 1;
    const std::size_t tmin = 6;

    double v = (2.0 * 6 - 1 - 2) * (2 - 1 + 1);  // pair count at T=6
    double c = std::sqrt(6.0 * 1.0) / (v * std::sqrt(1.0));
    double sum_k = 0.0, sum_1 = 0.0;
    for (std::size_t t = 0; t < 5; ++t) {
        sum_1 += sor.per_group[0][t] * weights[0][t];
        sum_k += sor.per_group[1][t] * weights[1][t];
    }
    double expect = 2.0 * c * sum_k + 2.0 * (2 - 1) * c * sum_1;
    CHECK(bootstrap_statistic(sor, weights, lengths, d, tmin) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("empirical quantile order statistic") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(static_cast<double>(i));
    auto [q1, i1] = empirical_quantile(v, 0.05);
    CHECK(i1 == 95);
    CHECK(q1 == 95.0);

    auto [q2, i2] = empirical_quantile({3.0, 1.0, 2.0, 4.0}, 0.5);
    CHECK(i2 == 2);
    CHECK(q2 == 2.0);

    auto [q3, i3] = empirical_quantile(std::vector<double>(7, 4.2), 0.31);
    CHECK(q3 == 4.2);
    (void)i3;

    // alpha so small that v = U
    auto [q4, i4] = empirical_quantile({1.0, 2.0, 3.0}, 0.01);
    CHECK(i4 == 3);
    CHECK(q4 == 3.0);

    CHECK_THROWS_AS(empirical_quantile({}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(empirical_quantile({1.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(empirical_quantile({1.0}, 1.0), InvalidArgument);
}

TEST_CASE("quantile is nonincreasing in alpha") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> draws(501);
    for (double& v : draws) v = normal(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.01, 0.05, 0.1, 0.25, 0.5, 0.9}) {
        auto [q, idx] = empirical_quantile(draws, alpha);
        (void)idx;
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("closed-form conditional variance matches the draw variance") {
    std::mt19937_64 rng(56);
    Panel p;
    p.groups.push_back(oracles::random_matrix(40, 10, rng));
    p.groups.push_back(oracles::random_matrix(50, 10, rng));
    BandConfig band{2, 8};
    auto [means, residuals] = demean(p);
    auto sor = second_order_residuals(residuals, band);

    double h = 6.0;
    std::vector<ToeplitzGram> grams;
    grams.push_back(gram(KernelSpec{}, 38, h));
    grams.push_back(gram(KernelSpec{}, 48, h));
    std::vector<std::size_t> lengths = {40, 50};

    const std::size_t draws = 5000;
    std::vector<double> stats(draws);
    for (std::size_t u = 0; u < draws; ++u) {
        std::vector<std::vector<double>> w(2);
        for (std::size_t k = 0; k < 2; ++k) {
            auto stream = make_stream(77, purpose_tag(StreamPurpose::BootstrapWeights), u, k);
            w[k] = sample_weights(lengths[k] - band.lower, grams[k], stream);
        }
        stats[u] = bootstrap_statistic(sor, w, lengths, 10, 40);
    }
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= static_cast<double>(draws);
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    var /= static_cast<double>(draws - 1);

    double closed = conditional_bootstrap_variance(sor, grams, lengths, 10, 40);
    CHECK(var == doctest::Approx(closed).epsilon(0.10));
}

TEST_CASE("run_test on the all-zero panel rejects at the boundary with a warning") {
    Panel p;
    p.groups.assign(2, Matrix(10, 3, 0.0));
    TestConfig cfg;
    cfg.band = {1, 3};
    cfg.weight_bandwidth = 4.0;
    cfg.boot_count = 50;
    cfg.seed = 5;
    TestReport rep = run_test(p, cfg);
    CHECK(rep.statistic == 0.0);
    CHECK(rep.quantile == 0.0);
    CHECK(rep.reject);
    bool degenerate = false;
    for (const auto& w : rep.warnings) {
        if (w.find("DegenerateVariance") != std::string::npos) degenerate = true;
    }
    CHECK(degenerate);
}

TEST_CASE("run_test rejects under an enormous mean shift") {
    std::mt19937_64 rng(57);
    Panel p;
    p.groups.push_back(oracles::random_matrix(40, 16, rng));
    p.groups.push_back(oracles::random_matrix(45, 16, rng));
    for (std::size_t t = 0; t < 40; ++t) {
        for (auto& v : p.groups[0].row(t)) v += 500.0;
    }
    TestConfig cfg;
    cfg.band = {2, 7};
    cfg.weight_bandwidth = 10.0;
    cfg.boot_count = 100;
    cfg.seed = 6;
    TestReport rep = run_test(p, cfg);
    CHECK(rep.reject);
    CHECK(rep.statistic > rep.quantile);
}

TEST_CASE("run_test is deterministic and thread-count independent") {
    std::mt19937_64 rng(58);
    Panel p;
    p.groups.push_back(oracles::random_matrix(36, 8, rng));
    p.groups.push_back(oracles::random_matrix(30, 8, rng));
    TestConfig cfg;
    cfg.band = {2, 6};
    cfg.weight_bandwidth = 8.0;
    cfg.boot_count = 64;
    cfg.seed = 42;
    cfg.threads = 1;
    TestReport a = run_test(p, cfg);
    TestReport b = run_test(p, cfg);
    cfg.threads = 4;
    TestReport c = run_test(p, cfg);
    CHECK(a.statistic == b.statistic);
    CHECK(a.quantile == b.quantile);
    CHECK(a.reject == b.reject);
    CHECK(a.statistic == c.statistic);
    CHECK(a.quantile == c.quantile);
    CHECK(a.reject == c.reject);
}

TEST_CASE("bootstrap draws are invariant under matched group permutation") {
    std::mt19937_64 rng(59);
    Panel p;
    p.groups.push_back(oracles::random_matrix(30, 6, rng));
    p.groups.push_back(oracles::random_matrix(32, 6, rng));
    p.groups.push_back(oracles::random_matrix(34, 6, rng));
    BandConfig band{2, 5};
    auto [means, residuals] = demean(p);
    auto sor = second_order_residuals(residuals, band);

    std::vector<std::size_t> lengths = {30, 32, 34};
    std::vector<ToeplitzGram> grams;
    for (std::size_t k = 0; k < 3; ++k) grams.push_back(gram(KernelSpec{}, lengths[k] - 2, 5.0));

    std::vector<std::vector<double>> w(3);
    for (std::size_t k = 0; k < 3; ++k) {
        auto stream = make_stream(11, purpose_tag(StreamPurpose::BootstrapWeights), 0, k);
        w[k] = sample_weights(lengths[k] - 2, grams[k], stream);
    }
    double base = bootstrap_statistic(sor, w, lengths, 6, 30);

    // permute groups 2 and 3 together with their weights
    SecondOrderResiduals sor_p;
    sor_p.band = band;
    sor_p.per_group = {sor.per_group[0], sor.per_group[2], sor.per_group[1]};
    std::vector<std::vector<double>> w_p = {w[0], w[2], w[1]};
    std::vector<std::size_t> lengths_p = {30, 34, 32};
    double permuted = bootstrap_statistic(sor_p, w_p, lengths_p, 6, 30);
    CHECK(base == doctest::Approx(permuted).epsilon(1e-14));
}

TEST_CASE("run_test validates its configuration") {
    Panel p;
    p.groups.assign(2, Matrix(10, 3, 1.0));
    TestConfig cfg;
    cfg.band = {1, 3};
    cfg.weight_bandwidth = 4.0;
    cfg.boot_count = 1;
    CHECK_THROWS_AS(run_test(p, cfg), InvalidArgument);
    cfg.boot_count = 10;
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(run_test(p, cfg), InvalidArgument);
    cfg.alpha = 0.05;
    cfg.band = {9, 20};  // clamps to (9, 9): no gap left
    CHECK_THROWS_AS(run_test(p, cfg), BandwidthError);
}
