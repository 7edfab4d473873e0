#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hdanova/kernel.hpp"
#include "hdanova/panel.hpp"
#include "hdanova/statistic.hpp"
#include "hdanova/variance.hpp"

namespace hdanova {

struct TestConfig {
    BandConfig band;
    double weight_bandwidth = 0.0;  // H; <= 0 with auto_bandwidth -> selected
    KernelSpec kernel;
    std::size_t boot_count = 100;   // U
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool auto_bandwidth = false;
    unsigned threads = 1;
};

struct BootstrapDraws {
    std::vector<double> values;  // sorted ascending
    double quantile = 0.0;       // v-th order statistic
    std::size_t order_index = 0; // v (1-based)
};

struct TestReport {
    double statistic = 0.0;   // sqrt(Tmin (B1-B)) R-hat, the scale the draws live on
    double rhat = 0.0;
    std::vector<double> per_group;
    double quantile = 0.0;
    bool reject = false;
    BandConfig band;
    double weight_bandwidth = 0.0;
    std::size_t boot_count = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::vector<std::string> warnings;
};

// Draws one correlated weight vector: L z with z iid standard normal.
std::vector<double> sample_weights(std::size_t length, const ToeplitzGram& gram,
                                   std::mt19937_64& rng);

// One bootstrap statistic from per-group weight vectors aligned to
// t = B+1..T_k:
//   S* = 2 sum_{k=2..K} c_k sum_t theta_{t,k} w_{t,k}
//      + 2 (K-1) c_1 sum_t theta_{t,1} w_{t,1},
// with c_k = sqrt(Tmin (B1-B)) / (V_k sqrt(d)).
double bootstrap_statistic(const SecondOrderResiduals& sor,
                           const std::vector<std::vector<double>>& weights,
                           const std::vector<std::size_t>& group_lengths, std::size_t dim,
                           std::size_t min_length);

// Sorts ascending and returns the v-th order statistic with
// v = min{ x : x/U >= 1 - alpha }.
std::pair<double, std::size_t> empirical_quantile(std::vector<double> values, double alpha);

// Closed-form conditional variance of S* given the data:
//   4 sum_{k=2..K} c_k^2 theta_k' G_k theta_k + 4 (K-1)^2 c_1^2 theta_1' G_1 theta_1.
double conditional_bootstrap_variance(const SecondOrderResiduals& sor,
                                      const std::vector<ToeplitzGram>& grams,
                                      const std::vector<std::size_t>& group_lengths,
                                      std::size_t dim, std::size_t min_length);

// Full test: statistic, residuals, second-order residuals, U bootstrap
// draws on per-(replicate, group) substreams, empirical quantile, decision
// statistic >= quantile. Deterministic for a fixed seed regardless of
// thread count.
TestReport run_test(const Panel& panel, const TestConfig& config);

}  // namespace hdanova
