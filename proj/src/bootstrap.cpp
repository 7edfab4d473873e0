#include "hdanova/bootstrap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include "hdanova/bandwidth.hpp"
#include "hdanova/errors.hpp"
#include "hdanova/parallel.hpp"
#include "hdanova/rng.hpp"
#include "hdanova/simd.hpp"

namespace hdanova {

namespace {

// Scaling c_k = sqrt(Tmin (B1-B)) / (V_k sqrt(d)) from the bootstrap
// statistic definition; the k = 1 term additionally carries (K-1).
double group_scaling(std::size_t group_length, const BandConfig& band, std::size_t dim,
                     std::size_t min_length) {
    double v = static_cast<double>(pair_count(group_length, band));
    double gap = static_cast<double>(band.upper - band.lower);
    return std::sqrt(static_cast<double>(min_length) * gap) /
           (v * std::sqrt(static_cast<double>(dim)));
}

// theta' G theta through the Toeplitz lag sums (exact, no factor needed).
double toeplitz_quadratic(const std::vector<double>& theta, const ToeplitzGram& g) {
    const std::size_t n = theta.size();
    std::span<const double> th(theta);
    double acc = g.entry[0] * simd::dot(th, th);
    for (std::size_t q = 1; q < n; ++q) {
        double w = g.entry[q];
        if (w < 1e-300) break;
        acc += 2.0 * w * simd::dot(th.subspan(0, n - q), th.subspan(q));
    }
    return acc;
}

}  // namespace

std::vector<double> sample_weights(std::size_t length, const ToeplitzGram& gram,
                                   std::mt19937_64& rng) {
    if (gram.size != length) {
        throw ShapeMismatch("gram size " + std::to_string(gram.size) +
                            " does not match requested length " + std::to_string(length));
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(length);
    for (double& v : z) v = normal(rng);
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = simd::dot(gram.factor.row(i).subspan(0, i + 1),
                           std::span<const double>(z).subspan(0, i + 1));
    }
    return out;
}

double bootstrap_statistic(const SecondOrderResiduals& sor,
                           const std::vector<std::vector<double>>& weights,
                           const std::vector<std::size_t>& group_lengths, std::size_t dim,
                           std::size_t min_length) {
    const std::size_t K = sor.per_group.size();
    if (weights.size() != K || group_lengths.size() != K) {
        throw ShapeMismatch("weights/lengths must cover all K groups");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (weights[k].size() != sor.per_group[k].size()) {
            throw ShapeMismatch("group " + std::to_string(k + 1) + " weights length " +
                                std::to_string(weights[k].size()) + ", expected " +
                                std::to_string(sor.per_group[k].size()));
        }
        double ck = group_scaling(group_lengths[k], sor.band, dim, min_length);
        double mult = (k == 0) ? static_cast<double>(K - 1) : 1.0;
        total += 2.0 * mult * ck * simd::dot(sor.per_group[k], weights[k]);
    }
    return total;
}

std::pair<double, std::size_t> empirical_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw InvalidArgument("empirical quantile of empty sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
    std::sort(values.begin(), values.end());
    const std::size_t u = values.size();
    const auto ud = static_cast<double>(u);
    auto v = static_cast<std::size_t>(std::ceil((1.0 - alpha) * ud));
    if (v < 1) v = 1;
    while (v > 1 && static_cast<double>(v - 1) / ud >= 1.0 - alpha) --v;
    while (v < u && static_cast<double>(v) / ud < 1.0 - alpha) ++v;
    return {values[v - 1], v};
}

double conditional_bootstrap_variance(const SecondOrderResiduals& sor,
                                      const std::vector<ToeplitzGram>& grams,
                                      const std::vector<std::size_t>& group_lengths,
                                      std::size_t dim, std::size_t min_length) {
    const std::size_t K = sor.per_group.size();
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        double ck = group_scaling(group_lengths[k], sor.band, dim, min_length);
        double mult = (k == 0) ? static_cast<double>(K - 1) : 1.0;
        total += 4.0 * mult * mult * ck * ck * toeplitz_quadratic(sor.per_group[k], grams[k]);
    }
    return total;
}

TestReport run_test(const Panel& panel, const TestConfig& config) {
    auto t_start = std::chrono::steady_clock::now();
    validate_panel(panel);
    if (config.boot_count < 2) throw InvalidArgument("boot count must be >= 2");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw InvalidArgument("alpha must be in (0, 1)");
    }

    TestReport report;
    report.boot_count = config.boot_count;
    report.alpha = config.alpha;
    report.seed = config.seed;

    const std::size_t min_t = panel.min_length();
    BandConfig band;
    if (config.auto_bandwidth) {
        band = select_bands(panel, default_band_grid(min_t)).band;
    } else {
        bool clamped = false;
        band = effective_band(config.band, min_t, &clamped);
        if (clamped) {
            report.warnings.push_back("B1 clamped to min T_k - 1 = " +
                                      std::to_string(band.upper));
        }
        if (band.lower >= band.upper) {
            throw BandwidthError("the test needs B < B1 after clamping, got B=" +
                                 std::to_string(band.lower) + " B1=" +
                                 std::to_string(band.upper));
        }
    }

    StatisticValue stat = rhat(panel, band);
    report.rhat = stat.rhat;
    report.per_group = stat.per_group;
    report.statistic = stat.scaled;
    report.band = stat.band;

    auto [means, residuals] = demean(panel);
    SecondOrderResiduals sor = second_order_residuals(residuals, stat.band);

    double h = config.weight_bandwidth;
    if (config.auto_bandwidth && !(h > 0.0)) {
        // The theory wants the weight correlation length well beyond B1; at
        // desk scale the block-length rule alone lands near 2 on weakly
        // correlated residuals, so floor it at 2.5 B1 (the ratio the paper's
        // reported selections cluster around).
        h = std::max(select_h(sor), 2.5 * static_cast<double>(stat.band.upper));
    }
    if (!(h > 0.0)) throw InvalidArgument("weight bandwidth H must be > 0");
    report.weight_bandwidth = h;

    const std::size_t K = panel.group_count();
    std::vector<std::size_t> lengths(K);
    for (std::size_t k = 0; k < K; ++k) lengths[k] = panel.length(k);

    // One factorization per distinct weight-vector length.
    std::map<std::size_t, ToeplitzGram> gram_cache;
    std::vector<const ToeplitzGram*> grams(K);
    for (std::size_t k = 0; k < K; ++k) {
        std::size_t n = lengths[k] - stat.band.lower;
        auto it = gram_cache.find(n);
        if (it == gram_cache.end()) {
            it = gram_cache.emplace(n, gram(config.kernel, n, h)).first;
        }
        grams[k] = &it->second;
    }

    std::vector<double> draws(config.boot_count);
    parallel_for(config.boot_count, config.threads, [&](std::size_t u) {
        std::vector<std::vector<double>> weights(K);
        for (std::size_t k = 0; k < K; ++k) {
            auto rng = make_stream(config.seed, purpose_tag(StreamPurpose::BootstrapWeights), u,
                                   k);
            weights[k] = sample_weights(lengths[k] - stat.band.lower, *grams[k], rng);
        }
        draws[u] = bootstrap_statistic(sor, weights, lengths, panel.dim(), min_t);
    });

    bool all_same = std::all_of(draws.begin(), draws.end(),
                                [&](double v) { return v == draws.front(); });
    if (all_same) {
        report.warnings.push_back("DegenerateVariance: all bootstrap draws identical");
    }

    auto [q, v] = empirical_quantile(draws, config.alpha);
    report.quantile = q;
    (void)v;
    report.reject = report.statistic >= report.quantile;

    auto t_end = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();
    return report;
}

}  // namespace hdanova
