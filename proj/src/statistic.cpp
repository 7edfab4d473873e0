#include "hdanova/statistic.hpp"

#include <cmath>
#include <vector>

#include "hdanova/errors.hpp"
#include "hdanova/simd.hpp"

namespace hdanova {

// The mask primitives accept the degenerate single-lag band B == B1; the
// test pipeline itself requires a positive gap (checked in run_test).
void require_band(const BandConfig& band, std::size_t series_length) {
    if (band.lower < 1 || band.lower > band.upper) {
        throw BandwidthError("need 1 <= B <= B1, got B=" + std::to_string(band.lower) +
                             " B1=" + std::to_string(band.upper));
    }
    if (series_length < 2 || band.upper > series_length - 1) {
        throw BandwidthError("B1=" + std::to_string(band.upper) + " exceeds T-1 for T=" +
                             std::to_string(series_length));
    }
}

BandConfig effective_band(const BandConfig& band, std::size_t min_length, bool* clamped) {
    if (clamped) *clamped = false;
    BandConfig eff = band;
    if (min_length >= 2 && eff.upper > min_length - 1) {
        eff.upper = min_length - 1;
        if (clamped) *clamped = true;
    }
    require_band(eff, min_length);
    return eff;
}

std::int64_t pair_count(std::size_t series_length, const BandConfig& band) {
    require_band(band, series_length);
    auto T = static_cast<std::int64_t>(series_length);
    auto B = static_cast<std::int64_t>(band.lower);
    auto B1 = static_cast<std::int64_t>(band.upper);
    return (2 * T - B - B1) * (B1 - B + 1);
}

double banded_cross_sum(const Matrix& x, const BandConfig& band) {
    require_band(band, x.rows());
    const std::size_t T = x.rows();
    const std::size_t d = x.cols();
    const std::size_t B = band.lower;
    const std::size_t B1 = band.upper;

    // W holds sum of rows in the window [max(1, t-B1), t-B] (1-based); each
    // step slides the window by one: row t-B enters, row t-B1-1 leaves.
    std::vector<double> window(d, 0.0);
    double total = 0.0;
    for (std::size_t t = B + 1; t <= T; ++t) {
        simd::add(window, x.row(t - B - 1));
        if (t > B1 + 1) {
            simd::sub(window, x.row(t - B1 - 2));
        }
        total += simd::dot(x.row(t - 1), window);
    }
    // The ordered-pair sum is twice the t2 < t1 half by symmetry.
    return 2.0 * total;
}

double cross_group_sum(const Matrix& group_k, const Matrix& group_1) {
    if (group_k.cols() != group_1.cols()) {
        throw ShapeMismatch("cross-group sum needs a shared d; got " +
                            std::to_string(group_k.cols()) + " vs " +
                            std::to_string(group_1.cols()));
    }
    const std::size_t d = group_k.cols();
    std::vector<double> sum_k(d, 0.0);
    std::vector<double> sum_1(d, 0.0);
    for (std::size_t t = 0; t < group_k.rows(); ++t) simd::add(sum_k, group_k.row(t));
    for (std::size_t t = 0; t < group_1.rows(); ++t) simd::add(sum_1, group_1.row(t));
    return simd::dot(sum_k, sum_1);
}

double rhat_k(const Matrix& group_k, const Matrix& group_1, const BandConfig& band) {
    if (group_k.cols() != group_1.cols()) {
        throw ShapeMismatch("groups disagree on d");
    }
    require_band(band, group_k.rows());
    require_band(band, group_1.rows());
    const double sqrt_d = std::sqrt(static_cast<double>(group_k.cols()));
    const double vk = static_cast<double>(pair_count(group_k.rows(), band));
    const double v1 = static_cast<double>(pair_count(group_1.rows(), band));
    const double tk = static_cast<double>(group_k.rows());
    const double t1 = static_cast<double>(group_1.rows());
    return banded_cross_sum(group_k, band) / (vk * sqrt_d) +
           banded_cross_sum(group_1, band) / (v1 * sqrt_d) -
           2.0 * cross_group_sum(group_k, group_1) / (tk * t1 * sqrt_d);
}

StatisticValue rhat(const Panel& panel, const BandConfig& band) {
    validate_panel(panel);
    StatisticValue out;
    out.band = effective_band(band, panel.min_length(), &out.band_clamped);

    const std::size_t K = panel.group_count();
    out.per_group.resize(K - 1);
    // Group-1 pieces are shared across every R-hat_k; compute them once.
    const double sqrt_d = std::sqrt(static_cast<double>(panel.dim()));
    const Matrix& g1 = panel.groups.front();
    const double v1 = static_cast<double>(pair_count(g1.rows(), out.band));
    const double bcs1_term = banded_cross_sum(g1, out.band) / (v1 * sqrt_d);
    const double t1 = static_cast<double>(g1.rows());

    for (std::size_t k = 1; k < K; ++k) {
        const Matrix& gk = panel.groups[k];
        const double vk = static_cast<double>(pair_count(gk.rows(), out.band));
        const double tk = static_cast<double>(gk.rows());
        out.per_group[k - 1] = banded_cross_sum(gk, out.band) / (vk * sqrt_d) + bcs1_term -
                               2.0 * cross_group_sum(gk, g1) / (tk * t1 * sqrt_d);
    }
    out.rhat = 0.0;
    for (double v : out.per_group) out.rhat += v;
    const double gap = static_cast<double>(out.band.upper - out.band.lower);
    out.scaled = std::sqrt(static_cast<double>(panel.min_length()) * gap) * out.rhat;
    return out;
}

}  // namespace hdanova
