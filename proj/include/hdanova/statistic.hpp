#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdanova/matrix.hpp"
#include "hdanova/panel.hpp"

namespace hdanova {

// Lower/upper lag bandwidths of the banded statistic, in time-lag units.
struct BandConfig {
    std::size_t lower = 1;  // B
    std::size_t upper = 2;  // B1

    bool valid_for(std::size_t series_length) const {
        return lower >= 1 && lower < upper && upper <= series_length - 1;
    }
};

// Throws BandwidthError unless 1 <= B < B1 <= T-1.
void require_band(const BandConfig& band, std::size_t series_length);

// Clamps B1 to min_k T_k - 1. Inputs above that are accepted; `clamped` is
// set so callers can surface a warning. B >= the clamped B1 is an error.
BandConfig effective_band(const BandConfig& band, std::size_t min_length, bool* clamped = nullptr);

struct StatisticValue {
    double rhat = 0.0;               // sum of per-group statistics
    std::vector<double> per_group;   // R-hat_k for k = 2..K
    double scaled = 0.0;             // sqrt(Tmin (B1-B)) * rhat
    BandConfig band;                 // effective band used
    bool band_clamped = false;
};

// Number of ordered pairs (t1, t2) in [1,T]^2 with B <= |t1-t2| <= B1:
// (2T - B - B1)(B1 - B + 1).
std::int64_t pair_count(std::size_t series_length, const BandConfig& band);

// Sum over ordered banded pairs of row dot products, computed with a
// sliding window of the running row sum (O(T d)); agrees with the naive
// O(T^2 d) double loop to accumulation tolerance.
double banded_cross_sum(const Matrix& x, const BandConfig& band);

// Full double sum of cross-group row dot products, via the two row-sum
// vectors.
double cross_group_sum(const Matrix& group_k, const Matrix& group_1);

// Per-group statistic: banded terms of groups k and 1, minus twice the
// normalized cross-group sum.
double rhat_k(const Matrix& group_k, const Matrix& group_1, const BandConfig& band);

// Banded ANOVA statistic over the whole panel, plus the scaled version
// sqrt(Tmin (B1-B)) R-hat used for the bootstrap comparison.
StatisticValue rhat(const Panel& panel, const BandConfig& band);

}  // namespace hdanova
