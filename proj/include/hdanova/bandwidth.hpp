#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hdanova/panel.hpp"
#include "hdanova/statistic.hpp"
#include "hdanova/variance.hpp"

namespace hdanova {

// Candidate grid for the (B, B1) search plus the subsample ratio and the
// pilot band the reference statistic is computed at.
struct BandGrid {
    std::vector<std::size_t> lower_candidates;    // S_B
    std::vector<std::size_t> upper_offsets;       // B1 = B + offset
    double beta = 0.3;
    BandConfig pilot{10, 15};
};

// Default grid for a panel with minimum group length Tmin: S_B runs from 2
// to min(Tmin^0.7, Tmin/4) on a ~1.4x ladder, offsets {3,5,8,13,21} capped
// at Tmin-1. The cap follows the magnitudes the selection is expected to
// reach in practice rather than the asymptotic rate, which is vacuous at
// desk-scale T.
BandGrid default_band_grid(std::size_t min_length);

// Banded self-statistic of one group at (b, b1).
double zhat(const Matrix& x, const BandConfig& band);

// Subsampled statistic on the prefix of length floor(beta T) with both
// bandwidths shrunk by beta. Empty when the shrunk band is inadmissible.
std::optional<double> zhat_subsample(const Matrix& x, const BandConfig& band, double beta);

struct BandSelection {
    BandConfig band;
    double objective = 0.0;
};

// Grid search minimizing sum_k |Z_k - Z-dagger_k(B,B1)| with Z_k computed
// once at the pilot band. Near-ties (within 1e-12 of the running best,
// relative to the statistic scale) resolve toward smaller B, then smaller
// B1. Throws NoAdmissibleBandwidth when every candidate is skipped.
BandSelection select_bands(const Panel& panel, const BandGrid& grid);

// Automatic weight bandwidth: Politis-White optimal block length (with the
// Patton correction) of the concatenated second-order residuals, clamped to
// [2, N/3].
double select_h(const SecondOrderResiduals& sor);

// Politis-White stationary-bootstrap block length of a scalar series.
double politis_white_block_length(std::span<const double> series);

}  // namespace hdanova
