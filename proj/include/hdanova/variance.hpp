#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdanova/kernel.hpp"
#include "hdanova/panel.hpp"
#include "hdanova/statistic.hpp"

namespace hdanova {

// Second-order residuals: per group k, the windowed residual products
// theta_{t,k} = sum_{t2=(t-B1) v 1}^{t-B} eps_{t,k}' eps_{t2,k} for
// t = B+1..T_k. These are what the bootstrap reweights and what the HAC
// diagnostic consumes (the HAC convention doubles them; see hac_scale_note
// below).
struct SecondOrderResiduals {
    std::vector<std::vector<double>> per_group;  // group k: length T_k - B
    BandConfig band;
};

SecondOrderResiduals second_order_residuals(const ResidualPanel& residuals,
                                            const BandConfig& band);

struct HacEstimate {
    double value = 0.0;
    double scale = 0.0;
    double bandwidth = 0.0;  // H
};

// Kernel-weighted HAC quadratic form over a scalar sequence:
//   (1/scale^2) [ sum theta_t^2 + 2 sum_{q>=1} K(q/H) sum_t theta_t theta_{t+q} ].
// Lags stop once K(q/H) < 1e-12. Nonnegative up to truncation error because
// the kernel Gram is PSD.
HacEstimate hac_variance(std::span<const double> theta, double bandwidth,
                         const KernelSpec& spec, double scale);

// Default scaling for the variance diagnostic: sqrt(T d (B1 - B)).
double default_hac_scale(std::size_t series_length, std::size_t dim, const BandConfig& band);

// Variance diagnostic for one group's statistic component. The quadratic
// form under the band mask sums each unordered product twice, so the
// sequence entering the HAC is 2 * theta_t.
HacEstimate hac_of_group(const SecondOrderResiduals& sor, std::size_t group, double bandwidth,
                         const KernelSpec& spec, double scale);

}  // namespace hdanova
