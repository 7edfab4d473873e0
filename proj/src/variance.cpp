#include "hdanova/variance.hpp"

#include <cmath>
#include <vector>

#include "hdanova/errors.hpp"
#include "hdanova/simd.hpp"

namespace hdanova {

SecondOrderResiduals second_order_residuals(const ResidualPanel& residuals,
                                            const BandConfig& band) {
    SecondOrderResiduals out;
    out.band = band;
    out.per_group.reserve(residuals.group_count());
    for (const Matrix& eps : residuals.groups) {
        require_band(band, eps.rows());
        const std::size_t T = eps.rows();
        const std::size_t d = eps.cols();
        const std::size_t B = band.lower;
        const std::size_t B1 = band.upper;
        std::vector<double> theta(T - B);
        std::vector<double> window(d, 0.0);
        for (std::size_t t = B + 1; t <= T; ++t) {
            simd::add(window, eps.row(t - B - 1));
            if (t > B1 + 1) {
                simd::sub(window, eps.row(t - B1 - 2));
            }
            theta[t - B - 1] = simd::dot(eps.row(t - 1), window);
        }
        out.per_group.push_back(std::move(theta));
    }
    return out;
}

HacEstimate hac_variance(std::span<const double> theta, double bandwidth,
                         const KernelSpec& spec, double scale) {
    if (!(bandwidth > 0.0)) throw InvalidArgument("HAC bandwidth must be > 0");
    if (!(scale > 0.0)) throw InvalidArgument("HAC scale must be > 0");
    if (theta.empty()) throw InvalidArgument("HAC needs a nonempty sequence");

    const std::size_t n = theta.size();
    double acc = simd::dot(theta, theta);
    for (std::size_t q = 1; q < n; ++q) {
        double w = kernel_eval(spec, static_cast<double>(q) / bandwidth);
        if (w < 1e-12) break;
        acc += 2.0 * w * simd::dot(theta.subspan(0, n - q), theta.subspan(q));
    }
    HacEstimate est;
    est.value = acc / (scale * scale);
    est.scale = scale;
    est.bandwidth = bandwidth;
    return est;
}

double default_hac_scale(std::size_t series_length, std::size_t dim, const BandConfig& band) {
    return std::sqrt(static_cast<double>(series_length) * static_cast<double>(dim) *
                     static_cast<double>(band.upper - band.lower));
}

HacEstimate hac_of_group(const SecondOrderResiduals& sor, std::size_t group, double bandwidth,
                         const KernelSpec& spec, double scale) {
    if (group >= sor.per_group.size()) throw InvalidArgument("group index out of range");
    const auto& theta = sor.per_group[group];
    std::vector<double> doubled(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) doubled[i] = 2.0 * theta[i];
    return hac_variance(doubled, bandwidth, spec, scale);
}

}  // namespace hdanova
