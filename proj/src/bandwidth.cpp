#include "hdanova/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdanova/errors.hpp"

namespace hdanova {

BandGrid default_band_grid(std::size_t min_length) {
    BandGrid grid;
    grid.upper_offsets = {3, 5, 8, 13, 21};
    double t = static_cast<double>(min_length);
    auto cap = static_cast<std::size_t>(
        std::max(2.0, std::min(std::pow(t, 0.7), std::floor(t / 4.0))));
    std::size_t b = 2;
    while (b <= cap) {
        grid.lower_candidates.push_back(b);
        b = std::max(b + 2, static_cast<std::size_t>(std::ceil(1.4 * static_cast<double>(b))));
    }
    if (grid.lower_candidates.empty() || grid.lower_candidates.back() != cap) {
        if (cap >= 2 &&
            (grid.lower_candidates.empty() || cap > grid.lower_candidates.back())) {
            grid.lower_candidates.push_back(cap);
        }
    }
    return grid;
}

double zhat(const Matrix& x, const BandConfig& band) {
    require_band(band, x.rows());
    double v = static_cast<double>(pair_count(x.rows(), band));
    return banded_cross_sum(x, band) / (v * std::sqrt(static_cast<double>(x.cols())));
}

std::optional<double> zhat_subsample(const Matrix& x, const BandConfig& band, double beta) {
    if (!(beta > 0.0) || beta > 1.0) throw InvalidArgument("beta must be in (0, 1]");
    const auto sub_t = static_cast<std::size_t>(beta * static_cast<double>(x.rows()));
    const auto sub_b = static_cast<std::size_t>(beta * static_cast<double>(band.lower));
    const auto sub_b1 = static_cast<std::size_t>(beta * static_cast<double>(band.upper));
    BandConfig sub{sub_b, sub_b1};
    if (sub_b < 1 || !sub.valid_for(sub_t)) return std::nullopt;
    Matrix prefix(sub_t, x.cols());
    for (std::size_t t = 0; t < sub_t; ++t) {
        std::copy(x.row(t).begin(), x.row(t).end(), prefix.row(t).begin());
    }
    return zhat(prefix, sub);
}

BandSelection select_bands(const Panel& panel, const BandGrid& grid) {
    validate_panel(panel);
    const std::size_t min_t = panel.min_length();

    std::vector<double> pilot_stats;
    pilot_stats.reserve(panel.group_count());
    double stat_scale = 1.0;
    for (const Matrix& g : panel.groups) {
        double z = zhat(g, grid.pilot);
        pilot_stats.push_back(z);
        stat_scale += std::abs(z);
    }
    const double tie_eps = 1e-12 * stat_scale;

    bool found = false;
    BandSelection best;
    for (std::size_t b : grid.lower_candidates) {
        for (std::size_t off : grid.upper_offsets) {
            BandConfig cand{b, b + off};
            if (!cand.valid_for(min_t)) continue;
            double objective = 0.0;
            bool admissible = true;
            for (std::size_t k = 0; k < panel.group_count(); ++k) {
                auto sub = zhat_subsample(panel.groups[k], cand, grid.beta);
                if (!sub) {
                    admissible = false;
                    break;
                }
                objective += std::abs(pilot_stats[k] - *sub);
            }
            if (!admissible) continue;
            if (!found || objective < best.objective - tie_eps) {
                best.band = cand;
                best.objective = objective;
                found = true;
            }
        }
    }
    if (!found) {
        throw NoAdmissibleBandwidth("no (B, B1) candidate admissible for all groups");
    }
    return best;
}

double politis_white_block_length(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw InvalidArgument("series too short for block-length selection");

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

    double var0 = 0.0;
    for (double v : centered) var0 += v * v;
    var0 /= static_cast<double>(n);
    if (!(var0 > 0.0)) throw DegenerateInput("zero sample variance");

    const auto nd = static_cast<double>(n);
    const std::size_t kn = std::max<std::size_t>(5, static_cast<std::size_t>(
                                                        std::ceil(std::log10(nd))));
    const std::size_t mmax =
        static_cast<std::size_t>(std::ceil(std::sqrt(nd))) + kn;
    const double bmax = std::ceil(std::min(3.0 * std::sqrt(nd), nd / 3.0));
    const double crit = 1.959963984540054 * std::sqrt(std::log10(nd) / nd);

    auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) acc += centered[i] * centered[i + lag];
        return acc / static_cast<double>(n);
    };

    std::vector<double> rho(mmax + 1, 0.0);
    for (std::size_t k = 1; k <= mmax && k < n; ++k) rho[k] = autocov(k) / var0;

    // First lag after which a run of kn consecutive autocorrelations is
    // insignificant; fall back to the largest significant lag.
    std::size_t mhat = 0;
    for (std::size_t j = 1; j + kn - 1 <= mmax; ++j) {
        bool all_insig = true;
        for (std::size_t k = j; k < j + kn; ++k) {
            if (std::abs(rho[k]) >= crit) {
                all_insig = false;
                break;
            }
        }
        if (all_insig) {
            mhat = j;
            break;
        }
    }
    if (mhat == 0) {
        for (std::size_t k = 1; k <= mmax; ++k) {
            if (std::abs(rho[k]) >= crit) mhat = k;
        }
        if (mhat == 0) mhat = 1;
    }
    const std::size_t m = std::min(2 * mhat, mmax);

    auto flat_top = [](double s) {
        s = std::abs(s);
        if (s <= 0.5) return 1.0;
        if (s <= 1.0) return 2.0 * (1.0 - s);
        return 0.0;
    };

    double ghat = 0.0;
    double dsum = 0.0;
    for (std::size_t k = 0; k <= m && k < n; ++k) {
        double lam = flat_top(static_cast<double>(k) / static_cast<double>(m));
        double r = (k == 0) ? var0 : autocov(k);
        double mult = (k == 0) ? 1.0 : 2.0;  // lags +-k
        ghat += mult * lam * static_cast<double>(k) * r;
        dsum += mult * lam * r;
    }
    const double dsb = 2.0 * dsum * dsum;
    if (!(dsb > 0.0)) return 1.0;
    double b = std::cbrt(2.0 * ghat * ghat / dsb) * std::cbrt(nd);
    return std::clamp(b, 1.0, bmax);
}

double select_h(const SecondOrderResiduals& sor) {
    std::vector<double> concat;
    for (const auto& g : sor.per_group) concat.insert(concat.end(), g.begin(), g.end());
    if (concat.size() < 20) {
        throw InvalidArgument("need >= 20 second-order residuals to select H, got " +
                              std::to_string(concat.size()));
    }
    double b = politis_white_block_length(concat);
    double upper = std::floor(static_cast<double>(concat.size()) / 3.0);
    return std::clamp(b, 2.0, upper);
}

}  // namespace hdanova
