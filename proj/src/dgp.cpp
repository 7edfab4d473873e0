#include "hdanova/dgp.hpp"

#include <cmath>
#include <random>

#include "hdanova/errors.hpp"
#include "hdanova/rng.hpp"

namespace hdanova {

namespace {

constexpr std::size_t kLongestLag = 7;

}  // namespace

DgpKind dgp_from_name(const std::string& name) {
    if (name == "spatial-independent") return DgpKind::SpatialIndependent;
    if (name == "independent") return DgpKind::Independent;
    if (name == "autoregressive" || name == "ar") return DgpKind::Autoregressive;
    if (name == "moving-average" || name == "ma") return DgpKind::MovingAverage;
    if (name == "nonlinear") return DgpKind::Nonlinear;
    if (name == "nonstationary") return DgpKind::NonStationary;
    throw InvalidArgument("unknown dgp '" + name + "'");
}

const char* dgp_name(DgpKind kind) {
    switch (kind) {
        case DgpKind::SpatialIndependent: return "spatial-independent";
        case DgpKind::Independent: return "independent";
        case DgpKind::Autoregressive: return "autoregressive";
        case DgpKind::MovingAverage: return "moving-average";
        case DgpKind::Nonlinear: return "nonlinear";
        case DgpKind::NonStationary: return "nonstationary";
    }
    return "unknown";
}

Matrix theta_matrix(std::size_t dim) {
    if (dim < 1) throw InvalidArgument("dim must be >= 1");
    Matrix theta(dim, dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        theta(i, i) = 1.0;
        if (i + 1 < dim) {
            theta(i, i + 1) = 0.5;
            theta(i + 1, i) = 0.5;
        }
        if (i + 2 < dim) {
            theta(i, i + 2) = 0.3;
            theta(i + 2, i) = 0.3;
        }
    }
    return theta;
}

Matrix apply_theta(const Matrix& eps) {
    const std::size_t d = eps.cols();
    Matrix out(eps.rows(), d);
    for (std::size_t t = 0; t < eps.rows(); ++t) {
        auto src = eps.row(t);
        auto dst = out.row(t);
        for (std::size_t i = 0; i < d; ++i) {
            double acc = src[i];
            if (i >= 1) acc += 0.5 * src[i - 1];
            if (i >= 2) acc += 0.3 * src[i - 2];
            if (i + 1 < d) acc += 0.5 * src[i + 1];
            if (i + 2 < d) acc += 0.3 * src[i + 2];
            dst[i] = acc;
        }
    }
    return out;
}

Matrix gen_innovations_with(DgpKind kind, std::size_t length, std::size_t dim,
                            std::size_t burn_in, const NoiseFn& noise) {
    if (length < 1) throw InvalidArgument("length must be >= 1");
    if (burn_in < kLongestLag) {
        throw InvalidArgument("burn_in must cover the longest lag (>= 7)");
    }
    const std::size_t total = burn_in + length;
    Matrix eps(total, dim, 0.0);
    Matrix noise_rows(total, dim);
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t i = 0; i < dim; ++i) noise_rows(t, i) = noise(t, i);
    }

    auto e = [&](std::size_t t, std::size_t i) { return noise_rows(t, i); };
    auto prev = [&](std::size_t t, std::size_t lag, std::size_t i) {
        return t >= lag ? eps(t - lag, i) : 0.0;
    };

    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t i = 0; i < dim; ++i) {
            double v = 0.0;
            switch (kind) {
                case DgpKind::SpatialIndependent:
                case DgpKind::Independent:
                    v = e(t, i);
                    break;
                case DgpKind::Autoregressive:
                    v = 0.7 * prev(t, 1, i) + 0.2 * prev(t, 2, i) + e(t, i);
                    break;
                case DgpKind::MovingAverage:
                    v = e(t, i);
                    if (t >= 2) v += 0.6 * e(t - 2, i);
                    if (t >= 5) v += 0.4 * e(t - 5, i);
                    if (t >= 7) v += 0.3 * e(t - 7, i);
                    break;
                case DgpKind::Nonlinear:
                    v = std::sin(prev(t, 1, i)) + (t >= 1 ? e(t - 1, i) : 0.0) * e(t, i);
                    break;
                case DgpKind::NonStationary: {
                    v = std::sin(prev(t, 1, i)) + std::cos(prev(t, 4, i));
                    // 1-based coordinate parity
                    if ((i + 1) % 2 == 0) {
                        v += e(t, i);
                    } else {
                        v += (t >= 2 ? e(t - 2, i) : 0.0) * e(t, i);
                    }
                    break;
                }
            }
            eps(t, i) = v;
        }
    }

    Matrix out(length, dim);
    for (std::size_t t = 0; t < length; ++t) {
        std::copy(eps.row(burn_in + t).begin(), eps.row(burn_in + t).end(),
                  out.row(t).begin());
    }
    return out;
}

Matrix gen_innovations(DgpKind kind, std::size_t length, std::size_t dim, std::size_t burn_in,
                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    NoiseFn noise = [&](std::size_t, std::size_t) { return unif(rng); };
    return gen_innovations_with(kind, length, dim, burn_in, noise);
}

std::pair<Panel, MeanSet> gen_panel(const DgpSpec& spec) {
    if (spec.lengths.size() < 2) throw InvalidArgument("need K >= 2 groups");
    if (spec.dim < 1) throw InvalidArgument("need d >= 1");

    MeanSet means;
    means.means.assign(spec.lengths.size(), std::vector<double>(spec.dim, 1.0));
    if (spec.shift.magnitude > 0.0) {
        auto rng = make_stream(spec.seed, purpose_tag(StreamPurpose::MeanShift));
        std::uniform_real_distribution<double> unif(0.0, spec.shift.magnitude);
        for (double& v : means.means.front()) v = 1.0 + unif(rng);
    }

    Panel panel;
    panel.groups.reserve(spec.lengths.size());
    for (std::size_t k = 0; k < spec.lengths.size(); ++k) {
        auto rng = make_stream(spec.seed, purpose_tag(StreamPurpose::PanelNoise), k);
        Matrix eps = gen_innovations(spec.kind, spec.lengths[k], spec.dim, spec.burn_in, rng);
        Matrix x = (spec.kind == DgpKind::SpatialIndependent) ? std::move(eps)
                                                              : apply_theta(eps);
        const auto& mu = means.means[k];
        for (std::size_t t = 0; t < x.rows(); ++t) {
            auto row = x.row(t);
            for (std::size_t i = 0; i < spec.dim; ++i) row[i] += mu[i];
        }
        panel.groups.push_back(std::move(x));
    }
    return {std::move(panel), std::move(means)};
}

double distance(const MeanSet& means) {
    if (means.means.size() < 2) throw InvalidArgument("need K >= 2 mean vectors");
    const auto& mu1 = means.means.front();
    double total = 0.0;
    for (std::size_t k = 1; k < means.means.size(); ++k) {
        const auto& mk = means.means[k];
        if (mk.size() != mu1.size()) throw ShapeMismatch("mean vectors disagree on d");
        double sq = 0.0;
        for (std::size_t i = 0; i < mu1.size(); ++i) {
            double diff = mk[i] - mu1[i];
            sq += diff * diff;
        }
        total += sq;
    }
    return total / std::sqrt(static_cast<double>(mu1.size()));
}

}  // namespace hdanova
