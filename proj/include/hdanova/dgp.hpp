#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hdanova/matrix.hpp"
#include "hdanova/panel.hpp"

namespace hdanova {

// The six innovation processes of the simulation study. All are driven by
// iid Uniform[-1, 1] base noise; the recursions run per coordinate.
enum class DgpKind {
    SpatialIndependent,  // x = mu + e directly, no mixing
    Independent,         // eps = e, then Theta mixing
    Autoregressive,      // eps_t = 0.7 eps_{t-1} + 0.2 eps_{t-2} + e_t
    MovingAverage,       // eps_t = e_t + 0.6 e_{t-2} + 0.4 e_{t-5} + 0.3 e_{t-7}
    Nonlinear,           // eps_t = sin(eps_{t-1}) + e_{t-1} e_t
    NonStationary,       // eps_t = sin(eps_{t-1}) + cos(eps_{t-4}) + parity noise
};

DgpKind dgp_from_name(const std::string& name);
const char* dgp_name(DgpKind kind);

struct ShiftSpec {
    double magnitude = 0.0;  // 0 means H0; otherwise nu ~ Uniform[0, magnitude]
};

struct DgpSpec {
    DgpKind kind = DgpKind::SpatialIndependent;
    std::vector<std::size_t> lengths;  // T_k per group; K = lengths.size()
    std::size_t dim = 0;
    ShiftSpec shift;
    std::size_t burn_in = 200;
    std::uint64_t seed = 0;
};

struct MeanSet {
    std::vector<std::vector<double>> means;  // K vectors of length d
};

// Banded mixing matrix: unit diagonal, 0.5 at lag one, 0.3 at lag two.
Matrix theta_matrix(std::size_t dim);

// Applies theta_matrix to each row of eps, exploiting the bandwidth-2
// structure (O(d) per row).
Matrix apply_theta(const Matrix& eps);

// Noise source abstraction so tests can force deterministic e values.
using NoiseFn = std::function<double(std::size_t t, std::size_t coord)>;

// Innovation recursions from zero initial conditions, iterated
// burn_in + length steps with the last `length` rows returned.
Matrix gen_innovations(DgpKind kind, std::size_t length, std::size_t dim, std::size_t burn_in,
                       std::mt19937_64& rng);
Matrix gen_innovations_with(DgpKind kind, std::size_t length, std::size_t dim,
                            std::size_t burn_in, const NoiseFn& noise);

// Full panel: x_{t,k} = mu_k + Theta eps_{t,k} (SpatialIndependent skips the
// mixing). mu_k is all-ones for k >= 2; group 1 adds the per-coordinate
// Uniform[0, a] shift. Groups draw from disjoint substreams of spec.seed.
std::pair<Panel, MeanSet> gen_panel(const DgpSpec& spec);

// Effect size (1/sqrt(d)) sum_{k>=2} |mu_k - mu_1|_2^2.
double distance(const MeanSet& means);

}  // namespace hdanova
