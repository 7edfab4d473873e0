#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "hdanova/matrix.hpp"

namespace hdanova {

// K-group panel of vector time series. Group k holds a T_k x d matrix with
// rows in time order. Immutable by convention once built; all operations on
// it are pure.
struct Panel {
    std::vector<Matrix> groups;

    std::size_t group_count() const { return groups.size(); }
    std::size_t dim() const { return groups.empty() ? 0 : groups.front().cols(); }
    std::size_t length(std::size_t k) const { return groups[k].rows(); }
    std::size_t min_length() const;
};

struct GroupMeans {
    std::vector<std::vector<double>> means;  // K vectors of length d
};

// Same shape as the panel it came from; entry (t, k) is x_{t,k} minus the
// group-k sample mean.
struct ResidualPanel {
    std::vector<Matrix> groups;

    std::size_t group_count() const { return groups.size(); }
    std::size_t dim() const { return groups.empty() ? 0 : groups.front().cols(); }
    std::size_t length(std::size_t k) const { return groups[k].rows(); }
};

// Validates the Panel invariants (K >= 2, shared d >= 1, every T_k >= 3,
// all entries finite). Throws ShapeMismatch / TooShort / MalformedData.
void validate_panel(const Panel& panel);

// Reads the long-form CSV schema `group,time,x1,...,xd` (UTF-8, '.' decimal
// point). Rows must be grouped by `group` with strictly increasing `time`
// inside each block; group ids must form 1..K. Returns groups ordered by id.
Panel load_panel(const std::filesystem::path& path);

// Writes a Panel in the same schema with shortest round-trip formatting, so
// load_panel(save_panel(p)) reproduces p bit for bit.
void save_panel(const Panel& panel, const std::filesystem::path& path);

// Reads a single series (every row group id 1) as a T x d matrix; the
// entry point for the real-data workflow where one long series is split
// into periods afterwards.
Matrix load_series(const std::filesystem::path& path);

// Splits a T x d series into n_periods contiguous blocks whose lengths
// differ by at most one; remainder rows go to the earliest blocks.
Panel split_periods(const Matrix& series, std::size_t n_periods);

// Group means and residuals (Algorithm step: fitted residuals). Column
// means use compensated accumulation.
std::pair<GroupMeans, ResidualPanel> demean(const Panel& panel);

}  // namespace hdanova
