#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hdanova/bootstrap.hpp"
#include "hdanova/dgp.hpp"

namespace hdanova {

// One Monte Carlo experiment: a data-generating process, a test
// configuration, and a replicate count.
struct ExperimentSpec {
    DgpSpec dgp;
    TestConfig config;
    std::size_t replicates = 100;
    unsigned parallelism = 1;
};

// Aggregated result of one experiment. Selected bandwidths are summarized
// as the mode of (B, B1) across replicates and the median H.
struct SummaryRow {
    std::string dgp;
    double shift = 0.0;
    std::size_t replicates = 0;
    std::size_t boot_count = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double mean_distance = 0.0;
    std::size_t band_lower_mode = 0;
    std::size_t band_upper_mode = 0;
    double weight_bandwidth_median = 0.0;
    double rejection_rate = 0.0;
    double monte_carlo_se = 0.0;
    double wall_ms = 0.0;
};

// Runs the replicates on disjoint substreams (replicate r's panel and test
// seeds are functions of (root seed, r) only), so any parallelism yields
// the same SummaryRow.
SummaryRow run_size_power(const ExperimentSpec& spec);

// Real-data workflow: load a single long series, split it into contiguous
// periods, and test equality of period means.
TestReport run_real(const std::filesystem::path& input, std::size_t n_periods,
                    const TestConfig& config);

enum class ReportFormat { Json, Csv };

// Serializations are byte-stable: shortest round-trip formatting, fixed
// field order, versioned schema.
std::string report_to_json(const std::vector<SummaryRow>& rows);
std::string report_to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> report_from_csv(const std::string& text);

void emit_report(const std::vector<SummaryRow>& rows, ReportFormat format,
                 const std::filesystem::path& path);

// Flat TOML-style config: one [experiment.N] block per experiment.
std::vector<ExperimentSpec> load_experiments(const std::filesystem::path& path);

// CI-scale profile: R=50, U=60, d=60, T=80 per group.
void apply_fast_profile(ExperimentSpec& spec);

constexpr int kReportSchemaVersion = 1;

}  // namespace hdanova
