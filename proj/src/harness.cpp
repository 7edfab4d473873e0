#include "hdanova/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hdanova/errors.hpp"
#include "hdanova/parallel.hpp"
#include "hdanova/rng.hpp"

namespace hdanova {

namespace {

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

std::string fmt(double v) {
    std::string s;
    format_double(s, v);
    return s;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw MalformedData("bad number '" + std::string(s) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

SummaryRow run_size_power(const ExperimentSpec& spec) {
    if (spec.replicates < 1) throw InvalidArgument("need at least one replicate");
    auto t_start = std::chrono::steady_clock::now();

    const std::size_t r = spec.replicates;
    std::vector<char> decisions(r, 0);
    std::vector<double> distances(r, 0.0);
    std::vector<std::size_t> lowers(r, 0);
    std::vector<std::size_t> uppers(r, 0);
    std::vector<double> bandwidths(r, 0.0);

    parallel_for(r, spec.parallelism, [&](std::size_t i) {
        DgpSpec dgp = spec.dgp;
        dgp.seed = stream_seed(spec.config.seed, purpose_tag(StreamPurpose::ReplicateSeed), i, 0);
        auto [panel, means] = gen_panel(dgp);
        distances[i] = distance(means);

        TestConfig cfg = spec.config;
        cfg.seed = stream_seed(spec.config.seed, purpose_tag(StreamPurpose::ReplicateSeed), i, 1);
        cfg.threads = 1;  // replicates already run concurrently
        TestReport rep = run_test(panel, cfg);
        decisions[i] = rep.reject ? 1 : 0;
        lowers[i] = rep.band.lower;
        uppers[i] = rep.band.upper;
        bandwidths[i] = rep.weight_bandwidth;
    });

    SummaryRow row;
    row.dgp = dgp_name(spec.dgp.kind);
    row.shift = spec.dgp.shift.magnitude;
    row.replicates = r;
    row.boot_count = spec.config.boot_count;
    row.alpha = spec.config.alpha;
    row.seed = spec.config.seed;

    double hits = 0.0;
    for (char dec : decisions) hits += dec;
    row.rejection_rate = hits / static_cast<double>(r);
    row.monte_carlo_se =
        std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / static_cast<double>(r));

    double dist_sum = 0.0;
    for (double v : distances) dist_sum += v;
    row.mean_distance = dist_sum / static_cast<double>(r);

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> band_counts;
    for (std::size_t i = 0; i < r; ++i) ++band_counts[{lowers[i], uppers[i]}];
    std::size_t best_count = 0;
    for (const auto& [band, count] : band_counts) {
        if (count > best_count) {
            best_count = count;
            row.band_lower_mode = band.first;
            row.band_upper_mode = band.second;
        }
    }

    std::sort(bandwidths.begin(), bandwidths.end());
    row.weight_bandwidth_median = r % 2 == 1
                                      ? bandwidths[r / 2]
                                      : 0.5 * (bandwidths[r / 2 - 1] + bandwidths[r / 2]);

    auto t_end = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();
    return row;
}

TestReport run_real(const std::filesystem::path& input, std::size_t n_periods,
                    const TestConfig& config) {
    if (n_periods < 2) throw InvalidArgument("need at least two periods");
    Matrix series = load_series(input);
    Panel panel = split_periods(series, n_periods);
    return run_test(panel, config);
}

std::string report_to_json(const std::vector<SummaryRow>& rows) {
    std::string out;
    out += "{\"schema_version\":" + std::to_string(kReportSchemaVersion) + ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SummaryRow& r = rows[i];
        if (i) out += ',';
        out += "{\"dgp\":\"" + r.dgp + "\"";
        out += ",\"shift\":" + fmt(r.shift);
        out += ",\"replicates\":" + std::to_string(r.replicates);
        out += ",\"boot\":" + std::to_string(r.boot_count);
        out += ",\"alpha\":" + fmt(r.alpha);
        out += ",\"seed\":" + std::to_string(r.seed);
        out += ",\"mean_distance\":" + fmt(r.mean_distance);
        out += ",\"B_mode\":" + std::to_string(r.band_lower_mode);
        out += ",\"B1_mode\":" + std::to_string(r.band_upper_mode);
        out += ",\"H_median\":" + fmt(r.weight_bandwidth_median);
        out += ",\"rejection_rate\":" + fmt(r.rejection_rate);
        out += ",\"mc_se\":" + fmt(r.monte_carlo_se);
        out += ",\"wall_ms\":" + fmt(r.wall_ms);
        out += '}';
    }
    out += "]}\n";
    return out;
}

namespace {

constexpr const char* kCsvHeader =
    "schema_version,dgp,shift,replicates,boot,alpha,seed,mean_distance,B_mode,B1_mode,"
    "H_median,rejection_rate,mc_se,wall_ms";

}  // namespace

std::string report_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SummaryRow& r : rows) {
        out += std::to_string(kReportSchemaVersion);
        out += ',' + r.dgp;
        out += ',' + fmt(r.shift);
        out += ',' + std::to_string(r.replicates);
        out += ',' + std::to_string(r.boot_count);
        out += ',' + fmt(r.alpha);
        out += ',' + std::to_string(r.seed);
        out += ',' + fmt(r.mean_distance);
        out += ',' + std::to_string(r.band_lower_mode);
        out += ',' + std::to_string(r.band_upper_mode);
        out += ',' + fmt(r.weight_bandwidth_median);
        out += ',' + fmt(r.rejection_rate);
        out += ',' + fmt(r.monte_carlo_se);
        out += ',' + fmt(r.wall_ms);
        out += '\n';
    }
    return out;
}

std::vector<SummaryRow> report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader) {
        throw MalformedData("unexpected report header");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                f.emplace_back(line.substr(start));
                break;
            }
            f.emplace_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (f.size() != 14) throw MalformedData("bad report row");
        SummaryRow r;
        r.dgp = f[1];
        r.shift = parse_double(f[2]);
        r.replicates = static_cast<std::size_t>(parse_double(f[3]));
        r.boot_count = static_cast<std::size_t>(parse_double(f[4]));
        r.alpha = parse_double(f[5]);
        r.seed = static_cast<std::uint64_t>(parse_double(f[6]));
        r.mean_distance = parse_double(f[7]);
        r.band_lower_mode = static_cast<std::size_t>(parse_double(f[8]));
        r.band_upper_mode = static_cast<std::size_t>(parse_double(f[9]));
        r.weight_bandwidth_median = parse_double(f[10]);
        r.rejection_rate = parse_double(f[11]);
        r.monte_carlo_se = parse_double(f[12]);
        r.wall_ms = parse_double(f[13]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_report(const std::vector<SummaryRow>& rows, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << (format == ReportFormat::Json ? report_to_json(rows) : report_to_csv(rows));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<ExperimentSpec> load_experiments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path.string() + "'");

    std::vector<ExperimentSpec> specs;
    ExperimentSpec* current = nullptr;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (sv.front() == '[') {
            if (sv.back() != ']' || sv.substr(1, 11) != "experiment.") {
                throw MalformedData("expected [experiment.N] at line " +
                                    std::to_string(line_no));
            }
            specs.emplace_back();
            current = &specs.back();
            continue;
        }
        if (!current) {
            throw MalformedData("key outside [experiment.N] block at line " +
                                std::to_string(line_no));
        }
        std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw MalformedData("expected key = value at line " + std::to_string(line_no));
        }
        std::string key(trim(sv.substr(0, eq)));
        std::string value(trim(sv.substr(eq + 1)));
        if (!value.empty() && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key == "dgp") {
            current->dgp.kind = dgp_from_name(value);
        } else if (key == "T") {
            current->dgp.lengths.clear();
            std::size_t start = 0;
            while (start <= value.size()) {
                std::size_t pos = value.find(',', start);
                std::string tok = value.substr(
                    start, pos == std::string::npos ? std::string::npos : pos - start);
                current->dgp.lengths.push_back(
                    static_cast<std::size_t>(parse_double(trim(tok))));
                if (pos == std::string::npos) break;
                start = pos + 1;
            }
        } else if (key == "d") {
            current->dgp.dim = static_cast<std::size_t>(parse_double(value));
        } else if (key == "shift") {
            current->dgp.shift.magnitude = parse_double(value);
        } else if (key == "burn_in") {
            current->dgp.burn_in = static_cast<std::size_t>(parse_double(value));
        } else if (key == "replicates") {
            current->replicates = static_cast<std::size_t>(parse_double(value));
        } else if (key == "boot") {
            current->config.boot_count = static_cast<std::size_t>(parse_double(value));
        } else if (key == "alpha") {
            current->config.alpha = parse_double(value);
        } else if (key == "seed") {
            current->config.seed = static_cast<std::uint64_t>(parse_double(value));
        } else if (key == "auto_bandwidth") {
            current->config.auto_bandwidth = (value == "true" || value == "1");
        } else if (key == "B") {
            current->config.band.lower = static_cast<std::size_t>(parse_double(value));
        } else if (key == "B1") {
            current->config.band.upper = static_cast<std::size_t>(parse_double(value));
        } else if (key == "H") {
            current->config.weight_bandwidth = parse_double(value);
        } else if (key == "kernel") {
            current->config.kernel = kernel_from_name(value);
        } else {
            throw MalformedData("unknown key '" + key + "' at line " + std::to_string(line_no));
        }
    }
    if (specs.empty()) throw MalformedData("config has no [experiment.N] blocks");
    return specs;
}

void apply_fast_profile(ExperimentSpec& spec) {
    spec.replicates = 50;
    spec.config.boot_count = 60;
    spec.dgp.dim = 60;
    if (spec.dgp.lengths.empty()) spec.dgp.lengths = {80, 80};
    for (auto& t : spec.dgp.lengths) t = 80;
}

}  // namespace hdanova
