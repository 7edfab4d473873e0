#include "hdanova/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "hdanova/errors.hpp"
#include "hdanova/simd.hpp"

namespace hdanova {

namespace {

constexpr std::size_t kMinGroupLength = 3;

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
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

double parse_value(std::string_view field, std::size_t line_no) {
    field = trim(field);
    if (field.empty()) {
        throw MalformedData("empty cell at line " + std::to_string(line_no));
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw MalformedData("unparseable cell '" + std::string(field) + "' at line " +
                            std::to_string(line_no));
    }
    if (!std::isfinite(value)) {
        throw MalformedData("non-finite cell at line " + std::to_string(line_no));
    }
    return value;
}

long parse_int(std::string_view field, std::size_t line_no, const char* what) {
    field = trim(field);
    long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw MalformedData(std::string("bad ") + what + " at line " + std::to_string(line_no));
    }
    return value;
}

struct RawGroups {
    // group id -> rows, preserving file order within each group
    std::map<long, std::vector<std::vector<double>>> rows;
    std::size_t dim = 0;
};

RawGroups read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MalformedData("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw MalformedData("empty file '" + path.string() + "'");
    }
    auto header = split_fields(line);
    if (header.size() < 3 || trim(header[0]) != "group" || trim(header[1]) != "time") {
        throw MalformedData("header must be 'group,time,x1,...,xd'");
    }
    RawGroups out;
    out.dim = header.size() - 2;

    long current_group = 0;
    long last_time = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ShapeMismatch("line " + std::to_string(line_no) + " has " +
                                std::to_string(fields.size() - 2) + " value columns, header has " +
                                std::to_string(out.dim));
        }
        long gid = parse_int(fields[0], line_no, "group id");
        long time = parse_int(fields[1], line_no, "time index");
        if (gid != current_group) {
            if (out.rows.count(gid)) {
                throw MalformedData("rows of group " + std::to_string(gid) +
                                    " are not contiguous (line " + std::to_string(line_no) + ")");
            }
            current_group = gid;
        } else if (time <= last_time) {
            throw MalformedData("time not strictly increasing in group " + std::to_string(gid) +
                                " at line " + std::to_string(line_no));
        }
        last_time = time;
        std::vector<double> row(out.dim);
        for (std::size_t j = 0; j < out.dim; ++j) {
            row[j] = parse_value(fields[j + 2], line_no);
        }
        out.rows[gid].push_back(std::move(row));
    }
    return out;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, std::size_t dim) {
    Matrix m(rows.size(), dim);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::copy(rows[t].begin(), rows[t].end(), m.row(t).begin());
    }
    return m;
}

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace

std::size_t Panel::min_length() const {
    std::size_t m = groups.empty() ? 0 : groups.front().rows();
    for (const auto& g : groups) m = std::min(m, g.rows());
    return m;
}

void validate_panel(const Panel& panel) {
    if (panel.groups.size() < 2) {
        throw ShapeMismatch("panel needs K >= 2 groups, got " +
                            std::to_string(panel.groups.size()));
    }
    std::size_t d = panel.groups.front().cols();
    if (d < 1) {
        throw ShapeMismatch("panel needs d >= 1 coordinates");
    }
    for (std::size_t k = 0; k < panel.groups.size(); ++k) {
        const Matrix& g = panel.groups[k];
        if (g.cols() != d) {
            throw ShapeMismatch("group " + std::to_string(k + 1) + " has d=" +
                                std::to_string(g.cols()) + ", group 1 has d=" + std::to_string(d));
        }
        if (g.rows() < kMinGroupLength) {
            throw TooShort("group " + std::to_string(k + 1) + " has T=" +
                           std::to_string(g.rows()) + " < 3");
        }
        for (double v : g.flat()) {
            if (!std::isfinite(v)) {
                throw MalformedData("non-finite entry in group " + std::to_string(k + 1));
            }
        }
    }
}

Panel load_panel(const std::filesystem::path& path) {
    RawGroups raw = read_csv(path);
    if (raw.rows.empty()) {
        throw MalformedData("no data rows in '" + path.string() + "'");
    }
    long expected = 1;
    Panel panel;
    for (const auto& [gid, rows] : raw.rows) {
        if (gid != expected) {
            throw MalformedData("group ids must form 1..K; missing id " +
                                std::to_string(expected));
        }
        ++expected;
        panel.groups.push_back(to_matrix(rows, raw.dim));
    }
    validate_panel(panel);
    return panel;
}

void save_panel(const Panel& panel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    std::string line = "group,time";
    for (std::size_t j = 1; j <= panel.dim(); ++j) {
        line += ",x" + std::to_string(j);
    }
    line += '\n';
    out << line;
    for (std::size_t k = 0; k < panel.group_count(); ++k) {
        const Matrix& g = panel.groups[k];
        for (std::size_t t = 0; t < g.rows(); ++t) {
            line.clear();
            line += std::to_string(k + 1);
            line += ',';
            line += std::to_string(t + 1);
            for (double v : g.row(t)) {
                line += ',';
                format_double(line, v);
            }
            line += '\n';
            out << line;
        }
    }
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

Matrix load_series(const std::filesystem::path& path) {
    RawGroups raw = read_csv(path);
    if (raw.rows.size() != 1 || raw.rows.begin()->first != 1) {
        throw MalformedData("series input must contain exactly one group with id 1");
    }
    Matrix m = to_matrix(raw.rows.begin()->second, raw.dim);
    for (double v : m.flat()) {
        if (!std::isfinite(v)) throw MalformedData("non-finite entry in series");
    }
    return m;
}

Panel split_periods(const Matrix& series, std::size_t n_periods) {
    if (n_periods < 2) {
        throw InvalidArgument("n_periods must be >= 2");
    }
    if (series.rows() < kMinGroupLength * n_periods) {
        throw TooShort("T=" + std::to_string(series.rows()) + " too short for " +
                       std::to_string(n_periods) + " periods of >= 3 rows");
    }
    std::size_t base = series.rows() / n_periods;
    std::size_t remainder = series.rows() % n_periods;
    Panel panel;
    std::size_t start = 0;
    for (std::size_t k = 0; k < n_periods; ++k) {
        std::size_t len = base + (k < remainder ? 1 : 0);
        Matrix block(len, series.cols());
        for (std::size_t t = 0; t < len; ++t) {
            std::copy(series.row(start + t).begin(), series.row(start + t).end(),
                      block.row(t).begin());
        }
        panel.groups.push_back(std::move(block));
        start += len;
    }
    return panel;
}

std::pair<GroupMeans, ResidualPanel> demean(const Panel& panel) {
    GroupMeans means;
    ResidualPanel residuals;
    means.means.reserve(panel.group_count());
    residuals.groups.reserve(panel.group_count());
    for (const Matrix& g : panel.groups) {
        std::vector<double> mean(g.cols(), 0.0);
        std::vector<double> comp(g.cols(), 0.0);
        for (std::size_t t = 0; t < g.rows(); ++t) {
            simd::kahan_add(mean, comp, g.row(t));
        }
        double inv = 1.0 / static_cast<double>(g.rows());
        for (double& v : mean) v *= inv;

        Matrix res(g.rows(), g.cols());
        for (std::size_t t = 0; t < g.rows(); ++t) {
            auto src = g.row(t);
            auto dst = res.row(t);
            for (std::size_t j = 0; j < g.cols(); ++j) dst[j] = src[j] - mean[j];
        }
        means.means.push_back(std::move(mean));
        residuals.groups.push_back(std::move(res));
    }
    return {std::move(means), std::move(residuals)};
}

}  // namespace hdanova
