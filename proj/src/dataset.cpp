#include "truncvine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "truncvine/errors.hpp"

namespace truncvine {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            field += ch;
        } else if (ch == delimiter && !quoted) {
            fields.push_back(trim(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(trim(field));
    return fields;
}

bool parse_double(const std::string& text, double& value) {
    const std::string s = unquote(text);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last && std::isfinite(value);
}

} // namespace

PobsDivisor parse_pobs_divisor(const std::string& text) {
    if (text == "m") return PobsDivisor::m;
    if (text == "m+1") return PobsDivisor::m_plus_one;
    throw usage_error("pobs divisor must be 'm' or 'm+1', got '" + text + "'");
}

std::vector<double> PseudoObservations::gather(std::span<const int> columns,
                                               std::span<const std::size_t> row_subset) const {
    std::vector<double> out;
    out.reserve(columns.size() * row_subset.size());
    for (std::size_t r : row_subset)
        for (int c : columns) out.push_back(values(r, static_cast<std::size_t>(c)));
    return out;
}

RawDataset parse_csv(std::istream& in, std::span<const std::string> drop_columns, char delimiter) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("CSV input is empty");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3); // UTF-8 BOM

    std::vector<std::string> header = split_line(line, delimiter);
    for (auto& name : header) name = unquote(name);

    for (const auto& name : drop_columns)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw data_error("column to drop not found in header: '" + name + "'");

    std::vector<std::size_t> kept;
    RawDataset out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (std::find(drop_columns.begin(), drop_columns.end(), header[c]) != drop_columns.end()) continue;
        kept.push_back(c);
        out.column_names.push_back(header[c]);
    }
    if (kept.size() < 2)
        throw data_error("at least 2 columns must remain after dropping, got " + std::to_string(kept.size()));

    std::vector<double> cells;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line, delimiter);
        if (fields.size() != header.size())
            throw data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        for (std::size_t c : kept) {
            double v = 0.0;
            if (!parse_double(fields[c], v))
                throw data_error("line " + std::to_string(line_no) + ", column '" + header[c] +
                                 "': non-numeric value '" + fields[c] + "'");
            cells.push_back(v);
        }
        ++rows;
    }
    if (rows < 2) throw data_error("at least 2 data rows are required, got " + std::to_string(rows));

    out.values = Matrix<double>(rows, kept.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < kept.size(); ++c) out.values(r, c) = cells[r * kept.size() + c];
    return out;
}

RawDataset load_csv(const std::filesystem::path& path, std::span<const std::string> drop_columns,
                    char delimiter) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open input file: " + path.string());
    return parse_csv(in, drop_columns, delimiter);
}

Matrix<double> rank_transform(const Matrix<double>& values, PobsDivisor divisor) {
    const std::size_t m = values.rows();
    if (m < 2) throw data_error("pseudo-observations need at least 2 rows");
    const double denom = divisor == PobsDivisor::m ? static_cast<double>(m) : static_cast<double>(m + 1);

    Matrix<double> out(m, values.cols());
    std::vector<std::size_t> order(m);
    for (std::size_t c = 0; c < values.cols(); ++c) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values(a, c) < values(b, c); });
        for (std::size_t rank = 0; rank < m; ++rank)
            out(order[rank], c) = static_cast<double>(rank + 1) / denom;
    }
    return out;
}

PseudoObservations pobs(const RawDataset& data, PobsDivisor divisor) {
    return {rank_transform(data.values, divisor), data.column_names};
}

void write_pobs_csv(std::ostream& out, const PseudoObservations& data) {
    for (std::size_t c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data.column_names[c];
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", data.values(r, c));
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

} // namespace truncvine
