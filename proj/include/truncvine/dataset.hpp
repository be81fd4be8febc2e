#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "truncvine/matrix.hpp"

namespace truncvine {

/// Numeric table loaded from CSV: m rows (samples) by n columns (variables).
struct RawDataset {
    Matrix<double> values;
    std::vector<std::string> column_names;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }
};

/// Rank-normalized data: every entry is r / divisor for an integer rank r in 1..m.
struct PseudoObservations {
    Matrix<double> values;
    std::vector<std::string> column_names;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }

    /// Row-major m'×d block holding `row_subset` rows of the given columns.
    std::vector<double> gather(std::span<const int> columns, std::span<const std::size_t> row_subset) const;
};

enum class PobsDivisor { m, m_plus_one };

PobsDivisor parse_pobs_divisor(const std::string& text);

/// Parses CSV text (header row first). Columns named in `drop_columns` are
/// removed before numeric parsing, so they may hold non-numeric values.
RawDataset parse_csv(std::istream& in, std::span<const std::string> drop_columns, char delimiter = ',');

RawDataset load_csv(const std::filesystem::path& path, std::span<const std::string> drop_columns,
                    char delimiter = ',');

/// Per-column stable ranks divided by m (or m+1). Ties get increasing ranks in row order.
Matrix<double> rank_transform(const Matrix<double>& values, PobsDivisor divisor = PobsDivisor::m);

PseudoObservations pobs(const RawDataset& data, PobsDivisor divisor = PobsDivisor::m);

/// Header plus rows, 12 significant digits.
void write_pobs_csv(std::ostream& out, const PseudoObservations& data);

} // namespace truncvine
