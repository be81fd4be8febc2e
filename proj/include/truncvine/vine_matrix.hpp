#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "truncvine/cherry.hpp"
#include "truncvine/matrix.hpp"

namespace truncvine {

enum class Orientation { paper, r_package };

Orientation parse_orientation(const std::string& text);
std::string to_string(Orientation o);

/// Lower-triangular vine matrix. Entries are 1-based variable labels, 0 = unfilled.
/// In paper orientation column c holds diagonal M(c,c) and the bottom trunc_level-1 rows.
struct VineMatrix {
    int n = 0;
    int trunc_level = 0; // order of the top cherry tree
    Orientation orientation = Orientation::paper;
    Matrix<int> entries;

    friend bool operator==(const VineMatrix&, const VineMatrix&) = default;
};

struct PairCopulaFactor {
    int a = 0, b = 0;  // conditioned pair, 0-based, a < b
    VarSet conditioning;

    int tree_level() const { return static_cast<int>(conditioning.size()) + 1; }
    std::string to_string() const; // "c(1,2|3,4)" with 1-based labels
    friend bool operator==(const PairCopulaFactor&, const PairCopulaFactor&) = default;
    friend auto operator<=>(const PairCopulaFactor&, const PairCopulaFactor&) = default;
};

struct DecodedVine {
    int n = 0;
    int level = 0;
    std::vector<std::vector<VarSet>> clusters_by_order; // index = order - 2, each sorted
    std::vector<PairCopulaFactor> factors;              // sorted

    const std::vector<VarSet>& clusters(int order) const { return clusters_by_order.at(static_cast<std::size_t>(order - 2)); }
    std::vector<Separator> separators(int order) const { return separators_of(clusters(order)); }
};

/// Cherry sequence (orders 2..t) to a truncated vine matrix in paper orientation.
/// Only trunc = true is supported.
VineMatrix encode(const CherrySequence& seq, bool trunc = true);

/// Structural violations (empty = valid). Accepts either orientation.
std::vector<std::string> validate(const VineMatrix& m);

/// Factors and clusters up to order `level` (2 <= level <= trunc_level). Throws structure_error if invalid.
DecodedVine decode(const VineMatrix& m, int level);

/// Reverses rows and columns and flips the orientation tag. Involution.
VineMatrix reorient(const VineMatrix& m);
VineMatrix to_orientation(const VineMatrix& m, Orientation target);

/// Matrix CSV: optional first line `# {"n":..,"orientation":..,"trunc_level":..}` then integer rows.
void write_matrix_csv(std::ostream& out, const VineMatrix& m);
VineMatrix read_matrix_csv(std::istream& in, Orientation default_orientation = Orientation::paper);
VineMatrix read_matrix_csv(const std::filesystem::path& path, Orientation default_orientation = Orientation::paper);

nlohmann::json structure_json(const VineMatrix& m);

} // namespace truncvine
