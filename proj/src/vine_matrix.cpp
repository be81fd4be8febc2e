#include "truncvine/vine_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "truncvine/errors.hpp"

namespace truncvine {

Orientation parse_orientation(const std::string& text) {
    if (text == "paper") return Orientation::paper;
    if (text == "r-package") return Orientation::r_package;
    throw usage_error("orientation must be 'paper' or 'r-package', got '" + text + "'");
}

std::string to_string(Orientation o) { return o == Orientation::paper ? "paper" : "r-package"; }

std::string PairCopulaFactor::to_string() const {
    std::string s = "c(" + std::to_string(a + 1) + "," + std::to_string(b + 1);
    if (!conditioning.empty()) {
        s += "|";
        for (std::size_t i = 0; i < conditioning.size(); ++i) s += (i ? "," : "") + std::to_string(conditioning[i] + 1);
    }
    return s + ")";
}

namespace {

class ClusterLevels {
public:
    explicit ClusterLevels(const CherrySequence& seq) {
        for (const auto& tree : seq.trees) levels_.emplace_back(tree.clusters.begin(), tree.clusters.end());
    }
    bool contains(const VarSet& c) const {
        if (c.size() == 1) return true;
        const std::size_t idx = c.size() - 2;
        return idx < levels_.size() && levels_[idx].count(c);
    }
    const std::set<VarSet>& order(int j) const { return levels_.at(static_cast<std::size_t>(j - 2)); }

private:
    std::vector<std::set<VarSet>> levels_;
};

// Column entries (top to bottom) for diagonal x with top cluster `top`: at each step x is a
// conditioned end of the current cluster and the other end is emitted.
std::optional<std::vector<int>> column_chain(int x, VarSet cur, const ClusterLevels& levels) {
    std::vector<int> out;
    while (cur.size() >= 2) {
        if (!levels.contains(cur) || !cur.contains(x)) return std::nullopt;
        int other;
        if (cur.size() == 2) {
            other = cur[0] == x ? cur[1] : cur[0];
        } else {
            std::vector<int> ends;
            for (int y : cur)
                if (levels.contains(cur.without(y))) ends.push_back(y);
            if (ends.size() != 2 || (ends[0] != x && ends[1] != x)) return std::nullopt;
            other = ends[0] == x ? ends[1] : ends[0];
        }
        out.push_back(other);
        cur = cur.without(other);
    }
    return out;
}

void place_column(Matrix<int>& m, int n, int pos, int x, const std::vector<int>& chain) {
    m(pos, pos) = x + 1;
    const int len = static_cast<int>(chain.size());
    for (int r = 0; r < len; ++r) m(n - len + r, pos) = chain[r] + 1;
}

struct Encoder {
    const CherrySequence& seq;
    ClusterLevels levels;
    int n, t;
    std::vector<int> P;
    std::vector<std::vector<int>> core_chains;
    Matrix<int> result;

    bool outer() {
        Matrix<int> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < P.size(); ++i) place_column(m, n, n - 1 - static_cast<int>(i), P[i], core_chains[i]);
        std::vector<int> placed_list = P;
        VarSet placed(placed_list);
        const auto& top = seq.tree(t).clusters;
        std::vector<VarSet> sorted_top(top.begin(), top.end());
        std::sort(sorted_top.begin(), sorted_top.end());
        for (int pos = n - t - 1; pos >= 0; --pos) {
            bool done = false;
            for (const auto& k : sorted_top) {
                const VarSet extra = set_difference(k, placed);
                if (extra.size() != 1) continue;
                auto chain = column_chain(extra[0], k, levels);
                if (!chain) continue;
                place_column(m, n, pos, extra[0], *chain);
                placed = placed.with(extra[0]);
                done = true;
                break;
            }
            if (!done) return false;
        }
        result = std::move(m);
        return true;
    }

    bool core(int i) {
        if (i > t) return outer();
        const VarSet have(P);
        const auto& level = levels.order(i);
        for (const auto& k : level) {
            if (!have.is_subset_of(k)) continue;
            const int x = set_difference(k, have)[0];
            auto chain = column_chain(x, k, levels);
            if (!chain) continue;
            P.push_back(x);
            core_chains.push_back(*chain);
            if (core(i + 1)) return true;
            P.pop_back();
            core_chains.pop_back();
        }
        return false;
    }
};

} // namespace

VineMatrix encode(const CherrySequence& seq, bool trunc) {
    if (!trunc) throw usage_error("full vine fill-out below the truncation level is not supported");
    const auto errs = check_cherry_sequence(seq);
    if (!errs.empty()) throw structure_error("encode: input is not a regular cherry sequence: " + errs.front());
    const int n = seq.n;
    const int t = seq.top_order();

    Encoder enc{seq, ClusterLevels(seq), n, t, {}, {}, {}};
    const auto& top = seq.tree(t).clusters;
    for (int v = 0; v < n; ++v) {
        const auto uses = std::count_if(top.begin(), top.end(), [&](const VarSet& k) { return k.contains(v); });
        if (uses != 1) continue;
        enc.P = {v};
        enc.core_chains = {{}};
        if (enc.core(2)) return VineMatrix{n, t, Orientation::paper, std::move(enc.result)};
    }
    throw structure_error("encode: no leaf of the order-" + std::to_string(t) +
                          " tree admits a consistent vine ordering");
}

VineMatrix reorient(const VineMatrix& m) {
    VineMatrix out = m;
    const auto n = static_cast<std::size_t>(m.n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.entries(r, c) = m.entries(n - 1 - r, n - 1 - c);
    out.orientation = m.orientation == Orientation::paper ? Orientation::r_package : Orientation::paper;
    return out;
}

VineMatrix to_orientation(const VineMatrix& m, Orientation target) {
    return m.orientation == target ? m : reorient(m);
}

namespace {

std::vector<PairCopulaFactor> all_factors(const VineMatrix& p) {
    std::vector<PairCopulaFactor> out;
    const int n = p.n;
    for (int c = 0; c < n; ++c) {
        const int x = p.entries(c, c) - 1;
        std::vector<int> below;
        for (int r = n - 1; r > c; --r) {
            const int y = p.entries(r, c);
            if (y == 0) break;
            out.push_back({std::min(x, y - 1), std::max(x, y - 1), VarSet(below)});
            below.push_back(y - 1);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

VarSet cluster_of(const PairCopulaFactor& f) { return f.conditioning.with(f.a).with(f.b); }

} // namespace

std::vector<std::string> validate(const VineMatrix& input) {
    std::vector<std::string> errs;
    const int n = input.n;
    if (n < 2) return {"matrix must be at least 2x2"};
    if (static_cast<int>(input.entries.rows()) != n || static_cast<int>(input.entries.cols()) != n)
        return {"matrix is not " + std::to_string(n) + "x" + std::to_string(n)};
    const int T = input.trunc_level;
    if (T < 2 || T > n) return {"truncation level " + std::to_string(T) + " outside 2..n"};

    const VineMatrix p = to_orientation(input, Orientation::paper);
    const auto& M = p.entries;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (M(r, c) < 0 || M(r, c) > n)
                errs.push_back("entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") out of range");
            if (c > r && M(r, c) != 0) errs.push_back("matrix is not lower-triangular");
        }
    if (!errs.empty()) return errs;

    std::vector<int> pos(static_cast<std::size_t>(n + 1), -1);
    for (int c = 0; c < n; ++c) {
        const int x = M(c, c);
        if (x == 0) {
            errs.push_back("diagonal entry " + std::to_string(c + 1) + " is empty");
        } else if (pos[x] >= 0) {
            errs.push_back("diagonal not injective");
        } else {
            pos[x] = c;
        }
    }
    if (!errs.empty()) return errs;

    std::vector<std::string> order_errs;
    for (int c = 0; c < n; ++c) {
        std::set<int> seen;
        for (int r = c + 1; r < n; ++r) {
            const bool should = r >= n - (T - 1);
            const int y = M(r, c);
            if (should != (y != 0)) {
                errs.push_back("zero pattern does not match truncation level " + std::to_string(T) + " (column " +
                               std::to_string(c + 1) + ", row " + std::to_string(r + 1) + ")");
                continue;
            }
            if (y == 0) continue;
            if (y == M(c, c) || !seen.insert(y).second)
                errs.push_back("column " + std::to_string(c + 1) + " repeats entry " + std::to_string(y));
            else if (pos[y] <= c)
                order_errs.push_back("column " + std::to_string(c + 1) + " entry " + std::to_string(y) +
                                     " is not a later diagonal element");
        }
    }
    if (!errs.empty()) return errs;

    const auto factors = all_factors(p);
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& f : factors) {
        if (f.tree_level() != 1) continue;
        const int ra = find(f.a), rb = find(f.b);
        if (ra == rb) {
            errs.push_back("level-2 graph not a tree");
            break;
        }
        parent[ra] = rb;
    }
    errs.insert(errs.end(), order_errs.begin(), order_errs.end());
    if (!errs.empty()) return errs;

    std::vector<std::set<VarSet>> by_order(static_cast<std::size_t>(T + 1));
    for (const auto& f : factors) by_order[f.tree_level() + 1].insert(cluster_of(f));
    for (const auto& f : factors) {
        if (f.tree_level() < 2) continue;
        const VarSet k = cluster_of(f);
        const auto& lower = by_order[k.size() - 1];
        if (!lower.count(k.without(f.a)) || !lower.count(k.without(f.b)))
            errs.push_back("proximity condition fails for factor " + f.to_string());
    }
    if (!errs.empty()) return errs;

    for (int j = 2; j <= T; ++j) {
        CherryTree tree{j, std::vector<VarSet>(by_order[j].begin(), by_order[j].end())};
        auto e = check_cherry_tree(n, tree);
        errs.insert(errs.end(), e.begin(), e.end());
    }
    return errs;
}

DecodedVine decode(const VineMatrix& m, int level) {
    const auto errs = validate(m);
    if (!errs.empty()) {
        std::string msg = "invalid vine matrix:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw structure_error(msg);
    }
    if (level < 2 || level > m.trunc_level)
        throw structure_error("requested level " + std::to_string(level) + " but the matrix is truncated at level " +
                              std::to_string(m.trunc_level));
    DecodedVine out;
    out.n = m.n;
    out.level = level;
    out.clusters_by_order.resize(static_cast<std::size_t>(level - 1));
    for (const auto& f : all_factors(to_orientation(m, Orientation::paper))) {
        if (f.tree_level() > level - 1) continue;
        out.factors.push_back(f);
        out.clusters_by_order[static_cast<std::size_t>(f.tree_level() - 1)].push_back(cluster_of(f));
    }
    for (auto& ks : out.clusters_by_order) std::sort(ks.begin(), ks.end());
    return out;
}

void write_matrix_csv(std::ostream& out, const VineMatrix& m) {
    const nlohmann::json header = {{"n", m.n}, {"orientation", to_string(m.orientation)}, {"trunc_level", m.trunc_level}};
    out << "# " << header.dump() << '\n';
    for (int r = 0; r < m.n; ++r) {
        for (int c = 0; c < m.n; ++c) out << (c ? "," : "") << m.entries(r, c);
        out << '\n';
    }
}

VineMatrix read_matrix_csv(std::istream& in, Orientation default_orientation) {
    std::optional<nlohmann::json> header;
    std::vector<std::vector<int>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            if (!header && rows.empty()) {
                try {
                    header = nlohmann::json::parse(line.substr(first + 1));
                } catch (const nlohmann::json::exception& e) {
                    throw data_error("matrix header is not valid JSON: " + std::string(e.what()));
                }
            }
            continue;
        }
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
        std::istringstream ss(line);
        std::vector<int> row;
        std::string tok;
        while (ss >> tok) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw data_error("matrix line " + std::to_string(line_no) + ": '" + tok + "' is not an integer");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n < 2) throw data_error("matrix must have at least 2 rows");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n) throw data_error("matrix is not square");

    VineMatrix m;
    m.n = n;
    m.orientation = default_orientation;
    m.entries = Matrix<int>(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.entries(r, c) = rows[r][c];
    try {
        if (header && header->contains("n") && header->at("n").get<int>() != n)
            throw data_error("matrix header says n=" + std::to_string(header->at("n").get<int>()) + " but the body is " +
                             std::to_string(n) + "x" + std::to_string(n));
        if (header && header->contains("orientation"))
            m.orientation = parse_orientation(header->at("orientation").get<std::string>());
        if (header && header->contains("trunc_level")) {
            m.trunc_level = header->at("trunc_level").get<int>();
            return m;
        }
    } catch (const nlohmann::json::exception& e) {
        throw data_error("matrix header has a field of the wrong type: " + std::string(e.what()));
    }
    const VineMatrix p = to_orientation(m, Orientation::paper);
    int filled = 0;
    for (int r = 1; r < n; ++r)
        if (p.entries(r, 0) != 0) ++filled;
    m.trunc_level = filled + 1;
    return m;
}

VineMatrix read_matrix_csv(const std::filesystem::path& path, Orientation default_orientation) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open matrix file: " + path.string());
    return read_matrix_csv(in, default_orientation);
}

nlohmann::json structure_json(const VineMatrix& m) {
    const auto decoded = decode(m, m.trunc_level);
    nlohmann::json j;
    j["n"] = m.n;
    j["trunc_level"] = m.trunc_level;
    j["orientation"] = to_string(m.orientation);
    auto diag = nlohmann::json::array();
    auto cols = nlohmann::json::array();
    for (int c = 0; c < m.n; ++c) {
        diag.push_back(m.entries(c, c));
        auto col = nlohmann::json::array();
        for (int r = 0; r < m.n; ++r) col.push_back(m.entries(r, c));
        cols.push_back(col);
    }
    j["diagonal"] = diag;
    j["columns"] = cols;
    auto labels = [](const VarSet& s) {
        auto a = nlohmann::json::array();
        for (int v : s) a.push_back(v + 1);
        return a;
    };
    nlohmann::json clusters = nlohmann::json::object(), seps = nlohmann::json::object();
    for (int order = 2; order <= m.trunc_level; ++order) {
        auto ks = nlohmann::json::array();
        for (const auto& k : decoded.clusters(order)) ks.push_back(labels(k));
        clusters[std::to_string(order)] = ks;
        auto ss = nlohmann::json::array();
        for (const auto& s : decoded.separators(order))
            ss.push_back({{"indices", labels(s.indices)}, {"multiplicity", s.multiplicity}});
        seps[std::to_string(order)] = ss;
    }
    j["clusters_by_level"] = clusters;
    j["separators_by_level"] = seps;
    return j;
}

} // namespace truncvine
