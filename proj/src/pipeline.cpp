#include "truncvine/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "truncvine/cherry_builder.hpp"
#include "truncvine/errors.hpp"
#include "truncvine/info_estimator.hpp"

namespace truncvine {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path.string());
    out << text;
    if (!out) throw data_error("failed writing " + path.string());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string failure_name(FailureKind k) {
    switch (k) {
    case FailureKind::none: return "ok";
    case FailureKind::data: return "data_error";
    case FailureKind::resource: return "resource_error";
    }
    return "unknown";
}

PseudoObservations load_pobs(const RunConfig& c) {
    return pobs(load_csv(c.input, c.drop_columns, c.delimiter), c.pobs_divisor);
}

EstimatorConfig estimator_config(const RunConfig& c, int t) {
    EstimatorConfig e;
    e.k_neighbors = c.k_neighbors;
    e.trunc_level = t;
    e.seed = c.seed;
    e.grid_point_budget = c.memory_budget;
    return e;
}

} // namespace

int RunReport::exit_code() const {
    int code = 0;
    for (const auto& l : levels) {
        if (l.failure == FailureKind::resource) return 3;
        if (l.failure == FailureKind::data) code = 2;
    }
    return code;
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["metadata"] = {{"seed", seed}, {"m", m}, {"n", n}, {"t_min", t_min}, {"t_max", t_max},
                     {"config_hash", config_hash}, {"column_names", column_names}};
    auto arr = nlohmann::json::array();
    for (const auto& l : levels) {
        nlohmann::json r = {{"t", l.t}, {"status", failure_name(l.failure)}, {"wall_time_s", l.wall_time_s}};
        if (l.failure == FailureKind::none) {
            r["weight_bits"] = l.weight;
            r["greedy_weight_bits"] = l.greedy_weight;
            r["matrix"] = l.matrix_path;
            r["structure"] = l.structure_path;
            r["score"] = l.score_path;
        } else {
            r["error"] = l.error;
        }
        arr.push_back(r);
    }
    j["levels"] = arr;
    return j;
}

std::string config_hash(const RunConfig& c) {
    std::ostringstream s;
    s << "input=" << c.input.string() << ";drop=";
    for (const auto& d : c.drop_columns) s << d << ',';
    s << ";t_min=" << (c.t_min ? std::to_string(*c.t_min) : "auto") << ";t_max="
      << (c.t_max ? std::to_string(*c.t_max) : "auto") << ";seed=" << c.seed << ";k=" << c.k_neighbors
      << ";divisor=" << (c.pobs_divisor == PobsDivisor::m ? "m" : "m+1") << ";orientation=" << to_string(c.orientation)
      << ";budget=" << c.memory_budget << ";delimiter=" << c.delimiter;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s.str()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunReport run_truncopt(const RunConfig& config) {
    const PseudoObservations data = load_pobs(config);
    const int n = static_cast<int>(data.cols());

    const int t_max = config.t_max.value_or(std::min(n, 20));
    const int t_min = config.t_min.value_or(std::min(3, t_max));
    if (!(2 <= t_min && t_min <= t_max && t_max <= n))
        throw usage_error("need 2 <= t_min <= t_max <= n (got t_min=" + std::to_string(t_min) +
                          ", t_max=" + std::to_string(t_max) + ", n=" + std::to_string(n) + ")");
    if (config.k_neighbors < 1) throw usage_error("k must be at least 1");

    std::filesystem::create_directories(config.out_dir);

    RunReport report;
    report.seed = config.seed;
    report.m = data.rows();
    report.n = data.cols();
    report.t_min = t_min;
    report.t_max = t_max;
    report.config_hash = config_hash(config);
    report.column_names = data.column_names;

    auto grids = std::make_shared<GridCache>(data.rows(), config.memory_budget);
    for (int t = t_min; t <= t_max; ++t) {
        LevelRecord rec;
        rec.t = t;
        const auto start = std::chrono::steady_clock::now();
        try {
            InfoEstimator info(data, estimator_config(config, t), grids);
            const auto built = build_cherry_sequence(n, t, info);
            const auto& seq = built.sequence;
            if (auto errs = check_cherry_sequence(seq); !errs.empty())
                throw structure_error("built sequence is not a regular cherry sequence: " + errs.front());

            const VineMatrix matrix = to_orientation(encode(seq), config.orientation);
            if (auto errs = validate(matrix); !errs.empty())
                throw structure_error("encoded matrix failed validation: " + errs.front());
            const auto score = weight_of_tree(seq.tree(t).clusters, info);

            rec.weight = score.weight;
            rec.greedy_weight = seq.weights.back();
            rec.matrix_path = "matrix_t" + std::to_string(t) + ".csv";
            rec.structure_path = "structure_t" + std::to_string(t) + ".json";
            rec.score_path = "score_t" + std::to_string(t) + ".json";

            std::ostringstream mcsv;
            write_matrix_csv(mcsv, matrix);
            write_text(config.out_dir / rec.matrix_path, mcsv.str());
            write_text(config.out_dir / rec.structure_path, structure_json(matrix).dump(2) + "\n");
            write_text(config.out_dir / rec.score_path, to_json(score).dump(2) + "\n");
        } catch (const resource_error& e) {
            rec.failure = FailureKind::resource;
            rec.error = e.what();
        } catch (const error& e) {
            rec.failure = FailureKind::data;
            rec.error = e.what();
        } catch (const std::bad_alloc&) {
            rec.failure = FailureKind::resource;
            rec.error = "out of memory";
        }
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.levels.push_back(std::move(rec));
    }

    write_text(config.out_dir / "report.json", report.to_json().dump(2) + "\n");
    std::ostringstream csv;
    csv << "t,status,weight_bits,greedy_weight_bits,wall_time_s,matrix,structure,score,error\n";
    for (const auto& l : report.levels) {
        std::string err = l.error;
        for (char& ch : err)
            if (ch == '"' || ch == '\n') ch = '\'';
        const bool ok = l.failure == FailureKind::none;
        csv << l.t << ',' << failure_name(l.failure) << ',' << (ok ? format_double(l.weight) : "") << ','
            << (ok ? format_double(l.greedy_weight) : "") << ',' << format_double(l.wall_time_s) << ','
            << l.matrix_path << ',' << l.structure_path << ',' << l.score_path << ",\"" << err << "\"\n";
    }
    write_text(config.out_dir / "report.csv", csv.str());
    return report;
}

TruncatedVineScore score_matrix_file(const ScoreConfig& config) {
    const PseudoObservations data = load_pobs(config.data);
    const VineMatrix m = read_matrix_csv(config.matrix, config.data.orientation);
    if (m.n != static_cast<int>(data.cols()))
        throw data_error("matrix has n=" + std::to_string(m.n) + " but the data has " + std::to_string(data.cols()) +
                         " columns");
    const int t = config.t.value_or(m.trunc_level);
    if (t < 2 || t > m.n) throw usage_error("t must lie in 2..n");
    InfoEstimator info(data, estimator_config(config.data, t));
    return score_external_matrix(m, t, info);
}

} // namespace truncvine
