// truncvine: fit, score and inspect truncated vine structures from CSV data.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "truncvine/dataset.hpp"
#include "truncvine/errors.hpp"
#include "truncvine/pipeline.hpp"
#include "truncvine/vine_matrix.hpp"

using namespace truncvine;

namespace {

struct DataFlags {
    std::string input;
    std::vector<std::string> drop;
    std::string divisor = "m";
    std::string delimiter = ",";
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
    cmd->add_option("--input", f.input, "CSV file with a header row")->required();
    cmd->add_option("--drop", f.drop, "column names to discard (repeatable or comma separated)")->delimiter(',');
    cmd->add_option("--pobs-divisor", f.divisor, "rank divisor for pseudo-observations")
        ->check(CLI::IsMember({"m", "m+1"}));
    cmd->add_option("--delimiter", f.delimiter, "CSV field separator");
}

char delimiter_of(const std::string& s) {
    if (s == "\\t" || s == "tab") return '\t';
    if (s.size() != 1) throw usage_error("delimiter must be a single character");
    return s[0];
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated vine structure learning with regular cherry trees"};
    app.require_subcommand(1);

    DataFlags data;
    RunConfig run;
    std::optional<int> t_min, t_max, score_t;
    std::string orientation = "paper";
    std::string out_dir = "truncvine_out";
    std::string matrix_path;
    std::string pobs_out;

    auto* fit = app.add_subcommand("fit", "build, encode and score truncated vines for a range of levels");
    add_data_flags(fit, data);
    fit->add_option("--t-min", t_min, "lowest truncation level (default 3)");
    fit->add_option("--t-max", t_max, "highest truncation level (default min(n,20))");
    fit->add_option("--seed", run.seed, "seed for the dimension subsampling");
    fit->add_option("--k", run.k_neighbors, "nearest neighbours used by the estimator")->check(CLI::PositiveNumber);
    fit->add_option("--orientation", orientation, "matrix orientation")->check(CLI::IsMember({"paper", "r-package"}));
    fit->add_option("--out", out_dir, "output directory");
    fit->add_option("--memory-budget", run.memory_budget, "maximum grid points per dimension");

    auto* score = app.add_subcommand("score", "weight of a vine matrix on a dataset");
    add_data_flags(score, data);
    score->add_option("--matrix", matrix_path, "matrix CSV")->required();
    score->add_option("--t", score_t, "truncation level to score (default: the matrix's)");
    score->add_option("--seed", run.seed, "seed for the dimension subsampling");
    score->add_option("--k", run.k_neighbors, "nearest neighbours used by the estimator")->check(CLI::PositiveNumber);
    score->add_option("--orientation", orientation, "orientation of header-less matrices")
        ->check(CLI::IsMember({"paper", "r-package"}));
    score->add_option("--out", pobs_out, "write the score JSON here as well as to stdout");
    score->add_option("--memory-budget", run.memory_budget, "maximum grid points per dimension");

    auto* pobs_cmd = app.add_subcommand("pobs", "export pseudo-observations");
    add_data_flags(pobs_cmd, data);
    pobs_cmd->add_option("--out", pobs_out, "output CSV (default stdout)");

    auto* val = app.add_subcommand("validate", "check a vine matrix");
    val->add_option("--matrix", matrix_path, "matrix CSV")->required();
    val->add_option("--orientation", orientation, "orientation of header-less matrices")
        ->check(CLI::IsMember({"paper", "r-package"}));
    val->add_option("--t", score_t, "expected truncation level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        run.input = data.input;
        run.drop_columns = data.drop;
        run.pobs_divisor = parse_pobs_divisor(data.divisor);
        run.delimiter = delimiter_of(data.delimiter);
        run.orientation = parse_orientation(orientation);
        run.out_dir = out_dir;
        run.t_min = t_min;
        run.t_max = t_max;

        if (fit->parsed()) {
            const RunReport report = run_truncopt(run);
            for (const auto& l : report.levels) {
                if (l.failure == FailureKind::none)
                    std::cout << "t=" << l.t << "  weight=" << l.weight << " bits  (" << l.wall_time_s << " s)\n";
                else
                    std::cout << "t=" << l.t << "  FAILED: " << l.error << '\n';
            }
            std::cout << "report written to " << (run.out_dir / "report.json").string() << '\n';
            return report.exit_code();
        }
        if (score->parsed()) {
            const auto s = score_matrix_file({run, matrix_path, score_t});
            const std::string text = to_json(s).dump(2);
            std::cout << text << '\n';
            if (!pobs_out.empty()) {
                std::ofstream out(pobs_out);
                if (!out) throw data_error("cannot write " + pobs_out);
                out << text << '\n';
            }
            return 0;
        }
        if (pobs_cmd->parsed()) {
            const auto p = pobs(load_csv(run.input, run.drop_columns, run.delimiter), run.pobs_divisor);
            if (pobs_out.empty()) {
                write_pobs_csv(std::cout, p);
            } else {
                std::ofstream out(pobs_out);
                if (!out) throw data_error("cannot write " + pobs_out);
                write_pobs_csv(out, p);
            }
            return 0;
        }
        if (val->parsed()) {
            const VineMatrix m = read_matrix_csv(matrix_path, run.orientation);
            auto errs = validate(m);
            if (score_t && *score_t != m.trunc_level)
                errs.push_back("expected truncation level " + std::to_string(*score_t) + ", matrix has " +
                               std::to_string(m.trunc_level));
            if (errs.empty()) {
                std::cout << "valid (n=" << m.n << ", trunc_level=" << m.trunc_level << ")\n";
                return 0;
            }
            for (const auto& e : errs) std::cout << "violation: " << e << '\n';
            return 2;
        }
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
