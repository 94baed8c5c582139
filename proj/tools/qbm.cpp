// qbm: scenario runner for the Gaussian quantum Brownian motion channel.
//
//   qbm run <config-file> [--out PATH] [--workers N]
//   qbm summarize <csv>
//   qbm selftest
//
// `run` writes the dataset atomically (temp file + rename); on any numeric
// failure it removes partial output, prints a one-line JSON error record to
// stderr and exits nonzero.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbm/qbm.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qbm::Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_error_record(const std::string& stage, const std::exception& e) {
    nlohmann::json rec;
    rec["error"] = stage;
    rec["detail"] = e.what();
    std::cerr << rec.dump() << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_override, int workers_override) {
    std::string tmp_path;
    try {
        qbm::ScenarioConfig cfg = qbm::parse_config(read_file(config_path));
        if (!out_override.empty()) cfg.output_path = out_override;
        if (workers_override > 0) cfg.workers = workers_override;

        qbm::Dataset ds = qbm::run_scenario(cfg);
        const std::string csv = qbm::to_csv(ds);

        tmp_path = cfg.output_path + ".tmp";
        {
            std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
            if (!out) throw qbm::Error("cannot open output file: " + tmp_path);
            out << csv;
            if (!out) throw qbm::Error("write failed: " + tmp_path);
        }
        std::filesystem::rename(tmp_path, cfg.output_path);
        tmp_path.clear();

        const std::size_t rows =
            ds.figure == qbm::Figure::Wigner ? ds.wigner_points.size() : ds.points.size();
        std::cout << "wrote " << cfg.output_path << " (" << rows << " rows)\n";
        if (ds.physicality_warnings > 0)
            std::cerr << "note: " << ds.physicality_warnings
                      << " physicality warnings (det sigma below the pure-state floor; "
                         "weak-coupling noise truncation)\n";
        return 0;
    } catch (const std::exception& e) {
        if (!tmp_path.empty()) {
            std::error_code ec;
            std::filesystem::remove(tmp_path, ec);
        }
        emit_error_record("run", e);
        return 1;
    }
}

int cmd_summarize(const std::string& csv_path) {
    try {
        qbm::Dataset ds = qbm::parse_csv(read_file(csv_path));
        std::cout << qbm::summarize(ds).text();
        return 0;
    } catch (const std::exception& e) {
        emit_error_record("summarize", e);
        return 1;
    }
}

int cmd_selftest() {
    try {
        std::cout << "coefficient oracle self-test (closed forms vs defining integrals)\n";
        qbm::SelftestReport rep = qbm::coefficient_selftest();
        std::cout << "checks: " << rep.checks << "  failures: " << rep.failures
                  << "  worst rel: " << rep.worst_rel
                  << "  worst imag residual: " << rep.worst_residual << "\n";
        for (const auto& d : rep.failures_detail) std::cout << "  FAIL " << d << "\n";
        std::cout << (rep.passed() ? "selftest PASS\n" : "selftest FAIL\n");
        return rep.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        emit_error_record("selftest", e);
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian quantum Brownian motion channel: figure datasets and diagnostics"};
    app.require_subcommand(1);

    std::string config_path, out_override, csv_path;
    int workers_override = 0;

    auto* run = app.add_subcommand("run", "run a scenario config and write its CSV dataset");
    run->add_option("config", config_path, "config file (flat key = value)")->required();
    run->add_option("--out", out_override, "override output_path");
    run->add_option("--workers", workers_override, "override worker count");

    auto* summ = app.add_subcommand("summarize", "per-curve extrema and derivative statistics");
    summ->add_option("csv", csv_path, "dataset produced by `qbm run`")->required();

    app.add_subcommand("selftest", "certify closed-form coefficients against the quadrature oracle");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("run")) return cmd_run(config_path, out_override, workers_override);
    if (app.got_subcommand("summarize")) return cmd_summarize(csv_path);
    return cmd_selftest();
}
