// Batch front door: verification campaigns, solver scenarios, plot-data
// extraction. Exit codes: 0 pass/converged, 1 verification failure,
// 2 usage/config error, 3 inconclusive.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "catk/minkowski.hpp"
#include "catk/scenario.hpp"

namespace fs = std::filesystem;
using namespace catk;

namespace {

int write_text(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path.string() << "\n";
        return 2;
    }
    out << bytes;
    return out ? 0 : 2;
}

int cmd_verify(const std::vector<std::string>& names, const VerifyOptions& opts, const std::string& out_dir) {
    std::vector<std::string> selected = names.empty() ? all_campaigns() : names;
    for (const auto& name : selected) {
        bool known = false;
        for (const auto& k : all_campaigns()) known |= (k == name);
        if (!known) {
            std::cerr << "error: unknown campaign '" << name << "'\n";
            return 2;
        }
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    // campaigns are independent; run them in a pool and write in fixed order
    std::vector<std::future<CampaignOutput>> jobs;
    jobs.reserve(selected.size());
    for (const auto& name : selected)
        jobs.push_back(std::async(std::launch::async, [name, &opts] { return run_campaign(name, opts); }));

    bool all_pass = true;
    for (auto& job : jobs) {
        const CampaignOutput out = job.get();
        for (const auto& [file, bytes] : out.files)
            if (int rc = write_text(fs::path(out_dir) / file, bytes)) return rc;
        std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << out.name << ": " << out.summary << "\n";
        all_pass &= out.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_solve(const std::string& scenario_path, const std::string& out_dir) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
    } catch (const ParseError& e) {
        std::cerr << "config error in " << scenario_path << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    ScenarioResult res;
    try {
        res = run_scenario(sc);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AuditError& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (int rc = write_text(fs::path(out_dir) / "trace.csv", res.trace_csv)) return rc;

    std::cout << "verdict: " << res.verdict << "\n";
    if (res.verdict == "converged") {
        std::cout << "fixed point: " << res.point_desc << "\n";
        std::cout << "residual: " << fmt(res.residual) << "\n";
    } else if (res.verdict == "divergent") {
        std::cout << "ray witness: " << res.witness_desc << "\n";
    } else {
        std::cout << "best residual: " << fmt(res.residual) << "\n";
    }
    if (sc.expect)
        std::cout << "expected: " << *sc.expect << (res.exit_code == 0 ? " (match)" : " (MISMATCH)") << "\n";
    return res.exit_code;
}

int cmd_plot_data(const std::string& trace_path, const std::string& out_dir) {
    CsvTable trace;
    try {
        trace = load_csv(trace_path);
    } catch (const Error& e) {
        std::cerr << "trace error: " << e.what() << "\n";
        return 2;
    }
    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < trace.header.size(); ++i)
            if (trace.header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int c_n = col("n"), c_res = col("residual"), c_anchor = col("anchor_dist");
    if (c_n < 0 || c_res < 0 || c_anchor < 0) {
        std::cerr << "trace error: missing required columns n, residual, anchor_dist\n";
        return 2;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    CsvWriter residuals({"n", "residual"});
    CsvWriter anchors({"n", "anchor_dist"});
    for (const auto& row : trace.rows) {
        residuals.row_raw({row[static_cast<std::size_t>(c_n)], row[static_cast<std::size_t>(c_res)]});
        anchors.row_raw({row[static_cast<std::size_t>(c_n)], row[static_cast<std::size_t>(c_anchor)]});
    }
    if (int rc = write_text(fs::path(out_dir) / "residuals.csv", residuals.str())) return rc;
    if (int rc = write_text(fs::path(out_dir) / "anchor.csv", anchors.str())) return rc;

    // 2D trajectories: disk chart of hyperboloid coordinates when present
    const int x0 = col("x0"), x1 = col("x1"), x2 = col("x2");
    if (x0 >= 0 && x1 >= 0 && x2 >= 0 && col("x3") < 0) {
        CsvWriter traj({"u1", "u2"});
        try {
            for (const auto& row : trace.rows) {
                const HPoint p(MinkowskiVec{std::stod(row[static_cast<std::size_t>(x0)]),
                                            std::stod(row[static_cast<std::size_t>(x1)]),
                                            std::stod(row[static_cast<std::size_t>(x2)])});
                double u1, u2;
                to_disk(p, u1, u2);
                traj.row(u1, u2);
            }
        } catch (const std::exception& e) {
            std::cerr << "trace error: bad coordinates: " << e.what() << "\n";
            return 2;
        }
        if (int rc = write_text(fs::path(out_dir) / "trajectory.csv", traj.str())) return rc;
    }
    std::cout << "wrote plot series for " << trace.rows.size() << " trace rows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CAT(kappa<0) geometry toolkit: verification campaigns and fixed-point scenarios"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run verification campaigns and write CSV reports");
    std::vector<std::string> campaigns;
    VerifyOptions vopts;
    std::string verify_out = "out";
    verify->add_option("campaigns", campaigns,
                       "campaign names (default: all of gap-growth collapse flat-witness "
                       "capture-radius cat busemann chains)");
    verify->add_option("--seed", vopts.seed, "random seed");
    verify->add_option("--samples", vopts.samples, "trial count for randomized campaigns");
    verify->add_option("--budget", vopts.budget, "iteration budget where applicable");
    verify->add_option("--h-max", vopts.h_max, "scan length for the collapse campaign");
    verify->add_option("--out", verify_out, "output directory");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run a fixed-point scenario");
    std::string scenario_path;
    std::string solve_out = "out";
    solve_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    solve_cmd->add_option("--out", solve_out, "output directory");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "turn a trace CSV into plot-ready series");
    std::string trace_path;
    std::string plot_out = "out";
    plot->add_option("--trace", trace_path, "trace CSV from solve")->required();
    plot->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(campaigns, vopts, verify_out);
        if (solve_cmd->parsed()) return cmd_solve(scenario_path, solve_out);
        if (plot->parsed()) return cmd_plot_data(trace_path, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
