#pragma once

#include <iosfwd>
#include <map>
#include <optional>

#include "catk/campaigns.hpp"
#include "catk/report.hpp"

namespace catk {

/// Parsed scenario configuration: `key = value` lines, '#' comments, an
/// explicit schema version key, and rejection of unknown keys.
struct Scenario {
    std::string space;  // h2 | hn | mkappa | tree | plane
    int dim = 2;
    double kappa = -1.0;
    std::string tree_file;

    std::string anchor_spec;
    std::string set_spec;
    std::string ray_spec;
    std::string map_spec;

    SolveConfig solver;
    uint64_t seed = 1;
    std::optional<std::string> expect;  // converged | divergent | unknown
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

struct ScenarioResult {
    std::string verdict;  // converged | divergent | unknown
    int exit_code = 0;
    double residual = -1.0;
    std::string point_desc;    // printable fixed point, when converged
    std::string witness_desc;  // printable ray witness, when divergent
    std::string trace_csv;     // full trace table
};

/// Run the solve pipeline described by a scenario. The trace CSV carries
/// (n, t_n, anchor_dist, residual, inner_iters) plus point coordinates.
ScenarioResult run_scenario(const Scenario& sc);

struct VerifyOptions {
    uint64_t seed = 1;
    long samples = 100000;  // trial count for randomized campaigns
    long budget = 2000;     // iteration-ish budgets where applicable
    double h_max = 50.0;    // collapse scan length
};

struct CampaignOutput {
    std::string name;
    bool pass = false;
    std::string summary;                                       // one line
    std::vector<std::pair<std::string, std::string>> files;    // (filename, csv bytes)
};

/// Names: gap-growth, collapse, flat-witness, capture-radius, cat, busemann,
/// chains. Unknown names throw DomainError.
CampaignOutput run_campaign(const std::string& name, const VerifyOptions& opts);

const std::vector<std::string>& all_campaigns();

}  // namespace catk
