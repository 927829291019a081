#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/planner.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latlearn {

/// Max pointwise curvature difference over the common prefix of both paths.
double curvature_matching_score(const SampledPath& planned, const SampledPath& reference);

/// (#candidate < dense) - (#candidate > dense); ties count 0.
long matching_differential(std::span<const double> candidate_scores, std::span<const double> dense_scores);

/// One row of the plan results table (one planner run).
struct PlanRow {
    std::string scenario_id;
    std::string set_name;
    double cost = 0.0;
    std::size_t expansions = 0;
    double wall_time = 0.0;
    bool success = false;
};

struct SpeedupEntry {
    std::string set_name;
    /// Scenarios solved by both this set and the dense set.
    std::size_t common = 0;
    double expansion_ratio = 0.0;
    /// Wall-time ratios using per-scenario min and median over repetitions.
    double wall_ratio_min = 0.0;
    double wall_ratio_median = 0.0;
};

/// Dense totals over the common successful scenarios divided by the set's
/// totals over the same scenarios. Repeated rows for a (scenario, set) pair
/// are repetitions of the same run. Entries follow first appearance order.
std::vector<SpeedupEntry> speedup_report(const std::vector<PlanRow>& rows, const std::string& dense_name = "dense");

struct CurvatureRow {
    std::string scenario_id;
    std::string set_name;
    double score = 0.0;
};

struct ReportInput {
    std::string dense_name = "dense";
    std::vector<PlanRow> rows;
    std::vector<CurvatureRow> curvature;
    std::map<std::string, std::size_t> set_sizes;
    std::vector<Scenario> scenarios;
    /// Planned path per (scenario_id, set_name), for overlays.
    std::map<std::pair<std::string, std::string>, SampledPath> plans;
    /// Pre-serialized JSON echoed into manifest.json.
    std::string manifest_json = "{}";
};

/// Writes summary.csv, curvature_scatter.svg, scenario_<id>.svg and
/// manifest.json into `out_dir`.
void emit_reports(const ReportInput& run, const std::filesystem::path& out_dir);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace latlearn
