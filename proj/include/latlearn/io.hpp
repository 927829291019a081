#pragma once

#include "latlearn/closest_path.hpp"
#include "latlearn/clustering.hpp"
#include "latlearn/eval.hpp"
#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"
#include "latlearn/optimizer.hpp"
#include "latlearn/planner.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace latlearn {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RawPath {
    std::string id;
    std::vector<Vec2> points;
};

struct NamedPath {
    std::string id;
    SampledPath path;
};

/// Dataset CSV with header `path_id,x,y`; rows grouped by path_id in order of
/// first appearance.
std::vector<RawPath> read_dataset_csv(const fs::path& file);

/// `path_id,x,y,heading` rows.
void write_paths_csv(const fs::path& file, const std::vector<NamedPath>& paths);
/// Reads either schema; a heading column, when present, is taken verbatim.
std::vector<NamedPath> read_paths_csv(const fs::path& file, double delta);

json lattice_to_json(const LatticeConfig& cfg);
LatticeConfig lattice_from_json(const json& j);

json control_set_to_json(const ControlSet& cs);
ControlSet control_set_from_json(const json& j);
void write_control_set(const fs::path& file, const ControlSet& cs);
ControlSet read_control_set(const fs::path& file);

json cluster_model_to_json(const ClusterModel& m);
ClusterModel cluster_model_from_json(const json& j, double delta);
/// `path_id,cluster,distance_to_mean`.
void write_cluster_report(const fs::path& file, const std::vector<NamedPath>& paths, const ClusterModel& m);

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

/// `scenario_id,set_name,cost,expansions,wall_time_s,success`.
void write_plan_rows(const fs::path& file, const std::vector<PlanRow>& rows);
std::vector<PlanRow> read_plan_rows(const fs::path& file);

/// `iter,objective,set_size,cluster`.
void write_history(const fs::path& file, const std::vector<LearnerRound>& history);

json closest_path_trace(const ClosestPathResult& r);

json read_json(const fs::path& file);
void write_json(const fs::path& file, const json& j);
std::string read_text(const fs::path& file);
void write_text(const fs::path& file, std::string_view text);

std::vector<std::string> split_csv_line(const std::string& line);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

}  // namespace latlearn
