#include "latlearn/io.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace latlearn {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

std::size_t parse_size(const std::string& s, const fs::path& file, std::size_t line) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

std::ifstream open_in(const fs::path& file) {
    std::ifstream f(file);
    if (!f) throw Error(ErrorCode::Io, "cannot read " + file.string());
    return f;
}

std::ofstream open_out(const fs::path& file) {
    if (file.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(file.parent_path(), ec);
    }
    std::ofstream f(file);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + file.string());
    return f;
}

void finish(std::ofstream& f, const fs::path& file) {
    f.close();
    if (!f) throw Error(ErrorCode::Io, "failed writing " + file.string());
}

json pose_json(const Pose2D& p) { return json::array({p.x, p.y, p.theta}); }

Pose2D pose_from(const json& j) { return Pose2D(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

json points_json(const SampledPath& p) {
    json pts = json::array();
    for (const Vec2& v : p.points) pts.push_back(json::array({v.x, v.y}));
    return pts;
}

std::vector<Vec2> points_from(const json& j) {
    std::vector<Vec2> pts;
    pts.reserve(j.size());
    for (const json& v : j) pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return pts;
}

json path_json(const SampledPath& p) {
    return json{{"delta", p.delta}, {"points", points_json(p)}, {"headings", p.headings}};
}

SampledPath path_from(const json& j) {
    SampledPath p = make_sampled(points_from(j.at("points")), j.at("delta").get<double>());
    if (j.contains("headings")) p.headings = j.at("headings").get<std::vector<double>>();
    return p;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<RawPath> read_dataset_csv(const fs::path& file) {
    std::ifstream f = open_in(file);
    std::string line;
    std::vector<std::string> header;
    if (std::getline(f, line)) header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "path_id" || header[1] != "x" || header[2] != "y") {
        throw Error(ErrorCode::Parse, "missing header path_id,x,y");
    }
    std::vector<RawPath> out;
    std::map<std::string, std::size_t> index;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cols = split_csv_line(line);
        if (cols.size() < 3) {
            throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
        }
        auto [it, fresh] = index.try_emplace(cols[0], out.size());
        if (fresh) out.push_back({cols[0], {}});
        out[it->second].points.push_back({parse_double(cols[1], file, lineno), parse_double(cols[2], file, lineno)});
    }
    return out;
}

void write_paths_csv(const fs::path& file, const std::vector<NamedPath>& paths) {
    std::ofstream f = open_out(file);
    f << "path_id,x,y,heading\n";
    for (const NamedPath& p : paths) {
        for (std::size_t i = 0; i < p.path.size(); ++i) {
            f << p.id << ',' << format_double(p.path.points[i].x) << ',' << format_double(p.path.points[i].y) << ','
              << format_double(p.path.headings[i]) << '\n';
        }
    }
    finish(f, file);
}

std::vector<NamedPath> read_paths_csv(const fs::path& file, double delta) {
    std::ifstream f = open_in(file);
    std::string line;
    std::vector<std::string> header;
    if (std::getline(f, line)) header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "path_id" || header[1] != "x" || header[2] != "y") {
        throw Error(ErrorCode::Parse, "missing header path_id,x,y");
    }
    const bool has_heading = header.size() >= 4 && header[3] == "heading";
    std::vector<NamedPath> out;
    std::vector<std::vector<double>> headings;
    std::map<std::string, std::size_t> index;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cols = split_csv_line(line);
        if (cols.size() < (has_heading ? 4u : 3u)) {
            throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(lineno) + ": too few columns");
        }
        auto [it, fresh] = index.try_emplace(cols[0], out.size());
        if (fresh) {
            out.push_back({cols[0], {}});
            headings.emplace_back();
        }
        out[it->second].path.points.push_back(
            {parse_double(cols[1], file, lineno), parse_double(cols[2], file, lineno)});
        if (has_heading) headings[it->second].push_back(parse_double(cols[3], file, lineno));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].path = make_sampled(std::move(out[i].path.points), delta);
        if (has_heading) out[i].path.headings = std::move(headings[i]);
    }
    return out;
}

json lattice_to_json(const LatticeConfig& cfg) {
    return json{{"dx", cfg.dx}, {"dy", cfg.dy}, {"headings", cfg.headings}};
}

LatticeConfig lattice_from_json(const json& j) {
    LatticeConfig cfg;
    cfg.dx = j.at("dx").get<double>();
    cfg.dy = j.at("dy").get<double>();
    cfg.headings = j.at("headings").get<std::vector<double>>();
    cfg.validate();
    return cfg;
}

json control_set_to_json(const ControlSet& cs) {
    const int n = cs.lattice().num_headings();
    json actions = json::array();
    for (const ControlAction& a : cs.all()) {
        actions.push_back(json{{"id", a.id},
                               {"start_heading_index", a.start_heading},
                               {"dx", a.delta_ix},
                               {"dy", a.delta_iy},
                               {"dtheta_index", ((a.end_heading - a.start_heading) % n + n) % n},
                               {"arc_length", a.arc_length},
                               {"n_segments", a.n_segments},
                               {"coeffs", a.coeffs},
                               {"sampled_points", points_json(a.path)}});
    }
    return json{{"lattice", lattice_to_json(cs.lattice())}, {"delta", cs.delta()}, {"actions", std::move(actions)}};
}

ControlSet control_set_from_json(const json& j) {
    try {
        const LatticeConfig cfg = lattice_from_json(j.at("lattice"));
        const double delta = j.at("delta").get<double>();
        const int n = cfg.num_headings();
        std::vector<ControlAction> actions;
        for (const json& ja : j.at("actions")) {
            ControlAction a;
            a.id = ja.at("id").get<std::size_t>();
            a.start_heading = ja.at("start_heading_index").get<int>();
            if (a.start_heading < 0 || a.start_heading >= n) {
                throw Error(ErrorCode::Parse, "action " + std::to_string(a.id) + ": heading index out of range");
            }
            a.end_heading = (a.start_heading + ja.at("dtheta_index").get<int>()) % n;
            a.delta_ix = ja.at("dx").get<std::int64_t>();
            a.delta_iy = ja.at("dy").get<std::int64_t>();
            a.arc_length = ja.at("arc_length").get<double>();
            a.coeffs = ja.at("coeffs").get<std::array<double, 4>>();
            a.path = make_sampled(points_from(ja.at("sampled_points")), delta);
            a.n_segments = ja.contains("n_segments") ? ja.at("n_segments").get<std::size_t>() : a.path.size() - 1;
            if (a.path.size() < 2 || a.n_segments != a.path.size() - 1) {
                throw Error(ErrorCode::Parse, "action " + std::to_string(a.id) + ": inconsistent sampled points");
            }
            actions.push_back(std::move(a));
        }
        return ControlSet(cfg, delta, std::move(actions));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("control set: ") + e.what());
    }
}

void write_control_set(const fs::path& file, const ControlSet& cs) { write_json(file, control_set_to_json(cs)); }

ControlSet read_control_set(const fs::path& file) {
    try {
        return control_set_from_json(read_json(file));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw Error(ErrorCode::Parse, file.string() + ": " + e.what());
        throw;
    }
}

json cluster_model_to_json(const ClusterModel& m) {
    json means = json::array();
    for (const SampledPath& p : m.means) means.push_back(points_json(p));
    return json{{"k", m.means.size()},
                {"assignments", m.assignments},
                {"inertia", m.inertia},
                {"inertia_history", m.inertia_history},
                {"iterations", m.iterations},
                {"means", std::move(means)}};
}

ClusterModel cluster_model_from_json(const json& j, double delta) {
    try {
        ClusterModel m;
        for (const json& p : j.at("means")) m.means.push_back(make_sampled(points_from(p), delta));
        m.assignments = j.at("assignments").get<std::vector<std::size_t>>();
        m.inertia = j.at("inertia").get<double>();
        m.inertia_history = j.at("inertia_history").get<std::vector<double>>();
        m.iterations = j.at("iterations").get<std::size_t>();
        for (std::size_t a : m.assignments) {
            if (a >= m.means.size()) throw Error(ErrorCode::Parse, "cluster assignment out of range");
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("cluster model: ") + e.what());
    }
}

void write_cluster_report(const fs::path& file, const std::vector<NamedPath>& paths, const ClusterModel& m) {
    if (paths.size() != m.assignments.size()) {
        throw Error(ErrorCode::LengthMismatch, "cluster assignments do not match the path list");
    }
    std::ofstream f = open_out(file);
    f << "path_id,cluster,distance_to_mean\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const std::size_t c = m.assignments[i];
        f << paths[i].id << ',' << c << ',' << format_double(path_distance(paths[i].path, m.means[c])) << '\n';
    }
    finish(f, file);
}

json scenario_to_json(const Scenario& s) {
    json rle = json::array();
    const std::vector<std::uint8_t>& occ = s.grid.occupied;
    std::size_t i = 0;
    while (i < occ.size()) {
        std::size_t j = i;
        while (j < occ.size() && occ[j] == occ[i]) ++j;
        rle.push_back(json::array({occ[i], j - i}));
        i = j;
    }
    json grid{{"origin", pose_json(s.grid.origin)},
              {"resolution", s.grid.resolution},
              {"width", s.grid.width},
              {"height", s.grid.height},
              {"occupancy_rle", std::move(rle)}};
    return json{{"id", s.id},
                {"kind", to_string(s.kind)},
                {"grid", std::move(grid)},
                {"start", pose_json(s.start)},
                {"goal", pose_json(s.goal)},
                {"reference_path", path_json(s.reference_path)}};
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario s;
        s.id = j.at("id").get<std::string>();
        s.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
        const json& g = j.at("grid");
        s.grid = OccupancyGrid(pose_from(g.at("origin")), g.at("resolution").get<double>(), g.at("width").get<int>(),
                               g.at("height").get<int>(), false);
        std::size_t pos = 0;
        for (const json& run : g.at("occupancy_rle")) {
            const auto value = run.at(0).get<int>();
            const auto count = run.at(1).get<std::size_t>();
            if (pos + count > s.grid.occupied.size()) throw Error(ErrorCode::Parse, "occupancy runs exceed grid size");
            std::fill_n(s.grid.occupied.begin() + static_cast<std::ptrdiff_t>(pos), count, value ? 1 : 0);
            pos += count;
        }
        if (pos != s.grid.occupied.size()) throw Error(ErrorCode::Parse, "occupancy runs do not cover the grid");
        s.start = pose_from(j.at("start"));
        s.goal = pose_from(j.at("goal"));
        s.reference_path = path_from(j.at("reference_path"));
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("scenario: ") + e.what());
    }
}

void write_plan_rows(const fs::path& file, const std::vector<PlanRow>& rows) {
    std::ofstream f = open_out(file);
    f << "scenario_id,set_name,cost,expansions,wall_time_s,success\n";
    for (const PlanRow& r : rows) {
        f << r.scenario_id << ',' << r.set_name << ',' << format_double(r.cost) << ',' << r.expansions << ','
          << format_double(r.wall_time) << ',' << (r.success ? 1 : 0) << '\n';
    }
    finish(f, file);
}

std::vector<PlanRow> read_plan_rows(const fs::path& file) {
    std::ifstream f = open_in(file);
    std::string line;
    std::getline(f, line);
    if (trim(line) != "scenario_id,set_name,cost,expansions,wall_time_s,success") {
        throw Error(ErrorCode::Parse, file.string() + ": unexpected header");
    }
    std::vector<PlanRow> rows;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> c = split_csv_line(line);
        if (c.size() != 6) throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(lineno) + ": need 6 columns");
        rows.push_back({c[0], c[1], parse_double(c[2], file, lineno), parse_size(c[3], file, lineno),
                        parse_double(c[4], file, lineno), c[5] == "1"});
    }
    return rows;
}

void write_history(const fs::path& file, const std::vector<LearnerRound>& history) {
    std::ofstream f = open_out(file);
    f << "iter,objective,set_size,cluster\n";
    for (const LearnerRound& r : history) {
        f << r.iteration << ',' << format_double(r.objective) << ',' << r.set_size << ',' << r.cluster << '\n';
    }
    finish(f, file);
}

json closest_path_trace(const ClosestPathResult& r) {
    json trace = json::array();
    for (const ExpansionRecord& e : r.trace) {
        trace.push_back(json{{"k", e.k}, {"vertex", json::array({e.vertex.ix, e.vertex.iy, e.vertex.itheta})},
                             {"cost", e.cost}});
    }
    return json{{"score", r.score}, {"action_ids", r.action_ids}, {"layer_sizes", r.layer_sizes},
                {"expansions", std::move(trace)}};
}

json read_json(const fs::path& file) {
    std::ifstream f = open_in(file);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, file.string() + ": " + e.what());
    }
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(1) + "\n"); }

std::string read_text(const fs::path& file) {
    std::ifstream f = open_in(file);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_text(const fs::path& file, std::string_view text) {
    std::ofstream f = open_out(file);
    f << text;
    finish(f, file);
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace latlearn
