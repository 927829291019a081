#include "latlearn/baseline_dl.hpp"
#include "latlearn/clustering.hpp"
#include "latlearn/error.hpp"
#include "latlearn/eval.hpp"
#include "latlearn/io.hpp"
#include "latlearn/optimizer.hpp"
#include "latlearn/parallel.hpp"
#include "latlearn/planner.hpp"
#include "latlearn/spiral.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#ifndef LATLEARN_VERSION
#define LATLEARN_VERSION "0.0.0"
#endif

using namespace latlearn;

namespace {

/// Values resolved for one run: CLI flag, else config file, else default.
class Settings {
public:
    void load(const std::string& file) {
        if (file.empty()) return;
        try {
            boost::property_tree::read_ini(file, tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw Error(ErrorCode::Parse, "config " + file + ": " + e.message());
        }
    }

    template <class T>
    void resolve(const CLI::Option* opt, const std::string& key, T& value) {
        if (opt != nullptr && opt->count() > 0) {
            value = opt->as<T>();
        } else if (auto v = tree_.get_optional<T>(key)) {
            value = *v;
        }
        record(key, value);
    }

    template <class T>
    void record(const std::string& key, const T& value) {
        if constexpr (std::is_floating_point_v<T>) {
            echo_[key] = format_double(value);
        } else if constexpr (std::is_same_v<T, bool>) {
            echo_[key] = value ? "true" : "false";
        } else {
            std::ostringstream os;
            os << value;
            echo_[key] = os.str();
        }
    }

    std::string hash() const {
        std::string canon;
        for (const auto& [k, v] : echo_) canon += k + "=" + v + "\n";
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
        return buf;
    }

    json manifest(const std::string& command, std::uint64_t seed) const {
        json params = json::object();
        for (const auto& [k, v] : echo_) params[k] = v;
        return json{{"tool", "latlearn"}, {"version", LATLEARN_VERSION}, {"command", command},
                    {"seed", seed}, {"config_hash", hash()}, {"config", std::move(params)}};
    }

private:
    boost::property_tree::ptree tree_;
    std::map<std::string, std::string> echo_;
};

fs::path manifest_for_file(const fs::path& out) {
    fs::path m = out;
    m.replace_extension(".manifest.json");
    return m;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + suffix);
    return p;
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());
}

/// A paths argument is either a CSV file or a directory holding `train.csv`.
fs::path paths_file(const fs::path& arg, const std::string& default_name) {
    return fs::is_directory(arg) ? arg / default_name : arg;
}

double infer_delta(const fs::path& csv, double flag) {
    if (flag > 0.0) return flag;
    const fs::path manifest = csv.parent_path() / "manifest.json";
    if (fs::exists(manifest)) {
        const json m = read_json(manifest);
        if (m.contains("config") && m["config"].contains("ingest.delta")) {
            return std::stod(m["config"]["ingest.delta"].get<std::string>());
        }
    }
    const std::vector<NamedPath> probe = read_paths_csv(csv, 1.0);
    for (const NamedPath& p : probe) {
        if (p.path.size() >= 3) return distance(p.path.points[0], p.path.points[1]);
    }
    throw Error(ErrorCode::InvalidArgument, "cannot infer path spacing for " + csv.string() + "; pass --delta");
}

std::vector<Scenario> load_scenarios(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("scenario_", 0) == 0 && e.path().extension() == ".json") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Scenario> out;
    for (const fs::path& f : files) out.push_back(scenario_from_json(read_json(f)));
    return out;
}

void write_scenarios(const fs::path& dir, const std::vector<Scenario>& scenarios) {
    make_dir(dir);
    for (const Scenario& s : scenarios) write_json(dir / ("scenario_" + s.id + ".json"), scenario_to_json(s));
}

LatticeConfig lattice_from(Settings& st, CLI::App* sub) {
    double res = 0.4;
    st.resolve(sub->get_option_no_throw("--resolution"), "lattice.resolution", res);
    return LatticeConfig::standard(res);
}

int run_gen_dense(Settings& st, CLI::App* sub, const fs::path& out) {
    DenseSetConfig cfg = DenseSetConfig::standard();
    cfg.lattice = lattice_from(st, sub);
    st.resolve(nullptr, "dense.x_min", cfg.x_min);
    st.resolve(nullptr, "dense.x_max", cfg.x_max);
    st.resolve(nullptr, "dense.y_min", cfg.y_min);
    st.resolve(nullptr, "dense.y_max", cfg.y_max);
    st.resolve(nullptr, "dense.kappa_max", cfg.kappa_max);
    st.resolve(sub->get_option("--delta"), "dense.delta", cfg.delta);
    const ControlSet cs = generate_dense_control_set(cfg);
    write_control_set(out, cs);
    json m = st.manifest("gen-dense", 0);
    m["actions"] = cs.size();
    write_json(manifest_for_file(out), m);
    return 0;
}

int run_ingest(Settings& st, CLI::App* sub, const fs::path& csv, const fs::path& out) {
    double delta = 0.1, window = 10.0, step = 1.0, split = 0.85;
    std::uint64_t seed = 1;
    st.resolve(sub->get_option("--delta"), "ingest.delta", delta);
    st.resolve(sub->get_option("--window"), "ingest.window", window);
    st.resolve(sub->get_option("--step"), "ingest.step", step);
    st.resolve(sub->get_option("--split"), "ingest.split", split);
    st.resolve(sub->get_option("--seed"), "ingest.seed", seed);
    if (split < 0.0 || split > 1.0) throw Error(ErrorCode::InvalidArgument, "--split must be in [0,1]");

    const std::vector<RawPath> raw = read_dataset_csv(csv);
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        std::swap(order[i - 1], order[j]);
    }
    const auto n_train = static_cast<std::size_t>(std::llround(split * static_cast<double>(raw.size())));

    std::vector<NamedPath> train, test;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const RawPath& p = raw[order[r]];
        const SampledPath s = resample_by_arclength(Polyline(p.points), delta);
        const std::vector<SampledPath> slices = slice_sliding_windows(s, window, step);
        auto& dst = r < n_train ? train : test;
        for (std::size_t j = 0; j < slices.size(); ++j) {
            dst.push_back({p.id + "_" + std::to_string(j), normalize_to_origin(slices[j])});
        }
    }
    make_dir(out);
    write_paths_csv(out / "train.csv", train);
    write_paths_csv(out / "test.csv", test);
    json m = st.manifest("ingest", seed);
    m["train_slices"] = train.size();
    m["test_slices"] = test.size();
    write_json(out / "manifest.json", m);
    return 0;
}

int run_cluster(Settings& st, CLI::App* sub, const fs::path& paths_arg, const fs::path& out) {
    std::size_t k = 8, max_iter = 100;
    std::uint64_t seed = 1;
    double delta = 0.0;
    st.resolve(sub->get_option("--k"), "cluster.k", k);
    st.resolve(sub->get_option("--max-iter"), "cluster.max_iter", max_iter);
    st.resolve(sub->get_option("--seed"), "cluster.seed", seed);
    const fs::path csv = paths_file(paths_arg, "train.csv");
    const CLI::Option* delta_opt = sub->get_option("--delta");
    delta = infer_delta(csv, delta_opt->count() > 0 ? delta_opt->as<double>() : 0.0);
    st.record("cluster.delta", delta);

    const std::vector<NamedPath> named = read_paths_csv(csv, delta);
    std::vector<SampledPath> paths;
    for (const NamedPath& p : named) paths.push_back(p.path);
    const ClusterModel model = kmeans_paths(paths, k, max_iter, seed);

    json j = cluster_model_to_json(model);
    j["paths"] = csv.string();
    j["delta"] = delta;
    j["seed"] = seed;
    write_json(out, j);
    write_cluster_report(sibling(out, "_report.csv"), named, model);
    std::vector<NamedPath> means;
    for (std::size_t c = 0; c < model.means.size(); ++c) means.push_back({"mean_" + std::to_string(c), model.means[c]});
    write_paths_csv(sibling(out, "_means.csv"), means);
    write_json(manifest_for_file(out), st.manifest("cluster", seed));
    return 0;
}

int run_learn(Settings& st, CLI::App* sub, const fs::path& clusters_file, const fs::path& dense_file,
              const fs::path& out, unsigned jobs) {
    ObjectiveParams params;
    LearnerConfig cfg;
    st.resolve(sub->get_option("--lambda"), "learn.lambda", params.lambda);
    st.resolve(sub->get_option("--seed"), "learn.seed", cfg.seed);
    st.resolve(sub->get_option("--paths-per-round"), "learn.paths_per_round", cfg.paths_per_round);
    st.resolve(sub->get_option("--candidates-per-round"), "learn.candidates_per_round", cfg.candidates_per_round);
    st.resolve(sub->get_option("--patience"), "learn.no_improve_rounds", cfg.no_improve_rounds);
    st.resolve(sub->get_option("--max-rounds"), "learn.max_rounds", cfg.max_rounds);
    st.resolve(nullptr, "learn.initial_weight", cfg.initial_weight);
    st.resolve(nullptr, "learn.weight_alpha", cfg.weight_alpha);
    cfg.jobs = jobs;

    const json cj = read_json(clusters_file);
    if (!cj.contains("paths") || !cj.contains("delta")) {
        throw Error(ErrorCode::Parse, clusters_file.string() + ": missing paths/delta");
    }
    const double delta = cj["delta"].get<double>();
    const ClusterModel model = cluster_model_from_json(cj, delta);
    const std::vector<NamedPath> named = read_paths_csv(cj["paths"].get<std::string>(), delta);
    std::vector<SampledPath> paths;
    for (const NamedPath& p : named) paths.push_back(p.path);
    const ControlSet dense = read_control_set(dense_file);
    params.dense_size = dense.size();

    const LearnerState state = learn_control_set(paths, model, dense, params, cfg);
    write_control_set(out, state.learned);
    write_history(sibling(out, "_history.csv"), state.history);
    json m = st.manifest("learn", cfg.seed);
    m["set_size"] = state.learned.size();
    m["final_objective"] = state.final_objective.total();
    m["final_matching"] = state.final_objective.matching;
    write_json(manifest_for_file(out), m);
    return 0;
}

int run_reduce_dl(Settings& st, CLI::App* sub, const fs::path& dense_file, const fs::path& out) {
    double factor = 1.1;
    st.resolve(sub->get_option("--factor"), "dl.factor", factor);
    const ControlSet reduced = reduce_control_set_dl(read_control_set(dense_file), factor);
    write_control_set(out, reduced);
    json m = st.manifest("reduce-dl", 0);
    m["set_size"] = reduced.size();
    write_json(manifest_for_file(out), m);
    return 0;
}

ScenarioOptions scenario_options(Settings& st) {
    ScenarioOptions o;
    st.resolve(nullptr, "scenario.resolution", o.resolution);
    st.resolve(nullptr, "scenario.end_extension", o.end_extension);
    st.resolve(nullptr, "scenario.margin", o.margin);
    st.resolve(nullptr, "lattice.resolution", o.lattice_step);
    return o;
}

int run_synth(Settings& st, CLI::App* sub, const fs::path& out) {
    std::size_t n = 100;
    std::uint64_t seed = 1;
    SynthOptions o;
    st.resolve(sub->get_option("--n"), "synth.n", n);
    st.resolve(sub->get_option("--seed"), "synth.seed", seed);
    st.resolve(sub->get_option("--lane-width"), "scenario.lane_width", o.lane_width);
    st.resolve(nullptr, "synth.segment_min", o.segment_min);
    st.resolve(nullptr, "synth.segment_max", o.segment_max);
    st.resolve(nullptr, "synth.curvature_max", o.curvature_max);
    st.resolve(nullptr, "synth.delta", o.delta);
    o.scenario = scenario_options(st);
    const std::vector<Scenario> worlds = synth_worlds(n, seed, o);
    write_scenarios(out, worlds);
    write_json(out / "manifest.json", st.manifest("synth", seed));
    return 0;
}

int run_make_scenarios(Settings& st, CLI::App* sub, const fs::path& paths_arg, const std::string& kind_name,
                       const fs::path& out) {
    double lane_width = 3.7;
    double delta = 0.0;
    st.resolve(sub->get_option("--lane-width"), "scenario.lane_width", lane_width);
    const ScenarioKind kind = scenario_kind_from_string(kind_name);
    if (kind == ScenarioKind::DoubleSwerve) {
        throw Error(ErrorCode::InvalidArgument, "make-scenarios supports lane_follow and lane_change");
    }
    st.record("scenario.kind", kind_name);
    const ScenarioOptions o = scenario_options(st);
    const fs::path csv = paths_file(paths_arg, "test.csv");
    delta = infer_delta(csv, 0.0);
    const std::vector<NamedPath> named = read_paths_csv(csv, delta);
    std::vector<Scenario> scenarios;
    for (std::size_t i = 0; i < named.size(); ++i) {
        Scenario s = scenario_from_path(named[i].path, lane_width, kind, i, o);
        s.id = named[i].id;
        scenarios.push_back(std::move(s));
    }
    write_scenarios(out, scenarios);
    write_json(out / "manifest.json", st.manifest("make-scenarios", 0));
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int run_plan(Settings& st, CLI::App* sub, const fs::path& scenario_dir, const std::string& sets_arg,
             const fs::path& out, unsigned jobs) {
    std::size_t repeat = 5;
    PlannerOptions po;
    st.resolve(sub->get_option("--repeat"), "planner.repeat", repeat);
    st.resolve(nullptr, "planner.goal_radius", po.goal_radius);
    st.resolve(nullptr, "planner.w_heading", po.w_heading);
    if (repeat == 0) throw Error(ErrorCode::InvalidArgument, "--repeat must be at least 1");

    const std::vector<Scenario> scenarios = load_scenarios(scenario_dir);
    const std::vector<std::string> set_files = split_list(sets_arg);
    if (set_files.empty()) throw Error(ErrorCode::InvalidArgument, "--sets is empty");
    std::vector<std::string> names;
    std::vector<ControlSet> sets;
    for (const std::string& f : set_files) {
        names.push_back(fs::path(f).stem().string());
        sets.push_back(read_control_set(f));
    }
    st.record("planner.sets", sets_arg);
    const double res = scenarios.empty() ? 0.2 : scenarios.front().grid.resolution;
    std::vector<SwathTable> swaths;
    for (const ControlSet& cs : sets) swaths.emplace_back(cs, po.footprint, res);

    struct Outcome {
        bool ok = false;
        PlanResult result;
        std::vector<double> walls;
    };
    const std::size_t n_tasks = scenarios.size() * sets.size();
    std::vector<Outcome> outcomes(n_tasks);
    parallel_for(n_tasks, jobs, [&](std::size_t t) {
        const Scenario& sc = scenarios[t / sets.size()];
        const std::size_t si = t % sets.size();
        Outcome& o = outcomes[t];
        for (std::size_t r = 0; r < repeat; ++r) {
            try {
                o.result = plan(sc, sets[si], swaths[si], po);
                o.ok = true;
                o.walls.push_back(o.result.wall_time);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoPlan && e.code() != ErrorCode::EmptyGoal) throw;
                o.ok = false;
                o.walls.push_back(0.0);
            }
        }
    });

    std::vector<PlanRow> rows;
    std::vector<std::string> curv_lines;
    std::vector<std::vector<NamedPath>> planned(sets.size());
    for (std::size_t t = 0; t < n_tasks; ++t) {
        const Scenario& sc = scenarios[t / sets.size()];
        const std::size_t si = t % sets.size();
        const Outcome& o = outcomes[t];
        for (double w : o.walls) {
            rows.push_back({sc.id, names[si], o.ok ? o.result.cost : std::numeric_limits<double>::infinity(),
                            o.ok ? o.result.expansions : 0, w, o.ok});
        }
        if (o.ok) {
            planned[si].push_back({sc.id, o.result.path});
            if (o.result.path.size() >= 3 && sc.reference_path.size() >= 3) {
                curv_lines.push_back(sc.id + "," + names[si] + "," +
                                     format_double(curvature_matching_score(o.result.path, sc.reference_path)));
            }
        }
    }
    make_dir(out);
    write_plan_rows(out / "results.csv", rows);
    std::string curv = "scenario_id,set_name,curvature_score\n";
    for (const std::string& l : curv_lines) curv += l + "\n";
    write_text(out / "curvature.csv", curv);
    for (std::size_t si = 0; si < sets.size(); ++si) write_paths_csv(out / ("paths_" + names[si] + ".csv"), planned[si]);

    json m = st.manifest("plan", 0);
    m["scenarios"] = scenario_dir.string();
    m["dense_set"] = names.front();
    json sizes = json::object();
    for (std::size_t si = 0; si < sets.size(); ++si) sizes[names[si]] = sets[si].size();
    m["set_names"] = names;
    m["set_sizes"] = sizes;
    write_json(out / "manifest.json", m);
    return 0;
}

int run_report(Settings& st, const fs::path& results, const fs::path& out) {
    const json pm = read_json(results / "manifest.json");
    ReportInput in;
    in.dense_name = pm.at("dense_set").get<std::string>();
    in.rows = read_plan_rows(results / "results.csv");
    for (const auto& [name, size] : pm.at("set_sizes").items()) in.set_sizes[name] = size.get<std::size_t>();

    std::istringstream curv(read_text(results / "curvature.csv"));
    std::string line;
    std::getline(curv, line);
    while (std::getline(curv, line)) {
        const std::vector<std::string> c = split_csv_line(line);
        if (c.size() != 3) continue;
        in.curvature.push_back({c[0], c[1], std::stod(c[2])});
    }
    in.scenarios = load_scenarios(pm.at("scenarios").get<std::string>());
    double delta = 0.1;
    if (!in.scenarios.empty()) delta = in.scenarios.front().reference_path.delta;
    for (const std::string& name : pm.at("set_names").get<std::vector<std::string>>()) {
        const fs::path f = results / ("paths_" + name + ".csv");
        if (!fs::exists(f)) continue;
        for (NamedPath& p : read_paths_csv(f, delta)) in.plans[{p.id, name}] = std::move(p.path);
    }
    json m = st.manifest("report", 0);
    m["plan_manifest"] = pm;
    in.manifest_json = m.dump(1);
    emit_reports(in, out);
    return 0;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn sparse lattice-planner control sets from demonstration paths"};
    app.require_subcommand(1);
    app.set_version_flag("--version", LATLEARN_VERSION);
    std::string config;
    unsigned jobs = default_jobs();
    app.add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string out, csv, paths, clusters, dense, kind = "lane_follow", scenarios, sets, results;
    double d_delta = 0.1, d_window = 10, d_step = 1, d_split = 0.85, d_lambda = 0.311, d_factor = 1.1, d_lane = 3.7;
    double d_res = 0.4;
    std::uint64_t seed = 1;
    std::size_t k = 8, max_iter = 100, n = 100, repeat = 5, ppr = 8, cpr = 32, patience = 3, max_rounds = 100000;

    auto add_jobs = [&](CLI::App* s) { s->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber); };
    auto add_config = [&](CLI::App* s) { s->add_option("--config", config, "INI config file")->check(CLI::ExistingFile); };

    auto* gen = app.add_subcommand("gen-dense", "generate the dense cubic-spiral control set");
    add_config(gen);
    gen->add_option("--out", out, "output JSON")->required();
    gen->add_option("--delta", d_delta, "path sampling step (m)");
    gen->add_option("--resolution", d_res, "lattice spacing (m)");
    add_jobs(gen);

    auto* ingest = app.add_subcommand("ingest", "resample, slice and split a dataset CSV");
    add_config(ingest);
    ingest->add_option("--csv", csv, "dataset CSV (path_id,x,y)")->required();
    ingest->add_option("--delta", d_delta, "sampling step (m)");
    ingest->add_option("--window", d_window, "slice length (m)");
    ingest->add_option("--step", d_step, "slice stride (m)");
    ingest->add_option("--split", d_split, "training fraction");
    ingest->add_option("--seed", seed, "split seed");
    ingest->add_option("--out", out, "output directory")->required();

    auto* cluster = app.add_subcommand("cluster", "k-means over training slices");
    add_config(cluster);
    cluster->add_option("--paths", paths, "paths CSV or ingest directory")->required();
    cluster->add_option("--k", k, "number of clusters");
    cluster->add_option("--max-iter", max_iter, "Lloyd iterations");
    cluster->add_option("--seed", seed, "seed");
    cluster->add_option("--delta", d_delta, "path spacing (m); inferred when omitted");
    cluster->add_option("--out", out, "output JSON")->required();

    auto* learn = app.add_subcommand("learn", "learn a sparse control set");
    add_config(learn);
    learn->add_option("--clusters", clusters, "cluster JSON")->required();
    learn->add_option("--dense", dense, "dense control set JSON")->required();
    learn->add_option("--lambda", d_lambda, "size penalty (0.311 or 0.0311 in the reference runs)");
    learn->add_option("--seed", seed, "seed");
    learn->add_option("--paths-per-round", ppr, "paths sampled per round");
    learn->add_option("--candidates-per-round", cpr, "candidate actions per round");
    learn->add_option("--patience", patience, "rounds without improvement before stopping");
    learn->add_option("--max-rounds", max_rounds, "round limit");
    learn->add_option("--out", out, "output JSON")->required();
    add_jobs(learn);

    auto* reduce = app.add_subcommand("reduce-dl", "arc-length-factor reduction baseline");
    add_config(reduce);
    reduce->add_option("--dense", dense, "dense control set JSON")->required();
    reduce->add_option("--factor", d_factor, "arc-length factor");
    reduce->add_option("--out", out, "output JSON")->required();

    auto* synth = app.add_subcommand("synth", "synthetic double-swerve worlds");
    add_config(synth);
    synth->add_option("--n", n, "number of worlds");
    synth->add_option("--seed", seed, "seed");
    synth->add_option("--lane-width", d_lane, "lane width (m)");
    synth->add_option("--out", out, "output directory")->required();

    auto* make = app.add_subcommand("make-scenarios", "lane scenarios from test paths");
    add_config(make);
    make->add_option("--paths", paths, "paths CSV or ingest directory")->required();
    make->add_option("--kind", kind, "lane_follow or lane_change");
    make->add_option("--lane-width", d_lane, "lane width (m)");
    make->add_option("--out", out, "output directory")->required();

    auto* planc = app.add_subcommand("plan", "plan every scenario with every set");
    add_config(planc);
    planc->add_option("--scenarios", scenarios, "scenario directory")->required();
    planc->add_option("--sets", sets, "comma-separated control set JSON files; the first is the reference")->required();
    planc->add_option("--repeat", repeat, "timing repetitions");
    planc->add_option("--out", out, "output directory")->required();
    add_jobs(planc);

    auto* report = app.add_subcommand("report", "summary tables and plots");
    add_config(report);
    report->add_option("--results", results, "plan output directory")->required();
    report->add_option("--out", out, "report directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 1;
    }

    try {
        Settings st;
        st.load(config);
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "gen-dense") return run_gen_dense(st, sub, out);
        if (name == "ingest") return run_ingest(st, sub, csv, out);
        if (name == "cluster") return run_cluster(st, sub, paths, out);
        if (name == "learn") {
            st.record("learn.dense", dense);
            return run_learn(st, sub, clusters, dense, out, jobs);
        }
        if (name == "reduce-dl") return run_reduce_dl(st, sub, dense, out);
        if (name == "synth") return run_synth(st, sub, out);
        if (name == "make-scenarios") return run_make_scenarios(st, sub, paths, kind, out);
        if (name == "plan") return run_plan(st, sub, scenarios, sets, out, jobs);
        if (name == "report") return run_report(st, results, out);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << one_line(e.what()) << '\n';
        return 2;
    }
}
