#include "latlearn/eval.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace latlearn {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double curvature_matching_score(const SampledPath& planned, const SampledPath& reference) {
    if (planned.size() < 3 || reference.size() < 3) {
        throw Error(ErrorCode::DegeneratePath, "curvature comparison needs at least three points per path");
    }
    const std::vector<double> kp = curvature_profile(planned);
    const std::vector<double> kr = curvature_profile(reference);
    const std::size_t n = std::min(kp.size(), kr.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(kp[k] - kr[k]));
    return worst;
}

long matching_differential(std::span<const double> candidate_scores, std::span<const double> dense_scores) {
    if (candidate_scores.size() != dense_scores.size()) {
        throw Error(ErrorCode::LengthMismatch, "score lists differ in length");
    }
    long diff = 0;
    for (std::size_t i = 0; i < candidate_scores.size(); ++i) {
        if (candidate_scores[i] < dense_scores[i]) ++diff;
        if (candidate_scores[i] > dense_scores[i]) --diff;
    }
    return diff;
}

namespace {

struct Aggregate {
    std::size_t expansions = 0;
    bool success = false;
    std::vector<double> walls;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double min_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

struct Table {
    std::vector<std::string> sets;
    std::vector<std::string> scenarios;
    std::map<std::pair<std::string, std::string>, Aggregate> cells;
};

Table aggregate(const std::vector<PlanRow>& rows) {
    Table t;
    for (const PlanRow& r : rows) {
        if (std::find(t.sets.begin(), t.sets.end(), r.set_name) == t.sets.end()) t.sets.push_back(r.set_name);
        if (std::find(t.scenarios.begin(), t.scenarios.end(), r.scenario_id) == t.scenarios.end()) {
            t.scenarios.push_back(r.scenario_id);
        }
        auto [it, fresh] = t.cells.try_emplace({r.scenario_id, r.set_name});
        if (fresh) {
            it->second.expansions = r.expansions;
            it->second.success = r.success;
        }
        it->second.walls.push_back(r.wall_time);
    }
    return t;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

std::vector<SpeedupEntry> speedup_report(const std::vector<PlanRow>& rows, const std::string& dense_name) {
    const Table t = aggregate(rows);
    for (const std::string& s : t.scenarios) {
        if (!t.cells.contains({s, dense_name})) {
            throw Error(ErrorCode::InvalidArgument, "scenario " + s + " has no result for set " + dense_name);
        }
    }
    std::vector<SpeedupEntry> out;
    for (const std::string& set : t.sets) {
        SpeedupEntry e;
        e.set_name = set;
        double dense_exp = 0.0, set_exp = 0.0, dense_min = 0.0, set_min = 0.0, dense_med = 0.0, set_med = 0.0;
        for (const std::string& s : t.scenarios) {
            const auto found = t.cells.find({s, set});
            if (found == t.cells.end()) continue;
            const Aggregate& a = found->second;
            const Aggregate& d = t.cells.at({s, dense_name});
            if (!a.success || !d.success) continue;
            ++e.common;
            dense_exp += static_cast<double>(d.expansions);
            set_exp += static_cast<double>(a.expansions);
            dense_min += min_of(d.walls);
            set_min += min_of(a.walls);
            dense_med += median(d.walls);
            set_med += median(a.walls);
        }
        e.expansion_ratio = ratio(dense_exp, set_exp);
        e.wall_ratio_min = ratio(dense_min, set_min);
        e.wall_ratio_median = ratio(dense_med, set_med);
        out.push_back(e);
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
    return f;
}

void close_out(std::ofstream& f, const std::filesystem::path& p) {
    f.close();
    if (!f) throw Error(ErrorCode::Io, "failed writing " + p.string());
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string color_for(std::size_t i) { return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))]; }

std::string fixed(double v, int digits = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string safe_name(const std::string& id) {
    std::string s = id;
    for (char& c : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        if (!ok) c = '_';
    }
    return s;
}

void write_summary(const ReportInput& run, const Table& t, const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << "set_name,set_size,scenarios,successes,expansions_total,expansion_speedup,matching_differential,"
         "wall_time_total_s,wall_speedup_min,wall_speedup_median\n";
    if (!t.sets.empty()) {
        const std::vector<SpeedupEntry> speed = speedup_report(run.rows, run.dense_name);
        std::map<std::pair<std::string, std::string>, double> curv;
        for (const CurvatureRow& c : run.curvature) curv[{c.scenario_id, c.set_name}] = c.score;
        for (std::size_t i = 0; i < t.sets.size(); ++i) {
            const std::string& set = t.sets[i];
            std::size_t n = 0, ok = 0, expansions = 0;
            double wall = 0.0;
            std::vector<double> cand, dense;
            for (const std::string& s : t.scenarios) {
                const auto found = t.cells.find({s, set});
                if (found == t.cells.end()) continue;
                ++n;
                ok += found->second.success ? 1 : 0;
                expansions += found->second.expansions;
                wall += median(found->second.walls);
                const auto c = curv.find({s, set});
                const auto d = curv.find({s, run.dense_name});
                if (c != curv.end() && d != curv.end()) {
                    cand.push_back(c->second);
                    dense.push_back(d->second);
                }
            }
            const auto size = run.set_sizes.find(set);
            f << set << ',' << (size == run.set_sizes.end() ? 0 : size->second) << ',' << n << ',' << ok << ','
              << expansions << ',' << format_double(speed[i].expansion_ratio) << ','
              << matching_differential(cand, dense) << ',' << format_double(wall) << ','
              << format_double(speed[i].wall_ratio_min) << ',' << format_double(speed[i].wall_ratio_median) << '\n';
        }
    }
    close_out(f, path);
}

void write_scatter(const ReportInput& run, const std::filesystem::path& path) {
    std::map<std::pair<std::string, std::string>, double> curv;
    std::vector<std::string> sets;
    std::vector<std::string> scenarios;
    for (const CurvatureRow& c : run.curvature) {
        curv[{c.scenario_id, c.set_name}] = c.score;
        if (c.set_name != run.dense_name && std::find(sets.begin(), sets.end(), c.set_name) == sets.end()) {
            sets.push_back(c.set_name);
        }
        if (std::find(scenarios.begin(), scenarios.end(), c.scenario_id) == scenarios.end()) {
            scenarios.push_back(c.scenario_id);
        }
    }
    double vmax = 0.0;
    for (const auto& [key, v] : curv) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;

    constexpr double size = 400.0;
    constexpr double pad = 50.0;
    auto px = [&](double v) { return pad + size * v / vmax; };
    auto py = [&](double v) { return pad + size - size * v / vmax; };

    std::ofstream f = open_out(path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(size + 2 * pad, 0) << "\" height=\""
      << fixed(size + 2 * pad, 0) << "\">\n";
    f << "<rect x=\"" << fixed(pad, 0) << "\" y=\"" << fixed(pad, 0) << "\" width=\"" << fixed(size, 0)
      << "\" height=\"" << fixed(size, 0) << "\" fill=\"none\" stroke=\"black\"/>\n";
    f << "<line x1=\"" << fixed(px(0)) << "\" y1=\"" << fixed(py(0)) << "\" x2=\"" << fixed(px(vmax)) << "\" y2=\""
      << fixed(py(vmax)) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    f << "<text x=\"" << fixed(pad + size / 2, 0) << "\" y=\"" << fixed(2 * pad + size - 15, 0)
      << "\" text-anchor=\"middle\">dense curvature score (1/m)</text>\n";
    f << "<text x=\"15\" y=\"" << fixed(pad + size / 2, 0) << "\" transform=\"rotate(-90 15 "
      << fixed(pad + size / 2, 0) << ")\" text-anchor=\"middle\">set curvature score (1/m)</text>\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
        f << "<text x=\"" << fixed(pad + 5, 0) << "\" y=\"" << fixed(pad + 15 + 15 * i, 0) << "\" fill=\""
          << color_for(i) << "\">" << sets[i] << "</text>\n";
        for (const std::string& s : scenarios) {
            const auto c = curv.find({s, sets[i]});
            const auto d = curv.find({s, run.dense_name});
            if (c == curv.end() || d == curv.end()) continue;
            f << "<circle class=\"point\" data-scenario=\"" << s << "\" data-set=\"" << sets[i] << "\" cx=\""
              << fixed(px(d->second)) << "\" cy=\"" << fixed(py(c->second)) << "\" r=\"3\" fill=\"" << color_for(i)
              << "\"/>\n";
        }
    }
    f << "</svg>\n";
    close_out(f, path);
}

void write_scenario_svg(const ReportInput& run, const Scenario& sc, const std::vector<std::string>& sets,
                        const std::filesystem::path& path) {
    constexpr double scale = 10.0;
    const OccupancyGrid& g = sc.grid;
    const double w = g.width * g.resolution * scale;
    const double h = g.height * g.resolution * scale;
    auto sx = [&](double x) { return (x - g.origin.x) * scale; };
    auto sy = [&](double y) { return h - (y - g.origin.y) * scale; };

    std::ofstream f = open_out(path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w, 1) << "\" height=\"" << fixed(h, 1)
      << "\">\n<g fill=\"#bbbbbb\">\n";
    const double cell = g.resolution * scale;
    for (int cy = 0; cy < g.height; ++cy) {
        int cx = 0;
        while (cx < g.width) {
            if (!g.blocked(cx, cy)) {
                ++cx;
                continue;
            }
            const int begin = cx;
            while (cx < g.width && g.blocked(cx, cy)) ++cx;
            f << "<rect x=\"" << fixed(begin * cell, 2) << "\" y=\"" << fixed(h - (cy + 1) * cell, 2)
              << "\" width=\"" << fixed((cx - begin) * cell, 2) << "\" height=\"" << fixed(cell, 2) << "\"/>\n";
        }
    }
    f << "</g>\n";
    auto polyline = [&](const SampledPath& p, const std::string& color, const std::string& extra,
                        const std::string& label) {
        f << "<polyline data-set=\"" << label << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
          << extra << " points=\"";
        for (std::size_t i = 0; i < p.size(); ++i) {
            f << (i ? " " : "") << fixed(sx(p.points[i].x), 2) << ',' << fixed(sy(p.points[i].y), 2);
        }
        f << "\"/>\n";
    };
    polyline(sc.reference_path, "black", " stroke-dasharray=\"6 4\"", "reference");
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto found = run.plans.find({sc.id, sets[i]});
        if (found == run.plans.end() || found->second.empty()) continue;
        polyline(found->second, color_for(i), "", sets[i]);
        f << "<text x=\"5\" y=\"" << fixed(15 + 15 * i, 0) << "\" fill=\"" << color_for(i) << "\">" << sets[i]
          << "</text>\n";
    }
    f << "</svg>\n";
    close_out(f, path);
}

}  // namespace

void emit_reports(const ReportInput& run, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string());
    const Table t = aggregate(run.rows);
    write_summary(run, t, out_dir / "summary.csv");
    write_scatter(run, out_dir / "curvature_scatter.svg");
    std::vector<std::string> sets = t.sets;
    for (const auto& [key, path] : run.plans) {
        if (std::find(sets.begin(), sets.end(), key.second) == sets.end()) sets.push_back(key.second);
    }
    for (const Scenario& sc : run.scenarios) {
        write_scenario_svg(run, sc, sets, out_dir / ("scenario_" + safe_name(sc.id) + ".svg"));
    }
    const std::filesystem::path manifest = out_dir / "manifest.json";
    std::ofstream f = open_out(manifest);
    f << run.manifest_json << '\n';
    close_out(f, manifest);
}

}  // namespace latlearn
