#pragma once
// Serialization: JSON schemas for profiles, networks, trajectories and
// reports, the diagnostics CSV contract, SVG emission, and atomic writes.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "../../vendor/json.hpp"
#include "blowup.hpp"
#include "classify.hpp"
#include "energy.hpp"
#include "flow.hpp"
#include "shooting.hpp"

namespace lensflow {

using json = nlohmann::json;

// ------------------------------------------------------------------
// JSON: {"time": t, "a": a, "b": b, "nodes": [[x, u], ...], "symmetric": b}
// ------------------------------------------------------------------

inline json to_json(const GridProfile& p) {
    json nodes = json::array();
    for (size_t i = 0; i < p.x.size(); ++i) nodes.push_back({p.x[i], p.u[i]});
    return {{"time", p.time}, {"a", p.a}, {"b", p.b}, {"nodes", nodes}, {"symmetric", true}};
}

inline GridProfile profile_from_json(const json& j) {
    GridProfile p;
    p.time = j.at("time").get<double>();
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    for (const auto& node : j.at("nodes")) {
        p.x.push_back(node.at(0).get<double>());
        p.u.push_back(node.at(1).get<double>());
    }
    return p;
}

inline json to_json(Vec2 v) { return {v.x, v.y}; }

inline Vec2 vec2_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json to_json(const NetworkSnapshot& s) {
    auto poly = [](const Polyline& p) {
        json out = json::array();
        for (const auto& q : p) out.push_back({q.x, q.y});
        return out;
    };
    auto ray = [](const Ray& r) {
        return json{{"base", to_json(r.base)}, {"dir", to_json(r.dir)}};
    };
    json junctions = json::array();
    for (const auto& j : s.junctions) {
        json tangents = json::array();
        for (const auto& t : j.tangents) tangents.push_back(to_json(t));
        junctions.push_back({{"point", to_json(j.point)}, {"tangents", tangents}});
    }
    return {{"upper_arc", poly(s.upper_arc)}, {"lower_arc", poly(s.lower_arc)},
            {"left_ray", ray(s.left_ray)},   {"right_ray", ray(s.right_ray)},
            {"junctions", junctions},        {"symmetric", s.symmetric}};
}

inline NetworkSnapshot network_from_json(const json& j) {
    NetworkSnapshot s;
    auto poly = [](const json& arr) {
        Polyline out;
        for (const auto& q : arr) out.push_back(vec2_from_json(q));
        return out;
    };
    auto ray = [](const json& r) {
        return Ray{vec2_from_json(r.at("base")), vec2_from_json(r.at("dir"))};
    };
    s.upper_arc = poly(j.at("upper_arc"));
    s.lower_arc = poly(j.at("lower_arc"));
    s.left_ray = ray(j.at("left_ray"));
    s.right_ray = ray(j.at("right_ray"));
    const auto& jj = j.at("junctions");
    for (size_t k = 0; k < 2 && k < jj.size(); ++k) {
        s.junctions[k].point = vec2_from_json(jj[k].at("point"));
        for (size_t t = 0; t < 3; ++t)
            s.junctions[k].tangents[t] = vec2_from_json(jj[k].at("tangents").at(t));
    }
    s.symmetric = j.at("symmetric").get<bool>();
    return s;
}

inline json to_json(const ExtinctionEstimate& e) {
    return {{"T_hat", e.T_hat},
            {"x0_hat", e.x0_hat},
            {"area_slope", e.area_slope},
            {"area_fit_rms", e.area_fit_rms}};
}

inline json to_json(const FlowTrajectory& traj) {
    json snaps = json::array();
    for (const auto& p : traj.snapshots) snaps.push_back(to_json(p));
    json out = {{"snapshots", snaps}, {"reached_extinction", traj.reached_extinction}};
    if (std::isfinite(traj.extinction.T_hat)) out["extinction"] = to_json(traj.extinction);
    return out;
}

// diagnostics are cheap to recompute, so only the states are stored
inline FlowTrajectory trajectory_from_json(const json& j) {
    FlowTrajectory traj;
    for (const auto& s : j.at("snapshots")) {
        traj.snapshots.push_back(profile_from_json(s));
        traj.diagnostics.push_back(compute_diagnostics(traj.snapshots.back()));
    }
    traj.reached_extinction = j.value("reached_extinction", false);
    if (j.contains("extinction")) {
        const auto& e = j.at("extinction");
        traj.extinction.T_hat = e.at("T_hat").get<double>();
        traj.extinction.x0_hat = e.at("x0_hat").get<double>();
        traj.extinction.area_slope = e.at("area_slope").get<double>();
        traj.extinction.area_fit_rms = e.at("area_fit_rms").get<double>();
    }
    return traj;
}

// ------------------------------------------------------------------
// report serialization
// ------------------------------------------------------------------

inline json to_json(const EnergyReport& r) {
    return {{"eta0_bracket", {r.eta0_lo, r.eta0_hi}},
            {"eta0", r.eta0_value},
            {"psi_eta0", r.psi_eta0},
            {"psi_riemann_bound", r.psi_riemann_bound},
            {"eta_star", r.eta_star_value},
            {"sigma_max", r.sigma_max},
            {"theta_limits",
             {{"near_one", r.theta_near_one},
              {"large", r.theta_large},
              {"extrapolated", r.theta_limit}}},
            {"psi_sign_changes", r.psi_sign_changes}};
}

inline json to_json(const CertificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"claim", c.claim},
                          {"range_tested", c.range_tested},
                          {"margin", c.margin},
                          {"passed", c.passed}});
    return {{"checks", checks}, {"constants", r.constants_used}, {"all_passed", r.all_passed()}};
}

inline json to_json(const FishSolution& f) {
    return {{"r_min", f.r_min},
            {"K", f.K},
            {"energy", f.energy_level.E},
            {"S_plus", f.energy_level.S_plus},
            {"rho", f.energy_level.rho},
            {"eta", f.energy_level.eta},
            {"eta_bar", f.energy_level.eta_bar},
            {"ray_angle", f.ray_angle},
            {"loop_turning", f.loop_turning},
            {"closure_residual", f.closure_residual},
            {"network", to_json(f.geometry)}};
}

inline json to_json(const RescaledSequence& seq) {
    json rows = json::array();
    for (size_t i = 0; i < seq.lambdas.size(); ++i)
        rows.push_back({{"lambda", seq.lambdas[i]},
                        {"hausdorff", seq.hausdorff_to_limit[i]},
                        {"density_gap_rms", seq.density_gap_rms[i]}});
    return {{"tau", seq.tau}, {"extinction", to_json(seq.extinction)}, {"scales", rows}};
}

// ------------------------------------------------------------------
// diagnostics CSV; the header is a stable contract
// ------------------------------------------------------------------

inline constexpr const char* diagnostics_csv_header =
    "time,area,length,kappa_min,kappa_max,ratio_min,a,b";

inline std::string diagnostics_csv(const std::vector<Diagnostics>& rows) {
    std::ostringstream out;
    out << diagnostics_csv_header << "\n";
    char line[256];
    for (const auto& d : rows) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      d.time, d.area, d.length, d.kappa_min, d.kappa_max, d.ratio_min, d.a, d.b);
        out << line;
    }
    return out.str();
}

inline std::string blowup_csv(const RescaledSequence& seq) {
    std::ostringstream out;
    out << "i,lambda,hausdorff,density_gap_rms\n";
    char line[192];
    for (size_t i = 0; i < seq.lambdas.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", i, seq.lambdas[i],
                      seq.hausdorff_to_limit[i], seq.density_gap_rms[i]);
        out << line;
    }
    return out.str();
}

// ------------------------------------------------------------------
// SVG emission: fixed path order (upper, lower, left ray, right ray),
// viewBox from the bounding box plus a 10% margin, fixed precision
// ------------------------------------------------------------------

struct SvgStyle {
    double width_px = 640.0;
    std::string arc_color = "#14406e";
    std::string ray_color = "#777777";
    double ray_fraction = 0.3;  // drawn ray length relative to the box diagonal
};

namespace detail {

inline void svg_path(std::ostringstream& out, const Polyline& p, const std::string& color,
                     double scale, double ox, double oy) {
    out << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
    char buf[64];
    for (size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%c%.4f %.4f", i == 0 ? 'M' : 'L',
                      (p[i].x - ox) * scale, (oy - p[i].y) * scale);
        out << buf << (i + 1 < p.size() ? " " : "");
    }
    out << "\"/>\n";
}

}  // namespace detail

inline std::string emit_svg(const NetworkSnapshot& s, const SvgStyle& style = {}) {
    if (s.upper_arc.empty() && s.lower_arc.empty())
        throw std::invalid_argument("emit_svg: empty geometry");
    double xmin = inf, xmax = -inf, ymin = inf, ymax = -inf;
    auto grow = [&](Vec2 q) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    };
    for (const auto* arc : {&s.upper_arc, &s.lower_arc})
        for (const auto& q : *arc) grow(q);
    const double diag = std::hypot(xmax - xmin, ymax - ymin);
    const double ray_len = std::max(style.ray_fraction * diag, 1e-3);
    for (const auto* ray : {&s.left_ray, &s.right_ray}) {
        grow(ray->base);
        grow(ray->base + ray_len * normalized(ray->dir));
    }
    const double margin = 0.1 * std::max(xmax - xmin, ymax - ymin);
    xmin -= margin;
    xmax += margin;
    ymin -= margin;
    ymax += margin;
    const double scale = style.width_px / (xmax - xmin);
    const double height = (ymax - ymin) * scale;

    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.4f %.4f\">\n",
                  style.width_px, height);
    out << buf;
    detail::svg_path(out, s.upper_arc, style.arc_color, scale, xmin, ymax);
    detail::svg_path(out, s.lower_arc, style.arc_color, scale, xmin, ymax);
    for (const auto* ray : {&s.left_ray, &s.right_ray}) {
        const Polyline stub{ray->base, ray->base + ray_len * normalized(ray->dir)};
        detail::svg_path(out, stub, style.ray_color, scale, xmin, ymax);
    }
    out << "</svg>\n";
    return out.str();
}

// ------------------------------------------------------------------
// atomic file writes: temp file in the target directory, then rename
// ------------------------------------------------------------------

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace lensflow
