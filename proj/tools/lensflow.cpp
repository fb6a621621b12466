// lensflow: curve shortening flow of lens-shaped triple-junction networks.
//
// Subcommands: evolve, selfsim, energy, fish, certify, blowup.
// Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "../vendor/CLI11.hpp"
#include "lensflow/lensflow.hpp"

namespace fs = std::filesystem;
using namespace lensflow;

namespace {

void print_kv(const char* key, double value) { std::printf("%s=%.10g\n", key, value); }

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------------
// evolve
// ------------------------------------------------------------------

struct EvolveOpts {
    std::string init = "circular-arc";
    double width = 2.0;
    double eps = 0.0;
    double t_end = -1.0;  // <= 0 means run to the area floor
    std::string scheme = "explicit";
    std::string out_dir;
    FlowConfig cfg;
};

int run_evolve(const EvolveOpts& o) {
    LensParams params;
    params.width = o.width;
    params.n = o.cfg.n;
    params.eps = o.eps;
    LensKind kind = LensKind::circular_arc;
    if (o.init == "perturbed") {
        kind = LensKind::perturbed;
    } else if (o.init == "selfsim") {
        kind = LensKind::scaled_selfsimilar;
        const SymmetricLens lens = find_symmetric_lens();
        params.reference = selfsim_reference(lens.profile);
        params.lambda_scale = o.width / (2.0 * lens.b);
    }

    FlowConfig cfg = o.cfg;
    cfg.scheme = (o.scheme == "semi-implicit") ? Scheme::semi_implicit : Scheme::explicit_euler;
    if (o.t_end > 0.0) cfg.t_end = o.t_end;

    const GridProfile initial = build_initial_lens(kind, params);
    const FlowTrajectory traj = evolve(initial, cfg);

    const fs::path dir = o.out_dir;
    write_file_atomic(dir / "diagnostics.csv", diagnostics_csv(traj.diagnostics));
    write_file_atomic(dir / "snapshots.json", json_text(to_json(traj)));
    write_file_atomic(dir / "lens.svg", emit_svg(lens_network(traj.snapshots.back())));

    print_kv("snapshots", static_cast<double>(traj.snapshots.size()));
    print_kv("final_time", traj.snapshots.back().time);
    print_kv("final_area", traj.diagnostics.back().area);
    if (std::isfinite(traj.extinction.T_hat)) {
        print_kv("T_hat", traj.extinction.T_hat);
        print_kv("x0_hat", traj.extinction.x0_hat);
    }
    return 0;
}

// ------------------------------------------------------------------
// selfsim
// ------------------------------------------------------------------

int run_selfsim(double tol, const std::string& out_dir) {
    const SymmetricLens lens = find_symmetric_lens(tol);
    print_kv("H", lens.H);
    print_kv("b", lens.b);
    print_kv("E_u", lens.profile.energy);
    print_kv("eta", eta_from_h(lens.H).upper);
    if (!out_dir.empty()) {
        LensParams params;
        params.n = 512;
        params.reference = selfsim_reference(lens.profile);
        const GridProfile p = build_initial_lens(LensKind::scaled_selfsimilar, params);
        const fs::path dir = out_dir;
        write_file_atomic(dir / "profile.json", json_text(to_json(p)));
        write_file_atomic(dir / "selfsim.svg", emit_svg(lens_network(p)));
    }
    return 0;
}

// ------------------------------------------------------------------
// energy
// ------------------------------------------------------------------

struct EnergyOpts {
    std::vector<double> etas;
    std::vector<double> rhos;
    bool certify = false;
    bool json_out = false;
    std::string out_path;
};

int check_energy_inequalities(const EnergyReport& r) {
    struct Row {
        const char* name;
        bool ok;
        double value;
    };
    const std::vector<Row> rows = {
        {"psi_eta0_in_(0.72,0.785]", r.psi_eta0 > 0.72 && r.psi_eta0 <= 0.785, r.psi_eta0},
        {"psi_riemann_bound<=0.785", r.psi_riemann_bound <= 0.785, r.psi_riemann_bound},
        {"psi_minus_pi_over_3_single_sign_change", r.psi_sign_changes == 1,
         static_cast<double>(r.psi_sign_changes)},
        {"eta_star_in_(eta0,1.9)", r.eta_star_value > r.eta0_value && r.eta_star_value < 1.9,
         r.eta_star_value},
        {"sigma_max<2pi/3-0.01", r.sigma_max < 2.0 * pi / 3.0 - 0.01, r.sigma_max},
        {"theta_near_one=pi/sqrt2", std::abs(r.theta_near_one - pi / std::sqrt(2.0)) < 1e-3,
         r.theta_near_one},
        {"theta_limit=pi/2", std::abs(r.theta_limit - pi / 2.0) < 1e-3, r.theta_limit},
    };
    bool all = true;
    for (const auto& row : rows) {
        std::printf("%s %s (value=%.10g)\n", row.ok ? "PASS" : "FAIL", row.name, row.value);
        all = all && row.ok;
    }
    return all ? 0 : 1;
}

int run_energy(const EnergyOpts& o) {
    for (double e : o.etas) {
        print_kv("eta", e);
        print_kv("C", coefficient_C(e));
        print_kv("psi", psi(e));
    }
    for (double r : o.rhos) {
        print_kv("rho", r);
        print_kv("theta", theta(r));
    }
    int rc = 0;
    if (o.certify || o.json_out || !o.out_path.empty()) {
        const EnergyReport report = energy_report();
        if (o.certify) rc = check_energy_inequalities(report);
        const std::string text = json_text(to_json(report));
        if (!o.out_path.empty()) write_file_atomic(o.out_path, text);
        if (o.json_out) std::fputs(text.c_str(), stdout);
    }
    return rc;
}

// ------------------------------------------------------------------
// fish
// ------------------------------------------------------------------

int run_fish(double tol, const std::string& out_dir) {
    const FishSolution fish = find_fish(tol);
    print_kv("r_min", fish.r_min);
    print_kv("K", fish.K);
    print_kv("E", fish.energy_level.E);
    print_kv("ray_angle", fish.ray_angle);
    print_kv("closure_residual", fish.closure_residual);
    if (!out_dir.empty()) {
        const fs::path dir = out_dir;
        write_file_atomic(dir / "fish.json", json_text(to_json(fish)));
        write_file_atomic(dir / "fish.svg", emit_svg(fish.geometry));
    }
    return 0;
}

// ------------------------------------------------------------------
// certify
// ------------------------------------------------------------------

void print_certification(const CertificationReport& rep) {
    for (const auto& c : rep.checks)
        std::printf("%s %s [%s] margin=%.6g\n", c.passed ? "PASS" : "FAIL", c.claim.c_str(),
                    c.range_tested.c_str(), c.margin);
}

int run_certify(bool json_out, const std::string& out_path) {
    const CertificationReport lens = certify_lens_uniqueness();
    const CertificationReport fish = certify_asymmetric_fish_nonexistence();
    const bool all = lens.all_passed() && fish.all_passed();
    const json report = {{"lens_uniqueness", to_json(lens)},
                         {"asymmetric_fish_nonexistence", to_json(fish)},
                         {"all_passed", all}};
    const std::string text = json_text(report);
    if (!out_path.empty()) write_file_atomic(out_path, text);
    if (json_out) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::puts("lens uniqueness:");
        print_certification(lens);
        std::puts("asymmetric fish nonexistence:");
        print_certification(fish);
        std::printf("all_passed=%s\n", all ? "true" : "false");
    }
    return all ? 0 : 1;
}

// ------------------------------------------------------------------
// blowup
// ------------------------------------------------------------------

int run_blowup(const std::string& snapshots_path, std::vector<double> lambdas, double tau,
               const std::string& out_path) {
    const FlowTrajectory traj = trajectory_from_json(json::parse(read_file(snapshots_path)));
    if (lambdas.empty()) lambdas = {2.0, 4.0, 8.0, 16.0};
    const RescaledSequence seq = convergence_report(traj, lambdas, tau);
    const std::string csv = blowup_csv(seq);
    if (!out_path.empty())
        write_file_atomic(out_path, csv);
    else
        std::fputs(csv.c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curve shortening flow of lens-shaped triple-junction networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML file (sections per subcommand)");

    EvolveOpts ev;
    auto* evolve_cmd = app.add_subcommand("evolve", "run the lens flow and write diagnostics");
    evolve_cmd->add_option("--init", ev.init, "initial lens shape")
        ->check(CLI::IsMember({"circular-arc", "selfsim", "perturbed"}))
        ->capture_default_str();
    evolve_cmd->add_option("--width", ev.width, "contact chord b - a")->capture_default_str();
    evolve_cmd->add_option("--n", ev.cfg.n, "grid segments")->capture_default_str();
    evolve_cmd->add_option("--eps", ev.eps, "relative bump height for perturbed init")
        ->capture_default_str();
    evolve_cmd->add_option("--cfl", ev.cfg.cfl, "parabolic CFL number in (0, 0.5]")
        ->capture_default_str();
    evolve_cmd->add_option("--scheme", ev.scheme, "time stepper")
        ->check(CLI::IsMember({"explicit", "semi-implicit"}))
        ->capture_default_str();
    evolve_cmd->add_option("--t-end", ev.t_end, "stop time (<= 0: run to the area floor)");
    evolve_cmd->add_option("--area-floor", ev.cfg.area_floor, "stop when area drops below")
        ->capture_default_str();
    evolve_cmd->add_option("--snapshot-stride", ev.cfg.snapshot_stride, "steps between snapshots")
        ->capture_default_str();
    evolve_cmd->add_option("--out", ev.out_dir, "output directory")->required();

    double selfsim_tol = 1e-10;
    std::string selfsim_out;
    auto* selfsim_cmd =
        app.add_subcommand("selfsim", "solve for the self-similar lens profile");
    selfsim_cmd->add_option("--tol", selfsim_tol, "shooting tolerance")->capture_default_str();
    selfsim_cmd->add_option("--out", selfsim_out, "directory for profile.json + selfsim.svg");

    EnergyOpts en;
    auto* energy_cmd = app.add_subcommand("energy", "evaluate turning quadratures and bounds");
    energy_cmd->add_option("--eta", en.etas, "print C and psi at these eta values");
    energy_cmd->add_option("--rho", en.rhos, "print theta at these radius ratios");
    energy_cmd->add_flag("--certify", en.certify, "run the inequality suite");
    energy_cmd->add_flag("--json", en.json_out, "print the report as JSON");
    energy_cmd->add_option("--out", en.out_path, "write the JSON report to this file");

    double fish_tol = 1e-10;
    std::string fish_out;
    auto* fish_cmd = app.add_subcommand("fish", "solve for the shrinking fish network");
    fish_cmd->add_option("--tol", fish_tol, "root tolerance")->capture_default_str();
    fish_cmd->add_option("--out", fish_out, "directory for fish.json + fish.svg");

    bool certify_json = false;
    std::string certify_out;
    auto* certify_cmd =
        app.add_subcommand("certify", "run all classification inequality checks");
    certify_cmd->add_flag("--json", certify_json, "print the report as JSON");
    certify_cmd->add_option("--out", certify_out, "write the JSON report to this file");

    std::string blowup_snapshots, blowup_out;
    std::vector<double> blowup_lambdas;
    double blowup_tau = -0.5;
    auto* blowup_cmd =
        app.add_subcommand("blowup", "rescale a stored trajectory toward its extinction point");
    blowup_cmd->add_option("--snapshots", blowup_snapshots, "trajectory JSON from evolve")
        ->required();
    blowup_cmd->add_option("--lambdas", blowup_lambdas, "increasing dilation scales");
    blowup_cmd->add_option("--tau", blowup_tau, "rescaled time to compare at (< 0)")
        ->capture_default_str();
    blowup_cmd->add_option("--out", blowup_out, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (evolve_cmd->parsed()) return run_evolve(ev);
        if (selfsim_cmd->parsed()) return run_selfsim(selfsim_tol, selfsim_out);
        if (energy_cmd->parsed()) return run_energy(en);
        if (fish_cmd->parsed()) return run_fish(fish_tol, fish_out);
        if (certify_cmd->parsed()) return run_certify(certify_json, certify_out);
        if (blowup_cmd->parsed())
            return run_blowup(blowup_snapshots, blowup_lambdas, blowup_tau, blowup_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lensflow: %s\n", e.what());
        return 1;
    }
    return 2;
}
