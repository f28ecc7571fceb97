#include <CLI11.hpp>

#include <iostream>

#include "sga/job.hpp"

namespace {

int exit_code_for(const sga::Error& e) {
    using K = sga::ErrorKind;
    switch (e.kind()) {
        case K::UnreadableFile:
        case K::BadMagic:
            return 4;
        case K::NonFiniteIterate:
            return 3;
        default:
            return 2;
    }
}

void add_common(CLI::App* cmd, sga::JobConfig& cfg) {
    cmd->add_option("--iters", cfg.iterations, "iteration / sweep count");
    cmd->add_option("--step", cfg.step, "step size eta");
    cmd->add_option("--schedule", cfg.schedule_kind, "constant | annealing");
    cmd->add_option("--eval-every", cfg.eval_every, "evaluate the objective every k iterations");
    cmd->add_option("--floor", cfg.density_floor, "density floor as a fraction of uniform");
    cmd->add_option("--grid", cfg.grid_override, "downsample inputs to this grid (e.g. 256 256)");
    cmd->add_option("--out", cfg.out_dir, "output directory");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-based exact Wasserstein barycenter solver (Sobolev gradient ascent)"};
    app.require_subcommand(1);

    sga::JobConfig cfg;
    std::string mu, nu, a, b, scheme = "parallel", map_mode = "argmin";

    auto* ot = app.add_subcommand("ot", "two-marginal optimal transport");
    ot->add_option("--mu", mu, "first marginal")->required();
    ot->add_option("--nu", nu, "second marginal")->required();
    ot->add_flag("--bfm", cfg.back_and_forth, "run the back-and-forth two-step baseline");
    add_common(ot, cfg);

    auto* bary = app.add_subcommand("barycenter", "Wasserstein barycenter");
    bary->add_option("--inputs", cfg.inputs, "marginal density files")->required();
    bary->add_option("--weights", cfg.weights, "comma-separated weights")->delimiter(',');
    bary->add_option("--scheme", scheme, "parallel | sequential | random");
    bary->add_option("--seed", cfg.seed, "seed for the random scheme");
    bary->add_option("--map-mode", map_mode, "argmin | gradient");
    add_common(bary, cfg);

    auto* dist = app.add_subcommand("distance", "W2 distance via the back-and-forth baseline");
    dist->add_option("--a", a, "first density")->required();
    dist->add_option("--b", b, "second density")->required();
    add_common(dist, cfg);

    auto* check = app.add_subcommand("oracle-check", "solver vs closed-form 1D oracles");
    check->add_option("--out", cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (ot->parsed()) {
            cfg.command = sga::JobConfig::Command::ot;
            cfg.inputs = {mu, nu};
            if (cfg.out_dir.empty()) throw sga::Error(sga::ErrorKind::InvalidParams, "--out is required");
        } else if (bary->parsed()) {
            cfg.command = sga::JobConfig::Command::barycenter;
            if (cfg.out_dir.empty()) throw sga::Error(sga::ErrorKind::InvalidParams, "--out is required");
            if (scheme == "parallel") cfg.scheme = sga::SweepScheme::parallel;
            else if (scheme == "sequential") cfg.scheme = sga::SweepScheme::sequential;
            else if (scheme == "random") cfg.scheme = sga::SweepScheme::random;
            else throw sga::Error(sga::ErrorKind::InvalidParams, "unknown scheme: " + scheme);
            if (map_mode == "argmin") cfg.map_mode = sga::MapMode::argmin;
            else if (map_mode == "gradient") cfg.map_mode = sga::MapMode::gradient;
            else throw sga::Error(sga::ErrorKind::InvalidParams, "unknown map mode: " + map_mode);
        } else if (dist->parsed()) {
            cfg.command = sga::JobConfig::Command::distance;
            cfg.inputs = {a, b};
        } else {
            cfg.command = sga::JobConfig::Command::oracle_check;
        }
        return sga::run_job(cfg);
    } catch (const sga::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
