#include "sga/job.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "sga/io.hpp"
#include "sga/oracles.hpp"
#include "sga/ot.hpp"

namespace sga {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

StepSchedule schedule_from(const JobConfig& c, int dim = 2) {
    // 3D default follows the annealing setting eta_0 = 5e-3; the 2D
    // default is constant 0.1
    if (dim == 3 && c.schedule_kind == "constant" && c.step == 0.1)
        return StepSchedule::annealing(5e-3);
    if (c.schedule_kind == "constant") return StepSchedule::constant(c.step);
    if (c.schedule_kind == "annealing") return StepSchedule::annealing(c.step);
    fail(ErrorKind::InvalidParams, "unknown schedule kind: " + c.schedule_kind);
}

void write_convergence_csv(const std::string& path, const ConvergenceLog& log,
                           const char* value_name) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::UnreadableFile, "cannot open " + path);
    out << "t," << value_name << ",grad_h1,eta,best_flag\n";
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& r = log.records[i];
        out << r.t << ',' << fmt17(r.value) << ',' << fmt17(r.grad_h1) << ','
            << fmt17(r.eta) << ',' << (static_cast<int>(i) == log.best_index ? 1 : 0) << '\n';
    }
}

void write_rate_csv(const std::string& path, const ConvergenceLog& log) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::UnreadableFile, "cannot open " + path);
    out << "t,log_gap\n";
    const double best = log.best_value();
    for (const auto& r : log.records) {
        const double gap = best - r.value;
        if (gap > 0.0) out << r.t << ',' << fmt17(std::log(gap)) << '\n';
    }
}

json config_echo(const JobConfig& c) {
    json j;
    j["inputs"] = c.inputs;
    j["weights"] = c.weights;
    j["scheme"] = c.scheme == SweepScheme::parallel     ? "parallel"
                  : c.scheme == SweepScheme::sequential ? "sequential"
                                                        : "random";
    j["schedule"] = c.schedule_kind;
    j["step"] = c.step;
    j["iterations"] = c.iterations;
    j["eval_every"] = c.eval_every;
    j["seed"] = c.seed;
    j["density_floor"] = c.density_floor;
    j["map_mode"] = c.map_mode == MapMode::argmin ? "argmin" : "gradient";
    j["back_and_forth"] = c.back_and_forth;
    if (c.grid_override) j["grid"] = *c.grid_override;
    return j;
}

} // namespace

DensityField resample_density(const DensityField& src, const GridSpec& target) {
    if (target.dim != src.grid.dim)
        fail(ErrorKind::InvalidParams, "resample_density: dimension mismatch");
    std::array<int, 3> factor{1, 1, 1};
    for (int j = 0; j < target.dim; ++j) {
        if (src.grid.shape[j] % target.shape[j] != 0)
            fail(ErrorKind::InvalidParams,
                 "resample_density: target extents must divide source extents");
        factor[j] = src.grid.shape[j] / target.shape[j];
    }
    DensityField out(target);
    for (std::size_t i = 0; i < src.grid.size(); ++i) {
        auto idx = src.grid.multi_index(i);
        for (int j = 0; j < target.dim; ++j) idx[j] /= factor[j];
        out.values[target.flat_index(idx)] += src.values[i];
    }
    double cells = 1.0;
    for (int j = 0; j < target.dim; ++j) cells *= factor[j];
    for (double& v : out.values) v /= cells;
    return out;
}

DensityField load_density_relative_floor(const std::string& path, double uniform_frac,
                                         const std::optional<std::vector<int>>& grid_override) {
    auto raw = load_raw_values(path);
    double sum = 0.0;
    for (double v : raw.values) {
        if (v < 0.0) fail(ErrorKind::NegativeInput, "negative raw value in " + path);
        sum += v;
    }
    std::vector<double> values(raw.values.size(), 0.0);
    if (sum > 0.0) {
        const double scale = 1.0 / (raw.grid.cell_volume() * sum);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = raw.values[i] * scale;
    }
    for (double& v : values) v += uniform_frac; // uniform density is 1 on [0,1]^d
    auto density = normalize_density(values, raw.grid);
    if (grid_override) {
        auto target = GridSpec::make(*grid_override);
        if (!(target == density.grid)) density = resample_density(density, target);
    }
    return density;
}

namespace {

int run_ot_like(const JobConfig& c) {
    if (c.inputs.size() != 2)
        fail(ErrorKind::InvalidParams, "ot needs exactly two inputs (--mu, --nu)");
    auto mu = load_density_relative_floor(c.inputs[0], c.density_floor, c.grid_override);
    auto nu = load_density_relative_floor(c.inputs[1], c.density_floor, c.grid_override);

    const auto t0 = std::chrono::steady_clock::now();
    OtResult res;
    OtOptions opts{c.eval_every};
    if (c.back_and_forth)
        res = two_step_baseline(mu, nu, schedule_from(c, mu.grid.dim), c.iterations, true, opts);
    else
        res = sga_two_marginal(mu, nu, schedule_from(c, mu.grid.dim), c.iterations, std::nullopt, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(c.out_dir);
    save_field(c.out_dir + "/potential.sgaf", res.f_best.grid, res.f_best.values, "potential");
    write_convergence_csv(c.out_dir + "/convergence.csv", res.log, "I");
    write_rate_csv(c.out_dir + "/rate.csv", res.log);

    json j;
    j["command"] = c.back_and_forth ? "ot (back-and-forth baseline)" : "ot (sga)";
    j["I_best"] = res.I_best;
    j["w2"] = res.w2;
    j["diverged"] = res.diverged;
    j["wall_time_seconds"] = secs;
    j["config"] = config_echo(c);
    std::ofstream(c.out_dir + "/summary.json") << j.dump(2) << '\n';
    std::cout << "W2 = " << fmt17(res.w2) << '\n';
    return res.diverged ? 3 : 0;
}

int run_barycenter(const JobConfig& c) {
    if (c.inputs.size() < 2)
        fail(ErrorKind::InvalidParams, "barycenter needs at least two inputs");
    std::vector<double> weights = c.weights;
    if (weights.empty())
        weights.assign(c.inputs.size(), 1.0 / static_cast<double>(c.inputs.size()));
    if (weights.size() != c.inputs.size())
        fail(ErrorKind::InvalidParams, "weight count does not match input count");

    // zero-weight marginals are dropped at ingestion
    std::vector<DensityField> marginals;
    std::vector<double> alive;
    for (std::size_t i = 0; i < c.inputs.size(); ++i) {
        if (weights[i] == 0.0) continue;
        marginals.push_back(
            load_density_relative_floor(c.inputs[i], c.density_floor, c.grid_override));
        alive.push_back(weights[i]);
    }
    auto prob = BarycenterProblem::make(std::move(marginals), Weights::make(alive));

    const auto t0 = std::chrono::steady_clock::now();
    BarycenterOptions opts;
    opts.eval_every_sweeps = c.eval_every;
    auto res = sga_barycenter(prob, c.scheme, schedule_from(c, prob.grid().dim), c.iterations, c.seed, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(c.out_dir);
    save_field(c.out_dir + "/barycenter.sgaf", res.barycenter.grid, res.barycenter.values,
               "density");
    if (res.barycenter.grid.dim >= 2)
        export_visual(res.barycenter, c.out_dir + "/barycenter.pgm");
    write_convergence_csv(c.out_dir + "/convergence.csv", res.log, "D");
    write_rate_csv(c.out_dir + "/rate.csv", res.log);

    json j;
    j["command"] = "barycenter";
    j["D_best"] = res.D_best;
    j["B_value"] = res.B_value;
    j["gap"] = res.gap;
    j["diverged"] = res.diverged;
    j["wall_time_seconds"] = secs;
    j["config"] = config_echo(c);
    std::ofstream(c.out_dir + "/summary.json") << j.dump(2) << '\n';
    std::cout << "D_best = " << fmt17(res.D_best) << ", B = " << fmt17(res.B_value)
              << ", gap = " << fmt17(res.gap) << '\n';
    return res.diverged ? 3 : 0;
}

int run_distance(const JobConfig& c) {
    if (c.inputs.size() != 2)
        fail(ErrorKind::InvalidParams, "distance needs exactly two inputs (--a, --b)");
    auto a = load_density_relative_floor(c.inputs[0], c.density_floor, c.grid_override);
    auto b = load_density_relative_floor(c.inputs[1], c.density_floor, c.grid_override);
    W2Config cfg;
    cfg.schedule = schedule_from(c, a.grid.dim);
    cfg.iterations = c.iterations;
    const double w2 = w2_distance(a, b, cfg);
    std::cout << "W2 = " << fmt17(w2) << '\n';
    if (!c.out_dir.empty()) {
        std::filesystem::create_directories(c.out_dir);
        json j;
        j["command"] = "distance";
        j["w2"] = w2;
        j["config"] = config_echo(c);
        std::ofstream(c.out_dir + "/summary.json") << j.dump(2) << '\n';
    }
    return 0;
}

// Deterministic 1D fixtures: Gaussian bumps at various locations.
DensityField bump_1d(const GridSpec& g, double center, double sigma) {
    std::vector<double> raw(g.size());
    for (int k = 0; k < g.shape[0]; ++k) {
        const double x = g.center(0, k);
        raw[k] = std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma));
    }
    return normalize_density(raw, g);
}

int run_oracle_check(const JobConfig& c) {
    const auto g = GridSpec::make_1d(256);
    struct Row {
        std::string name;
        double oracle, solver, tol;
    };
    std::vector<Row> rows;

    auto mu = bump_1d(g, 0.3, 0.05);
    auto nu = bump_1d(g, 0.7, 0.08);

    {
        auto res = sga_two_marginal(mu, nu, StepSchedule::constant(0.1), 2000);
        rows.push_back({"w2_sga_vs_quantile", oracle::quantile_w2_1d(mu, nu), res.w2, 0.01});
    }
    {
        W2Config cfg;
        cfg.iterations = 600;
        rows.push_back({"w2_bfm_vs_quantile", oracle::quantile_w2_1d(mu, nu),
                        w2_distance(mu, nu, cfg), 0.01});
    }
    {
        auto rho = bump_1d(g, 0.5, 0.06);
        std::vector<DensityField> marg{mu, nu, rho};
        auto prob = BarycenterProblem::make(marg, Weights::make(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}));
        BarycenterOptions opts;
        opts.compute_primal = false;
        auto res = sga_barycenter(prob, SweepScheme::parallel, StepSchedule::constant(0.1),
                                  1000, 0, opts);
        auto ref = oracle::quantile_barycenter_1d(prob);
        rows.push_back({"barycenter_vs_quantile_avg_w2",
                        0.0, oracle::quantile_w2_1d(res.barycenter, ref), 0.01});
    }

    bool all_ok = true;
    std::printf("%-32s %12s %12s %10s  %s\n", "check", "oracle", "solver", "tol", "status");
    json report = json::array();
    for (const auto& r : rows) {
        const double err = (r.oracle != 0.0) ? std::abs(r.solver - r.oracle) / std::abs(r.oracle)
                                             : std::abs(r.solver);
        const bool ok = err <= r.tol;
        all_ok = all_ok && ok;
        std::printf("%-32s %12.6f %12.6f %10.3g  %s\n", r.name.c_str(), r.oracle, r.solver,
                    r.tol, ok ? "ok" : "FAIL");
        report.push_back({{"check", r.name}, {"oracle", r.oracle}, {"solver", r.solver},
                          {"rel_err", err}, {"tol", r.tol}, {"pass", ok}});
    }
    if (!c.out_dir.empty()) {
        std::filesystem::create_directories(c.out_dir);
        std::ofstream(c.out_dir + "/oracle_check.json") << report.dump(2) << '\n';
    }
    return all_ok ? 0 : 1;
}

} // namespace

int run_job(const JobConfig& config) {
    switch (config.command) {
        case JobConfig::Command::ot: return run_ot_like(config);
        case JobConfig::Command::barycenter: return run_barycenter(config);
        case JobConfig::Command::distance: return run_distance(config);
        case JobConfig::Command::oracle_check: return run_oracle_check(config);
    }
    return 2;
}

} // namespace sga
