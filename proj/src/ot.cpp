#include "sga/ot.hpp"

#include <cmath>
#include <stdexcept>

#include "sga/c_transform.hpp"
#include "sga/poisson.hpp"
#include "sga/transport.hpp"

namespace sga {

double StepSchedule::eta(int t) const {
    switch (kind) {
        case ScheduleKind::constant: return eta0;
        case ScheduleKind::annealing: return eta0 / std::sqrt(static_cast<double>(t + 1));
        case ScheduleKind::theoretical_constant: return R_est / (M_est * std::sqrt(static_cast<double>(T)));
        case ScheduleKind::theoretical_annealing:
            return R_est / (M_est * std::sqrt(static_cast<double>(t + 1)));
    }
    return eta0;
}

StepSchedule StepSchedule::constant(double eta0) {
    if (!(eta0 > 0.0)) fail(ErrorKind::InvalidParams, "step size must be positive");
    return {ScheduleKind::constant, eta0, 0.0, 0.0, 0};
}

StepSchedule StepSchedule::annealing(double eta0) {
    if (!(eta0 > 0.0)) fail(ErrorKind::InvalidParams, "step size must be positive");
    return {ScheduleKind::annealing, eta0, 0.0, 0.0, 0};
}

StepSchedule StepSchedule::theoretical_constant(double R_est, double M_est, int T) {
    if (!(R_est > 0.0) || !(M_est > 0.0) || T < 1)
        fail(ErrorKind::InvalidParams, "theoretical schedule needs R > 0, M > 0, T >= 1");
    return {ScheduleKind::theoretical_constant, 0.0, R_est, M_est, T};
}

StepSchedule StepSchedule::theoretical_annealing(double R_est, double M_est) {
    if (!(R_est > 0.0) || !(M_est > 0.0))
        fail(ErrorKind::InvalidParams, "theoretical schedule needs R > 0, M > 0");
    return {ScheduleKind::theoretical_annealing, 0.0, R_est, M_est, 0};
}

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Sobolev ascent direction for I at f: (-Δ)^{-1}(μ - T_{f^c}#ν), zero-meaned.
PotentialField ascent_direction(const CTransformResult& ct, const DensityField& mu,
                                const DensityField& nu) {
    auto pushed = pushforward(nu, transport_map_from_argmin(ct, nu.grid));
    std::vector<double> diff(mu.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = mu.values[i] - pushed.values[i];
    return zero_mean(plan_for(mu.grid)->solve_neumann(diff));
}

void finalize(OtResult& res) {
    res.I_best = res.log.best_value();
    res.w2 = std::sqrt(2.0 * std::max(res.I_best, 0.0));
}

} // namespace

OtResult sga_two_marginal(const DensityField& mu, const DensityField& nu,
                          const StepSchedule& schedule, int iterations,
                          const std::optional<PotentialField>& f0,
                          const OtOptions& opts) {
    require_same_grid(mu.grid, nu.grid, "sga_two_marginal");
    if (iterations < 1) fail(ErrorKind::InvalidParams, "iterations must be >= 1");
    PotentialField f = f0 ? *f0 : PotentialField(mu.grid);
    require_same_grid(f.grid, mu.grid, "sga_two_marginal");
    require_finite(f.values, "sga_two_marginal");

    OtResult res;
    res.f_best = f;
    res.log.best_index = 0;

    for (int t = 0; t <= iterations; ++t) {
        if (!all_finite(f.values)) { res.diverged = true; break; }
        auto ct = c_transform_fast(f);
        auto dir = ascent_direction(ct, mu, nu);
        const double gnorm = h1_norm(dir);
        const double eta = schedule.eta(t);
        if (t % opts.eval_every == 0 || t == iterations) {
            const double value = integrate(f, mu) + integrate(ct.fc, nu);
            res.log.records.push_back({t, value, gnorm, eta});
            if (value > res.log.best_value() || res.log.records.size() == 1) {
                res.log.best_index = static_cast<int>(res.log.records.size()) - 1;
                res.f_best = f;
            }
        }
        if (t == iterations) break;
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += eta * dir.values[i];
    }
    finalize(res);
    return res;
}

OtResult two_step_baseline(const DensityField& mu, const DensityField& nu,
                           const StepSchedule& schedule, int iterations,
                           bool back_and_forth,
                           const OtOptions& opts) {
    require_same_grid(mu.grid, nu.grid, "two_step_baseline");
    if (iterations < 1) fail(ErrorKind::InvalidParams, "iterations must be >= 1");
    PotentialField f(mu.grid);

    OtResult res;
    res.f_best = f;
    res.log.best_index = 0;

    auto objective = [&](const PotentialField& g, const DensityField& a, const DensityField& b) {
        auto ct = c_transform_fast(g);
        return integrate(g, a) + integrate(ct.fc, b);
    };

    for (int t = 0; t <= iterations; ++t) {
        if (!all_finite(f.values)) { res.diverged = true; break; }
        auto ct = c_transform_fast(f);
        auto dir = ascent_direction(ct, mu, nu);
        const double gnorm = h1_norm(dir);
        const double eta = schedule.eta(t);
        if (t % opts.eval_every == 0 || t == iterations) {
            const double value = integrate(f, mu) + integrate(ct.fc, nu);
            res.log.records.push_back({t, value, gnorm, eta});
            if (value > res.log.best_value() || res.log.records.size() == 1) {
                res.log.best_index = static_cast<int>(res.log.records.size()) - 1;
                res.f_best = f;
            }
        }
        if (t == iterations) break;

        const bool twin_turn = back_and_forth && (t % 2 == 1);
        if (!twin_turn) {
            PotentialField half = f;
            for (std::size_t i = 0; i < half.values.size(); ++i)
                half.values[i] += eta * dir.values[i];
            const double value_half = objective(half, mu, nu);
            f = double_c_transform(half);
            const double value_cc = objective(f, mu, nu);
            if (value_cc < value_half - 1e-10)
                throw std::logic_error("double c-transform decreased the objective");
        } else {
            // twin problem in (ν, μ): update ψ = f^c, transfer back via f = ψ^c
            PotentialField psi = ct.fc;
            auto ct_psi = c_transform_fast(psi);
            auto dir_psi = ascent_direction(ct_psi, nu, mu);
            for (std::size_t i = 0; i < psi.values.size(); ++i)
                psi.values[i] += eta * dir_psi.values[i];
            const double value_half = objective(psi, nu, mu);
            psi = double_c_transform(psi);
            const double value_cc = objective(psi, nu, mu);
            if (value_cc < value_half - 1e-10)
                throw std::logic_error("double c-transform decreased the objective");
            f = c_transform_fast(psi).fc;
        }
    }
    finalize(res);
    return res;
}

double w2_distance(const DensityField& mu, const DensityField& nu, const W2Config& config) {
    auto res = two_step_baseline(mu, nu, config.schedule, config.iterations,
                                 config.back_and_forth);
    return res.w2;
}

} // namespace sga
