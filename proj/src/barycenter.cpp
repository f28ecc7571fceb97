#include "sga/barycenter.hpp"

#include <cmath>
#include <random>

#include "sga/c_transform.hpp"
#include "sga/poisson.hpp"
#include "sga/transport.hpp"

namespace sga {

BarycenterProblem BarycenterProblem::make(std::vector<DensityField> marginals, Weights weights) {
    if (marginals.size() < 2)
        fail(ErrorKind::InvalidParams, "barycenter needs at least two marginals");
    if (weights.count() != marginals.size())
        fail(ErrorKind::InvalidParams, "weight count does not match marginal count");
    for (std::size_t i = 1; i < marginals.size(); ++i)
        require_same_grid(marginals[i].grid, marginals[0].grid, "BarycenterProblem");
    BarycenterProblem prob;
    prob.marginals = std::move(marginals);
    prob.weights = std::move(weights);
    return prob;
}

DualState DualState::zeros(const BarycenterProblem& prob) {
    DualState s;
    s.potentials.assign(prob.count() - 1, PotentialField(prob.grid()));
    return s;
}

PotentialField mix_potential(const DualState& state, const Weights& weights,
                             const GridSpec& grid) {
    const std::size_t m = weights.count();
    PotentialField mix(grid);
    const double inv_am = 1.0 / weights.alpha[m - 1];
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double c = -weights.alpha[i] * inv_am;
        const auto& v = state.potentials[i].values;
        for (std::size_t k = 0; k < v.size(); ++k) mix.values[k] += c * v[k];
    }
    return mix;
}

double dual_value(const DualState& state, const BarycenterProblem& prob) {
    const std::size_t m = prob.count();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        require_same_grid(state.potentials[i].grid, prob.grid(), "dual_value");
        auto ct = c_transform_fast(state.potentials[i]);
        acc += prob.weights.alpha[i] * integrate(ct.fc, prob.marginals[i]);
    }
    auto mix = mix_potential(state, prob.weights, prob.grid());
    auto ct_mix = c_transform_fast(mix);
    acc += prob.weights.alpha[m - 1] * integrate(ct_mix.fc, prob.marginals[m - 1]);
    return acc;
}

namespace {

// Gradient from precomputed pushforwards of coordinate i and of f_mix.
PotentialField gradient_from_pushes(const DensityField& push_i, const DensityField& push_m,
                                    double alpha_i, const GridSpec& grid) {
    std::vector<double> rhs(grid.size());
    for (std::size_t k = 0; k < rhs.size(); ++k)
        rhs[k] = -alpha_i * (push_i.values[k] - push_m.values[k]);
    return zero_mean(plan_for(grid)->solve_neumann(rhs));
}

DensityField push_through(const PotentialField& f, const DensityField& mu) {
    auto ct = c_transform_fast(f);
    return pushforward(mu, transport_map_from_argmin(ct, mu.grid));
}

bool all_finite_state(const DualState& s) {
    for (const auto& f : s.potentials)
        for (double x : f.values)
            if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

PotentialField dual_gradient(const DualState& state, const BarycenterProblem& prob, int i) {
    const int m = static_cast<int>(prob.count());
    if (i < 0 || i >= m - 1)
        fail(ErrorKind::IndexOutOfRange, "dual_gradient: coordinate out of range");
    require_same_grid(state.potentials[i].grid, prob.grid(), "dual_gradient");
    auto push_i = push_through(state.potentials[i], prob.marginals[i]);
    auto mix = mix_potential(state, prob.weights, prob.grid());
    auto push_m = push_through(mix, prob.marginals[m - 1]);
    return gradient_from_pushes(push_i, push_m, prob.weights.alpha[i], prob.grid());
}

DensityField extract_barycenter(const DualState& state, const BarycenterProblem& prob,
                                int source) {
    const int m = static_cast<int>(prob.count());
    if (source != kExtractAverage && (source < 0 || source >= m))
        fail(ErrorKind::IndexOutOfRange, "extract_barycenter: bad source");

    auto from_source = [&](int s) {
        if (s == m - 1) {
            auto mix = mix_potential(state, prob.weights, prob.grid());
            return push_through(mix, prob.marginals[s]);
        }
        return push_through(state.potentials[s], prob.marginals[s]);
    };

    if (source != kExtractAverage) return from_source(source);

    DensityField avg(prob.grid());
    for (int s = 0; s < m; ++s) {
        auto p = from_source(s);
        const double a = prob.weights.alpha[s];
        for (std::size_t k = 0; k < avg.values.size(); ++k) avg.values[k] += a * p.values[k];
    }
    double total = 0.0;
    for (double v : avg.values) total += v;
    total *= prob.grid().cell_volume();
    for (double& v : avg.values) v /= total;
    return avg;
}

double barycenter_functional(const DensityField& rho, const BarycenterProblem& prob,
                             const W2Config& w2) {
    require_same_grid(rho.grid, prob.grid(), "barycenter_functional");
    double acc = 0.0;
    for (std::size_t i = 0; i < prob.count(); ++i) {
        const double w = w2_distance(prob.marginals[i], rho, w2);
        acc += 0.5 * prob.weights.alpha[i] * w * w;
    }
    return acc;
}

BarycenterResult sga_barycenter(const BarycenterProblem& prob, SweepScheme scheme,
                                const StepSchedule& schedule, int sweeps,
                                std::uint64_t seed,
                                const BarycenterOptions& opts) {
    if (sweeps < 1) fail(ErrorKind::InvalidParams, "sweeps must be >= 1");
    const int m = static_cast<int>(prob.count());
    const GridSpec& grid = prob.grid();
    auto plan = plan_for(grid);

    DualState state = DualState::zeros(prob);
    BarycenterResult res;
    res.f_best = state;
    res.log.best_index = 0;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, m - 2);
    int update_counter = 0; // step index for the random scheme

    // Evaluates D and the gradient norms of the current state, shares the
    // c-transform work between the two.
    auto evaluate = [&](int t) {
        auto mix = mix_potential(state, prob.weights, grid);
        auto ct_mix = c_transform_fast(mix);
        auto push_m = pushforward(prob.marginals[m - 1],
                                  transport_map_from_argmin(ct_mix, grid));
        double value = prob.weights.alpha[m - 1] * integrate(ct_mix.fc, prob.marginals[m - 1]);
        double gsq = 0.0;
        for (int i = 0; i < m - 1; ++i) {
            auto ct = c_transform_fast(state.potentials[i]);
            value += prob.weights.alpha[i] * integrate(ct.fc, prob.marginals[i]);
            auto push_i = pushforward(prob.marginals[i], transport_map_from_argmin(ct, grid));
            auto g = gradient_from_pushes(push_i, push_m, prob.weights.alpha[i], grid);
            const double gn = plan->h1_norm(g);
            gsq += gn * gn;
        }
        const double eta_now = schedule.eta(scheme == SweepScheme::random ? update_counter : t);
        res.log.records.push_back({t, value, std::sqrt(gsq), eta_now});
        if (value > res.log.best_value() || res.log.records.size() == 1) {
            res.log.best_index = static_cast<int>(res.log.records.size()) - 1;
            res.f_best = state;
        }
    };

    for (int t = 0; t <= sweeps; ++t) {
        if (!all_finite_state(state)) { res.diverged = true; break; }
        if (t % opts.eval_every_sweeps == 0 || t == sweeps) evaluate(t);
        if (t == sweeps) break;

        switch (scheme) {
            case SweepScheme::parallel: {
                // all gradients against the frozen sweep-start state
                const double eta = schedule.eta(t);
                auto mix = mix_potential(state, prob.weights, grid);
                auto push_m = push_through(mix, prob.marginals[m - 1]);
                std::vector<PotentialField> grads(m - 1);
                for (int i = 0; i < m - 1; ++i) {
                    auto push_i = push_through(state.potentials[i], prob.marginals[i]);
                    grads[i] = gradient_from_pushes(push_i, push_m, prob.weights.alpha[i], grid);
                }
                for (int i = 0; i < m - 1; ++i) {
                    auto& f = state.potentials[i].values;
                    for (std::size_t k = 0; k < f.size(); ++k) f[k] += eta * grads[i].values[k];
                }
                break;
            }
            case SweepScheme::sequential: {
                const double eta = schedule.eta(t);
                for (int i = 0; i < m - 1; ++i) {
                    // f_mix reflects the coordinates already updated this sweep
                    auto g = dual_gradient(state, prob, i);
                    auto& f = state.potentials[i].values;
                    for (std::size_t k = 0; k < f.size(); ++k) f[k] += eta * g.values[k];
                }
                break;
            }
            case SweepScheme::random: {
                for (int u = 0; u < m - 1; ++u) {
                    const int i = pick(rng);
                    const double eta = schedule.eta(update_counter++);
                    auto g = dual_gradient(state, prob, i);
                    auto& f = state.potentials[i].values;
                    for (std::size_t k = 0; k < f.size(); ++k) f[k] += eta * g.values[k];
                }
                break;
            }
        }
    }

    res.D_best = res.log.best_value();
    res.barycenter = extract_barycenter(res.f_best, prob, opts.extract_source);
    if (opts.compute_primal) {
        res.B_value = barycenter_functional(res.barycenter, prob, opts.w2);
        res.gap = res.B_value - res.D_best;
    }
    return res;
}

} // namespace sga
