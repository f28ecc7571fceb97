#pragma once

#include <cstdint>
#include <vector>

#include "sga/grid.hpp"
#include "sga/ot.hpp"

namespace sga {

struct BarycenterProblem {
    std::vector<DensityField> marginals; // m >= 2, common grid
    Weights weights;

    static BarycenterProblem make(std::vector<DensityField> marginals, Weights weights);
    std::size_t count() const { return marginals.size(); }
    const GridSpec& grid() const { return marginals.front().grid; }
};

// The m-1 free dual potentials; the m-th is implied:
// f_mix = -sum_{i<m} (alpha_i / alpha_m) f_i.
struct DualState {
    std::vector<PotentialField> potentials;

    static DualState zeros(const BarycenterProblem& prob);
};

PotentialField mix_potential(const DualState& state, const Weights& weights,
                             const GridSpec& grid);

// D(f_1..f_{m-1}) = sum_{i<m} a_i ∫ f_i^c dμ_i + a_m ∫ f_mix^c dμ_m.
double dual_value(const DualState& state, const BarycenterProblem& prob);

// Sobolev gradient of D in coordinate i (0-based, i < m-1):
// (-Δ)^{-1}( -a_i (T_{f_i^c}#μ_i - T_{f_mix^c}#μ_m) ), zero-meaned.
PotentialField dual_gradient(const DualState& state, const BarycenterProblem& prob, int i);

enum class SweepScheme { parallel, sequential, random };

inline constexpr int kExtractAverage = -1;

// Pushforward barycenter per the optimality identity: source i < m-1 uses
// f_i, source m-1 uses f_mix, kExtractAverage blends all m pushforwards
// with their weights.
DensityField extract_barycenter(const DualState& state, const BarycenterProblem& prob,
                                int source = kExtractAverage);

double barycenter_functional(const DensityField& rho, const BarycenterProblem& prob,
                             const W2Config& w2 = {});

struct BarycenterOptions {
    int eval_every_sweeps = 1;
    int extract_source = kExtractAverage;
    bool compute_primal = true; // evaluate B and the duality gap on the result
    W2Config w2 = {};
};

struct BarycenterResult {
    DualState f_best;
    double D_best = 0.0;
    DensityField barycenter;
    double B_value = 0.0;
    double gap = 0.0;
    bool diverged = false;
    ConvergenceLog log; // one record per evaluated sweep
};

BarycenterResult sga_barycenter(const BarycenterProblem& prob, SweepScheme scheme,
                                const StepSchedule& schedule, int sweeps,
                                std::uint64_t seed = 0,
                                const BarycenterOptions& opts = {});

} // namespace sga
