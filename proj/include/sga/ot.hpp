#pragma once

#include <optional>
#include <vector>

#include "sga/grid.hpp"

namespace sga {

enum class ScheduleKind { constant, annealing, theoretical_constant, theoretical_annealing };

struct StepSchedule {
    ScheduleKind kind = ScheduleKind::constant;
    double eta0 = 0.1;
    double R_est = 0.0;
    double M_est = 0.0;
    int T = 0;

    // t is 0-based: annealing gives eta0/sqrt(t+1).
    double eta(int t) const;

    static StepSchedule constant(double eta0);
    static StepSchedule annealing(double eta0);
    static StepSchedule theoretical_constant(double R_est, double M_est, int T);
    static StepSchedule theoretical_annealing(double R_est, double M_est);
};

struct IterRecord {
    int t = 0;
    double value = 0.0;   // I or D at this iterate
    double grad_h1 = 0.0; // Sobolev norm of the ascent direction
    double eta = 0.0;     // step applied after this evaluation
};

struct ConvergenceLog {
    std::vector<IterRecord> records;
    int best_index = 0; // position in records of the best evaluated iterate

    double best_value() const { return records[best_index].value; }
};

struct OtResult {
    PotentialField f_best;
    double I_best = 0.0;
    double w2 = 0.0;
    bool diverged = false; // a non-finite iterate appeared; best is the last finite one
    ConvergenceLog log;
};

struct OtOptions {
    int eval_every = 1; // evaluate I (and track best) every k iterations
};

// Plain Sobolev gradient ascent on I(f), no c-concavity projection.
OtResult sga_two_marginal(const DensityField& mu, const DensityField& nu,
                          const StepSchedule& schedule, int iterations,
                          const std::optional<PotentialField>& f0 = std::nullopt,
                          const OtOptions& opts = {});

// Ascent step followed by the double c-transform; optionally alternating
// with the twin problem on the swapped pair.
OtResult two_step_baseline(const DensityField& mu, const DensityField& nu,
                           const StepSchedule& schedule, int iterations,
                           bool back_and_forth,
                           const OtOptions& opts = {});

struct W2Config {
    StepSchedule schedule = StepSchedule::constant(0.1);
    int iterations = 300;
    bool back_and_forth = true;
};

double w2_distance(const DensityField& mu, const DensityField& nu,
                   const W2Config& config = {});

} // namespace sga
