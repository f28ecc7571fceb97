#pragma once

#include <span>
#include <vector>

#include "sga/barycenter.hpp"
#include "sga/grid.hpp"

namespace sga {
// Independent ground truth for tests and acceptance runs. Nothing here
// touches the c-transform or Poisson modules.
namespace oracle {

// Piecewise-linear CDF of a 1D density and its inverse at midpoint
// quantiles q = (k+1/2)/K.
struct QuantileProfile {
    std::vector<double> edges;      // n+1 cell edges
    std::vector<double> cumulative; // CDF at the edges, 0 .. 1
    double inverse(double q) const;

    static QuantileProfile from_density(const DensityField& mu);
};

// W2 via the closed-form quantile coupling:
// sqrt( (1/K) sum_q (F_mu^{-1}(q) - F_nu^{-1}(q))^2 ). K = 0 picks 20*n.
double quantile_w2_1d(const DensityField& mu, const DensityField& nu, int K = 0);

// 1D barycenter as the weighted quantile average, histogrammed back
// onto the grid.
DensityField quantile_barycenter_1d(const BarycenterProblem& prob, int K = 0);

// Exact W2 between uniform atom sets via the O(N^3) assignment solver.
double assignment_w2(std::span<const std::array<double, 3>> a,
                     std::span<const std::array<double, 3>> b, int dim);

} // namespace oracle
} // namespace sga
