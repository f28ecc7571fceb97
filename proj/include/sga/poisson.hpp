#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sga/grid.hpp"

namespace sga {

// Fast cosine-transform solver for the cell-centered Neumann Laplacian.
// One plan per GridSpec; transforms are DCT-II forward / DCT-III inverse,
// which diagonalize the reflected-ghost-cell stencil exactly.
class SpectralPlan {
public:
    explicit SpectralPlan(const GridSpec& grid);
    ~SpectralPlan();

    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const GridSpec& grid() const { return grid_; }

    // g with -Δ_h g = rho and zero mean. rho must have zero discrete mean
    // (|h^d Σ rho| <= 1e-8); the zero mode is dropped.
    PotentialField solve_neumann(std::span<const double> rho) const;

    double h1_norm(const PotentialField& phi) const;

    // Neumann eigenvalue of axis j, mode k: (2 - 2 cos(pi k / n_j)) / h_j^2.
    double eigenvalue(int axis, int k) const { return lambda_[axis][k]; }

private:
    struct Impl;
    GridSpec grid_;
    std::array<std::vector<double>, 3> lambda_;
    std::unique_ptr<Impl> impl_;
};

// Shared per-grid plan cache.
std::shared_ptr<const SpectralPlan> plan_for(const GridSpec& grid);

PotentialField solve_neumann(const PotentialField& rho);
double h1_norm(const PotentialField& phi);
double hminus1_norm(const DensityField& mu, const DensityField& nu);

// Second-order Neumann stencil -Δ_h with reflected ghost cells, for
// residual checks against the spectral solve.
std::vector<double> apply_neumann_stencil(const GridSpec& grid, std::span<const double> phi);

} // namespace sga
