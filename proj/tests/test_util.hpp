#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sga/grid.hpp"

namespace sga::testutil {

inline PotentialField random_potential(const GridSpec& g, std::mt19937_64& rng,
                                       double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    PotentialField f(g);
    for (double& v : f.values) v = u(rng);
    return f;
}

// A few low-frequency cosine modes per axis.
inline PotentialField smooth_random_potential(const GridSpec& g, std::mt19937_64& rng,
                                              double amp = 1.0, int max_mode = 3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PotentialField f(g);
    for (int m = 1; m <= max_mode; ++m) {
        std::array<double, 3> coef{u(rng), u(rng), u(rng)};
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto idx = g.multi_index(i);
            double v = 1.0;
            for (int j = 0; j < g.dim; ++j)
                v *= std::cos(M_PI * m * g.center(j, idx[j]) + coef[j]);
            f.values[i] += amp * coef[(m - 1) % 3] * v / m;
        }
    }
    return f;
}

inline DensityField random_density(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> raw(g.size());
    for (double& v : raw) v = u(rng);
    return normalize_density(raw, g);
}

// Mixture of Gaussian bumps: smooth and strictly positive.
inline DensityField smooth_random_density(const GridSpec& g, std::mt19937_64& rng,
                                          int bumps = 3) {
    std::uniform_real_distribution<double> loc(0.2, 0.8);
    std::uniform_real_distribution<double> width(0.05, 0.15);
    std::vector<double> raw(g.size(), 0.02);
    for (int b = 0; b < bumps; ++b) {
        std::array<double, 3> c{loc(rng), loc(rng), loc(rng)};
        const double s = width(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto idx = g.multi_index(i);
            double d2 = 0.0;
            for (int j = 0; j < g.dim; ++j) {
                const double d = g.center(j, idx[j]) - c[j];
                d2 += d * d;
            }
            raw[i] += std::exp(-0.5 * d2 / (s * s));
        }
    }
    return normalize_density(raw, g);
}

inline DensityField gaussian_bump_1d(const GridSpec& g, double center, double sigma) {
    std::vector<double> raw(g.size());
    for (int k = 0; k < g.shape[0]; ++k) {
        const double x = g.center(0, k);
        raw[k] = std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma));
    }
    return normalize_density(raw, g);
}

inline DensityField one_hot(const GridSpec& g, std::size_t cell) {
    std::vector<double> raw(g.size(), 0.0);
    raw[cell] = 1.0;
    return normalize_density(raw, g);
}

inline double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace sga::testutil
