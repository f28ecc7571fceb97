#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sga/errors.hpp"

namespace sga {

// Cell-centered uniform grid on [0,1]^d, d in {1,2,3}.
// Storage is row-major with the last axis fastest.
struct GridSpec {
    int dim = 0;
    std::array<int, 3> shape{1, 1, 1};

    static GridSpec make(std::span<const int> extents);
    static GridSpec make_1d(int n) { std::array<int, 1> s{n}; return make(s); }
    static GridSpec make_2d(int n1, int n2) { std::array<int, 2> s{n1, n2}; return make(s); }
    static GridSpec make_3d(int n1, int n2, int n3) { std::array<int, 3> s{n1, n2, n3}; return make(s); }

    std::size_t size() const {
        std::size_t n = 1;
        for (int j = 0; j < dim; ++j) n *= static_cast<std::size_t>(shape[j]);
        return n;
    }

    double spacing(int axis) const { return 1.0 / shape[axis]; }

    // Product of spacings: the cell volume h^d.
    double cell_volume() const {
        double v = 1.0;
        for (int j = 0; j < dim; ++j) v *= spacing(j);
        return v;
    }

    double center(int axis, int k) const { return (k + 0.5) * spacing(axis); }

    std::size_t flat_index(std::array<int, 3> idx) const {
        std::size_t lin = 0;
        for (int j = 0; j < dim; ++j) lin = lin * shape[j] + idx[j];
        return lin;
    }

    std::array<int, 3> multi_index(std::size_t lin) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int j = dim - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(lin % shape[j]);
            lin /= shape[j];
        }
        return idx;
    }

    bool operator==(const GridSpec& o) const {
        if (dim != o.dim) return false;
        for (int j = 0; j < dim; ++j)
            if (shape[j] != o.shape[j]) return false;
        return true;
    }
};

// Dual potential (or any scalar field) on the grid.
struct PotentialField {
    GridSpec grid;
    std::vector<double> values;

    PotentialField() = default;
    explicit PotentialField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}
    PotentialField(const GridSpec& g, std::vector<double> v)
        : grid(g), values(std::move(v)) {}
};

// Probability density: nonnegative with unit discrete integral h^d * sum.
struct DensityField {
    GridSpec grid;
    std::vector<double> values;

    DensityField() = default;
    explicit DensityField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}
};

struct Weights {
    std::vector<double> alpha;

    static Weights make(std::span<const double> a);
    static Weights make(std::initializer_list<double> a) {
        return make(std::span<const double>(a.begin(), a.size()));
    }
    std::size_t count() const { return alpha.size(); }
};

// (raw + floor) rescaled to unit discrete integral.
DensityField normalize_density(std::span<const double> raw, const GridSpec& grid,
                               double floor = 0.0);

// Midpoint quadrature of phi against mu: h^d * sum(phi * mu).
double integrate(const PotentialField& phi, const DensityField& mu);

// Subtracts the discrete Lebesgue mean (|Omega| = 1).
PotentialField zero_mean(const PotentialField& phi);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
void require_finite(std::span<const double> v, const char* where);

} // namespace sga
