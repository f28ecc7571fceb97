#include "sga/grid.hpp"

#include <cmath>

namespace sga {

GridSpec GridSpec::make(std::span<const int> extents) {
    if (extents.empty() || extents.size() > 3)
        fail(ErrorKind::InvalidParams, "grid dimension must be 1, 2, or 3");
    GridSpec g;
    g.dim = static_cast<int>(extents.size());
    for (int j = 0; j < g.dim; ++j) {
        if (extents[j] < 2)
            fail(ErrorKind::InvalidParams, "grid extent must be >= 2 per axis");
        g.shape[j] = extents[j];
    }
    return g;
}

Weights Weights::make(std::span<const double> a) {
    if (a.empty()) fail(ErrorKind::InvalidParams, "empty weight list");
    double sum = 0.0;
    for (double w : a) {
        if (!(w > 0.0)) fail(ErrorKind::InvalidParams, "weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        fail(ErrorKind::InvalidParams, "weights must sum to 1");
    Weights out;
    out.alpha.assign(a.begin(), a.end());
    return out;
}

DensityField normalize_density(std::span<const double> raw, const GridSpec& grid,
                               double floor) {
    if (raw.size() != grid.size())
        fail(ErrorKind::GridMismatch, "normalize_density: value count does not match grid");
    if (floor < 0.0) fail(ErrorKind::InvalidParams, "normalize_density: negative floor");
    double sum = 0.0;
    for (double v : raw) {
        if (v < 0.0) fail(ErrorKind::NegativeInput, "normalize_density: negative input value");
        sum += v + floor;
    }
    if (sum == 0.0) fail(ErrorKind::AllZeroInput, "normalize_density: all-zero input");
    DensityField out;
    out.grid = grid;
    out.values.resize(raw.size());
    const double scale = 1.0 / (grid.cell_volume() * sum);
    for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = (raw[i] + floor) * scale;
    return out;
}

double integrate(const PotentialField& phi, const DensityField& mu) {
    require_same_grid(phi.grid, mu.grid, "integrate");
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.values.size(); ++i) acc += phi.values[i] * mu.values[i];
    return acc * phi.grid.cell_volume();
}

PotentialField zero_mean(const PotentialField& phi) {
    double mean = 0.0;
    for (double v : phi.values) mean += v;
    mean /= static_cast<double>(phi.values.size());
    PotentialField out = phi;
    for (double& v : out.values) v -= mean;
    return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) fail(ErrorKind::GridMismatch, std::string(where) + ": grid mismatch");
}

void require_finite(std::span<const double> v, const char* where) {
    for (double x : v)
        if (!std::isfinite(x))
            fail(ErrorKind::NonFiniteInput, std::string(where) + ": non-finite value");
}

} // namespace sga
