#include "sga/transport.hpp"

#include <algorithm>
#include <cmath>

namespace sga {

TransportMap transport_map_from_argmin(const CTransformResult& ct, const GridSpec& grid) {
    TransportMap map;
    map.grid = grid;
    map.mode = MapMode::argmin;
    map.targets = ct.argmin;
    return map;
}

TransportMap identity_map(const GridSpec& grid) {
    TransportMap map;
    map.grid = grid;
    map.mode = MapMode::argmin;
    map.targets.resize(grid.size());
    for (std::size_t i = 0; i < map.targets.size(); ++i)
        map.targets[i] = static_cast<std::int32_t>(i);
    return map;
}

TransportMap transport_map_from_potential(const PotentialField& f, MapMode mode) {
    require_finite(f.values, "transport_map_from_potential");
    const GridSpec& g = f.grid;
    auto ct = c_transform_fast(f);
    if (mode == MapMode::argmin) return transport_map_from_argmin(ct, g);

    // gradient mode: T(x) = clamp(x - ∇f^c(x)), central differences with
    // one-sided stencils at the boundary
    TransportMap map;
    map.grid = g;
    map.mode = MapMode::gradient;
    map.points.resize(g.size());
    const auto& fc = ct.fc.values;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.multi_index(i);
        std::array<double, 3> p{0.0, 0.0, 0.0};
        for (int j = 0; j < g.dim; ++j) {
            const int nj = g.shape[j];
            const double h = g.spacing(j);
            std::size_t stride = 1;
            for (int k = j + 1; k < g.dim; ++k) stride *= g.shape[k];
            double grad;
            if (idx[j] == 0)
                grad = (fc[i + stride] - fc[i]) / h;
            else if (idx[j] == nj - 1)
                grad = (fc[i] - fc[i - stride]) / h;
            else
                grad = (fc[i + stride] - fc[i - stride]) / (2.0 * h);
            p[j] = std::clamp(g.center(j, idx[j]) - grad, 0.0, 1.0);
        }
        map.points[i] = p;
    }
    return map;
}

DensityField pushforward(const DensityField& nu, const TransportMap& map) {
    require_same_grid(nu.grid, map.grid, "pushforward");
    const GridSpec& g = nu.grid;
    const std::size_t n = g.size();
    DensityField out(g);

    if (map.mode == MapMode::argmin) {
        for (std::size_t i = 0; i < n; ++i) out.values[map.targets[i]] += nu.values[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double mass = nu.values[i];
            if (mass == 0.0) continue;
            const auto& p = map.points[i];
            // multilinear splat onto the 2^d cells around the target point
            std::array<int, 3> base{0, 0, 0};
            std::array<double, 3> frac{0.0, 0.0, 0.0};
            for (int j = 0; j < g.dim; ++j) {
                const int nj = g.shape[j];
                double u = p[j] * nj - 0.5; // cell-center coordinate
                u = std::clamp(u, 0.0, static_cast<double>(nj - 1));
                int b = static_cast<int>(std::floor(u));
                b = std::clamp(b, 0, nj - 2 >= 0 ? nj - 2 : 0);
                base[j] = b;
                frac[j] = u - b;
            }
            const int corners = 1 << g.dim;
            for (int c = 0; c < corners; ++c) {
                double w = 1.0;
                std::array<int, 3> idx{0, 0, 0};
                for (int j = 0; j < g.dim; ++j) {
                    const int bit = (c >> j) & 1;
                    idx[j] = base[j] + bit;
                    w *= bit ? frac[j] : 1.0 - frac[j];
                }
                if (w != 0.0) out.values[g.flat_index(idx)] += w * mass;
            }
        }
    }

    double total = 0.0;
    for (double v : out.values) total += v;
    total *= g.cell_volume();
    for (double& v : out.values) v /= total;
    return out;
}

double kantorovich_value(const PotentialField& f, const DensityField& mu,
                         const DensityField& nu) {
    require_same_grid(mu.grid, nu.grid, "kantorovich_value");
    require_same_grid(f.grid, mu.grid, "kantorovich_value");
    auto ct = c_transform_fast(f);
    return integrate(f, mu) + integrate(ct.fc, nu);
}

} // namespace sga
