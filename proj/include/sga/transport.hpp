#pragma once

#include <cstdint>
#include <vector>

#include "sga/c_transform.hpp"
#include "sga/grid.hpp"

namespace sga {

enum class MapMode { argmin, gradient };

// T_{f^c} = id - ∇f^c realized either through the c-transform argmin
// (targets are grid nodes, exactly mass conserving) or through finite
// differences of f^c (targets are points in [0,1]^d, splatted).
struct TransportMap {
    GridSpec grid;
    MapMode mode = MapMode::argmin;
    std::vector<std::int32_t> targets;       // argmin mode: flat node index per cell
    std::vector<std::array<double, 3>> points; // gradient mode: target point per cell
};

TransportMap transport_map_from_potential(const PotentialField& f, MapMode mode);

// Map built directly from a c-transform result (saves the recompute).
TransportMap transport_map_from_argmin(const CTransformResult& ct, const GridSpec& grid);

TransportMap identity_map(const GridSpec& grid);

// Moves each cell's mass to its target; multilinear splat in gradient
// mode. Output renormalized to exact unit integral.
DensityField pushforward(const DensityField& nu, const TransportMap& map);

// I(f) = ∫ f dμ + ∫ f^c dν.
double kantorovich_value(const PotentialField& f, const DensityField& mu,
                         const DensityField& nu);

} // namespace sga
