#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sga/barycenter.hpp"
#include "sga/grid.hpp"
#include "sga/transport.hpp"

namespace sga {

struct JobConfig {
    enum class Command { ot, barycenter, distance, oracle_check };

    Command command = Command::barycenter;
    std::vector<std::string> inputs;
    std::vector<double> weights;
    std::optional<std::vector<int>> grid_override; // box-average downsample target
    SweepScheme scheme = SweepScheme::parallel;
    std::string schedule_kind = "constant"; // constant | annealing
    double step = 0.1;
    int iterations = 300;
    int eval_every = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    MapMode map_mode = MapMode::argmin;
    double density_floor = 1e-10; // fraction of the uniform density
    bool back_and_forth = false;  // ot: run the two-step baseline instead of SGA
};

// Box-average pooling onto a coarser grid whose extents divide the
// source extents.
DensityField resample_density(const DensityField& src, const GridSpec& target);

// Density ingestion with the floor expressed relative to uniform: the
// raw values are normalized first, then floor * uniform is added and the
// result renormalized. An all-zero image with a positive floor loads as
// the uniform density.
DensityField load_density_relative_floor(const std::string& path, double uniform_frac,
                                         const std::optional<std::vector<int>>& grid_override);

// Runs the job and writes artifacts into config.out_dir. Returns the
// process exit code (0 ok, 1 failed oracle check, 3 divergence).
int run_job(const JobConfig& config);

} // namespace sga
