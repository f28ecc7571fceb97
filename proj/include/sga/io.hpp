#pragma once

#include <string>
#include <vector>

#include "sga/grid.hpp"

namespace sga {

// "SGAF1" container: magic line, one ASCII header line
// "d n_1 .. n_d dtype=f64 kind={density|potential}", then little-endian
// f64 payload in row-major order.
struct FieldFile {
    GridSpec grid;
    std::string kind; // "density" or "potential"
    std::vector<double> values;
};

void save_field(const std::string& path, const GridSpec& grid,
                std::span<const double> values, const std::string& kind);
FieldFile load_field(const std::string& path);

// Raw grayscale intensities from an 8/16-bit binary PGM. Row 0 of the
// image is the first grid row (top of the image maps to increasing
// first-axis index).
struct GrayImage {
    int rows = 0;
    int cols = 0;
    std::vector<double> pixels; // row-major
};

GrayImage load_pgm(const std::string& path);
GrayImage load_png_gray(const std::string& path); // luma-converted (Rec. 601)

void save_pgm16(const std::string& path, int rows, int cols,
                std::span<const double> pixels); // max-value normalized

// Any of: SGAF file, PGM, PNG, dispatched by extension or magic bytes.
FieldFile load_raw_values(const std::string& path);

// Raw values become a density through normalize_density with the given
// floor (absolute, pre-normalization).
DensityField load_density(const std::string& path, double floor = 0.0);

// 2D: 16-bit PGM; 3D: per-axis mid-slice PGMs (suffix .slice0/1/2.pgm)
// plus the full SGAF file.
void export_visual(const DensityField& field, const std::string& path);

} // namespace sga
