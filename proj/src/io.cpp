#include "sga/io.hpp"

#include <png.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sga {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files assume a little-endian host");

std::string ext_of(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return "";
    std::string e = path.substr(dot + 1);
    for (char& c : e) c = static_cast<char>(std::tolower(c));
    return e;
}

} // namespace

void save_field(const std::string& path, const GridSpec& grid,
                std::span<const double> values, const std::string& kind) {
    if (values.size() != grid.size())
        fail(ErrorKind::GridMismatch, "save_field: value count does not match grid");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::UnreadableFile, "save_field: cannot open " + path);
    out << "SGAF1\n" << grid.dim;
    for (int j = 0; j < grid.dim; ++j) out << ' ' << grid.shape[j];
    out << " dtype=f64 kind=" << kind << "\n";
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out) fail(ErrorKind::UnreadableFile, "save_field: write failed for " + path);
}

FieldFile load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::UnreadableFile, "load_field: cannot open " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != "SGAF1") fail(ErrorKind::BadMagic, "load_field: bad magic in " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    int dim = 0;
    hs >> dim;
    if (dim < 1 || dim > 3) fail(ErrorKind::BadMagic, "load_field: bad dimension in " + path);
    std::vector<int> shape(dim);
    for (int& s : shape) hs >> s;
    std::string dtype, kind;
    hs >> dtype >> kind;
    if (!hs || dtype != "dtype=f64" || kind.rfind("kind=", 0) != 0)
        fail(ErrorKind::BadMagic, "load_field: malformed header in " + path);

    FieldFile f;
    f.grid = GridSpec::make(shape);
    f.kind = kind.substr(5);
    f.values.resize(f.grid.size());
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
        fail(ErrorKind::BadMagic, "load_field: truncated payload in " + path);
    return f;
}

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::UnreadableFile, "load_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") fail(ErrorKind::BadMagic, "load_pgm: not a binary PGM: " + path);
    auto next_int = [&]() {
        // skip whitespace and '#' comments
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = 0;
        in >> v;
        return v;
    };
    const long cols = next_int();
    const long rows = next_int();
    const long maxval = next_int();
    in.get(); // single whitespace before payload
    if (!in || cols < 1 || rows < 1 || maxval < 1 || maxval > 65535)
        fail(ErrorKind::BadMagic, "load_pgm: malformed header in " + path);

    GrayImage img;
    img.rows = static_cast<int>(rows);
    img.cols = static_cast<int>(cols);
    img.pixels.resize(static_cast<std::size_t>(rows * cols));
    const bool wide = maxval > 255;
    std::vector<unsigned char> buf(img.pixels.size() * (wide ? 2 : 1));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        fail(ErrorKind::BadMagic, "load_pgm: truncated payload in " + path);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        // 16-bit PGM samples are big-endian
        img.pixels[i] = wide ? static_cast<double>((buf[2 * i] << 8) | buf[2 * i + 1])
                             : static_cast<double>(buf[i]);
    }
    return img;
}

GrayImage load_png_gray(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        fail(ErrorKind::UnreadableFile, "load_png_gray: cannot read " + path);
    image.format = PNG_FORMAT_GRAY; // libpng applies the Rec. 601 luma weights
    std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&image);
        fail(ErrorKind::BadMagic, "load_png_gray: decode failed for " + path);
    }
    GrayImage img;
    img.rows = static_cast<int>(image.height);
    img.cols = static_cast<int>(image.width);
    img.pixels.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) img.pixels[i] = buf[i];
    return img;
}

void save_pgm16(const std::string& path, int rows, int cols,
                std::span<const double> pixels) {
    if (pixels.size() != static_cast<std::size_t>(rows) * cols)
        fail(ErrorKind::SizeMismatch, "save_pgm16: pixel count mismatch");
    double maxv = 0.0;
    for (double v : pixels) maxv = std::max(maxv, v);
    if (maxv <= 0.0) maxv = 1.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::UnreadableFile, "save_pgm16: cannot open " + path);
    out << "P5\n" << cols << ' ' << rows << "\n65535\n";
    std::vector<unsigned char> buf(pixels.size() * 2);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const auto s = static_cast<std::uint16_t>(
            std::clamp(pixels[i] / maxv * 65535.0 + 0.5, 0.0, 65535.0));
        buf[2 * i] = static_cast<unsigned char>(s >> 8);
        buf[2 * i + 1] = static_cast<unsigned char>(s & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
}

FieldFile load_raw_values(const std::string& path) {
    const std::string ext = ext_of(path);
    GrayImage img;
    if (ext == "sgaf") {
        return load_field(path);
    } else if (ext == "png") {
        img = load_png_gray(path);
    } else if (ext == "pgm") {
        img = load_pgm(path);
    } else {
        // sniff the magic
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(ErrorKind::UnreadableFile, "load_raw_values: cannot open " + path);
        char m[5] = {};
        in.read(m, 5);
        if (std::strncmp(m, "SGAF1", 5) == 0) return load_field(path);
        img = (std::strncmp(m, "P5", 2) == 0) ? load_pgm(path) : load_png_gray(path);
    }
    FieldFile f;
    f.grid = GridSpec::make_2d(img.rows, img.cols);
    f.kind = "raw";
    f.values = std::move(img.pixels);
    return f;
}

DensityField load_density(const std::string& path, double floor) {
    auto f = load_raw_values(path);
    return normalize_density(f.values, f.grid, floor);
}

void export_visual(const DensityField& field, const std::string& path) {
    const GridSpec& g = field.grid;
    if (g.dim == 2) {
        save_pgm16(path, g.shape[0], g.shape[1], field.values);
        return;
    }
    if (g.dim != 3)
        fail(ErrorKind::UnsupportedDim, "export_visual: 2D or 3D fields only");
    save_field(path + ".sgaf", g, field.values, "density");
    for (int axis = 0; axis < 3; ++axis) {
        const int mid = g.shape[axis] / 2;
        const int r = (axis == 0) ? g.shape[1] : g.shape[0];
        const int c = (axis == 2) ? g.shape[1] : g.shape[2];
        std::vector<double> slice(static_cast<std::size_t>(r) * c);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < c; ++b) {
                std::array<int, 3> idx{};
                if (axis == 0) idx = {mid, a, b};
                else if (axis == 1) idx = {a, mid, b};
                else idx = {a, b, mid};
                slice[static_cast<std::size_t>(a) * c + b] = field.values[g.flat_index(idx)];
            }
        save_pgm16(path + ".slice" + std::to_string(axis) + ".pgm", r, c, slice);
    }
}

} // namespace sga
