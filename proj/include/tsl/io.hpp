#pragma once

// Field dump format "TSL1": magic bytes, little-endian u32 nx, ny, f64 lx,
// ly, then nx*ny (re, im) f64 pairs ordered y-row by y-row (index j*nx + i).

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "tsl/grid.hpp"

namespace tsl {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts are unsupported");

inline void write_field_tsl(const std::filesystem::path& path, const Field2D& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_field_tsl: cannot open " + path.string());
    out.write("TSL1", 4);
    const std::uint32_t nx = static_cast<std::uint32_t>(f.grid.nx);
    const std::uint32_t ny = static_cast<std::uint32_t>(f.grid.ny);
    out.write(reinterpret_cast<const char*>(&nx), 4);
    out.write(reinterpret_cast<const char*>(&ny), 4);
    out.write(reinterpret_cast<const char*>(&f.grid.lx), 8);
    out.write(reinterpret_cast<const char*>(&f.grid.ly), 8);
    for (const Complex& v : f.values) {
        const double re = v.real(), im = v.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw Error("write_field_tsl: write failed for " + path.string());
}

inline Field2D read_field_tsl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_field_tsl: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "TSL1", 4) != 0)
        throw Error("read_field_tsl: bad magic in " + path.string());
    std::uint32_t nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    in.read(reinterpret_cast<char*>(&nx), 4);
    in.read(reinterpret_cast<char*>(&ny), 4);
    in.read(reinterpret_cast<char*>(&lx), 8);
    in.read(reinterpret_cast<char*>(&ly), 8);
    if (!in) throw Error("read_field_tsl: truncated header in " + path.string());
    Field2D f(make_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly));
    for (Complex& v : f.values) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        v = Complex(re, im);
    }
    if (!in) throw Error("read_field_tsl: truncated payload in " + path.string());
    require_finite(f, "read_field_tsl");
    return f;
}

/// Plain-text export for plotting: one "x, y, re, im" line per sample.
inline void write_field_csv(const std::filesystem::path& path, const Field2D& f) {
    std::ofstream out(path);
    if (!out) throw Error("write_field_csv: cannot open " + path.string());
    out << "x,y,re,im\n";
    char line[128];
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const Complex v = f.at(i, j);
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", f.grid.x(i),
                          f.grid.y(j), v.real(), v.imag());
            out << line;
        }
}

} // namespace tsl
