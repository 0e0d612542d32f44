#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "tsl/errors.hpp"

namespace tsl {

using Complex = std::complex<double>;

/// Uniform Cartesian sampling of the transverse plane. All lengths are in
/// units of the optical wavelength; the origin sits on an actual sample.
struct TransverseGrid {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }

    // Sample (i, j) lies at ((i - nx/2)*dx, (j - ny/2)*dy).
    double x(int i) const { return (i - nx / 2) * dx(); }
    double y(int j) const { return (j - ny / 2) * dy(); }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    friend bool operator==(const TransverseGrid&, const TransverseGrid&) = default;
};

/// Complex scalar amplitude sampled on a TransverseGrid, stored y-row by
/// y-row (index = j*nx + i). Treated as immutable once built; all field
/// operations are pure functions returning new fields.
struct Field2D {
    TransverseGrid grid;
    std::vector<Complex> values;

    Field2D() = default;
    explicit Field2D(const TransverseGrid& g) : grid(g), values(g.size(), Complex{0.0, 0.0}) {}

    Complex& at(int i, int j) { return values[grid.index(i, j)]; }
    const Complex& at(int i, int j) const { return values[grid.index(i, j)]; }

    /// Sample fn(x, y) on every grid point.
    template <class Fn>
    static Field2D from_function(const TransverseGrid& g, Fn&& fn) {
        Field2D f(g);
        for (int j = 0; j < g.ny; ++j) {
            const double yj = g.y(j);
            for (int i = 0; i < g.nx; ++i)
                f.values[g.index(i, j)] = Complex(fn(g.x(i), yj));
        }
        return f;
    }
};

inline TransverseGrid make_grid(int nx, int ny, double lx, double ly) {
    if (nx < 8 || ny < 8)
        throw InvalidArgument("make_grid: sample counts must be at least 8 (got " +
                              std::to_string(nx) + "x" + std::to_string(ny) + ")");
    if (nx % 2 != 0 || ny % 2 != 0)
        throw InvalidArgument("make_grid: sample counts must be even (got " +
                              std::to_string(nx) + "x" + std::to_string(ny) + ")");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw InvalidArgument("make_grid: extents must be positive");
    return TransverseGrid{nx, ny, lx, ly};
}

inline bool field_is_finite(const Field2D& f) {
    for (const Complex& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline void require_finite(const Field2D& f, const char* who) {
    if (!field_is_finite(f)) throw InvalidArgument(std::string(who) + ": field contains NaN/Inf");
}

inline void require_same_grid(const Field2D& a, const Field2D& b, const char* who) {
    if (!(a.grid == b.grid)) throw InvalidArgument(std::string(who) + ": grids differ");
}

/// 2D quadrature of |f|^2 with the dx*dy measure.
inline double field_power(const Field2D& f) {
    double sum = 0.0;
    for (const Complex& v : f.values) sum += std::norm(v);
    return sum * f.grid.dx() * f.grid.dy();
}

/// Pointwise map over one field.
template <class Fn>
Field2D map_field(const Field2D& f, Fn&& fn) {
    Field2D out(f.grid);
    for (std::size_t k = 0; k < f.values.size(); ++k) out.values[k] = Complex(fn(f.values[k]));
    return out;
}

/// Pointwise map over two fields on the same grid.
template <class Fn>
Field2D zip_fields(const Field2D& a, const Field2D& b, Fn&& fn) {
    require_same_grid(a, b, "zip_fields");
    Field2D out(a.grid);
    for (std::size_t k = 0; k < a.values.size(); ++k)
        out.values[k] = Complex(fn(a.values[k], b.values[k]));
    return out;
}

inline double max_abs(const Field2D& f) {
    double m = 0.0;
    for (const Complex& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace tsl
