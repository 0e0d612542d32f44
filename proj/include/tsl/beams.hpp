#pragma once

// Analytic control/probe beam synthesis and the relative-amplitude ratios
// xi_2, xi_3 built from a pair of control beams.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsl/grid.hpp"

namespace tsl {

/// One control beam: a zero- or first-order Laguerre-Gaussian profile.
/// The effective peak prefactor is amplitude * relative_factor, so the
/// relative strength of a second control beam can be dialed without
/// touching the common amplitude scale.
struct ControlBeamSpec {
    int lg_order = 0;        // 0: Gaussian; 1: unit-charge vortex
    double amplitude = 1.0;  // common scale, > 0
    double width = 1.0;      // 1/e amplitude radius, wavelength units
    double relative_factor = 1.0;
};

inline void validate(const ControlBeamSpec& s) {
    if (s.lg_order != 0 && s.lg_order != 1)
        throw InvalidArgument("ControlBeamSpec: only LG orders 0 and 1 are supported (got " +
                              std::to_string(s.lg_order) + ")");
    if (!(s.amplitude > 0.0)) throw InvalidArgument("ControlBeamSpec: amplitude must be positive");
    if (!(s.width > 0.0)) throw InvalidArgument("ControlBeamSpec: width must be positive");
}

/// Sample the beam on a grid. Order 0 gives A*exp(-rho^2/sigma^2); order 1
/// gives A*rho*exp(i*phi)*exp(-rho^2/sigma^2) with phi = atan2(y, x).
inline Field2D lg_field(const ControlBeamSpec& spec, const TransverseGrid& grid) {
    validate(spec);
    const double a = spec.amplitude * spec.relative_factor;
    const double inv_s2 = 1.0 / (spec.width * spec.width);
    if (spec.lg_order == 0)
        return Field2D::from_function(
            grid, [&](double x, double y) { return a * std::exp(-(x * x + y * y) * inv_s2); });
    return Field2D::from_function(grid, [&](double x, double y) {
        const double rho2 = x * x + y * y;
        const double env = a * std::exp(-rho2 * inv_s2);
        // rho*e^{i*phi} = x + i*y
        return Complex(x * env, y * env);
    });
}

/// The two control Rabi-frequency fields on a common grid.
struct ControlPair {
    Field2D omega_c2;
    Field2D omega_c3;

    ControlPair() = default;
    ControlPair(Field2D o2, Field2D o3) : omega_c2(std::move(o2)), omega_c3(std::move(o3)) {
        require_same_grid(omega_c2, omega_c3, "ControlPair");
    }
    const TransverseGrid& grid() const { return omega_c2.grid; }
};

/// Pointwise total Rabi frequency sqrt(|O2|^2 + |O3|^2) (real-valued field).
inline Field2D total_rabi(const ControlPair& pair) {
    return zip_fields(pair.omega_c2, pair.omega_c3, [](Complex a, Complex b) {
        return Complex(std::sqrt(std::norm(a) + std::norm(b)), 0.0);
    });
}

namespace detail {

inline void throw_zero_control(const TransverseGrid& g, int i, int j, const char* who) {
    throw ZeroControlField(std::string(who) + ": total control field vanishes at sample (" +
                           std::to_string(i) + "," + std::to_string(j) + "), x=" +
                           std::to_string(g.x(i)) + " y=" + std::to_string(g.y(j)) +
                           "; adiabatic following is undefined at a bare vortex core");
}

} // namespace detail

/// Relative amplitudes xi_2 = O2/Oc, xi_3 = O3/Oc. Undefined (and rejected)
/// wherever the total control field vanishes: that is the vortex-core
/// pathology a second control beam exists to remove, so it must surface.
inline std::pair<Field2D, Field2D> xi_ratios(const ControlPair& pair) {
    Field2D xi2(pair.grid()), xi3(pair.grid());
    const TransverseGrid& g = pair.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex o2 = pair.omega_c2.at(i, j);
            const Complex o3 = pair.omega_c3.at(i, j);
            const double oc = std::sqrt(std::norm(o2) + std::norm(o3));
            if (oc == 0.0) detail::throw_zero_control(g, i, j, "xi_ratios");
            xi2.at(i, j) = o2 / oc;
            xi3.at(i, j) = o3 / oc;
        }
    return {std::move(xi2), std::move(xi3)};
}

/// Two-photon frequency mismatch per time sample,
///   delta = w21*|xi2|^2 + w31*|xi3|^2 - i*(xi2 d_t xi2* + xi3 d_t xi3*),
/// with centered time differences in the interior and one-sided at the ends.
inline std::vector<Field2D> two_photon_mismatch(std::span<const ControlPair> pair_t,
                                                double omega21, double omega31, double dt) {
    if (pair_t.size() < 2)
        throw InvalidArgument("two_photon_mismatch: need at least 2 time samples");
    if (!(dt > 0.0)) throw InvalidArgument("two_photon_mismatch: dt must be positive");
    const std::size_t nt = pair_t.size();
    std::vector<std::pair<Field2D, Field2D>> xi(nt);
    for (std::size_t t = 0; t < nt; ++t) xi[t] = xi_ratios(pair_t[t]);

    const TransverseGrid& g = pair_t[0].grid();
    std::vector<Field2D> delta(nt, Field2D(g));
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t tp = (t + 1 < nt) ? t + 1 : t;
        const std::size_t tm = (t > 0) ? t - 1 : t;
        const double denom = (tp - tm) * dt;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const Complex x2 = xi[t].first.values[k];
            const Complex x3 = xi[t].second.values[k];
            const Complex d2 =
                (std::conj(xi[tp].first.values[k]) - std::conj(xi[tm].first.values[k])) / denom;
            const Complex d3 =
                (std::conj(xi[tp].second.values[k]) - std::conj(xi[tm].second.values[k])) / denom;
            delta[t].values[k] = omega21 * std::norm(x2) + omega31 * std::norm(x3) -
                                 Complex(0.0, 1.0) * (x2 * d2 + x3 * d3);
        }
    }
    return delta;
}

} // namespace tsl
