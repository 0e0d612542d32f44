#pragma once

// Atomic-state algebra for the tripod medium: bright/dark basis transforms,
// adiabatic elimination of the excited state, and the radiative group
// velocity. Everything is a pure pointwise map over fields.

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tsl/beams.hpp"
#include "tsl/grid.hpp"

namespace tsl {

struct MediumParams {
    double coupling_density = 0.0;  // g^2 n, squared angular frequency
    double gamma = 1.0;             // excited-state decay rate
    double omega01 = 0.0;           // one-photon detuning
    double omega21 = 0.0;           // two-photon detunings
    double omega31 = 0.0;
    double length = 1.0;          // medium extent along z, wavelength units
    double phi1_amplitude = 1.0;  // |Phi_1| = sqrt(n); condensate phase fixed to 0

    // With the condensate phase frozen at zero, g*Phi_1 is real positive.
    double g_phi1() const { return std::sqrt(coupling_density); }
};

inline void validate(const MediumParams& p) {
    if (!(p.coupling_density >= 0.0))
        throw InvalidArgument("MediumParams: coupling_density must be nonnegative");
    if (!(p.gamma > 0.0)) throw InvalidArgument("MediumParams: gamma must be positive");
    if (!(p.length > 0.0)) throw InvalidArgument("MediumParams: length must be positive");
    if (!(p.phi1_amplitude > 0.0))
        throw InvalidArgument("MediumParams: phi1_amplitude must be positive");
}

/// Ground-state coherence amplitudes on a common grid.
struct AtomicFields {
    Field2D phi2;
    Field2D phi3;

    AtomicFields() = default;
    AtomicFields(Field2D p2, Field2D p3) : phi2(std::move(p2)), phi3(std::move(p3)) {
        require_same_grid(phi2, phi3, "AtomicFields");
    }
};

/// Bright/dark projection:
///   Phi_B = (O2 Phi2 + O3 Phi3)/Oc,  Phi_D = (O3* Phi2 - O2* Phi3)/Oc.
/// Pointwise unitary, so |Phi_B|^2 + |Phi_D|^2 = |Phi2|^2 + |Phi3|^2.
inline std::pair<Field2D, Field2D> to_bright_dark(const AtomicFields& atomic,
                                                  const ControlPair& pair) {
    require_same_grid(atomic.phi2, pair.omega_c2, "to_bright_dark");
    const TransverseGrid& g = pair.grid();
    Field2D bright(g), dark(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex o2 = pair.omega_c2.at(i, j);
            const Complex o3 = pair.omega_c3.at(i, j);
            const double oc = std::sqrt(std::norm(o2) + std::norm(o3));
            if (oc == 0.0) detail::throw_zero_control(g, i, j, "to_bright_dark");
            const Complex p2 = atomic.phi2.at(i, j);
            const Complex p3 = atomic.phi3.at(i, j);
            bright.at(i, j) = (o2 * p2 + o3 * p3) / oc;
            dark.at(i, j) = (std::conj(o3) * p2 - std::conj(o2) * p3) / oc;
        }
    return {std::move(bright), std::move(dark)};
}

/// Exact inverse of to_bright_dark:
///   Phi2 = (O2* Phi_B + O3 Phi_D)/Oc,  Phi3 = (O3* Phi_B - O2 Phi_D)/Oc.
inline AtomicFields from_bright_dark(const Field2D& bright, const Field2D& dark,
                                     const ControlPair& pair) {
    require_same_grid(bright, dark, "from_bright_dark");
    require_same_grid(bright, pair.omega_c2, "from_bright_dark");
    const TransverseGrid& g = pair.grid();
    Field2D phi2(g), phi3(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex o2 = pair.omega_c2.at(i, j);
            const Complex o3 = pair.omega_c3.at(i, j);
            const double oc = std::sqrt(std::norm(o2) + std::norm(o3));
            if (oc == 0.0) detail::throw_zero_control(g, i, j, "from_bright_dark");
            const Complex b = bright.at(i, j);
            const Complex d = dark.at(i, j);
            phi2.at(i, j) = (std::conj(o2) * b + o3 * d) / oc;
            phi3.at(i, j) = (std::conj(o3) * b - o2 * d) / oc;
        }
    return {std::move(phi2), std::move(phi3)};
}

/// Adiabatic bright-state amplitude Phi_B = -g Phi_1 E / Oc (excited-state
/// population neglected).
inline Field2D adiabatic_bright(const Field2D& probe, const ControlPair& pair,
                                const MediumParams& params) {
    require_same_grid(probe, pair.omega_c2, "adiabatic_bright");
    validate(params);
    const double g_phi1 = params.g_phi1();
    const TransverseGrid& g = pair.grid();
    Field2D bright(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double oc = std::sqrt(std::norm(pair.omega_c2.at(i, j)) +
                                        std::norm(pair.omega_c3.at(i, j)));
            if (oc == 0.0) detail::throw_zero_control(g, i, j, "adiabatic_bright");
            bright.at(i, j) = -g_phi1 * probe.at(i, j) / oc;
        }
    return bright;
}

/// Radiative group velocity v_g/c = 1/(1 + g^2 n / Oc^2), real-valued field.
/// Where the control field vanishes the frozen-light limit v_g = 0 applies
/// (storage deliberately drives Oc -> 0), so that is a value, not an error.
inline Field2D group_velocity(const ControlPair& pair, const MediumParams& params) {
    validate(params);
    const double g2n = params.coupling_density;
    return zip_fields(pair.omega_c2, pair.omega_c3, [g2n](Complex a, Complex b) {
        const double oc2 = std::norm(a) + std::norm(b);
        if (g2n == 0.0) return Complex(1.0, 0.0);  // uncoupled medium: free propagation
        if (oc2 == 0.0) return Complex(0.0, 0.0);
        return Complex(oc2 / (oc2 + g2n), 0.0);
    });
}

/// Excited-state amplitude from a bright-state time series:
///   Phi_0 = Oc^{-1} (-i d_t + delta) Phi_B,
/// centered differences in the interior, one-sided at the ends. The control
/// pair and delta are held fixed over the sampled window.
inline std::vector<Field2D> excited_from_bright(std::span<const Field2D> bright_t,
                                                const ControlPair& pair, const Field2D& delta,
                                                double dt) {
    if (bright_t.size() < 2)
        throw InvalidArgument("excited_from_bright: need at least 2 time samples");
    if (!(dt > 0.0)) throw InvalidArgument("excited_from_bright: dt must be positive");
    require_same_grid(bright_t[0], pair.omega_c2, "excited_from_bright");
    require_same_grid(bright_t[0], delta, "excited_from_bright");

    const TransverseGrid& g = pair.grid();
    Field2D inv_oc(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double oc = std::sqrt(std::norm(pair.omega_c2.at(i, j)) +
                                        std::norm(pair.omega_c3.at(i, j)));
            if (oc == 0.0) detail::throw_zero_control(g, i, j, "excited_from_bright");
            inv_oc.at(i, j) = 1.0 / oc;
        }

    const std::size_t nt = bright_t.size();
    std::vector<Field2D> excited(nt, Field2D(g));
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t tp = (t + 1 < nt) ? t + 1 : t;
        const std::size_t tm = (t > 0) ? t - 1 : t;
        const double denom = (tp - tm) * dt;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const Complex ddt = (bright_t[tp].values[k] - bright_t[tm].values[k]) / denom;
            excited[t].values[k] =
                inv_oc.values[k] *
                (Complex(0.0, -1.0) * ddt + delta.values[k] * bright_t[t].values[k]);
        }
    }
    return excited;
}

} // namespace tsl
