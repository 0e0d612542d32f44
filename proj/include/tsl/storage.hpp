#pragma once

// Storage and retrieval of the probe beam. store() freezes the probe into
// ground-state coherences at the instant the controls are switched off
// (relative amplitudes held fixed while the total goes to zero); retrieve()
// maps the frozen coherences back to a probe field through the bright-state
// overlap with the new control configuration, accounting for the part that
// stays behind as a dark-state spin excitation. regeneration_transient()
// resolves the finite-relaxation build-up of the retrieved field.

#include <cmath>
#include <utility>
#include <vector>

#include "tsl/beams.hpp"
#include "tsl/grid.hpp"
#include "tsl/medium.hpp"

namespace tsl {

/// Atomic coherences left in the medium after switch-off, plus the relative
/// control amplitudes at that instant. omega_s and probe_s cache the
/// switch-off control magnitude and the stored probe for energy bookkeeping.
struct StoredCoherence {
    Field2D phi2;
    Field2D phi3;
    Field2D stored_xi2;
    Field2D stored_xi3;
    Field2D omega_s;  // real-valued: total control Rabi frequency at storage
    Field2D probe_s;
};

struct RetrievalResult {
    Field2D probe;        // regenerated probe field
    Field2D frozen_phiD;  // dark-state projection left in the medium
    double energy_in = 0.0;
    double energy_out = 0.0;
};

namespace detail {

inline void require_coupling(const MediumParams& params, const char* who) {
    if (!(params.coupling_density > 0.0))
        throw InvalidArgument(std::string(who) + ": medium coupling density must be positive");
}

} // namespace detail

/// Freeze the probe into atomic coherences: Phi_B = -g Phi_1 E / Oc, then
/// Phi2 = xi2* Phi_B, Phi3 = xi3* Phi_B. The dark state stays empty, which
/// is what makes the later overlap bookkeeping exact.
inline StoredCoherence store(const Field2D& probe_s, const ControlPair& controls_s,
                             const MediumParams& params) {
    require_finite(probe_s, "store");
    require_same_grid(probe_s, controls_s.omega_c2, "store");
    validate(params);
    detail::require_coupling(params, "store");

    const TransverseGrid& g = probe_s.grid;
    const double g_phi1 = params.g_phi1();
    const double thresh = 1e-12 * max_abs(probe_s);

    StoredCoherence out;
    out.phi2 = Field2D(g);
    out.phi3 = Field2D(g);
    out.stored_xi2 = Field2D(g);
    out.stored_xi3 = Field2D(g);
    out.omega_s = Field2D(g);
    out.probe_s = probe_s;

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Complex o2 = controls_s.omega_c2.at(i, j);
            const Complex o3 = controls_s.omega_c3.at(i, j);
            const double oc = std::sqrt(std::norm(o2) + std::norm(o3));
            const Complex e = probe_s.at(i, j);
            if (oc == 0.0) {
                if (std::abs(e) > thresh) detail::throw_zero_control(g, i, j, "store");
                continue;  // no control, no probe: nothing stored here
            }
            const Complex xi2 = o2 / oc;
            const Complex xi3 = o3 / oc;
            const Complex bright = -g_phi1 * e / oc;
            out.omega_s.at(i, j) = oc;
            out.stored_xi2.at(i, j) = xi2;
            out.stored_xi3.at(i, j) = xi3;
            out.phi2.at(i, j) = std::conj(xi2) * bright;
            out.phi3.at(i, j) = std::conj(xi3) * bright;
        }
    return out;
}

/// Switch the controls back on and read the coherences out:
///   E_r = -(Oc_r / g Phi_1) * (xi2_r phi2 + xi3_r phi3),
/// the dark-state projection at the new ratios staying frozen in the cloud.
/// Energies are tallied with the per-sample pulse-length weight
/// v_g(storage)/v_g(retrieval).
inline RetrievalResult retrieve(const StoredCoherence& stored, const ControlPair& controls_r,
                                const MediumParams& params) {
    require_same_grid(stored.phi2, controls_r.omega_c2, "retrieve");
    validate(params);
    detail::require_coupling(params, "retrieve");

    const TransverseGrid& g = stored.phi2.grid;
    const double g2n = params.coupling_density;
    const double g_phi1 = params.g_phi1();

    double coh_max = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        coh_max = std::max(coh_max, std::sqrt(std::norm(stored.phi2.values[k]) +
                                              std::norm(stored.phi3.values[k])));
    const double coh_thresh = 1e-12 * coh_max;

    RetrievalResult result;
    result.probe = Field2D(g);
    result.frozen_phiD = Field2D(g);
    double energy_out = 0.0;

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const Complex p2 = stored.phi2.values[k];
            const Complex p3 = stored.phi3.values[k];
            const double coh = std::sqrt(std::norm(p2) + std::norm(p3));
            const Complex o2 = controls_r.omega_c2.values[k];
            const Complex o3 = controls_r.omega_c3.values[k];
            const double oc_r = std::sqrt(std::norm(o2) + std::norm(o3));
            if (oc_r == 0.0) {
                if (coh > coh_thresh) detail::throw_zero_control(g, i, j, "retrieve");
                continue;  // nothing to read out here
            }
            const Complex xi2 = o2 / oc_r;
            const Complex xi3 = o3 / oc_r;
            const Complex bright = xi2 * p2 + xi3 * p3;
            result.probe.values[k] = -(oc_r / g_phi1) * bright;
            result.frozen_phiD.values[k] = std::conj(xi3) * p2 - std::conj(xi2) * p3;

            // |E_r|^2 * v_g_s/v_g_r, written so the oc_r -> 0 limit is tame
            const double oc_s = stored.omega_s.values[k].real();
            energy_out += std::norm(bright) * oc_s * oc_s * (oc_r * oc_r + g2n) /
                          (g2n * (oc_s * oc_s + g2n));
        }

    result.energy_out = energy_out * g.dx() * g.dy();
    result.energy_in =
        stored.probe_s.values.empty() ? 0.0 : field_power(stored.probe_s);
    if (!stored.probe_s.values.empty() &&
        result.energy_out > result.energy_in * (1.0 + 1e-6))
        throw Error("retrieve: energy bookkeeping out > in; medium not in the slow-light regime");
    return result;
}

/// Transient build-up of the retrieved field: integrates, pointwise,
///   [1 + (g^2 n/Oc^2)(1 - e^{-Oc^2 t/gamma})] dE/dt
///       = -(g^2 n/gamma) [E - E_inf] e^{-Oc^2 t/gamma},   E(0) = 0,
/// where E_inf = -(Oc/g Phi_1) Phi_B(0). The equation is linear in E, so an
/// integrating-factor trapezoidal step is used: unconditionally stable
/// (the early-time rate g^2 n/gamma is far stiffer than the relaxation
/// scale the dt bound guards) and globally second order. Returns the field
/// at t = 0, dt, 2 dt, ... up to t_max.
inline std::vector<Field2D> regeneration_transient(const StoredCoherence& stored,
                                                   const ControlPair& controls_r,
                                                   const MediumParams& params, double dt,
                                                   double t_max) {
    require_same_grid(stored.phi2, controls_r.omega_c2, "regeneration_transient");
    validate(params);
    detail::require_coupling(params, "regeneration_transient");
    if (!(dt > 0.0) || !(t_max >= 0.0))
        throw InvalidArgument("regeneration_transient: need dt > 0 and t_max >= 0");

    const TransverseGrid& g = stored.phi2.grid;
    const double g2n = params.coupling_density;
    const double gamma = params.gamma;
    const double g_phi1 = params.g_phi1();

    Field2D rabi = total_rabi(controls_r);
    double oc2_max = 0.0;
    for (const Complex& v : rabi.values) oc2_max = std::max(oc2_max, v.real() * v.real());
    if (oc2_max > 0.0 && dt > 0.1 * gamma / oc2_max)
        throw StepTooLarge("regeneration_transient: dt exceeds 0.1*gamma/Oc^2_max = " +
                           std::to_string(0.1 * gamma / oc2_max));

    // steady-state target per sample
    Field2D e_inf(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double oc = rabi.values[k].real();
        if (oc == 0.0) continue;
        const Complex xi2 = controls_r.omega_c2.values[k] / oc;
        const Complex xi3 = controls_r.omega_c3.values[k] / oc;
        e_inf.values[k] = -(oc / g_phi1) * (xi2 * stored.phi2.values[k] +
                                            xi3 * stored.phi3.values[k]);
    }

    const int n_steps = static_cast<int>(std::ceil(t_max / dt - 1e-12));
    std::vector<Field2D> series;
    series.reserve(n_steps + 1);
    series.emplace_back(g);  // E(0) = 0

    auto log_rate = [&](double oc2, double t) {
        // d/dt log(E - E_inf) = -(g2n/gamma) e^{-oc2 t/gamma} / bracket
        const double decay = std::exp(-oc2 * t / gamma);
        const double bracket = 1.0 + (g2n / oc2) * (1.0 - decay);
        return -(g2n / gamma) * decay / bracket;
    };

    Field2D current(g);
    for (int s = 0; s < n_steps; ++s) {
        const double t0 = s * dt;
        const double t1 = (s + 1) * dt;
        Field2D next(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double oc = rabi.values[k].real();
            if (oc == 0.0) continue;  // no control, no regeneration
            const double oc2 = oc * oc;
            const double grow = std::exp(0.5 * dt * (log_rate(oc2, t0) + log_rate(oc2, t1)));
            next.values[k] = e_inf.values[k] + (current.values[k] - e_inf.values[k]) * grow;
        }
        current = std::move(next);
        series.push_back(current);
    }
    return series;
}

// --- the two vortex-transfer protocols -----------------------------------

/// Store under a plain Gaussian control (single-beam Lambda configuration,
/// amplitude A/a, width sigma_s), retrieve under a vortex control pair:
/// first-order LG of width sigma_r plus a Gaussian of relative amplitude b
/// and width sigma_r3 that keeps the total control finite at the core.
inline RetrievalResult lambda_store_tripod_retrieve(const Field2D& probe_s, double a, double b,
                                                    double sigma_s, double sigma_r,
                                                    double sigma_r3, const MediumParams& params,
                                                    double amplitude = 1.0) {
    if (!(a > 0.0)) throw InvalidArgument("lambda_store_tripod_retrieve: a must be positive");
    if (b < 0.0) throw InvalidArgument("lambda_store_tripod_retrieve: b must be nonnegative");
    const TransverseGrid& g = probe_s.grid;
    ControlPair storage{lg_field({0, amplitude, sigma_s, 1.0 / a}, g), Field2D(g)};
    ControlPair readout{lg_field({1, amplitude, sigma_r, 1.0}, g),
                        b > 0.0 ? lg_field({0, amplitude, sigma_r3, b}, g) : Field2D(g)};
    return retrieve(store(probe_s, storage, params), readout, params);
}

/// Store under a vortex control pair (first-order LG plus Gaussian of
/// relative amplitude b, both width sigma_s), retrieve under a single
/// Gaussian control of relative amplitude a and width sigma_r. The
/// regenerated field carries the phase-conjugated vortex.
inline RetrievalResult tripod_store_lambda_retrieve(const Field2D& probe_s, double a, double b,
                                                    double sigma_s, double sigma_r,
                                                    const MediumParams& params,
                                                    double amplitude = 1.0) {
    if (!(a > 0.0)) throw InvalidArgument("tripod_store_lambda_retrieve: a must be positive");
    if (!(b > 0.0))
        throw InvalidArgument(
            "tripod_store_lambda_retrieve: b must be positive (the second storage control "
            "regularizes the vortex core)");
    const TransverseGrid& g = probe_s.grid;
    ControlPair storage{lg_field({1, amplitude, sigma_s, 1.0}, g),
                        lg_field({0, amplitude, sigma_s, b}, g)};
    ControlPair readout{lg_field({0, amplitude, sigma_r, a}, g), Field2D(g)};
    return retrieve(store(probe_s, storage, params), readout, params);
}

/// Closed-form retrieval profile for lambda_store_tripod_retrieve:
///   E_r = a * rho * e^{i phi} * exp[-rho^2 (1/sigma_r^2 - 1/sigma_s^2)] * E_s.
inline Field2D vortex_transfer_reference(const Field2D& probe_s, double a, double sigma_s,
                                         double sigma_r) {
    const double c = 1.0 / (sigma_r * sigma_r) - 1.0 / (sigma_s * sigma_s);
    Field2D out(probe_s.grid);
    const TransverseGrid& g = probe_s.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            const double rho2 = x * x + y * y;
            out.at(i, j) = a * Complex(x, y) * std::exp(-rho2 * c) * probe_s.at(i, j);
        }
    return out;
}

/// Closed-form retrieval profile for tripod_store_lambda_retrieve:
///   E_r = a rho e^{-i phi} / (rho^2 + b^2) * exp[-rho^2 (1/sigma_r^2 -
///   1/sigma_s^2)] * E_s.
inline Field2D conjugate_transfer_reference(const Field2D& probe_s, double a, double b,
                                            double sigma_s, double sigma_r) {
    const double c = 1.0 / (sigma_r * sigma_r) - 1.0 / (sigma_s * sigma_s);
    Field2D out(probe_s.grid);
    const TransverseGrid& g = probe_s.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            const double rho2 = x * x + y * y;
            out.at(i, j) =
                a * Complex(x, -y) / (rho2 + b * b) * std::exp(-rho2 * c) * probe_s.at(i, j);
        }
    return out;
}

} // namespace tsl
