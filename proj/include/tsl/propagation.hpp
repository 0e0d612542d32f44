#pragma once

// Probe-envelope evolution. Three layers:
//   - vacuum_step: exact spectral solution of the paraxial diffraction step;
//   - slowlight_step: one symmetric operator-split step of the slow-light
//     envelope equation in the transverse plane (thin-cloud mode: the bulk
//     z delay is bookkept, not resolved);
//   - slowlight_step_z: first-order upwind advection of a longitudinal pulse
//     profile, for z-resolved transit runs (CFL-checked);
//   - propagate_through_medium: steady-envelope z march through the cloud
//     with per-step diagnostics.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "tsl/beams.hpp"
#include "tsl/fft.hpp"
#include "tsl/grid.hpp"
#include "tsl/medium.hpp"

namespace tsl {

// Probe envelope wave number in wavelength units.
inline constexpr double k_probe = 2.0 * std::numbers::pi;

struct AbsorbingBoundary {
    double width = 0.0;     // band width, wavelength units
    double strength = 8.0;  // damping exponent scale at the very edge
};

struct PropagationConfig {
    double dz = 0.1;
    int n_steps = 1;  // 0 is allowed: a zero-length medium is the identity
    // The transverse envelope map is frame-independent (the envelope is
    // already co-propagating); the frame choice matters to z-resolved runs,
    // where comoving means advecting with v_g - v_frame.
    enum class Frame { lab, comoving } frame = Frame::lab;
    std::optional<AbsorbingBoundary> absorber;  // periodic boundaries when unset
};

inline void validate(const PropagationConfig& cfg, const TransverseGrid& grid,
                     double medium_length) {
    if (!(cfg.dz > 0.0)) throw InvalidArgument("PropagationConfig: dz must be positive");
    if (cfg.n_steps < 0) throw InvalidArgument("PropagationConfig: n_steps must be nonnegative");
    if (cfg.dz * cfg.n_steps > medium_length * (1.0 + 1e-12))
        throw InvalidArgument("PropagationConfig: dz*n_steps exceeds the medium length");
    if (cfg.absorber && !(cfg.absorber->width < std::min(grid.lx, grid.ly) / 4.0))
        throw InvalidArgument("PropagationConfig: absorber width must be < min(lx,ly)/4");
}

/// Exact spectral diffraction step: each spectral sample is multiplied by
/// exp(-i*(kx^2+ky^2)*dz/(2k)). Unitary, hence power conserving.
inline Field2D vacuum_step(const Field2D& field, double dz) {
    Field2D spec = transverse_spectrum(field);
    const TransverseGrid& g = spec.grid;
    const double coeff = dz / (2.0 * k_probe);
    for (int j = 0; j < g.ny; ++j) {
        const double ky = kappa_y(g, j);
        for (int i = 0; i < g.nx; ++i) {
            const double kx = kappa_x(g, i);
            const double phase = -coeff * (kx * kx + ky * ky);
            spec.at(i, j) *= Complex(std::cos(phase), std::sin(phase));
        }
    }
    return inverse_spectrum(spec);
}

namespace detail {

inline Field2D rabi_magnitude(const ControlPair& pair) {
    return total_rabi(pair);
}

inline void require_control_on_support(const Field2D& probe, const Field2D& rabi,
                                       const char* who) {
    const double thresh = 1e-12 * max_abs(probe);
    const TransverseGrid& g = probe.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::abs(probe.at(i, j)) > thresh && rabi.at(i, j).real() == 0.0)
                throw_zero_control(g, i, j, who);
}

// Static two-photon mismatch (w21|xi2|^2 + w31|xi3|^2)/1; zero outside the
// control support.
inline Field2D static_mismatch(const ControlPair& pair, const MediumParams& params) {
    return zip_fields(pair.omega_c2, pair.omega_c3, [&](Complex a, Complex b) {
        const double oc2 = std::norm(a) + std::norm(b);
        if (oc2 == 0.0) return Complex(0.0, 0.0);
        return Complex((params.omega21 * std::norm(a) + params.omega31 * std::norm(b)) / oc2, 0.0);
    });
}

inline Field2D boundary_mask(const TransverseGrid& g, const AbsorbingBoundary& ab) {
    return Field2D::from_function(g, [&](double x, double y) {
        const double d = std::min(g.lx / 2.0 - std::abs(x), g.ly / 2.0 - std::abs(y));
        if (d >= ab.width) return 1.0;
        const double s = 1.0 - std::max(d, 0.0) / ab.width;
        return std::exp(-ab.strength * s * s * s * s);
    });
}

} // namespace detail

/// One Strang-split step of the slow-light envelope equation over dt in the
/// transverse plane: spectral diffraction half-steps around the pointwise
/// phase/gain map exp(-i*delta*(1-v_g)*dt) * (Oc_after/Oc_before)^(1-v_g).
/// delta is the full two-photon mismatch across the step, including the
/// ratio-derivative term (which vanishes for the usual fixed-ratio ramps).
/// The control-ramp factor is exact for piecewise-exponential ramps. The
/// diffraction coefficient uses the probe-power-weighted mean v_g, exact
/// when the controls are transversely uniform.
inline Field2D slowlight_step(const Field2D& field, const ControlPair& before,
                              const ControlPair& after, const MediumParams& params, double dt) {
    require_finite(field, "slowlight_step");
    require_same_grid(field, before.omega_c2, "slowlight_step");
    require_same_grid(field, after.omega_c2, "slowlight_step");
    validate(params);
    if (!(dt > 0.0)) throw InvalidArgument("slowlight_step: dt must be positive");

    const Field2D rabi_b = detail::rabi_magnitude(before);
    const Field2D rabi_a = detail::rabi_magnitude(after);
    detail::require_control_on_support(field, rabi_b, "slowlight_step");
    detail::require_control_on_support(field, rabi_a, "slowlight_step");

    const double g2n = params.coupling_density;
    const TransverseGrid& g = field.grid;

    // midpoint group velocity, geometric in Oc (exact for exponential ramps)
    Field2D v_mid(g);
    double wsum = 0.0, vsum = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double oc2 = rabi_b.values[k].real() * rabi_a.values[k].real();
        double v;
        if (g2n == 0.0)
            v = 1.0;
        else if (oc2 == 0.0)
            v = 0.0;
        else
            v = oc2 / (oc2 + g2n);
        v_mid.values[k] = v;
        const double w = std::norm(field.values[k]);
        wsum += w;
        vsum += w * v;
    }
    const double v_ref = (wsum > 0.0) ? vsum / wsum : 1.0;

    Field2D out = vacuum_step(field, v_ref * dt / 2.0);

    for (std::size_t k = 0; k < g.size(); ++k) {
        const double v = v_mid.values[k].real();
        const double ob = rabi_b.values[k].real();
        const double oa = rabi_a.values[k].real();
        if (ob == 0.0 || oa == 0.0) continue;  // outside the control support
        const Complex xi2b = before.omega_c2.values[k] / ob;
        const Complex xi3b = before.omega_c3.values[k] / ob;
        const Complex xi2a = after.omega_c2.values[k] / oa;
        const Complex xi3a = after.omega_c3.values[k] / oa;
        const Complex deriv = 0.5 * (xi2b + xi2a) * (std::conj(xi2a) - std::conj(xi2b)) / dt +
                              0.5 * (xi3b + xi3a) * (std::conj(xi3a) - std::conj(xi3b)) / dt;
        const Complex delta =
            params.omega21 * 0.5 * (std::norm(xi2b) + std::norm(xi2a)) +
            params.omega31 * 0.5 * (std::norm(xi3b) + std::norm(xi3a)) -
            Complex(0.0, 1.0) * deriv;
        out.values[k] *= std::exp(Complex(0.0, -1.0) * delta * (1.0 - v) * dt) *
                         std::pow(oa / ob, 1.0 - v);
    }

    return vacuum_step(out, v_ref * dt / 2.0);
}

/// Longitudinal pulse profile: complex envelope sampled along z on [0, length).
struct LongitudinalPulse {
    int nz = 0;
    double length = 0.0;
    std::vector<Complex> values;

    LongitudinalPulse() = default;
    LongitudinalPulse(int n, double len) : nz(n), length(len), values(n, Complex{0.0, 0.0}) {
        if (n < 2 || !(len > 0.0)) throw InvalidArgument("LongitudinalPulse: bad dimensions");
    }
    double dz() const { return length / nz; }
    double z(int i) const { return i * dz(); }
};

inline double pulse_power(const LongitudinalPulse& p) {
    double s = 0.0;
    for (const Complex& v : p.values) s += std::norm(v);
    return s * p.dz();
}

inline double pulse_centroid(const LongitudinalPulse& p) {
    double s = 0.0, zs = 0.0;
    for (int i = 0; i < p.nz; ++i) {
        const double w = std::norm(p.values[i]);
        s += w;
        zs += w * p.z(i);
    }
    if (s == 0.0) throw InvalidArgument("pulse_centroid: empty pulse");
    return zs / s;
}

/// One z-resolved advection step: first-order upwind transport by v_g*dt
/// (inflow-zero left boundary) followed by the local phase
/// exp(-i*delta*(1-v_g)*dt). Throws StepTooLarge when v_g*dt > dz anywhere.
inline LongitudinalPulse slowlight_step_z(const LongitudinalPulse& pulse,
                                          std::span<const double> v_g, double delta, double dt) {
    if (static_cast<int>(v_g.size()) != pulse.nz)
        throw InvalidArgument("slowlight_step_z: velocity profile size mismatch");
    if (!(dt > 0.0)) throw InvalidArgument("slowlight_step_z: dt must be positive");
    const double dz = pulse.dz();
    LongitudinalPulse out = pulse;
    for (int i = 0; i < pulse.nz; ++i) {
        const double nu = v_g[i] * dt / dz;
        if (nu > 1.0 + 1e-12)
            throw StepTooLarge("slowlight_step_z: CFL violated, v_g*dt = " +
                               std::to_string(v_g[i] * dt) + " > dz = " + std::to_string(dz));
        const Complex upstream = (i > 0) ? pulse.values[i - 1] : Complex{0.0, 0.0};
        out.values[i] = pulse.values[i] - nu * (pulse.values[i] - upstream);
        const double phase = -delta * (1.0 - v_g[i]) * dt;
        out.values[i] *= Complex(std::cos(phase), std::sin(phase));
    }
    return out;
}

struct StepDiagnostics {
    int step = 0;
    double z = 0.0;
    double power = 0.0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    double rms_width = 0.0;  // power-weighted rms radius about the centroid
};

inline StepDiagnostics field_moments(const Field2D& f, int step, double z) {
    StepDiagnostics d;
    d.step = step;
    d.z = z;
    const TransverseGrid& g = f.grid;
    double w = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double p = std::norm(f.at(i, j));
            const double x = g.x(i), y = g.y(j);
            w += p;
            sx += p * x;
            sy += p * y;
            sxx += p * x * x;
            syy += p * y * y;
        }
    d.power = w * g.dx() * g.dy();
    if (w > 0.0) {
        d.centroid_x = sx / w;
        d.centroid_y = sy / w;
        const double var =
            sxx / w - d.centroid_x * d.centroid_x + syy / w - d.centroid_y * d.centroid_y;
        d.rms_width = std::sqrt(std::max(var, 0.0));
    }
    return d;
}

struct PropagationResult {
    Field2D field;
    std::vector<StepDiagnostics> steps;
    double transit_time = 0.0;  // power-weighted bulk delay through the marched length
};

/// March the transverse envelope through the cloud in the steady-envelope
/// reduction: per dz, a pointwise phase exp(-i*delta*(1/v_g - 1)*dz) wrapped
/// around the exact spectral diffraction step (the diffraction rate per unit
/// z is control-independent, since v_g multiplies both d/dz and the
/// transverse Laplacian). The z advection enters as the bookkept transit
/// time, not a field change.
inline PropagationResult propagate_through_medium(const Field2D& probe, const ControlPair& controls,
                                                  const MediumParams& params,
                                                  const PropagationConfig& config) {
    require_finite(probe, "propagate_through_medium");
    require_same_grid(probe, controls.omega_c2, "propagate_through_medium");
    validate(params);
    validate(config, probe.grid, params.length);

    const Field2D rabi = detail::rabi_magnitude(controls);
    detail::require_control_on_support(probe, rabi, "propagate_through_medium");

    const TransverseGrid& g = probe.grid;
    const Field2D v_g = group_velocity(controls, params);
    const Field2D delta = detail::static_mismatch(controls, params);
    const std::optional<Field2D> mask =
        config.absorber ? std::optional<Field2D>(detail::boundary_mask(g, *config.absorber))
                        : std::nullopt;

    // bulk delay per unit z, weighted by the incoming probe power
    double wsum = 0.0, slow = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double v = v_g.values[k].real();
        if (v <= 0.0) continue;
        const double w = std::norm(probe.values[k]);
        wsum += w;
        slow += w / v;
    }
    const double inv_v_mean = (wsum > 0.0) ? slow / wsum : 1.0;

    PropagationResult result;
    result.field = probe;
    result.steps.reserve(config.n_steps + 1);
    result.steps.push_back(field_moments(result.field, 0, 0.0));
    for (int s = 0; s < config.n_steps; ++s) {
        Field2D half(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double v = v_g.values[k].real();
            Complex factor(1.0, 0.0);
            if (v > 0.0) {
                const Complex arg = Complex(0.0, -0.5) * delta.values[k] * (1.0 / v - 1.0) *
                                    config.dz;
                factor = std::exp(arg);
            }
            half.values[k] = result.field.values[k] * factor;
        }
        Field2D stepped = vacuum_step(half, config.dz);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double v = v_g.values[k].real();
            if (v > 0.0) {
                const Complex arg = Complex(0.0, -0.5) * delta.values[k] * (1.0 / v - 1.0) *
                                    config.dz;
                stepped.values[k] *= std::exp(arg);
            }
            if (mask) stepped.values[k] *= mask->values[k].real();
        }
        result.field = std::move(stepped);
        result.steps.push_back(field_moments(result.field, s + 1, (s + 1) * config.dz));
    }
    result.transit_time = inv_v_mean * config.dz * config.n_steps;
    return result;
}

/// Diagnostics stream: CSV with columns (step, z, power, centroid_x,
/// centroid_y, rms_width).
inline void write_diagnostics_csv(const std::filesystem::path& path,
                                  std::span<const StepDiagnostics> steps) {
    std::ofstream out(path);
    if (!out) throw Error("write_diagnostics_csv: cannot open " + path.string());
    out << "step,z,power,centroid_x,centroid_y,rms_width\n";
    char line[192];
    for (const StepDiagnostics& d : steps) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", d.step, d.z,
                      d.power, d.centroid_x, d.centroid_y, d.rms_width);
        out << line;
    }
}

} // namespace tsl
