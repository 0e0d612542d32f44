#pragma once

// Physical observables: vortex winding numbers, the closed-form energy-loss
// ratio with its exponential-integral kernel, the direct quadrature of the
// loss integral, and the field-based energy ratio.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "tsl/expint.hpp"
#include "tsl/grid.hpp"
#include "tsl/quadrature.hpp"
#include "tsl/storage.hpp"

namespace tsl {

namespace detail {

inline Complex bilinear(const Field2D& f, double x, double y) {
    const TransverseGrid& g = f.grid;
    const double u = x / g.dx() + g.nx / 2;
    const double v = y / g.dy() + g.ny / 2;
    if (u < 0.0 || v < 0.0 || u > g.nx - 1 || v > g.ny - 1)
        throw InvalidArgument("bilinear: sample point outside the grid");
    const int i0 = std::min(static_cast<int>(u), g.nx - 2);
    const int j0 = std::min(static_cast<int>(v), g.ny - 2);
    const double fu = u - i0;
    const double fv = v - j0;
    return (1 - fu) * (1 - fv) * f.at(i0, j0) + fu * (1 - fv) * f.at(i0 + 1, j0) +
           (1 - fu) * fv * f.at(i0, j0 + 1) + fu * fv * f.at(i0 + 1, j0 + 1);
}

} // namespace detail

/// Net phase winding around a centered circle of the given radius:
/// accumulated branch-adjusted phase increments over >= 64 bilinear samples,
/// divided by 2*pi and rounded. The amplitude must stay well above the noise
/// floor on the whole circle and the pre-rounding residual must be < 0.05,
/// otherwise the phase is not trustworthy and AmplitudeTooSmall is thrown.
inline int winding_number(const Field2D& field, double radius, int n_samples = 256) {
    require_finite(field, "winding_number");
    if (!(radius > 0.0)) throw InvalidArgument("winding_number: radius must be positive");
    n_samples = std::max(n_samples, 64);
    const double floor_amp = 1e-9 * max_abs(field);

    std::vector<Complex> ring(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        const double th = 2.0 * std::numbers::pi * s / n_samples;
        ring[s] = detail::bilinear(field, radius * std::cos(th), radius * std::sin(th));
        if (std::abs(ring[s]) <= floor_amp)
            throw AmplitudeTooSmall("winding_number: amplitude below noise floor on the "
                                    "sampling circle (radius " +
                                    std::to_string(radius) + ")");
    }
    double total = 0.0;
    for (int s = 0; s < n_samples; ++s)
        total += std::arg(ring[(s + 1) % n_samples] / ring[s]);
    const double w = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) >= 0.05)
        throw AmplitudeTooSmall("winding_number: phase ill-resolved on the circle (residual " +
                                std::to_string(std::abs(w - rounded)) + ")");
    return static_cast<int>(rounded);
}

/// Radius of the brightest ring: argmax over r of the azimuthally averaged
/// amplitude. Keeps the winding probe away from the dark core and the tails.
inline double ring_radius(const Field2D& field, int n_samples = 128) {
    const TransverseGrid& g = field.grid;
    const double dr = std::min(g.dx(), g.dy());
    const double r_max = 0.45 * std::min(g.lx, g.ly);
    double best_r = dr, best_a = -1.0;
    for (double r = dr; r <= r_max; r += dr) {
        double mean = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            const double th = 2.0 * std::numbers::pi * s / n_samples;
            mean += std::abs(detail::bilinear(field, r * std::cos(th), r * std::sin(th)));
        }
        if (mean > best_a) {
            best_a = mean;
            best_r = r;
        }
    }
    return best_r;
}

/// winding_number at the brightest ring.
inline int winding_number(const Field2D& field) {
    return winding_number(field, ring_radius(field));
}

/// Parameters of the retrieval-loss question: probe width sigma_p, relative
/// amplitude b of the second control, and the control widths.
struct LossQuery {
    double b = 0.0;
    double sigma_p = 1.0;
    double sigma_r = 1.0;
    double sigma_r3 = 1.0;
    double sigma_s = 1.0;
};

inline void validate(const LossQuery& q) {
    if (q.b < 0.0) throw InvalidArgument("LossQuery: b must be nonnegative");
    if (!(q.sigma_p > 0.0 && q.sigma_r > 0.0 && q.sigma_r3 > 0.0 && q.sigma_s > 0.0))
        throw InvalidArgument("LossQuery: all widths must be positive");
}

/// Closed-form retrieved-to-stored energy ratio for equal retrieval-control
/// widths: 1 + u e^u Ei(-u) with u = 2 b^2 / sigma_p^2. Equals 1 at b = 0
/// and decays like sigma_p^2/(2 b^2) for b >> sigma_p.
inline double loss_ratio_analytic(const LossQuery& q) {
    validate(q);
    if (q.sigma_r != q.sigma_r3)
        throw WidthMismatch("loss_ratio_analytic: requires sigma_r == sigma_r3 (use "
                            "loss_ratio_numeric for unequal widths)");
    const double u = 2.0 * q.b * q.b / (q.sigma_p * q.sigma_p);
    if (u == 0.0) return 1.0;
    if (u < 10.0) return 1.0 + u * std::exp(u) * detail::ei_series_negative(-u);
    return 1.0 - u * detail::e1_scaled_cf(u);  // u e^u Ei(-u) = -u e^u E1(u)
}

/// Direct adaptive quadrature of the radial loss integral
///   ratio = (2/sigma_p^2) * int_0^inf x exp[-2x(1/sigma_r^2 + 1/sigma_p^2)]
///           / (x exp(-2x/sigma_r^2) + b^2 exp(-2x/sigma_r3^2)) dx,
/// which also covers sigma_r != sigma_r3.
inline double loss_ratio_numeric(const LossQuery& q) {
    validate(q);
    const double cr = 2.0 / (q.sigma_r * q.sigma_r);
    const double cr3 = 2.0 / (q.sigma_r3 * q.sigma_r3);
    const double cp = 2.0 / (q.sigma_p * q.sigma_p);
    const double b2 = q.b * q.b;

    // asymptotic decay rate of the integrand; nonpositive means divergence
    const double slowest_denom = (b2 > 0.0) ? std::min(cr, cr3) : cr;
    const double decay = cr + cp - slowest_denom;
    if (!(decay > 0.0))
        throw QuadratureNonConvergent("loss_ratio_numeric: integrand does not decay "
                                      "(sigma_r3 too wide relative to sigma_r, sigma_p)");
    const double upper = 45.0 / decay;

    auto integrand = [&](double x) {
        const double den = x * std::exp(-cr * x) + b2 * std::exp(-cr3 * x);
        if (den == 0.0) return std::exp(-cp * x);  // removable point at x=0 when b=0
        return x * std::exp(-(cr + cp) * x) / den;
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    const QuadratureResult r = integrate_adaptive(integrand, 0.0, upper, opt);
    return cp * r.value;
}

/// Energy ratio measured from a composed store/retrieve run. The
/// group-velocity pulse-length weight is already folded into the retrieval
/// energies; this adds the resolution sanity check: if more than 1% of the
/// retrieved power sits in the outer 10% of the grid, the integral cannot
/// be trusted.
inline double loss_ratio_from_fields(const RetrievalResult& result) {
    if (!(result.energy_in > 0.0))
        throw InvalidArgument("loss_ratio_from_fields: no input energy recorded");
    const TransverseGrid& g = result.probe.grid;
    double total = 0.0, outer = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double p = std::norm(result.probe.at(i, j));
            total += p;
            const double fx = std::abs(g.x(i)) / (g.lx / 2.0);
            const double fy = std::abs(g.y(j)) / (g.ly / 2.0);
            if (std::max(fx, fy) > 0.9) outer += p;
        }
    if (total > 0.0 && outer > 0.01 * total)
        throw GridTooCoarse("loss_ratio_from_fields: >1% of retrieved power in the outer "
                            "10% of the grid; enlarge the extents");
    return result.energy_out / result.energy_in;
}

/// Loss-curve CSV: columns (b, ratio_analytic, ratio_numeric,
/// ratio_fields_optional). The analytic column is blank when the two
/// retrieval-control widths differ; the fields column is blank unless
/// provided by the caller (NaN marks "absent").
inline void write_loss_curve_csv(std::ostream& out, std::span<const double> bs,
                                 const LossQuery& base,
                                 std::span<const double> field_ratios = {}) {
    out << "b,ratio_analytic,ratio_numeric,ratio_fields\n";
    char buf[160];
    for (std::size_t k = 0; k < bs.size(); ++k) {
        LossQuery q = base;
        q.b = bs[k];
        const double numeric = loss_ratio_numeric(q);
        std::snprintf(buf, sizeof buf, "%.17g,", bs[k]);
        out << buf;
        if (q.sigma_r == q.sigma_r3) {
            std::snprintf(buf, sizeof buf, "%.17g", loss_ratio_analytic(q));
            out << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g", numeric);
        out << buf;
        if (k < field_ratios.size() && std::isfinite(field_ratios[k])) {
            std::snprintf(buf, sizeof buf, ",%.17g", field_ratios[k]);
            out << buf;
        } else {
            out << ",";
        }
        out << "\n";
    }
}

inline void write_loss_curve_csv(const std::filesystem::path& path, std::span<const double> bs,
                                 const LossQuery& base,
                                 std::span<const double> field_ratios = {}) {
    std::ofstream out(path);
    if (!out) throw Error("write_loss_curve_csv: cannot open " + path.string());
    write_loss_curve_csv(out, bs, base, field_ratios);
}

} // namespace tsl
