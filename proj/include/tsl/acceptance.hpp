#pragma once

// The embedded acceptance suite: seven end-to-end checks with pinned
// tolerances, each printed as a single pass/fail line. The CLI `check`
// subcommand and the acceptance test binary both run exactly this.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tsl/analysis.hpp"
#include "tsl/scenario.hpp"
#include "tsl/storage.hpp"

namespace tsl {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline CriterionResult criterion_loss_law() {
    CriterionResult c{1, "loss-law", true, ""};
    double worst = 0.0;
    for (double b : {3.0, 10.0, 30.0}) {
        const LossQuery q{b, 10.0, 20.0, 20.0, 20.0};
        const double analytic = loss_ratio_analytic(q);
        const double numeric = loss_ratio_numeric(q);
        const double rel = std::abs(analytic - numeric) / numeric;
        worst = std::max(worst, rel);
        if (rel > 1e-8) c.pass = false;
    }
    const double at_zero = loss_ratio_analytic({0.0, 10.0, 20.0, 20.0, 20.0});
    if (at_zero != 1.0) c.pass = false;
    const double at_large = loss_ratio_analytic({100.0, 10.0, 20.0, 20.0, 20.0});
    const double asymptote = 10.0 * 10.0 / (2.0 * 100.0 * 100.0);
    const double asym_rel = std::abs(at_large - asymptote) / asymptote;
    if (asym_rel > 1e-2) c.pass = false;
    c.detail = "max analytic/quadrature rel err " + fmt3(worst) + ", ratio(b=0) " +
               fmt3(at_zero) + ", asymptote rel dev " + fmt3(asym_rel);
    return c;
}

inline CriterionResult criterion_asymptote_monotone() {
    CriterionResult c{2, "asymptote-monotonicity", true, ""};
    const double sigma_p = 10.0;
    double prev = 2.0, worst_asym = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double b = sigma_p * 10.0 * k / 100.0;
        const double r = loss_ratio_analytic({b, sigma_p, 20.0, 20.0, 20.0});
        if (!(r > 0.0 && r <= 1.0)) c.pass = false;
        if (!(r < prev)) c.pass = false;
        prev = r;
        if (b / sigma_p >= 5.0) {
            const double asym = sigma_p * sigma_p / (2.0 * b * b);
            worst_asym = std::max(worst_asym, std::abs(r - asym) / asym);
        }
    }
    if (worst_asym > 0.05) c.pass = false;
    c.detail = "101 points strictly decreasing in (0,1], tail asymptote rel dev " +
               fmt3(worst_asym);
    return c;
}

inline CriterionResult criterion_from_scenario(int id, const std::string& name,
                                               const ScenarioSpec& spec) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() /
                                      ("tsl-check-" + std::to_string(id) + "-" +
                                       std::to_string(static_cast<unsigned>(getpid())));
    const ScenarioReport rep = run_scenario(spec, dir);
    CriterionResult c{id, name, rep.all_passed(), ""};
    for (const Assertion& a : rep.assertions) {
        if (!c.detail.empty()) c.detail += ", ";
        c.detail += a.name + (a.pass ? " ok" : " FAILED (" + fmt3(a.actual) + " vs " +
                                                   fmt3(a.expected) + ")");
    }
    std::filesystem::remove_all(dir);
    return c;
}

inline CriterionResult criterion_regeneration() {
    CriterionResult c{5, "regeneration-transient", true, ""};
    const TransverseGrid grid = make_grid(8, 8, 4.0, 4.0);
    MediumParams params;
    params.coupling_density = 400.0;  // deep slow light: g^2 n / Oc^2 = 400
    params.gamma = 1.0;
    params.length = 10.0;
    const ControlPair controls{Field2D::from_function(grid, [](double, double) { return 1.0; }),
                               Field2D(grid)};
    const Field2D probe =
        Field2D::from_function(grid, [](double x, double y) { return 0.5 + 0.1 * x - 0.05 * y; });
    const StoredCoherence coh = store(probe, controls, params);

    // settling: identical-ratio retrieval regenerates the stored probe
    const Field2D target = retrieve(coh, controls, params).probe;
    const auto series = regeneration_transient(coh, controls, params, 0.01, 5.0);
    double settle_err = 0.0;
    const double target_max = max_abs(target);
    for (std::size_t k = 0; k < target.values.size(); ++k)
        settle_err = std::max(settle_err,
                              std::abs(series.back().values[k] - target.values[k]) / target_max);
    if (settle_err > 0.01) c.pass = false;

    // second-order self convergence against a fine-step reference
    const double t_end = 1.0;
    auto final_field = [&](double dt) {
        return regeneration_transient(coh, controls, params, dt, t_end).back();
    };
    const Field2D ref = final_field(1.0e-3 / 128.0);
    auto err_vs_ref = [&](const Field2D& f) {
        double e = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k)
            e = std::max(e, std::abs(f.values[k] - ref.values[k]));
        return e;
    };
    const double err_coarse = err_vs_ref(final_field(1.0e-3));
    const double err_fine = err_vs_ref(final_field(0.5e-3));
    const double gain = err_coarse / err_fine;
    if (!(gain >= 3.5)) c.pass = false;
    if (!(err_coarse > 1e-14)) c.pass = false;  // guard against a vacuous ratio

    c.detail = "settling rel err " + fmt3(settle_err) + " at t=5*gamma/Oc^2, dt-halving gain " +
               fmt3(gain);
    return c;
}

inline CriterionResult criterion_invariants(std::uint64_t seed) {
    CriterionResult c{7, "algebraic-invariants", true, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    const TransverseGrid grid = make_grid(16, 16, 8.0, 8.0);

    auto random_field = [&] {
        Field2D f(grid);
        for (Complex& v : f.values) v = Complex(uni(rng), uni(rng));
        return f;
    };
    auto random_controls = [&] {
        ControlPair p;
        p.omega_c2 = random_field();
        Field2D o3(grid);
        for (Complex& v : o3.values) {
            const double phase = std::numbers::pi * uni(rng);
            v = mag(rng) * Complex(std::cos(phase), std::sin(phase));  // bounded away from 0
        }
        p.omega_c3 = std::move(o3);
        return p;
    };

    double worst_unitary = 0.0, worst_xi = 0.0, worst_lossless = 0.0, worst_dark = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ControlPair pair = random_controls();
        const AtomicFields atoms{random_field(), random_field()};

        const auto [bright, dark] = to_bright_dark(atoms, pair);
        const AtomicFields back = from_bright_dark(bright, dark, pair);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double norm_in =
                std::norm(atoms.phi2.values[k]) + std::norm(atoms.phi3.values[k]);
            const double norm_bd = std::norm(bright.values[k]) + std::norm(dark.values[k]);
            worst_unitary = std::max(worst_unitary, std::abs(norm_bd - norm_in));
            worst_unitary = std::max(
                worst_unitary, std::abs(back.phi2.values[k] - atoms.phi2.values[k]));
            worst_unitary = std::max(
                worst_unitary, std::abs(back.phi3.values[k] - atoms.phi3.values[k]));
        }

        const auto [xi2, xi3] = xi_ratios(pair);
        for (std::size_t k = 0; k < grid.size(); ++k)
            worst_xi = std::max(
                worst_xi, std::abs(std::norm(xi2.values[k]) + std::norm(xi3.values[k]) - 1.0));

        MediumParams params;
        params.coupling_density = 1e8;  // the bookkeeping assumes slow light
        params.gamma = 1.0;
        params.length = 10.0;
        const Field2D probe = random_field();
        const StoredCoherence coh = store(probe, pair, params);

        const auto [bs, ds] = to_bright_dark({coh.phi2, coh.phi3}, pair);
        const double bmax = max_abs(bs);
        for (const Complex& v : ds.values)
            worst_dark = std::max(worst_dark, std::abs(v) / (bmax > 0.0 ? bmax : 1.0));

        const double scale = 0.5 + 1.5 * (uni(rng) + 1.0) / 2.0;
        const ControlPair stronger{map_field(pair.omega_c2, [&](Complex v) { return scale * v; }),
                                   map_field(pair.omega_c3, [&](Complex v) { return scale * v; })};
        const RetrievalResult r = retrieve(coh, stronger, params);
        const double pmax = max_abs(probe);
        for (std::size_t k = 0; k < grid.size(); ++k)
            worst_lossless = std::max(
                worst_lossless, std::abs(r.probe.values[k] - scale * probe.values[k]) / pmax);
    }
    if (worst_unitary > 1e-12 || worst_xi > 1e-12 || worst_lossless > 1e-12 ||
        worst_dark > 1e-10)
        c.pass = false;
    c.detail = "100 random instances: unitarity " + fmt3(worst_unitary) + ", |xi|^2 sum " +
               fmt3(worst_xi) + ", identical-ratio losslessness " + fmt3(worst_lossless) +
               ", storage dark content " + fmt3(worst_dark);
    return c;
}

} // namespace detail

/// Run all acceptance criteria, printing one PASS/FAIL line per criterion.
inline std::vector<CriterionResult> run_acceptance(std::ostream& out,
                                                   std::uint64_t seed = 20260808) {
    std::vector<CriterionResult> results;

    auto guarded = [&](int id, const char* name, auto&& fn) {
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = CriterionResult{id, name, false, std::string("exception: ") + e.what()};
        }
        results.push_back(r);
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  [" << r.detail
            << "]\n";
    };

    guarded(1, "loss-law", [] { return detail::criterion_loss_law(); });
    guarded(2, "asymptote-monotonicity", [] { return detail::criterion_asymptote_monotone(); });
    guarded(3, "vortex-transfer", [] {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::lambda_store_tripod_retrieve;
        spec.params = StoreRetrieveParams{};  // 256^2, sigma_p=10, a=1, b=10
        return detail::criterion_from_scenario(3, "vortex-transfer", spec);
    });
    guarded(4, "phase-conjugation", [] {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::tripod_store_lambda_retrieve;
        StoreRetrieveParams p;
        p.nx = 512;
        p.ny = 512;
        spec.params = p;
        return detail::criterion_from_scenario(4, "phase-conjugation", spec);
    });
    guarded(5, "regeneration-transient", [] { return detail::criterion_regeneration(); });
    guarded(6, "propagation-calibration", [] {
        ScenarioSpec vac;
        vac.kind = ScenarioKind::vacuum_diffraction;
        vac.params = VacuumDiffractionParams{};
        CriterionResult a = detail::criterion_from_scenario(6, "propagation-calibration", vac);
        ScenarioSpec transit;
        transit.kind = ScenarioKind::eit_transit;
        transit.params = EitTransitParams{};
        CriterionResult b = detail::criterion_from_scenario(6, "propagation-calibration", transit);
        return CriterionResult{6, "propagation-calibration", a.pass && b.pass,
                               a.detail + ", " + b.detail};
    });
    guarded(7, "algebraic-invariants",
            [seed] { return detail::criterion_invariants(seed); });
    return results;
}

} // namespace tsl
