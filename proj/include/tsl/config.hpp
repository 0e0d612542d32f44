#pragma once

// Scenario config files: a flat, diff-friendly key tree, one "key = value"
// per line, '#' comments, dotted keys for grouping. parse_config() resolves
// every default and validates every invariant; print_config() emits the
// fully resolved form, and the two round-trip.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsl/scenario.hpp"

namespace tsl {

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;  // 0 for command-line overrides
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string s = raw;
            const auto hash = s.find('#');
            if (hash != std::string::npos) s.erase(hash);
            s = trim(s);
            if (s.empty()) continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line) +
                                  ": expected 'key = value', got '" + trim(raw) + "'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(line) + ": empty key");
            if (entries_.count(key))
                throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key +
                                  "' (first set on line " +
                                  std::to_string(entries_[key].line) + ")");
            entries_[key] = {value, line};
        }
    }

    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + assignment + "' is not of the form key=value");
        const std::string key = trim(assignment.substr(0, eq));
        const std::string value = trim(assignment.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("override '" + assignment + "' has an empty key or value");
        entries_[key] = {value, 0};
    }

    std::string require_string(const std::string& key) {
        known_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError("missing required key '" + key + "'");
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        known_.insert(key);
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        known_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return parse_double(key, it->second);
    }

    int get_int(const std::string& key, int fallback) {
        known_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(location(it->second) + ": key '" + key +
                              "' expects an integer, got '" + it->second.value + "'");
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        known_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(location(it->second) + ": key '" + key +
                              "' expects a nonnegative integer, got '" + it->second.value + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        known_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        const std::string& v = it->second.value;
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError(location(it->second) + ": key '" + key +
                          "' expects true/false, got '" + v + "'");
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, entry] : entries_)
            if (!known_.count(key)) unknown.push_back(key);
        if (unknown.empty()) return;
        std::string msg = "unknown key '" + unknown.front() + "'";
        const auto& e = entries_.at(unknown.front());
        if (e.line > 0) msg = "line " + std::to_string(e.line) + ": " + msg;
        msg += "; valid keys for this scenario:";
        for (const std::string& k : known_) msg += " " + k;
        throw ConfigError(msg);
    }

private:
    static std::string location(const ConfigEntry& e) {
        return e.line > 0 ? "line " + std::to_string(e.line) : "override";
    }

    double parse_double(const std::string& key, const ConfigEntry& e) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(location(e) + ": key '" + key + "' expects a number, got '" +
                              e.value + "'");
        }
    }

    std::map<std::string, ConfigEntry> entries_;
    std::set<std::string> known_;
};

inline MediumParams read_medium(ConfigReader& r, const MediumParams& d) {
    MediumParams m;
    m.coupling_density = r.get_double("medium.coupling_density", d.coupling_density);
    m.gamma = r.get_double("medium.gamma", d.gamma);
    m.omega01 = r.get_double("medium.omega01", d.omega01);
    m.omega21 = r.get_double("medium.omega21", d.omega21);
    m.omega31 = r.get_double("medium.omega31", d.omega31);
    m.length = r.get_double("medium.length", d.length);
    m.phi1_amplitude = r.get_double("medium.phi1_amplitude", d.phi1_amplitude);
    validate(m);
    return m;
}

inline void print_medium(std::ostringstream& out, const MediumParams& m) {
    out << "medium.coupling_density = " << fmt(m.coupling_density) << "\n"
        << "medium.gamma = " << fmt(m.gamma) << "\n"
        << "medium.omega01 = " << fmt(m.omega01) << "\n"
        << "medium.omega21 = " << fmt(m.omega21) << "\n"
        << "medium.omega31 = " << fmt(m.omega31) << "\n"
        << "medium.length = " << fmt(m.length) << "\n"
        << "medium.phi1_amplitude = " << fmt(m.phi1_amplitude) << "\n";
}

} // namespace detail

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
    for (ScenarioKind k :
         {ScenarioKind::vacuum_diffraction, ScenarioKind::eit_transit,
          ScenarioKind::lambda_store_tripod_retrieve, ScenarioKind::tripod_store_lambda_retrieve,
          ScenarioKind::loss_curve})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown scenario '" + s +
                      "'; valid: vacuum_diffraction eit_transit lambda_store_tripod_retrieve "
                      "tripod_store_lambda_retrieve loss_curve");
}

/// Parse a config text (plus optional key=value overrides) into a fully
/// validated scenario spec with all defaults resolved.
inline ScenarioSpec parse_config(const std::string& text,
                                 const std::vector<std::string>& overrides = {}) {
    detail::ConfigReader r(text);
    for (const std::string& ov : overrides) r.apply_override(ov);

    ScenarioSpec spec;
    spec.kind = scenario_kind_from_string(r.require_string("scenario"));
    spec.seed = r.get_u64("seed", 0);

    switch (spec.kind) {
        case ScenarioKind::vacuum_diffraction: {
            VacuumDiffractionParams d, p;
            p.nx = r.get_int("grid.nx", d.nx);
            p.ny = r.get_int("grid.ny", d.ny);
            p.lx = r.get_double("grid.lx", d.lx);
            p.ly = r.get_double("grid.ly", d.ly);
            p.waist = r.get_double("beam.waist", d.waist);
            p.amplitude = r.get_double("beam.amplitude", d.amplitude);
            p.n_steps = r.get_int("run.n_steps", d.n_steps);
            p.z_total = r.get_double("run.z_total", d.z_total);
            make_grid(p.nx, p.ny, p.lx, p.ly);
            if (!(p.waist > 0.0)) throw ConfigError("beam.waist must be positive");
            if (!(p.amplitude > 0.0)) throw ConfigError("beam.amplitude must be positive");
            if (p.n_steps < 1) throw ConfigError("run.n_steps must be positive");
            if (!(p.z_total > 0.0)) throw ConfigError("run.z_total must be positive");
            spec.params = p;
            break;
        }
        case ScenarioKind::eit_transit: {
            EitTransitParams d, p;
            p.nz = r.get_int("domain.nz", d.nz);
            p.domain_length = r.get_double("domain.length", d.domain_length);
            p.pulse_sigma = r.get_double("pulse.sigma", d.pulse_sigma);
            p.pulse_center = r.get_double("pulse.center", d.pulse_center);
            p.pulse_amplitude = r.get_double("pulse.amplitude", d.pulse_amplitude);
            p.control_omega = r.get_double("control.omega", d.control_omega);
            p.cfl = r.get_double("run.cfl", d.cfl);
            p.medium = detail::read_medium(r, d.medium);
            if (p.nz < 16) throw ConfigError("domain.nz must be at least 16");
            if (!(p.domain_length > 0.0)) throw ConfigError("domain.length must be positive");
            if (!(p.pulse_sigma > 0.0)) throw ConfigError("pulse.sigma must be positive");
            if (!(p.control_omega > 0.0)) throw ConfigError("control.omega must be positive");
            if (!(p.cfl > 0.0 && p.cfl <= 1.0)) throw ConfigError("run.cfl must be in (0, 1]");
            spec.params = p;
            break;
        }
        case ScenarioKind::lambda_store_tripod_retrieve:
        case ScenarioKind::tripod_store_lambda_retrieve: {
            StoreRetrieveParams d, p;
            p.nx = r.get_int("grid.nx", d.nx);
            p.ny = r.get_int("grid.ny", d.ny);
            p.lx = r.get_double("grid.lx", d.lx);
            p.ly = r.get_double("grid.ly", d.ly);
            p.probe_sigma = r.get_double("probe.sigma", d.probe_sigma);
            p.probe_amplitude = r.get_double("probe.amplitude", d.probe_amplitude);
            p.amplitude = r.get_double("beams.amplitude", d.amplitude);
            p.a = r.get_double("beams.a", d.a);
            p.b = r.get_double("beams.b", d.b);
            p.sigma_s = r.get_double("beams.sigma_s", d.sigma_s);
            p.sigma_r = r.get_double("beams.sigma_r", d.sigma_r);
            // the second retrieval control defaults to the width of the first
            p.sigma_r3 = (spec.kind == ScenarioKind::lambda_store_tripod_retrieve)
                             ? r.get_double("beams.sigma_r3", p.sigma_r)
                             : p.sigma_r;
            p.medium = detail::read_medium(r, d.medium);
            make_grid(p.nx, p.ny, p.lx, p.ly);
            if (!(p.probe_sigma > 0.0)) throw ConfigError("probe.sigma must be positive");
            if (!(p.probe_amplitude > 0.0)) throw ConfigError("probe.amplitude must be positive");
            if (!(p.amplitude > 0.0)) throw ConfigError("beams.amplitude must be positive");
            if (!(p.a > 0.0)) throw ConfigError("beams.a must be positive");
            if (p.b < 0.0) throw ConfigError("beams.b must be nonnegative");
            if (spec.kind == ScenarioKind::tripod_store_lambda_retrieve && !(p.b > 0.0))
                throw ConfigError("beams.b must be positive for tripod storage (the second "
                                  "control regularizes the vortex core)");
            if (!(p.sigma_s > 0.0 && p.sigma_r > 0.0 && p.sigma_r3 > 0.0))
                throw ConfigError("beam widths must be positive");
            spec.params = p;
            break;
        }
        case ScenarioKind::loss_curve: {
            LossCurveParams d, p;
            p.sigma_p = r.get_double("probe.sigma", d.sigma_p);
            p.b_min = r.get_double("loss.b_min", d.b_min);
            p.b_max = r.get_double("loss.b_max", d.b_max);
            p.count = r.get_int("loss.count", d.count);
            p.sigma_r = r.get_double("beams.sigma_r", d.sigma_r);
            p.sigma_r3 = r.get_double("beams.sigma_r3", p.sigma_r);
            p.with_fields = r.get_bool("loss.with_fields", d.with_fields);
            p.nx = r.get_int("grid.nx", d.nx);
            p.ny = r.get_int("grid.ny", d.ny);
            p.lx = r.get_double("grid.lx", d.lx);
            p.ly = r.get_double("grid.ly", d.ly);
            p.a = r.get_double("beams.a", d.a);
            p.sigma_s = r.get_double("beams.sigma_s", d.sigma_s);
            p.medium = detail::read_medium(r, d.medium);
            if (!(p.sigma_p > 0.0)) throw ConfigError("probe.sigma must be positive");
            if (p.b_min < 0.0) throw ConfigError("loss.b_min must be nonnegative");
            if (!(p.b_max >= p.b_min)) throw ConfigError("loss.b_max must be >= loss.b_min");
            if (p.count < 1) throw ConfigError("loss.count must be >= 1");
            if (!(p.sigma_r > 0.0 && p.sigma_r3 > 0.0 && p.sigma_s > 0.0))
                throw ConfigError("beam widths must be positive");
            if (!(p.a > 0.0)) throw ConfigError("beams.a must be positive");
            spec.params = p;
            break;
        }
    }
    r.finish();
    return spec;
}

/// Emit the fully resolved config; parse_config(print_config(s)) round-trips.
inline std::string print_config(const ScenarioSpec& spec) {
    using detail::fmt;
    std::ostringstream out;
    out << "scenario = " << to_string(spec.kind) << "\n";
    out << "seed = " << spec.seed << "\n";
    switch (spec.kind) {
        case ScenarioKind::vacuum_diffraction: {
            const auto& p = std::get<VacuumDiffractionParams>(spec.params);
            out << "grid.nx = " << p.nx << "\ngrid.ny = " << p.ny << "\n"
                << "grid.lx = " << fmt(p.lx) << "\ngrid.ly = " << fmt(p.ly) << "\n"
                << "beam.waist = " << fmt(p.waist) << "\n"
                << "beam.amplitude = " << fmt(p.amplitude) << "\n"
                << "run.n_steps = " << p.n_steps << "\n"
                << "run.z_total = " << fmt(p.z_total) << "\n";
            break;
        }
        case ScenarioKind::eit_transit: {
            const auto& p = std::get<EitTransitParams>(spec.params);
            out << "domain.nz = " << p.nz << "\n"
                << "domain.length = " << fmt(p.domain_length) << "\n"
                << "pulse.sigma = " << fmt(p.pulse_sigma) << "\n"
                << "pulse.center = " << fmt(p.pulse_center) << "\n"
                << "pulse.amplitude = " << fmt(p.pulse_amplitude) << "\n"
                << "control.omega = " << fmt(p.control_omega) << "\n"
                << "run.cfl = " << fmt(p.cfl) << "\n";
            detail::print_medium(out, p.medium);
            break;
        }
        case ScenarioKind::lambda_store_tripod_retrieve:
        case ScenarioKind::tripod_store_lambda_retrieve: {
            const auto& p = std::get<StoreRetrieveParams>(spec.params);
            out << "grid.nx = " << p.nx << "\ngrid.ny = " << p.ny << "\n"
                << "grid.lx = " << fmt(p.lx) << "\ngrid.ly = " << fmt(p.ly) << "\n"
                << "probe.sigma = " << fmt(p.probe_sigma) << "\n"
                << "probe.amplitude = " << fmt(p.probe_amplitude) << "\n"
                << "beams.amplitude = " << fmt(p.amplitude) << "\n"
                << "beams.a = " << fmt(p.a) << "\n"
                << "beams.b = " << fmt(p.b) << "\n"
                << "beams.sigma_s = " << fmt(p.sigma_s) << "\n"
                << "beams.sigma_r = " << fmt(p.sigma_r) << "\n";
            if (spec.kind == ScenarioKind::lambda_store_tripod_retrieve)
                out << "beams.sigma_r3 = " << fmt(p.sigma_r3) << "\n";
            detail::print_medium(out, p.medium);
            break;
        }
        case ScenarioKind::loss_curve: {
            const auto& p = std::get<LossCurveParams>(spec.params);
            out << "probe.sigma = " << fmt(p.sigma_p) << "\n"
                << "loss.b_min = " << fmt(p.b_min) << "\n"
                << "loss.b_max = " << fmt(p.b_max) << "\n"
                << "loss.count = " << p.count << "\n"
                << "beams.sigma_r = " << fmt(p.sigma_r) << "\n"
                << "beams.sigma_r3 = " << fmt(p.sigma_r3) << "\n"
                << "loss.with_fields = " << (p.with_fields ? "true" : "false") << "\n"
                << "grid.nx = " << p.nx << "\ngrid.ny = " << p.ny << "\n"
                << "grid.lx = " << fmt(p.lx) << "\ngrid.ly = " << fmt(p.ly) << "\n"
                << "beams.a = " << fmt(p.a) << "\n"
                << "beams.sigma_s = " << fmt(p.sigma_s) << "\n";
            detail::print_medium(out, p.medium);
            break;
        }
    }
    return out.str();
}

/// The canonical (all-defaults) config for a scenario kind.
inline std::string default_config_text(ScenarioKind kind) {
    ScenarioSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ScenarioKind::vacuum_diffraction: spec.params = VacuumDiffractionParams{}; break;
        case ScenarioKind::eit_transit: spec.params = EitTransitParams{}; break;
        case ScenarioKind::lambda_store_tripod_retrieve:
        case ScenarioKind::tripod_store_lambda_retrieve:
            spec.params = StoreRetrieveParams{};
            break;
        case ScenarioKind::loss_curve: spec.params = LossCurveParams{}; break;
    }
    return print_config(spec);
}

} // namespace tsl
