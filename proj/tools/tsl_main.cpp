// Command-line front end. Subcommands:
//   run <config>              run a scenario config, write its report
//   loss-curve <range> <sp>   print the loss-ratio curve as CSV
//   check                     run the embedded acceptance suite
//   dump-defaults <kind>      print the canonical config for a scenario kind
// Exit codes: 0 success (all assertions pass), 1 assertion failure,
// 2 usage/config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsl/tsl.hpp"

namespace {

struct RangeSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
};

RangeSpec parse_range(const std::string& text) {
    RangeSpec r;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw tsl::ConfigError("range '" + text + "' must be start:stop:count");
    try {
        std::size_t pos = 0;
        r.start = std::stod(text.substr(0, c1), &pos);
        r.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1), &pos);
        r.count = std::stoi(text.substr(c2 + 1), &pos);
    } catch (const std::exception&) {
        throw tsl::ConfigError("range '" + text + "' must be numeric start:stop:count");
    }
    if (r.count < 1) throw tsl::ConfigError("range count must be >= 1");
    if (!(r.stop >= r.start)) throw tsl::ConfigError("range stop must be >= start");
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsl::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_subcommand(const std::string& config_path, const std::string& out_dir,
                   const std::vector<std::string>& overrides, bool quiet) {
    const tsl::ScenarioSpec spec = tsl::parse_config(read_file(config_path), overrides);
    const tsl::ScenarioReport report =
        tsl::run_scenario(spec, out_dir, tsl::print_config(spec));
    if (!quiet) {
        std::cout << "scenario: " << tsl::to_string(report.kind) << "\n";
        for (const auto& [key, value] : report.summary)
            std::cout << "  " << key << " = " << value << "\n";
        for (const tsl::Assertion& a : report.assertions)
            std::cout << (a.pass ? "  PASS " : "  FAIL ") << a.name << " (actual " << a.actual
                      << ", expected " << a.expected << " +- " << a.tolerance << ")\n";
        std::cout << "report written to " << out_dir << "\n";
    }
    return report.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tripod-EIT slow-light simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "tsl-out", range_text, kind_text;
    double sigma_p = 10.0;
    std::vector<std::string> overrides;
    int threads = 1;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run a scenario config file");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory")->envname("TSL_OUT");
    run->add_option("--set", overrides, "override a config key (KEY=VALUE, repeatable)");
    run->add_option("--threads", threads, "worker thread count")->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "suppress the report echo");

    CLI::App* curve = app.add_subcommand("loss-curve", "print the loss curve as CSV");
    curve->add_option("b-range", range_text, "relative amplitude range start:stop:count")
        ->required();
    curve->add_option("sigma_p", sigma_p, "probe width (wavelengths)")->required();

    CLI::App* check = app.add_subcommand("check", "run the embedded acceptance suite");
    CLI::App* dump = app.add_subcommand("dump-defaults", "print a canonical scenario config");
    dump->add_option("kind", kind_text, "scenario kind")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_subcommand(config_path, out_dir, overrides, quiet);
        if (curve->parsed()) {
            const RangeSpec r = parse_range(range_text);
            if (!(sigma_p > 0.0)) throw tsl::ConfigError("sigma_p must be positive");
            std::vector<double> bs(r.count);
            for (int k = 0; k < r.count; ++k)
                bs[k] = (r.count == 1)
                            ? r.start
                            : r.start + (r.stop - r.start) * static_cast<double>(k) /
                                            (r.count - 1);
            tsl::write_loss_curve_csv(std::cout, bs,
                                      tsl::LossQuery{0.0, sigma_p, 20.0, 20.0, 20.0});
            return 0;
        }
        if (check->parsed()) {
            const auto results = tsl::run_acceptance(std::cout);
            for (const tsl::CriterionResult& r : results)
                if (!r.pass) return 1;
            return 0;
        }
        if (dump->parsed()) {
            std::cout << tsl::default_config_text(tsl::scenario_kind_from_string(kind_text));
            return 0;
        }
    } catch (const tsl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tsl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
