// Command-line front end: parse flags and config, run one scenario, write
// the table and its manifest. Exit codes: 0 success, 2 usage/config
// problems, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qbatt/report_io.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw qbatt::ConfigError({"cannot read config file " + path});
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Charging statistics of qubit batteries fed by a cavity mode"};
    std::string scenario_arg;
    std::string config_path;
    std::string out_path;
    std::string format;
    int threads = -1;

    app.add_option("scenario", scenario_arg,
                   "one of: jc-single, sequential, parallel, noise-sweep, speed-compare, "
                   "rwa-compare, coupling-profile")
        ->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_path, "output path; '-' or empty writes to stdout");
    app.add_option("--format", format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads; 0 picks the hardware count")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const qbatt::Scenario scenario = qbatt::parse_scenario(scenario_arg);
        qbatt::RunConfig config;
        if (!config_path.empty()) {
            config = qbatt::parse_config(read_file(config_path));
            if (config.scenario != scenario)
                throw qbatt::ConfigError(
                    {std::string("scenario: config file says \"") +
                     qbatt::scenario_name(config.scenario) +
                     "\" but the command line asks for \"" + scenario_arg + "\""});
        } else {
            config = qbatt::default_config(scenario);
        }
        if (config.scenario == qbatt::Scenario::NoiseSweep && config.sweep_axis.values.empty())
            throw qbatt::ConfigError({"sweep.values: required for scenario noise-sweep"});

        // Precedence: flags, then environment (threads only), then file.
        if (!out_path.empty()) config.out_path = out_path;
        if (!format.empty())
            config.format =
                format == "json" ? qbatt::OutputFormat::Json : qbatt::OutputFormat::Csv;
        if (threads >= 0)
            config.threads = threads;
        else if (const char* env = std::getenv("QBATT_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0) config.threads = static_cast<int>(v);
        }

        const qbatt::ScenarioResult result = qbatt::run_scenario(config);
        qbatt::write_result(config, result);
        return 0;
    } catch (const qbatt::ConfigError& e) {
        std::cerr << "qbatt: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qbatt: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qbatt: " << e.what() << "\n";
        return 1;
    }
}
