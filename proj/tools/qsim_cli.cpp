// Command-line runner for the scenario suite.
//
//   qsim run <scenario> [--trials N] [--seed S] [--tau T]
//            [--time-grid t1,t2,...] [--alpha RE,IM] [--beta RE,IM]
//            [--format json|csv] [--out PATH]
//   qsim list
//
// Exit codes: 0 all checks pass, 1 check failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsim/scenarios.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

qsim::cplx parse_complex(const std::string& text) {
    const std::vector<double> parts = parse_double_list(text);
    if (parts.empty() || parts.size() > 2)
        throw std::invalid_argument("expected RE or RE,IM: " + text);
    return qsim::cplx{parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional quantum measurement scenarios"};
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list", "List scenario names");

    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and report its checks");
    std::string scenario;
    run_cmd->add_option("scenario", scenario, "Scenario name")->required();
    std::uint64_t seed = 42;
    run_cmd->add_option("--seed", seed, "Random seed");
    std::size_t trials = 0;
    run_cmd->add_option("--trials", trials, "Trial count (0 = scenario default)");
    double tau = 1.0;
    run_cmd->add_option("--tau", tau, "Decoherence time constant");
    std::string time_grid;
    run_cmd->add_option("--time-grid", time_grid, "Comma-separated times");
    std::string alpha_text, beta_text;
    run_cmd->add_option("--alpha", alpha_text, "Amplitude alpha as RE,IM");
    run_cmd->add_option("--beta", beta_text, "Amplitude beta as RE,IM");
    std::string format = "json";
    run_cmd->add_option("--format", format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    std::string out_path;
    run_cmd->add_option("--out", out_path, "Write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message / help text
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    if (list_cmd->parsed()) {
        for (const std::string& name : qsim::list_scenarios()) std::cout << name << "\n";
        return 0;
    }

    qsim::ScenarioParams params;
    params.seed = seed;
    params.trials = trials;
    params.tau = tau;
    try {
        if (!time_grid.empty()) params.times = parse_double_list(time_grid);
        if (!alpha_text.empty() || !beta_text.empty()) {
            if (alpha_text.empty() || beta_text.empty())
                throw std::invalid_argument("--alpha and --beta must be given together");
            params.alpha = parse_complex(alpha_text);
            params.beta = parse_complex(beta_text);
        }
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        const qsim::ScenarioReport report = qsim::run_scenario(scenario, params);
        const std::string rendered = format == "csv" ? report.to_csv() : report.to_json();
        if (out_path.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "usage error: cannot open " << out_path << "\n";
                return 2;
            }
            out << rendered;
        }
        return report.pass() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
