// rrbeam: Monte Carlo driver for the reduced-rank beamforming library.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrbeam/complexity.hpp"
#include "rrbeam/csv.hpp"
#include "rrbeam/experiment.hpp"
#include "rrbeam/scenario.hpp"

namespace {

std::vector<rrbeam::Algorithm> parse_algorithm_list(const std::string& list) {
    std::vector<rrbeam::Algorithm> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(rrbeam::parse_algorithm(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-rank robust adaptive beamforming experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a Monte Carlo SINR experiment and write a CSV");
    std::string scenario_arg;
    std::string out_path;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<int> rank;
    std::string algorithms;
    bool gram_schmidt = false;
    unsigned threads = 0;
    run->add_option("--scenario", scenario_arg, "Scenario file or bundled scenario name")->required();
    run->add_option("--out", out_path, "Output CSV path")->required();
    run->add_option("--runs", runs, "Monte Carlo runs per algorithm")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Base seed");
    run->add_option("--algorithms", algorithms, "Comma-separated algorithm identifiers");
    run->add_flag("--gram-schmidt", gram_schmidt, "Orthonormalize S_D in the RCB-MJIO algorithms");
    run->add_option("--rank", rank, "Rank D of the reduction")->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "Worker threads (0: one per core)");

    auto* complexity = app.add_subcommand("complexity", "Print complex multiplications per iteration");
    std::string algorithm_id;
    std::uint64_t m = 0;
    std::uint64_t d = 0;
    complexity->add_option("--algorithm", algorithm_id, "Algorithm identifier")->required();
    complexity->add_option("-M", m, "Number of sensors")->required();
    complexity->add_option("-D", d, "Rank")->required();

    auto* scenarios = app.add_subcommand("scenarios", "Bundled scenarios");
    scenarios->require_subcommand(1);
    auto* list = scenarios->add_subcommand("list", "List bundled scenarios");
    auto* show = scenarios->add_subcommand("show", "Print a bundled scenario");
    std::string show_name;
    show->add_option("name", show_name, "Scenario name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rrbeam::ScenarioConfig config = rrbeam::load_scenario(scenario_arg);
            if (runs) config.runs = *runs;
            if (seed) config.seed = *seed;
            if (rank) config.rank = *rank;
            if (gram_schmidt) config.gram_schmidt = true;
            if (!algorithms.empty()) config.algorithms = parse_algorithm_list(algorithms);
            rrbeam::validate(config);

            const auto traces = rrbeam::run_monte_carlo(config, {.threads = threads});
            rrbeam::emit_csv(traces, out_path);
            for (const auto& t : traces) {
                std::cerr << rrbeam::to_string(t.algorithm) << ": final mean SINR "
                          << t.per_snapshot_sinr_db.back() << " dB over " << t.runs << " runs";
                if (t.failures) std::cerr << " (" << t.failures << " failed)";
                std::cerr << '\n';
            }
        } else if (complexity->parsed()) {
            std::cout << rrbeam::complexity_model(rrbeam::parse_algorithm(algorithm_id), m, d) << '\n';
        } else if (list->parsed()) {
            for (const auto& s : rrbeam::bundled_scenarios()) {
                std::cout << s.name << "\t" << s.description << '\n';
            }
        } else if (show->parsed()) {
            for (const auto& s : rrbeam::bundled_scenarios()) {
                if (s.name == show_name) {
                    std::cout << s.text;
                    return 0;
                }
            }
            std::cerr << "rrbeam: no bundled scenario named '" << show_name << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "rrbeam: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
