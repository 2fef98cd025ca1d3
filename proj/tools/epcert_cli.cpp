#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "epcert/channels.hpp"
#include "epcert/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"endpoint certification protocol simulator"};
    app.require_subcommand(1);

    std::string scenario_path, sweep_path, out_path;
    std::optional<std::uint64_t> seed_override, trials_override;

    auto* run = app.add_subcommand("run", "run a scenario file and report metrics");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--trials", trials_override, "override the trial count");
    run->add_option("--out", out_path, "write the report here instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "evaluate a sweep file to CSV");
    analyze->add_option("sweep", sweep_path, "sweep JSON file")->required();
    analyze->add_option("--out", out_path, "write the CSV here instead of stdout");

    auto* presets = app.add_subcommand("presets", "list channel presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto config = epcert::scenario::ScenarioConfig::parse(slurp(scenario_path));
            if (seed_override) config.seed = *seed_override;
            if (trials_override) config.trials = *trials_override;
            auto report = epcert::scenario::run_scenario(config);
            std::ostringstream os;
            report.render(os);
            emit(os.str(), out_path);
        } else if (analyze->parsed()) {
            emit(epcert::scenario::run_analysis(slurp(sweep_path)), out_path);
        } else if (presets->parsed()) {
            std::ostringstream os;
            os << "name W e spoofable eavesdroppable cost\n";
            for (const auto& [name, p] : epcert::channels::presets())
                os << name << ' ' << p.per_message_time << ' ' << p.delivery_delay << ' '
                   << (p.spoofable ? 1 : 0) << ' ' << (p.eavesdroppable ? 1 : 0) << ' '
                   << p.cost_per_message << '\n';
            emit(os.str(), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
