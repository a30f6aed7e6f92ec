#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gspi/error.hpp"
#include "gspi/experiments.hpp"
#include "gspi/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

gspi::ExperimentConfig config_from_arg(const std::string& arg)
{
    // "preset:<name>" loads a bundled scenario
    if (arg.rfind("preset:", 0) == 0)
        return gspi::parse_config(gspi::preset_config(arg.substr(7)));
    return gspi::load_config(arg);
}

}  // namespace

int main(int argc, char** argv)
{
    struct Command {
        std::function<void(const gspi::ExperimentConfig&)> run;
        const char* help;
    };
    const std::map<std::string, Command> commands{
        {"generate-graph", {gspi::cmd_generate_graph, "write graph.json for the configured family"}},
        {"make-dataset", {gspi::cmd_make_dataset, "simulate labeled snapshots"}},
        {"train", {gspi::cmd_train, "fit intervals and classifiers on a dataset"}},
        {"detect", {gspi::cmd_detect, "classify one snapshot, write verdict.json"}},
        {"evaluate", {gspi::cmd_evaluate, "k-fold AIDP of every method, write aidp.csv"}},
        {"micro", {gspi::cmd_micro, "quarantine Monte Carlo, write micro.csv"}},
        {"bounds", {gspi::cmd_bounds, "noise-robustness bounds for a snapshot"}},
    };

    CLI::App app{"Epidemic vs random-failure detection on weighted networks"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name, cmd.help);
        sub->add_option("--config", config_path, "config JSON, or preset:<name>")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        auto config = config_from_arg(config_path);
        if (!out_dir.empty())
            config.out_dir = out_dir;
        for (const auto* sub : app.get_subcommands())
            commands.at(sub->get_name()).run(config);
        return kOk;
    } catch (const gspi::ValidationError& e) {
        std::fprintf(stderr, "gsp-infect: invalid input: %s\n", e.what());
        return kValidation;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "gsp-infect: invalid JSON: %s\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gsp-infect: error: %s\n", e.what());
        return kRuntime;
    }
}
