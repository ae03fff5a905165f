#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hkflow/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hkflow: entropy methods for unbalanced reaction-drift-diffusion flows"};
    app.footer("exit codes: 0 ok, 1 malformed config, 2 validation failure,\n"
               "            3 falsified inequality, 4 solver abort");

    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    int jobs = 1;

    app.add_option("command", command, "one of validate|simulate|inequality|counterexample|sweep|decay")
        ->required()
        ->check(CLI::IsMember({"validate", "simulate", "inequality", "counterexample", "sweep", "decay"}));
    app.add_option("--config", config_path, "path to the JSON run configuration")->required();
    app.add_option("--set", overrides, "override a config entry, e.g. --set flow.t_end=0.5")
        ->take_all();
    app.add_option("--jobs", jobs, "worker pool size for sweep runs")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    return hk::runner::run(config_path, command, overrides, jobs);
}
