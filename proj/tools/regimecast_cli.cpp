// Command-line front end. Each subcommand runs one pipeline stage against a
// JSON config; `pipeline` runs them all in order.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 upstream service error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "regimecast/pipeline.hpp"
#include "regimecast/stock_client.hpp"

namespace {

struct Options {
    std::string config_path;
    bool force = false;
};

int run(const Options& opt, const std::string& subcommand) {
    regimecast::RunConfig config;
    try {
        config = regimecast::RunConfig::from_json_file(opt.config_path);
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        if (subcommand == "pipeline") {
            regimecast::run_pipeline(config, opt.force, std::cout);
        } else {
            regimecast::run_stage(regimecast::parse_stage(subcommand), config, opt.force,
                                  std::cout);
        }
        return 0;
    } catch (const regimecast::UpstreamError& e) {
        std::cerr << "upstream error: " << e.what() << "\n";
        return 3;
    } catch (const regimecast::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topic-regime stock forecasting pipeline"};
    app.require_subcommand(1);

    Options opt;
    std::vector<std::string> names;
    for (auto stage : regimecast::all_stages()) names.push_back(regimecast::stage_name(stage));
    names.push_back("pipeline");

    for (const auto& name : names) {
        auto* sub = app.add_subcommand(
            name, name == "pipeline" ? "run every stage in order" : "run the " + name + " stage");
        sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
        sub->add_flag("--force", opt.force, "rerun even when artifacts are up to date");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    return run(opt, app.get_subcommands().front()->get_name());
}
