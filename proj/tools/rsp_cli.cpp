//---------------------------------------------------------------------------//
//! \file rsp_cli.cpp
//! Command line front end: simulate, reconstruct, predict, analyze, pipeline.
//---------------------------------------------------------------------------//
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rsp/commands.hpp"

namespace
{
struct FlagSet
{
    std::optional<std::string> config_file;
    std::map<std::string, std::string> values;
};

void add_flags(CLI::App& cmd, FlagSet& flags)
{
    cmd.add_option("--config", flags.config_file,
                   "key=value config file (flags override it)");
    for (auto const& key : rsp::config_keys())
    {
        cmd.add_option_function<std::string>(
            "--" + key,
            [&flags, key](std::string const& v) { flags.values[key] = v; },
            "override '" + key + "'");
    }
}

rsp::RunConfig resolve(FlagSet const& flags)
{
    rsp::RunConfig config = flags.config_file
                                ? rsp::load_config(*flags.config_file)
                                : rsp::RunConfig{};
    for (auto const& [k, v] : flags.values)
    {
        rsp::apply_setting(config, k, v);
    }
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Remote qubit preparation by quadrature measurement: "
                 "simulation, tomography and analysis"};
    app.require_subcommand(1);

    FlagSet flags;
    std::optional<std::string> dataset_arg;

    auto* simulate = app.add_subcommand("simulate", "generate a dataset");
    auto* reconstruct = app.add_subcommand(
        "reconstruct", "postselect and reconstruct Bob's states per bin");
    reconstruct->add_option("dataset", dataset_arg,
                            "dataset CSV (default: <out-dir>/dataset.csv)");
    auto* predict = app.add_subcommand("predict", "tabulate model curves");
    auto* analyze = app.add_subcommand(
        "analyze", "compare reconstruction with the model, export plot data");
    auto* pipeline = app.add_subcommand("pipeline", "run all four stages");
    for (auto* cmd : {simulate, reconstruct, predict, analyze, pipeline})
    {
        add_flags(*cmd, flags);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(rsp::ExitCode::usage);
    }

    try
    {
        auto const config = resolve(flags);
        if (simulate->parsed())
        {
            std::cout << rsp::cmd_simulate(config).string() << '\n';
        }
        else if (reconstruct->parsed())
        {
            auto const path = dataset_arg
                                  ? std::filesystem::path(*dataset_arg)
                                  : config.out_dir / rsp::files::dataset;
            auto const result = rsp::cmd_reconstruct(path, config);
            std::cout << "reconstructed " << result["bins"].size()
                      << " bins, skipped " << result["skipped"].size() << '\n';
        }
        else if (predict->parsed())
        {
            std::cout << rsp::cmd_predict(config).string() << '\n';
        }
        else if (analyze->parsed())
        {
            rsp::cmd_analyze(config);
            std::cout << (config.out_dir / rsp::files::report).string() << '\n';
        }
        else if (pipeline->parsed())
        {
            rsp::cmd_pipeline(config);
            std::cout << (config.out_dir / rsp::files::report).string() << '\n';
        }
    }
    catch (std::exception const& e)
    {
        auto const code = rsp::classify_current_exception();
        std::cerr << "rsp: " << e.what() << '\n';
        return static_cast<int>(code);
    }
    return 0;
}
