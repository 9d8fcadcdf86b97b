#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cavrec/scenario.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    int example = 0;
    std::optional<double> r;
    std::optional<int> kmax;
    std::optional<std::int64_t> seed;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Config file path");
    cmd->add_option("--example", opts.example, "Canned scenario")
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--r", opts.r, "Cost-function probability exponent");
    cmd->add_option("--kmax", opts.kmax, "Maximum conditional measurements");
    cmd->add_option("--seed", opts.seed, "Optimizer RNG seed");
    cmd->add_option("--out", opts.out_dir, "Output directory");
}

cavrec::RunConfig resolve(const CommonOptions& opts) {
    if (!opts.config_path.empty() && opts.example != 0) {
        throw cavrec::ConfigError("--config and --example are exclusive");
    }
    cavrec::RunConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = cavrec::load_config(opts.config_path);
    } else if (opts.example != 0) {
        cfg = cavrec::example_config(opts.example);
    } else {
        throw cavrec::ConfigError("one of --config or --example is required");
    }
    if (opts.r) {
        cfg.optimizer.cost.r = *opts.r;
    }
    if (opts.kmax) {
        cfg.k_max = *opts.kmax;
    }
    if (opts.seed) {
        cfg.optimizer.rng_seed = static_cast<std::uint64_t>(*opts.seed);
    }
    if (opts.out_dir) {
        cfg.output_dir = *opts.out_dir;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulates cavity-field amplitude damping and recovers the state via "
        "optimized atomic conditional measurements"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* dissipate =
        app.add_subcommand("dissipate", "Damp the field and emit Q-grids");
    CLI::App* recover = app.add_subcommand(
        "recover", "Run an optimized conditional-measurement sequence");
    CLI::App* table1 = app.add_subcommand(
        "table1", "Sequence probability vs filtering probability table");
    for (CLI::App* cmd : {dissipate, recover, table1}) {
        add_common(cmd, opts);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const cavrec::RunConfig cfg = resolve(opts);
        if (dissipate->parsed()) {
            cavrec::cmd_dissipate(cfg);
        } else if (recover->parsed()) {
            cavrec::cmd_recover(cfg);
        } else {
            cavrec::cmd_table1(cfg);
        }
    } catch (const cavrec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cavrec::OptimizerFailure& e) {
        std::cerr << "optimizer failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
