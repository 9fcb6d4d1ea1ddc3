// catlift: expansion-protocol cat interferometry toolkit.
//
//   catlift <table|trajectory|wigner|force|gie|robustness>
//           --config <path> [--out <path>] [--format csv|json] [--seed <u64>]

#include "catlift/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"exponential-expansion cat interferometry toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    std::uint64_t seed = 0;
    bool seed_set = false;

    const char* names[] = {"table", "trajectory", "wigner", "force", "gie", "robustness"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", out_path, "output path (default: stdout or config's run.out)");
        sub->add_option("--format", format, "csv or json (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = catlift::io::load_config(config_path);
        if (!format.empty()) {
            if (format != "csv" && format != "json")
                throw catlift::io::ConfigError("--format must be csv or json");
            cfg.run.format = format;
        }
        if (seed_set) cfg.run.seed = seed;
        if (!out_path.empty()) cfg.run.out = out_path;

        const std::string command = app.get_subcommands().front()->get_name();
        catlift::io::Table table = catlift::io::run_command(command, cfg);
        std::string payload = catlift::io::render(table, cfg.run.format);

        if (cfg.run.out.empty())
            std::fwrite(payload.data(), 1, payload.size(), stdout);
        else
            catlift::io::write_atomic(cfg.run.out, payload);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "catlift: " << e.what() << "\n";
        return 1;
    }
}
