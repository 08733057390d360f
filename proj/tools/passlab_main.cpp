// SPDX-License-Identifier: Apache-2.0
// Command line front end. Exit codes: 0 success, 1 usage, 2 bad config or
// input files, 3 runtime failure, 4 violated physical/numerical property.
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "passlab/commands.hpp"
#include "passlab/core.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pinching-antenna beam training workbench"};
    app.require_subcommand(1);

    passlab::CommandArgs args;
    std::function<int(const passlab::CommandArgs&)> run;

    const auto add_common = [&args](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "scenario config JSON");
        sub->add_option("--out", args.out_dir, "output directory")->required();
        sub->add_option("--seed", args.seed, "master seed override");
    };

    struct SubSpec {
        const char* name;
        const char* help;
        int (*fn)(const passlab::CommandArgs&);
        bool has_mode;
    };
    const SubSpec subs[] = {
        {"simulate", "one scene: probe sweep, selection, rates", passlab::cmd_simulate, false},
        {"dataset", "labelled training windows as JSONL", passlab::cmd_dataset, false},
        {"train", "fit the selector on OUT/dataset.jsonl", passlab::cmd_train, false},
        {"eval", "score a selector on the test split", passlab::cmd_eval, true},
        {"outage", "outage curves against the fixed antenna", passlab::cmd_outage, false},
        {"sweep", "sum-rate sweeps across one axis", passlab::cmd_sweep, false},
    };
    for (const SubSpec& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub);
        if (s.has_mode)
            sub->add_option("--mode", args.mode, "oracle | trained | random")
                ->default_val("oracle");
        sub->callback([&run, &s]() { run = s.fn; });
    }

    try {
        app.parse(argc, argv);
        for (const SubSpec& s : subs)
            if (app.got_subcommand(s.name)) {
                args.has_seed = app.get_subcommand(s.name)->count("--seed") > 0;
                break;
            }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return run(args);
    } catch (const passlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const passlab::PropertyViolation& e) {
        std::fprintf(stderr, "property violation: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
