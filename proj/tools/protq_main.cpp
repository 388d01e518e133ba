// Copyright 2026 The protq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "protq/harness.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::string seeds;
    std::optional<int> threads;
};

void add_common(CLI::App *cmd, CommonFlags &flags, bool with_config = true) {
    if (with_config) cmd->add_option("--config", flags.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--seeds", flags.seeds, "seed list, e.g. 1,2,5-8");
    cmd->add_option("--threads", flags.threads, "worker threads (overrides THREADS)");
}

protq::ExperimentConfig resolve(protq::ExperimentKind kind, const CommonFlags &flags) {
    protq::ExperimentConfig c;
    if (!flags.config.empty()) {
        c = protq::load_config(flags.config);
        if (c.kind != kind) {
            throw protq::ConfigError("kind", std::string("config is ") + protq::kind_name(c.kind) +
                                                 " but the subcommand runs " + protq::kind_name(kind));
        }
    } else {
        c.kind = kind;
    }
    if (!flags.seeds.empty()) c.seeds = protq::parse_seed_list(flags.seeds);
    if (!flags.out.empty()) c.output = flags.out;
    return c;
}

int finish(const protq::RunOutput &r, const std::filesystem::path &dir) {
    protq::write_outputs(r, dir);
    std::fprintf(stderr, "wrote %s (config %s, %zu failure%s)\n", dir.string().c_str(), r.config_hash.c_str(),
                 r.failures, r.failures == 1 ? "" : "s");
    return r.failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"protq: protected-qubit lattice simulator and experiment runner"};
    app.require_subcommand(1);

    struct Sub {
        const char *name;
        protq::ExperimentKind kind;
        const char *help;
    };
    const std::vector<Sub> subs = {
        {"init-sweep", protq::ExperimentKind::InitSweep, "adiabatic initialization error vs ramp time"},
        {"manip-sweep", protq::ExperimentKind::ManipSweep, "logical manipulation and noise deviations"},
        {"splitting-scan", protq::ExperimentKind::SplittingScan, "ground doublet splitting vs static field"},
        {"spectrum-flow", protq::ExperimentKind::SpectrumFlow, "instantaneous spectrum along the ramp"},
        {"classify", protq::ExperimentKind::Classify, "logical class of Pauli strings and scaling predictions"},
    };
    std::vector<CommonFlags> flags(subs.size());
    std::vector<CLI::App *> cmds;
    std::vector<std::string> strings;
    int classify_n = 0;
    for (std::size_t k = 0; k < subs.size(); ++k) {
        auto *cmd = app.add_subcommand(subs[k].name, subs[k].help);
        add_common(cmd, flags[k]);
        if (subs[k].kind == protq::ExperimentKind::Classify) {
            cmd->add_option("--string", strings, "Pauli string such as \"Y11 Y12\" (repeatable)");
            cmd->add_option("--n", classify_n, "lattice side");
        }
        cmds.push_back(cmd);
    }
    CommonFlags fig_flags;
    auto *figs = app.add_subcommand("reproduce-figures", "canned configs for every figure panel");
    add_common(figs, fig_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (!cmds[k]->parsed()) continue;
            protq::ExperimentConfig c = resolve(subs[k].kind, flags[k]);
            if (subs[k].kind == protq::ExperimentKind::Classify) {
                if (!strings.empty()) c.strings = strings;
                if (classify_n > 0) c.n = classify_n;
            }
            const int threads = protq::resolve_threads(flags[k].threads);
            const protq::RunOutput r = protq::run_config(c, threads);
            if (subs[k].kind == protq::ExperimentKind::Classify) {
                nlohmann::json brief{{"verdicts", r.summary["verdicts"]}, {"predictions", r.summary["predictions"]}};
                std::cout << brief.dump(2) << "\n";
            }
            return finish(r, c.output);
        }
        if (figs->parsed()) {
            const int threads = protq::resolve_threads(fig_flags.threads);
            const std::filesystem::path root = fig_flags.out.empty() ? "figures" : fig_flags.out;
            int status = 0;
            for (auto fig : protq::figure_configs()) {
                if (!fig_flags.seeds.empty() && fig.config.noise.stochastic()) {
                    fig.config.seeds = protq::parse_seed_list(fig_flags.seeds);
                }
                std::fprintf(stderr, "%s: %s\n", fig.name.c_str(), fig.columns.c_str());
                const protq::RunOutput r = protq::run_config(fig.config, threads);
                status = std::max(status, finish(r, root / fig.name));
            }
            return status;
        }
    } catch (const protq::ConfigError &e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
