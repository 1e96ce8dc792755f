// SPDX-License-Identifier: Apache-2.0

#include "grkin/grkin.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    int threads = -1;
};

int report(grkin_status st)
{
    std::fprintf(stderr, "grkin: %s\n", grkin_last_error());
    return static_cast<int>(st);
}

// Loads the configuration and applies command-line overrides; returns nullptr after
// printing the error.
grkin_config *build_config(const Options &opt, int &exit_code)
{
    grkin_config *cfg = nullptr;
    grkin_status st = opt.config_path.empty() ? grkin_config_create(&cfg) : grkin_config_load(opt.config_path.c_str(), &cfg);
    if (st != GRKIN_OK) {
        exit_code = report(st);
        return nullptr;
    }
    auto apply = [&](const std::string &key, const std::string &value) {
        if (st == GRKIN_OK)
            st = grkin_config_set(cfg, key.c_str(), value.c_str());
    };
    for (const auto &kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "grkin: --set expects key=value, got '%s'\n", kv.c_str());
            grkin_config_destroy(cfg);
            exit_code = GRKIN_ERR_CONFIG;
            return nullptr;
        }
        apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!opt.output_dir.empty())
        apply("output.directory", opt.output_dir);
    if (opt.threads >= 0)
        apply("solver.threads", std::to_string(opt.threads));
    if (st == GRKIN_OK)
        st = grkin_config_validate(cfg);
    if (st != GRKIN_OK) {
        exit_code = report(st);
        grkin_config_destroy(cfg);
        return nullptr;
    }
    return cfg;
}

std::string fetch(grkin_status (*getter)(const grkin_config *, char *, size_t, size_t *), const grkin_config *cfg)
{
    size_t needed = 0;
    getter(cfg, nullptr, 0, &needed);
    std::string s(needed, '\0');
    if (getter(cfg, s.data(), s.size(), &needed) != GRKIN_OK)
        return {};
    s.resize(needed - 1);
    return s;
}

int run_kind(const Options &opt, const char *kind)
{
    int code = 0;
    grkin_config *cfg = build_config(opt, code);
    if (cfg == nullptr)
        return code;
    grkin_result *res = nullptr;
    const grkin_status st = grkin_run(cfg, kind, &res);
    if (st != GRKIN_OK) {
        grkin_config_destroy(cfg);
        return report(st);
    }
    const std::string dir = fetch(grkin_config_output_dir, cfg);
    grkin_config_destroy(cfg);
    std::printf("%s\n", grkin_result_summary(res));
    std::fprintf(stderr, "grkin: wrote %zu files to %s\n", grkin_result_file_count(res), dir.c_str());
    const bool passed = grkin_result_passed(res) != 0;
    grkin_result_destroy(res);
    if (!passed) {
        std::fprintf(stderr, "grkin: %s checks failed\n", kind);
        return GRKIN_ERR_INVARIANT;
    }
    return 0;
}

void add_common(CLI::App *sub, Options &opt)
{
    sub->add_option("-c,--config", opt.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", opt.overrides, "override a key, e.g. --set model.sigma=0")->allow_extra_args(false);
    sub->add_option("-o,--output", opt.output_dir, "output directory (GRKIN_OUTPUT_DIR takes precedence)");
    sub->add_option("-j,--threads", opt.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Kinetic generation-recombination experiments"};
    app.set_version_flag("--version", std::string(grkin_version()));
    app.require_subcommand(1);

    Options opt;
    struct Sub {
        const char *name;
        const char *kind;
        const char *help;
    };
    const Sub subs[] = {
        {"decay", "decay", "entropy decay runs with diagnostics, fits and delta sweep"},
        {"eps-sweep", "eps_sweep", "diffusive-limit sweep against the reaction-diffusion reference"},
        {"oracle-check", "oracle_check", "splitting solver against the Picard mild-solution oracle"},
        {"inequalities", "inequality_battery", "inequality checks on random bounded states"},
    };
    std::vector<std::pair<CLI::App *, const char *>> runners;
    for (const auto &s : subs) {
        auto *sub = app.add_subcommand(s.name, s.help);
        add_common(sub, opt);
        runners.emplace_back(sub, s.kind);
    }
    auto *print = app.add_subcommand("print-config", "print the effective configuration (all defaults) as INI");
    add_common(print, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : GRKIN_ERR_CONFIG;
    }

    if (print->parsed()) {
        int code = 0;
        grkin_config *cfg = build_config(opt, code);
        if (cfg == nullptr)
            return code;
        std::printf("%s", fetch(grkin_config_to_ini, cfg).c_str());
        grkin_config_destroy(cfg);
        return 0;
    }
    for (const auto &[sub, kind] : runners)
        if (sub->parsed())
            return run_kind(opt, kind);
    return GRKIN_ERR_CONFIG;
}
