// SPDX-License-Identifier: Apache-2.0

#include "grkin/grkin.h"

#include "grkin/error.hpp"
#include "grkin/experiments.hpp"
#include "grkin/parallel.hpp"
#include "grkin/snapshot.hpp"

#include <cstring>
#include <memory>
#include <string>

struct grkin_config {
    grkin::ExperimentConfig cfg;
};

struct grkin_result {
    grkin::ExperimentOutcome outcome;
};

struct grkin_simulation {
    grkin::ExperimentConfig cfg;
    grkin::PhaseGrid grid;
    grkin::StatePair state;
    grkin::EquilibriumState eq;
};

namespace {

thread_local std::string last_error;

grkin_status fail(grkin_status code, const char *msg)
{
    last_error = msg;
    return code;
}

template <typename F> grkin_status guarded(F &&body)
{
    try {
        body();
        last_error.clear();
        return GRKIN_OK;
    } catch (const grkin::Error &e) {
        return fail(static_cast<grkin_status>(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(GRKIN_ERR_NUMERICAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(GRKIN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(GRKIN_ERR_INTERNAL, "unknown error");
    }
}

grkin_status copy_out(const std::string &value, char *buf, std::size_t buf_len, std::size_t *needed)
{
    if (needed)
        *needed = value.size() + 1;
    if (buf == nullptr || buf_len < value.size() + 1) {
        if (buf != nullptr && buf_len > 0)
            buf[0] = '\0';
        return fail(GRKIN_ERR_BUFFER, "output buffer too small");
    }
    std::memcpy(buf, value.c_str(), value.size() + 1);
    return GRKIN_OK;
}

void require(const void *p, const char *what)
{
    if (p == nullptr)
        throw grkin::ConfigError(std::string(what) + " must not be null");
}

} // namespace

extern "C" {

const char *grkin_version(void) { return grkin::library_version(); }

const char *grkin_last_error(void) { return last_error.c_str(); }

grkin_status grkin_set_threads(int threads)
{
    return guarded([&] {
        if (threads < 0)
            throw grkin::ConfigError("thread count must be non-negative");
        grkin::set_thread_count(threads);
    });
}

grkin_status grkin_config_create(grkin_config **out)
{
    return guarded([&] {
        require(out, "output handle");
        *out = new grkin_config{};
    });
}

grkin_status grkin_config_load(const char *path, grkin_config **out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "output handle");
        *out = nullptr;
        auto cfg = std::make_unique<grkin_config>(grkin_config{grkin::ExperimentConfig::load(path)});
        *out = cfg.release();
    });
}

grkin_status grkin_config_parse(const char *ini_text, grkin_config **out)
{
    return guarded([&] {
        require(ini_text, "configuration text");
        require(out, "output handle");
        *out = nullptr;
        auto cfg = std::make_unique<grkin_config>(grkin_config{grkin::ExperimentConfig::from_ini(ini_text)});
        *out = cfg.release();
    });
}

void grkin_config_destroy(grkin_config *config) { delete config; }

grkin_status grkin_config_set(grkin_config *config, const char *key, const char *value)
{
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->cfg.set(key, value);
    });
}

grkin_status grkin_config_get(const grkin_config *config, const char *key, char *buf, size_t buf_len,
                              size_t *needed)
{
    std::string value;
    const auto st = guarded([&] {
        require(config, "config");
        require(key, "key");
        value = config->cfg.get(key);
    });
    return st == GRKIN_OK ? copy_out(value, buf, buf_len, needed) : st;
}

grkin_status grkin_config_to_ini(const grkin_config *config, char *buf, size_t buf_len, size_t *needed)
{
    std::string value;
    const auto st = guarded([&] {
        require(config, "config");
        value = config->cfg.to_ini();
    });
    return st == GRKIN_OK ? copy_out(value, buf, buf_len, needed) : st;
}

grkin_status grkin_config_validate(const grkin_config *config)
{
    return guarded([&] {
        require(config, "config");
        config->cfg.validate();
    });
}

grkin_status grkin_config_output_dir(const grkin_config *config, char *buf, size_t buf_len, size_t *needed)
{
    std::string value;
    const auto st = guarded([&] {
        require(config, "config");
        value = grkin::resolve_output_dir(config->cfg);
    });
    return st == GRKIN_OK ? copy_out(value, buf, buf_len, needed) : st;
}

grkin_status grkin_run(const grkin_config *config, const char *kind, grkin_result **out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "output handle");
        *out = nullptr;
        grkin::ExperimentConfig cfg = config->cfg;
        if (kind != nullptr)
            cfg.kind = grkin::parse_experiment_kind(kind);
        auto result = std::make_unique<grkin_result>(grkin_result{grkin::run_experiment(cfg)});
        *out = result.release();
    });
}

int grkin_result_passed(const grkin_result *result) { return result != nullptr && result->outcome.passed ? 1 : 0; }

const char *grkin_result_summary(const grkin_result *result)
{
    return result != nullptr ? result->outcome.summary.c_str() : "";
}

size_t grkin_result_file_count(const grkin_result *result)
{
    return result != nullptr ? result->outcome.files.size() : 0;
}

const char *grkin_result_file(const grkin_result *result, size_t index)
{
    if (result == nullptr || index >= result->outcome.files.size())
        return nullptr;
    return result->outcome.files[index].c_str();
}

void grkin_result_destroy(grkin_result *result) { delete result; }

grkin_status grkin_simulation_create(const grkin_config *config, grkin_simulation **out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "output handle");
        *out = nullptr;
        const auto &cfg = config->cfg;
        cfg.validate();
        grkin::set_thread_count(cfg.threads);
        auto grid = cfg.make_grid();
        auto state = grkin::initial_state(cfg, grid);
        const auto eq = grkin::equilibrium_state(state, grid);
        *out = new grkin_simulation{cfg, std::move(grid), std::move(state), eq};
    });
}

grkin_status grkin_simulation_advance(grkin_simulation *sim, double t_target)
{
    return guarded([&] {
        require(sim, "simulation");
        if (!(t_target >= sim->state.time))
            throw grkin::ConfigError("target time precedes the current time");
        auto sc = sim->cfg.solver();
        sc.t_final = t_target - sim->state.time;
        sc.cadence = 1 << 30;
        auto summary = grkin::run(sim->state, sim->cfg.model(), sc, sim->grid);
        sim->state = std::move(summary.final_state);
        sim->state.time = t_target;
    });
}

double grkin_simulation_time(const grkin_simulation *sim) { return sim != nullptr ? sim->state.time : 0.0; }

double grkin_simulation_mass_difference(const grkin_simulation *sim)
{
    return sim != nullptr ? grkin::conserved_mass_difference(sim->state, sim->grid) : 0.0;
}

grkin_status grkin_simulation_record(const grkin_simulation *sim, grkin_record *out)
{
    return guarded([&] {
        require(sim, "simulation");
        require(out, "record");
        const auto r = grkin::compute_record(sim->state, sim->eq, sim->grid, sim->cfg.delta);
        *out = grkin_record{r.t,        r.H,     r.D1,    r.D2,    r.D3,    r.Gamma, r.dist2,   r.micro2,
                            r.R2,       r.massdiff, r.r1min, r.r1max, r.r2min, r.r2max, r.coupling};
    });
}

grkin_status grkin_simulation_write_snapshot(const grkin_simulation *sim, const char *path)
{
    return guarded([&] {
        require(sim, "simulation");
        require(path, "path");
        grkin::write_state_snapshot(path, sim->state, sim->grid, sim->cfg.sigma, sim->cfg.epsilon);
    });
}

void grkin_simulation_destroy(grkin_simulation *sim) { delete sim; }

} // extern "C"
