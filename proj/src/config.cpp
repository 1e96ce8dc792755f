// SPDX-License-Identifier: Apache-2.0

#include "grkin/config.hpp"

#include "grkin/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace grkin {

ExperimentKind parse_experiment_kind(const std::string &name)
{
    if (name == "decay")
        return ExperimentKind::decay;
    if (name == "eps_sweep" || name == "eps-sweep")
        return ExperimentKind::eps_sweep;
    if (name == "oracle_check" || name == "oracle-check")
        return ExperimentKind::oracle_check;
    if (name == "inequality_battery" || name == "inequality-battery" || name == "inequalities")
        return ExperimentKind::inequality_battery;
    throw ConfigError("unknown experiment kind: " + name);
}

std::string experiment_kind_name(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::decay:
        return "decay";
    case ExperimentKind::eps_sweep:
        return "eps_sweep";
    case ExperimentKind::oracle_check:
        return "oracle_check";
    case ExperimentKind::inequality_battery:
        return "inequality_battery";
    }
    return "decay";
}

InitialCondition ExperimentConfig::default_initial()
{
    InitialCondition ic;
    ic.species1.kind = Profile::Kind::cosine;
    ic.species1.mean = 1.0;
    ic.species1.amplitude = 0.4;
    ic.species2.kind = Profile::Kind::cosine;
    ic.species2.mean = 0.8;
    ic.species2.amplitude = 0.25;
    ic.species2.mode = {2, 0, 0};
    return ic;
}

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v)
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text)
{
    const std::string s = trim(text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception &) {
        pos = std::string::npos;
    }
    if (pos != s.size() || s.empty())
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
}

long long parse_integer(const std::string &key, const std::string &text)
{
    const std::string s = trim(text);
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception &) {
        pos = std::string::npos;
    }
    if (pos != s.size() || s.empty())
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return v;
}

int parse_int(const std::string &key, const std::string &text)
{
    const long long v = parse_integer(key, text);
    if (v < -2147483647LL || v > 2147483647LL)
        throw ConfigError(key + ": integer out of range");
    return static_cast<int>(v);
}

bool parse_bool(const std::string &key, const std::string &text)
{
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string &key, const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    return out;
}

std::string fmt_list(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += fmt_double(v[i]);
    }
    return s;
}

std::array<int, 3> parse_mode(const std::string &key, const std::string &text)
{
    std::array<int, 3> m{0, 0, 0};
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i == 3)
            throw ConfigError(key + ": at most three wave-vector components");
        m[i++] = parse_int(key, item);
    }
    if (i == 0)
        throw ConfigError(key + ": empty wave vector");
    return m;
}

std::string fmt_mode(const std::array<int, 3> &m)
{
    return std::to_string(m[0]) + "," + std::to_string(m[1]) + "," + std::to_string(m[2]);
}

struct Entry {
    std::string key;
    std::function<std::string(const ExperimentConfig &)> get;
    std::function<void(ExperimentConfig &, const std::string &, const std::string &)> set;
};

Entry num(std::string key, double ExperimentConfig::*field)
{
    return {std::move(key), [field](const ExperimentConfig &c) { return fmt_double(c.*field); },
            [field](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*field = parse_double(k, v); }};
}

Entry integer(std::string key, int ExperimentConfig::*field)
{
    return {std::move(key), [field](const ExperimentConfig &c) { return std::to_string(c.*field); },
            [field](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*field = parse_int(k, v); }};
}

Entry list(std::string key, std::vector<double> ExperimentConfig::*field)
{
    return {std::move(key), [field](const ExperimentConfig &c) { return fmt_list(c.*field); },
            [field](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*field = parse_list(k, v); }};
}

template <typename Get, typename Set> Entry custom(std::string key, Get get, Set set)
{
    return {std::move(key), get, set};
}

void add_profile(std::vector<Entry> &e, int species)
{
    const std::string n = std::to_string(species + 1);
    auto prof = [species](ExperimentConfig &c) -> Profile & {
        return species == 0 ? c.initial.species1 : c.initial.species2;
    };
    auto cprof = [species](const ExperimentConfig &c) -> const Profile & {
        return species == 0 ? c.initial.species1 : c.initial.species2;
    };
    e.push_back(custom(
        "initial.kind" + n, [cprof](const ExperimentConfig &c) { return profile_kind_name(cprof(c).kind); },
        [prof](ExperimentConfig &c, const std::string &, const std::string &v) {
            prof(c).kind = parse_profile_kind(trim(v));
        }));
    e.push_back(custom(
        "initial.mean" + n, [cprof](const ExperimentConfig &c) { return fmt_double(cprof(c).mean); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) { prof(c).mean = parse_double(k, v); }));
    e.push_back(custom(
        "initial.amplitude" + n, [cprof](const ExperimentConfig &c) { return fmt_double(cprof(c).amplitude); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) {
            prof(c).amplitude = parse_double(k, v);
        }));
    e.push_back(custom(
        "initial.mode" + n, [cprof](const ExperimentConfig &c) { return fmt_mode(cprof(c).mode); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) { prof(c).mode = parse_mode(k, v); }));
    e.push_back(custom(
        "initial.phase" + n, [cprof](const ExperimentConfig &c) { return fmt_double(cprof(c).phase); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) { prof(c).phase = parse_double(k, v); }));
    e.push_back(custom(
        "initial.width" + n, [cprof](const ExperimentConfig &c) { return fmt_double(cprof(c).width); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) { prof(c).width = parse_double(k, v); }));
    e.push_back(custom(
        "initial.random_modes" + n, [cprof](const ExperimentConfig &c) { return std::to_string(cprof(c).random_modes); },
        [prof](ExperimentConfig &c, const std::string &k, const std::string &v) {
            prof(c).random_modes = parse_int(k, v);
        }));
}

const std::vector<Entry> &registry()
{
    static const std::vector<Entry> entries = [] {
        using C = ExperimentConfig;
        std::vector<Entry> e;
        e.push_back(num("model.epsilon", &C::epsilon));
        e.push_back(num("model.sigma", &C::sigma));
        e.push_back(integer("model.dim", &C::dim));
        e.push_back(num("model.rho_m", &C::rho_m));
        e.push_back(num("model.rho_M", &C::rho_M));
        e.push_back(num("model.delta", &C::delta));
        e.push_back(integer("grid.nx", &C::nx));
        e.push_back(integer("grid.nv", &C::nv));
        e.push_back(num("grid.v_max", &C::v_max));
        e.push_back(num("grid.temperature1", &C::temperature1));
        e.push_back(num("grid.temperature2", &C::temperature2));
        e.push_back(custom(
            "grid.chi_file", [](const C &c) { return c.chi_file; },
            [](C &c, const std::string &, const std::string &v) { c.chi_file = trim(v); }));
        e.push_back(num("solver.dt", &C::dt));
        e.push_back(num("solver.t_final", &C::t_final));
        e.push_back(integer("solver.cadence", &C::cadence));
        e.push_back(custom(
            "solver.splitting", [](const C &c) { return splitting_name(c.splitting); },
            [](C &c, const std::string &, const std::string &v) { c.splitting = parse_splitting(trim(v)); }));
        e.push_back(integer("solver.threads", &C::threads));
        add_profile(e, 0);
        add_profile(e, 1);
        e.push_back(custom(
            "initial.micro_amplitude", [](const C &c) { return fmt_double(c.initial.micro_amplitude); },
            [](C &c, const std::string &k, const std::string &v) { c.initial.micro_amplitude = parse_double(k, v); }));
        e.push_back(custom(
            "initial.unchecked", [](const C &c) { return std::string(c.initial.unchecked ? "true" : "false"); },
            [](C &c, const std::string &k, const std::string &v) { c.initial.unchecked = parse_bool(k, v); }));
        e.push_back(custom(
            "initial.seed", [](const C &c) { return std::to_string(c.seed); },
            [](C &c, const std::string &k, const std::string &v) {
                const long long s = parse_integer(k, v);
                if (s < 0)
                    throw ConfigError(k + ": seed must be non-negative");
                c.seed = static_cast<std::uint64_t>(s);
            }));
        e.push_back(custom(
            "experiment.kind", [](const C &c) { return experiment_kind_name(c.kind); },
            [](C &c, const std::string &, const std::string &v) { c.kind = parse_experiment_kind(trim(v)); }));
        e.push_back(list("experiment.sigmas", &C::sigmas));
        e.push_back(list("experiment.deltas", &C::deltas));
        e.push_back(list("experiment.eps_list", &C::eps_list));
        e.push_back(num("experiment.sweep_dt_scale", &C::sweep_dt_scale));
        e.push_back(num("experiment.rd_dt", &C::rd_dt));
        e.push_back(num("experiment.oracle_horizon", &C::oracle_horizon));
        e.push_back(integer("experiment.oracle_time_nodes", &C::oracle_time_nodes));
        e.push_back(num("experiment.picard_tolerance", &C::picard_tolerance));
        e.push_back(integer("experiment.picard_max_iterations", &C::picard_max_iterations));
        e.push_back(integer("experiment.battery_states", &C::battery_states));
        e.push_back(custom(
            "output.directory", [](const C &c) { return c.output_dir; },
            [](C &c, const std::string &, const std::string &v) { c.output_dir = trim(v); }));
        e.push_back(integer("output.snapshot_every", &C::snapshot_every));
        return e;
    }();
    return entries;
}

const Entry &find_entry(const std::string &key)
{
    for (const auto &e : registry())
        if (e.key == key)
            return e;
    throw ConfigError("unknown configuration key: " + key);
}

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ConfigError(msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ExperimentConfig::set(const std::string &key, const std::string &value) { find_entry(key).set(*this, key, value); }

std::string ExperimentConfig::get(const std::string &key) const { return find_entry(key).get(*this); }

std::vector<std::string> ExperimentConfig::keys()
{
    std::vector<std::string> k;
    for (const auto &e : registry())
        k.push_back(e.key);
    return k;
}

std::string ExperimentConfig::to_ini() const
{
    std::ostringstream out;
    std::string section;
    for (const auto &e : registry()) {
        const auto dot = e.key.find('.');
        const std::string sec = e.key.substr(0, dot);
        if (sec != section) {
            if (!section.empty())
                out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        out << e.key.substr(dot + 1) << " = " << e.get(*this) << '\n';
    }
    return out.str();
}

ExperimentConfig ExperimentConfig::from_ini(const std::string &text)
{
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    ExperimentConfig cfg;
    for (const auto &[section, body] : tree) {
        if (body.empty())
            throw ConfigError("configuration key outside a section: " + section);
        for (const auto &[key, value] : body)
            cfg.set(section + "." + key, value.data());
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read configuration file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_ini(ss.str());
}

void ExperimentConfig::validate() const
{
    model().validate();
    require(dim >= 1 && dim <= 3, "model.dim must be 1, 2 or 3");
    require(finite_positive(rho_m) && rho_m <= 1.0, "model.rho_m must lie in (0, 1]");
    require(std::isfinite(rho_M) && rho_M >= 1.0, "model.rho_M must be at least 1");
    require(finite_positive(delta), "model.delta must be positive");
    require(nx >= 2, "grid.nx must be at least 2");
    require(nv >= 2 && nv % 2 == 0, "grid.nv must be even and at least 2");
    require(finite_positive(v_max), "grid.v_max must be positive");
    require(finite_positive(temperature1) && finite_positive(temperature2), "grid temperatures must be positive");
    require(finite_positive(dt), "solver.dt must be positive");
    require(std::isfinite(t_final) && t_final >= 0.0, "solver.t_final must be non-negative");
    require(cadence >= 1, "solver.cadence must be at least 1");
    require(threads >= 0, "solver.threads must be non-negative");
    for (const auto *p : {&initial.species1, &initial.species2}) {
        require(std::isfinite(p->mean) && std::isfinite(p->amplitude) && std::isfinite(p->phase),
                "initial profile parameters must be finite");
        require(finite_positive(p->width), "initial.width must be positive");
        require(p->random_modes >= 1, "initial.random_modes must be at least 1");
    }
    require(std::isfinite(initial.micro_amplitude), "initial.micro_amplitude must be finite");
    require(!sigmas.empty(), "experiment.sigmas must not be empty");
    for (double s : sigmas)
        require(std::isfinite(s) && s >= 0.0, "experiment.sigmas entries must be non-negative");
    require(!deltas.empty(), "experiment.deltas must not be empty");
    for (double d : deltas)
        require(finite_positive(d), "experiment.deltas entries must be positive");
    require(!eps_list.empty(), "experiment.eps_list must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        require(finite_positive(eps_list[i]), "experiment.eps_list entries must be positive");
        require(i == 0 || eps_list[i] < eps_list[i - 1], "experiment.eps_list must be strictly decreasing");
    }
    require(finite_positive(sweep_dt_scale), "experiment.sweep_dt_scale must be positive");
    require(finite_positive(rd_dt), "experiment.rd_dt must be positive");
    require(finite_positive(oracle_horizon), "experiment.oracle_horizon must be positive");
    require(oracle_time_nodes >= 8, "experiment.oracle_time_nodes must be at least 8");
    require(finite_positive(picard_tolerance), "experiment.picard_tolerance must be positive");
    require(picard_max_iterations >= 1, "experiment.picard_max_iterations must be at least 1");
    require(battery_states >= 1, "experiment.battery_states must be at least 1");
    require(!output_dir.empty(), "output.directory must not be empty");
    require(snapshot_every >= 0, "output.snapshot_every must be non-negative");
}

Equilibrium ExperimentConfig::make_chi(int species) const
{
    if (!chi_file.empty()) {
        std::ifstream in(chi_file);
        if (!in)
            throw ConfigError("cannot read equilibrium file: " + chi_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        return equilibrium_from_text(ss.str());
    }
    return make_gaussian(species == 0 ? temperature1 : temperature2, dim, v_max, nv);
}

PhaseGrid ExperimentConfig::make_grid() const { return PhaseGrid(dim, nx, make_chi(0), make_chi(1)); }

SolverConfig ExperimentConfig::solver() const
{
    SolverConfig s;
    s.dt = dt;
    s.t_final = t_final;
    s.cadence = cadence;
    s.splitting = splitting;
    if (!initial.unchecked)
        s.bounds = Bounds{rho_m, rho_M};
    return s;
}

} // namespace grkin
