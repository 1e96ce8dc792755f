// SPDX-License-Identifier: Apache-2.0

#include "grkin/equilibria.hpp"

#include "grkin/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace grkin {

namespace {

std::size_t ipow(std::size_t base, int exp)
{
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

void check_layout(int dim, double v_max, int nodes_per_dim)
{
    if (dim < 1 || dim > 3)
        throw ConfigError("velocity dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (!(v_max > 0.0) || !std::isfinite(v_max))
        throw ConfigError("v_max must be positive and finite");
    if (nodes_per_dim < 4 || nodes_per_dim % 2 != 0)
        throw ConfigError("nodes_per_dim must be even and >= 4, got " + std::to_string(nodes_per_dim));
}

// Fills nodes and weights of the tensor-product trapezoid layout.
void fill_layout(Equilibrium &eq)
{
    const auto v1 = velocity_nodes_1d(eq.v_max, eq.nodes_per_dim);
    const auto n = static_cast<std::size_t>(eq.nodes_per_dim);
    const double dv = 2.0 * eq.v_max / static_cast<double>(n - 1);
    std::vector<double> w1(n, dv);
    w1.front() = w1.back() = 0.5 * dv;

    const std::size_t total = ipow(n, eq.dim);
    eq.nodes.assign(total * eq.dim, 0.0);
    eq.weights.assign(total, 1.0);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (int a = eq.dim - 1; a >= 0; --a) {
            const std::size_t j = rem % n;
            rem /= n;
            eq.nodes[k * eq.dim + a] = v1[j];
            eq.weights[k] *= w1[j];
        }
    }
}

void finish_moments(Equilibrium &eq, bool renormalize)
{
    if (renormalize) {
        double mass = 0.0;
        for (std::size_t k = 0; k < eq.size(); ++k)
            mass += eq.weights[k] * eq.values[k];
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw ConfigError("equilibrium has non-positive or non-finite mass");
        for (auto &x : eq.values)
            x /= mass;
    }
    double m2 = 0.0;
    for (std::size_t k = 0; k < eq.size(); ++k) {
        double v2 = 0.0;
        for (int a = 0; a < eq.dim; ++a)
            v2 += eq.node(k, a) * eq.node(k, a);
        m2 += eq.weights[k] * v2 * eq.values[k];
    }
    eq.second_moment = m2;
    eq.temperature_like = m2 / eq.dim;
}

} // namespace

std::vector<double> velocity_nodes_1d(double v_max, int nodes_per_dim)
{
    // Odd integer numerators keep v_j = -v_{n-1-j} bit-exact.
    std::vector<double> v(static_cast<std::size_t>(nodes_per_dim));
    const double denom = nodes_per_dim - 1;
    for (int j = 0; j < nodes_per_dim; ++j)
        v[j] = v_max * (2.0 * j - denom) / denom;
    return v;
}

Equilibrium make_gaussian(double temperature, int dim, double v_max, int nodes_per_dim)
{
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw ConfigError("temperature must be positive and finite");
    check_layout(dim, v_max, nodes_per_dim);

    Equilibrium eq;
    eq.dim = dim;
    eq.nodes_per_dim = nodes_per_dim;
    eq.v_max = v_max;
    fill_layout(eq);
    eq.values.resize(eq.size());
    for (std::size_t k = 0; k < eq.size(); ++k) {
        double v2 = 0.0;
        for (int a = 0; a < dim; ++a)
            v2 += eq.node(k, a) * eq.node(k, a);
        eq.values[k] = std::exp(-0.5 * v2 / temperature);
    }
    finish_moments(eq, true);
    return eq;
}

Equilibrium make_tabulated(int dim, double v_max, int nodes_per_dim, std::vector<double> values, bool renormalize)
{
    check_layout(dim, v_max, nodes_per_dim);
    Equilibrium eq;
    eq.dim = dim;
    eq.nodes_per_dim = nodes_per_dim;
    eq.v_max = v_max;
    fill_layout(eq);
    if (values.size() != eq.size())
        throw ConfigError("tabulated equilibrium has " + std::to_string(values.size()) + " values, layout needs " +
                          std::to_string(eq.size()));
    eq.values = std::move(values);
    finish_moments(eq, renormalize);
    return eq;
}

bool EquilibriumReport::all_passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

const EquilibriumCheck &EquilibriumReport::at(std::string_view name) const
{
    for (const auto &c : checks)
        if (c.name == name)
            return c;
    throw std::out_of_range("no equilibrium check named " + std::string(name));
}

EquilibriumReport validate_equilibrium(const Equilibrium &chi)
{
    constexpr double tol = 1e-12;
    EquilibriumReport report;

    double min_value = std::numeric_limits<double>::infinity();
    double mass = 0.0;
    std::vector<double> mean(static_cast<std::size_t>(chi.dim), 0.0);
    double m2 = 0.0;
    for (std::size_t k = 0; k < chi.size(); ++k) {
        min_value = std::min(min_value, chi.values[k]);
        const double wk = chi.weights[k] * chi.values[k];
        mass += wk;
        double v2 = 0.0;
        for (int a = 0; a < chi.dim; ++a) {
            mean[a] += wk * chi.node(k, a);
            v2 += chi.node(k, a) * chi.node(k, a);
        }
        m2 += wk * v2;
    }
    double max_mean = 0.0;
    for (double m : mean)
        max_mean = std::max(max_mean, std::abs(m));

    report.checks.push_back({"positivity", min_value > 0.0, min_value});
    report.checks.push_back({"normalization", std::abs(mass - 1.0) <= tol, std::abs(mass - 1.0)});
    report.checks.push_back({"zero_mean", max_mean <= tol, max_mean});
    report.checks.push_back({"second_moment", std::isfinite(m2) && m2 > 0.0, m2});
    return report;
}

double diffusion_coefficient(const Equilibrium &chi, double sigma)
{
    if (!(sigma > 0.0))
        throw ConfigError("diffusion coefficient requires sigma > 0");
    return chi.temperature_like / sigma;
}

std::string equilibrium_to_text(const Equilibrium &chi)
{
    std::ostringstream out;
    out << "# grkin equilibrium v1\n";
    out << "dim " << chi.dim << "\n";
    out << "nodes_per_dim " << chi.nodes_per_dim << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", chi.v_max);
    out << "v_max " << buf << "\n";
    out << "count " << chi.size() << "\n";
    for (std::size_t k = 0; k < chi.size(); ++k) {
        for (int a = 0; a < chi.dim; ++a) {
            std::snprintf(buf, sizeof buf, "%.17g ", chi.node(k, a));
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g ", chi.weights[k]);
        out << buf;
        std::snprintf(buf, sizeof buf, "%.17g\n", chi.values[k]);
        out << buf;
    }
    return out.str();
}

Equilibrium equilibrium_from_text(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::getline(in, line);
    if (line.rfind("# grkin equilibrium", 0) != 0)
        throw ConfigError("not an equilibrium snapshot");

    auto read_field = [&in](const char *key) {
        std::string name;
        double value = 0.0;
        if (!(in >> name >> value) || name != key)
            throw ConfigError(std::string("equilibrium snapshot: expected field ") + key);
        return value;
    };
    const int dim = static_cast<int>(read_field("dim"));
    const int n = static_cast<int>(read_field("nodes_per_dim"));
    const double v_max = read_field("v_max");
    const auto count = static_cast<std::size_t>(read_field("count"));

    std::vector<double> values(count);
    std::vector<double> node(static_cast<std::size_t>(dim));
    double weight = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        for (auto &c : node)
            in >> c;
        if (!(in >> weight >> values[k]))
            throw ConfigError("equilibrium snapshot truncated at row " + std::to_string(k));
    }
    return make_tabulated(dim, v_max, n, std::move(values), false);
}

} // namespace grkin
