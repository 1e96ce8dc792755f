// SPDX-License-Identifier: Apache-2.0

#include "grkin/snapshot.hpp"

#include "grkin/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace grkin {

namespace {

constexpr char state_magic[8] = {'G', 'R', 'K', 'S', 'T', 'A', 'T', 'E'};
constexpr char macro_magic[8] = {'G', 'R', 'K', 'M', 'A', 'C', 'R', 'O'};

template <typename U> void put_le(std::ostream &out, U value)
{
    unsigned char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char *>(bytes), sizeof(U));
}

template <typename U> U get_le(std::istream &in)
{
    unsigned char bytes[sizeof(U)];
    if (!in.read(reinterpret_cast<char *>(bytes), sizeof(U)))
        throw ConfigError("snapshot file is truncated");
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

void put_f64(std::ostream &out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream &in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void write_header(std::ostream &out, const char *magic, const SnapshotHeader &h)
{
    out.write(magic, 8);
    put_le(out, h.version);
    put_le(out, h.dim);
    put_le(out, h.nx);
    put_le(out, h.nv_per_dim);
    put_f64(out, h.v_max);
    put_f64(out, h.t);
    put_f64(out, h.sigma);
    put_f64(out, h.epsilon);
}

SnapshotHeader read_header(std::istream &in, const char *magic)
{
    char m[8];
    if (!in.read(m, 8) || std::memcmp(m, magic, 8) != 0)
        throw ConfigError("not a grkin snapshot of the expected kind");
    SnapshotHeader h;
    h.version = get_le<std::uint32_t>(in);
    if (h.version != 1)
        throw ConfigError("unsupported snapshot version");
    h.dim = get_le<std::uint32_t>(in);
    h.nx = get_le<std::uint32_t>(in);
    h.nv_per_dim = get_le<std::uint32_t>(in);
    h.v_max = get_f64(in);
    h.t = get_f64(in);
    h.sigma = get_f64(in);
    h.epsilon = get_f64(in);
    if (h.dim < 1 || h.dim > 3 || h.nx < 1)
        throw ConfigError("snapshot header is inconsistent");
    return h;
}

void write_array(std::ostream &out, const std::vector<double> &a)
{
    for (double v : a)
        put_f64(out, v);
}

std::vector<double> read_array(std::istream &in, std::size_t n)
{
    std::vector<double> a(n);
    for (auto &v : a)
        v = get_f64(in);
    return a;
}

std::size_t power(std::uint32_t base, std::uint32_t exp)
{
    std::size_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i)
        r *= base;
    return r;
}

void write_sidecar(const std::string &path, const char *kind, const SnapshotHeader &h)
{
    std::ofstream txt(path + ".txt");
    if (!txt)
        throw ConfigError("cannot write snapshot sidecar: " + path + ".txt");
    txt.precision(17);
    txt << "kind = " << kind << "\nversion = " << h.version << "\ndim = " << h.dim << "\nnx = " << h.nx
        << "\nnv_per_dim = " << h.nv_per_dim << "\nv_max = " << h.v_max << "\nt = " << h.t << "\nsigma = " << h.sigma
        << "\nepsilon = " << h.epsilon << "\nbyte_order = little-endian\n";
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write snapshot: " + path);
    return out;
}

std::ifstream open_in(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read snapshot: " + path);
    return in;
}

} // namespace

void write_state_snapshot(const std::string &path, const StatePair &F, const PhaseGrid &grid, double sigma,
                          double epsilon)
{
    if (F.f1.size() != grid.size() || F.f2.size() != grid.size())
        throw ConfigError("state shape does not match the phase grid");
    SnapshotHeader h;
    h.dim = static_cast<std::uint32_t>(grid.dim());
    h.nx = static_cast<std::uint32_t>(grid.nx());
    h.nv_per_dim = static_cast<std::uint32_t>(grid.chi1().nodes_per_dim);
    h.v_max = grid.chi1().v_max;
    h.t = F.time;
    h.sigma = sigma;
    h.epsilon = epsilon;
    auto out = open_out(path);
    write_header(out, state_magic, h);
    write_array(out, F.f1);
    write_array(out, F.f2);
    if (!out)
        throw ConfigError("failed writing snapshot: " + path);
    write_sidecar(path, "state", h);
}

StateSnapshot read_state_snapshot(const std::string &path)
{
    auto in = open_in(path);
    StateSnapshot s;
    s.header = read_header(in, state_magic);
    const std::size_t n = power(s.header.nx, s.header.dim) * power(s.header.nv_per_dim, s.header.dim);
    s.state.f1 = read_array(in, n);
    s.state.f2 = read_array(in, n);
    s.state.time = s.header.t;
    return s;
}

void write_rd_snapshot(const std::string &path, const RDState &state, int dim, int nx, double sigma, double epsilon)
{
    SnapshotHeader h;
    h.dim = static_cast<std::uint32_t>(dim);
    h.nx = static_cast<std::uint32_t>(nx);
    h.t = state.t;
    h.sigma = sigma;
    h.epsilon = epsilon;
    const std::size_t n = power(h.nx, h.dim);
    if (state.rho1.size() != n || state.rho2.size() != n)
        throw ConfigError("reaction-diffusion state does not match the spatial grid");
    auto out = open_out(path);
    write_header(out, macro_magic, h);
    write_array(out, state.rho1);
    write_array(out, state.rho2);
    if (!out)
        throw ConfigError("failed writing snapshot: " + path);
    write_sidecar(path, "macro", h);
}

RDSnapshot read_rd_snapshot(const std::string &path)
{
    auto in = open_in(path);
    RDSnapshot s;
    s.header = read_header(in, macro_magic);
    const std::size_t n = power(s.header.nx, s.header.dim);
    s.state.rho1 = read_array(in, n);
    s.state.rho2 = read_array(in, n);
    s.state.t = s.header.t;
    return s;
}

} // namespace grkin
