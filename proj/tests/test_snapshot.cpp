// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grkin/error.hpp"
#include "grkin/snapshot.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>

using namespace grkin;
using namespace grkin::test;

namespace fs = std::filesystem;

TEST_CASE("state snapshot round trip")
{
    const auto path = (fs::temp_directory_path() / "grkin_state.grk").string();
    auto g = gaussian_grid(2, 8, 6, 5.0);
    auto F = make_random_bounded_state(g, 0.5, 2.0, 4);
    F.time = 1.25;
    write_state_snapshot(path, F, g, 0.5, 0.1);
    auto snap = read_state_snapshot(path);
    CHECK(snap.header.version == 1);
    CHECK(snap.header.dim == 2);
    CHECK(snap.header.nx == 8);
    CHECK(snap.header.nv_per_dim == 6);
    CHECK(snap.header.v_max == 5.0);
    CHECK(snap.header.t == 1.25);
    CHECK(snap.header.sigma == 0.5);
    CHECK(snap.header.epsilon == 0.1);
    CHECK(snap.state.f1 == F.f1);
    CHECK(snap.state.f2 == F.f2);
    CHECK(snap.state.time == 1.25);

    // Fixed little-endian layout: magic, four u32, four f64, then both arrays.
    CHECK(fs::file_size(path) == 8 + 16 + 32 + 2 * 8 * g.size());
    std::ifstream raw(path, std::ios::binary);
    char magic[8];
    raw.read(magic, 8);
    CHECK(std::string(magic, 8) == "GRKSTATE");
    CHECK(fs::exists(path + ".txt"));

    CHECK_THROWS_AS((void)read_rd_snapshot(path), ConfigError);
    fs::resize_file(path, 40);
    CHECK_THROWS_AS((void)read_state_snapshot(path), ConfigError);
    fs::remove(path);
    fs::remove(path + ".txt");
    CHECK_THROWS_AS((void)read_state_snapshot(path), ConfigError);
}

TEST_CASE("macroscopic snapshot round trip")
{
    const auto path = (fs::temp_directory_path() / "grkin_macro.grm").string();
    RDState s{{1.0, 2.0, 3.0, 4.0}, {0.5, 0.25, 0.125, 1.0 / 3.0}, 0.75};
    write_rd_snapshot(path, s, 1, 4, 1.0, 0.05);
    auto snap = read_rd_snapshot(path);
    CHECK(snap.header.nv_per_dim == 0);
    CHECK(snap.state.rho1 == s.rho1);
    CHECK(snap.state.rho2 == s.rho2);
    CHECK(snap.state.t == 0.75);
    CHECK_THROWS_AS(write_rd_snapshot(path, s, 1, 5, 1.0, 0.05), ConfigError);
    fs::remove(path);
    fs::remove(path + ".txt");
}
