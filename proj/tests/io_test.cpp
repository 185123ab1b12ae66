// Copyright 2026 The clockqubo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clockqubo/io.hpp"

#include <filesystem>
#include <random>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace clockqubo;
using clockqubo::testing::rabi_case;
using clockqubo::testing::random_bits;
using clockqubo::testing::random_qubo;

namespace {

QuboInstance scalar_instance() {
    RMatrix q(1, 1);
    q << 0.5;
    RVector l(1);
    l << -1;
    return detail::binarize_quadratic(q, l, 0.0, FixedPointScheme(1, 0));
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("clockqubo_io_" + name);
}

} // namespace

TEST(QuboText, scalar_file_contents) {
    const std::string text = qubo_to_text(scalar_instance());
    EXPECT_EQ(text, "# bits_per_variable 1\np qubo 1 1 0 1.5\n0 0 -2\n");
}

TEST(QuboText, round_trip_preserves_energies_exactly) {
    std::mt19937_64 rng(20);
    for (std::size_t n : {1, 5, 17, 40}) {
        auto inst = random_qubo(n, rng);
        inst.offset = 0.1 * static_cast<double>(n) / 3.0;
        const auto text = qubo_from_text(qubo_to_text(inst));
        const auto json = qubo_from_json(nlohmann::json::parse(to_json(inst).dump()));
        EXPECT_EQ(text.linear, inst.linear);
        EXPECT_EQ(text.quadratic, inst.quadratic);
        EXPECT_EQ(json.quadratic, inst.quadratic);
        for (int t = 0; t < 100; ++t) {
            const Bits b = random_bits(n, rng);
            EXPECT_EQ(qubo_energy(text, b), qubo_energy(inst, b));
            EXPECT_EQ(qubo_energy(json, b), qubo_energy(inst, b));
        }
    }
}

TEST(IsingText, round_trip) {
    std::mt19937_64 rng(21);
    auto is = to_ising(random_qubo(9, rng));
    is.scale = 0.25;
    const auto back = ising_from_text(ising_to_text(is));
    EXPECT_EQ(back.h, is.h);
    EXPECT_EQ(back.J, is.J);
    EXPECT_EQ(back.offset, is.offset);
    const auto j = ising_from_json(to_json(is));
    EXPECT_EQ(j.J, is.J);
    EXPECT_EQ(j.scale, 0.25);
}

TEST(QuboText, parse_errors) {
    EXPECT_THROW(qubo_from_text(""), InvalidInput);
    EXPECT_THROW(qubo_from_text("p ising 1 0 0 0\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 1 0 0\n0 0 x\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 0 1 0\n1 0 1\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 0 1 0\n0 2 1\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 2 0 0\n0 0 1\n0 0 1\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 1 0 0\n"), InvalidInput);
    EXPECT_THROW(qubo_from_text("p qubo 2 0 0 0\n0 1\n"), InvalidInput);
}

TEST(QuboText, comments_and_blank_lines_are_skipped) {
    const auto inst = qubo_from_text("# hello\n\np qubo 3 1 1 -0.5\n  # mid\n2 2 4\n0 1 -1.25\n");
    EXPECT_EQ(inst.num_bits, 3U);
    EXPECT_EQ(inst.offset, -0.5);
    EXPECT_EQ(inst.linear.at(2), 4.0);
    EXPECT_EQ(inst.quadratic.at({0, 1}), -1.25);
}

TEST(QuboJson, rejects_wrong_format) {
    EXPECT_THROW(qubo_from_json(nlohmann::json{{"format", "ising"}}), InvalidInput);
    EXPECT_THROW(ising_from_json(nlohmann::json{{"format", "qubo"}}), InvalidInput);
}

TEST(Export, rabi_instance_declares_all_bits) {
    const auto rc = rabi_case(6);
    const auto inst = encode_qubo(rc.system, FixedPointScheme(2, 0));
    const auto path = temp_path("rabi.qubo");
    export_instance(inst, InstanceFormat::qubo_text, path);
    const auto back = import_qubo(path);
    EXPECT_EQ(back.num_bits, 48U);
    EXPECT_EQ(instance_digest(back), instance_digest(inst));

    const auto ipath = temp_path("rabi.json");
    export_instance(inst, InstanceFormat::ising_json, ipath);
    const auto is = import_ising(ipath);
    EXPECT_EQ(is.num_spins, 48U);
    std::filesystem::remove(path);
    std::filesystem::remove(ipath);
}

TEST(Export, format_names) {
    EXPECT_EQ(parse_instance_format("qubo"), InstanceFormat::qubo_text);
    EXPECT_EQ(parse_instance_format("ising-json"), InstanceFormat::ising_json);
    EXPECT_THROW(parse_instance_format("bqm"), InvalidInput);
    IsingInstance is;
    EXPECT_THROW(export_instance(is, InstanceFormat::qubo_text, temp_path("x")), InvalidInput);
}

TEST(Digest, ignores_comments_and_tracks_content) {
    auto inst = scalar_instance();
    const auto d = instance_digest(inst);
    inst.bits_per_variable = 3;
    EXPECT_EQ(instance_digest(inst), d);
    inst.offset += 1e-15;
    EXPECT_NE(instance_digest(inst), d);
}

TEST(Io, missing_file_raises_io_error) {
    EXPECT_THROW(import_qubo("/nonexistent/dir/file.qubo"), IoError);
    EXPECT_THROW(export_instance(scalar_instance(), InstanceFormat::qubo_text, "/nonexistent/dir/file.qubo"), IoError);
}

TEST(Io, format_double_round_trips) {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}
