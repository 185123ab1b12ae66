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

#include "clockqubo/solvers.hpp"

#include <random>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace clockqubo;
using clockqubo::testing::bits_of_mask;
using clockqubo::testing::brute_force_minimum;
using clockqubo::testing::rabi_case;
using clockqubo::testing::random_bits;
using clockqubo::testing::random_gates;
using clockqubo::testing::random_qubo;
using clockqubo::testing::random_state;

namespace {

QuboInstance scalar_instance() {
    QuboInstance q;
    q.num_bits = 1;
    q.linear[0] = -2;
    q.offset = 1.5;
    return q;
}

SaSchedule quick_schedule(std::size_t restarts, std::uint64_t seed) {
    SaSchedule s;
    s.sweeps = 500;
    s.restarts = restarts;
    s.base_seed = seed;
    s.threads = 1;
    return s;
}

} // namespace

TEST(Exhaustive, scalar) {
    const auto set = solve_exhaustive(scalar_instance());
    EXPECT_EQ(set.best().bits, Bits{1});
    EXPECT_EQ(set.best().energy, -0.5);
    EXPECT_EQ(set.best().solver_id, "exhaustive");
}

TEST(Exhaustive, zero_instance_returns_all_zeros) {
    QuboInstance q;
    q.num_bits = 6;
    const auto set = solve_exhaustive(q);
    EXPECT_EQ(set.best().bits, Bits(6, 0));
    EXPECT_EQ(set.best().energy, 0.0);
}

TEST(Exhaustive, rabi_two_times) {
    const auto rc = rabi_case(2);
    const FixedPointScheme scheme(2, 0);
    const auto inst = encode_qubo(rc.system, scheme);
    const auto best = solve_exhaustive(inst).best();
    EXPECT_NEAR(best.energy, -0.5, 1e-12);
    const auto traj = decode_solution(best.bits, scheme, rc.system, rc.grid);
    EXPECT_EQ(traj.states[0](0), complex(1.0));
    EXPECT_EQ(traj.states[0](1), complex(0.0));
    EXPECT_EQ(traj.states[1](0), complex(0.0));
    EXPECT_EQ(traj.states[1](1), complex(1.0));
}

TEST(Exhaustive, size_limit) {
    QuboInstance q;
    q.num_bits = 31;
    EXPECT_THROW(solve_exhaustive(q), SizeLimit);
}

TEST(Exhaustive, agrees_with_brute_force_and_keeps_k_smallest) {
    std::mt19937_64 rng(40);
    for (std::size_t n = 1; n <= 14; ++n) {
        const auto inst = random_qubo(n, rng);
        const auto [bits, energy] = brute_force_minimum(inst);
        const auto best = solve_exhaustive(inst).best();
        EXPECT_EQ(best.bits, bits) << n;
        EXPECT_NEAR(best.energy, energy, 1e-12);

        std::vector<double> all;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) all.push_back(qubo_energy(inst, bits_of_mask(m, n)));
        std::sort(all.begin(), all.end());
        const std::size_t k = std::min<std::size_t>(5, all.size());
        const auto set = solve_exhaustive(inst, {k});
        ASSERT_EQ(set.samples.size(), k);
        for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(set.samples[i].energy, all[i], 1e-12);
    }
}

TEST(Exhaustive, ties_pick_lexicographically_smallest) {
    // Three assignments of bits 1 and 2 tie at −1, and bit 0 is free.
    QuboInstance q;
    q.num_bits = 3;
    q.linear[1] = -1;
    q.linear[2] = -1;
    q.quadratic[{1, 2}] = 1;
    const auto best = solve_exhaustive(q).best();
    EXPECT_EQ(best.bits, (Bits{0, 0, 1}));
}

TEST(SimulatedAnnealing, matches_oracle_on_small_clock_instances) {
    std::mt19937_64 rng(41);
    int agree = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        const std::size_t N = 2 + static_cast<std::size_t>(t % 4);
        const int R = N <= 3 ? 2 : 1;
        const auto sys = assemble_system(random_gates(N - 1, 1, rng), random_state(1, rng));
        const auto inst = encode_qubo(sys, FixedPointScheme(R, 0));
        ASSERT_LE(inst.num_bits, 20U);
        const double oracle = solve_exhaustive(inst).best().energy;
        const auto sa = solve_sa(inst, quick_schedule(20, static_cast<std::uint64_t>(t)));
        if (std::abs(sa.best().energy - oracle) <= 1e-6 * (1 + std::abs(oracle))) ++agree;
        EXPECT_GE(sa.best().energy, oracle - 1e-9);
    }
    EXPECT_GE(agree, trials * 95 / 100);
}

TEST(SimulatedAnnealing, cold_start_at_ground_state_stays_there) {
    const auto rc = rabi_case(6);
    const FixedPointScheme scheme(2, 0);
    const auto inst = encode_qubo(rc.system, scheme);
    const Bits ground = encode_trajectory(rc.exact, scheme);
    SaSchedule s = quick_schedule(3, 7);
    s.beta_initial = s.beta_final = 1e9;
    const auto set = solve_sa(inst, s, &ground);
    for (const auto &smp : set.samples) {
        EXPECT_EQ(smp.bits, ground);
        EXPECT_NEAR(smp.energy, -0.5, 1e-12);
    }
}

TEST(SimulatedAnnealing, deterministic_and_thread_independent) {
    std::mt19937_64 rng(42);
    const auto inst = random_qubo(30, rng);
    SaSchedule s = quick_schedule(16, 99);
    const auto a = solve_sa(inst, s);
    const auto b = solve_sa(inst, s);
    s.threads = 4;
    const auto c = solve_sa(inst, s);
    ASSERT_EQ(a.samples.size(), 16U);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].bits, b.samples[i].bits);
        EXPECT_EQ(a.samples[i].bits, c.samples[i].bits);
        EXPECT_EQ(a.samples[i].energy, c.samples[i].energy);
        EXPECT_EQ(a.samples[i].seed, c.samples[i].seed);
    }
    EXPECT_EQ(a.instance_digest, instance_digest(inst));
}

TEST(SimulatedAnnealing, reported_energies_are_exact_and_sorted) {
    std::mt19937_64 rng(43);
    const auto inst = random_qubo(25, rng);
    const auto set = solve_sa(inst, quick_schedule(12, 3));
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        EXPECT_EQ(set.samples[i].energy, qubo_energy(inst, set.samples[i].bits));
        EXPECT_EQ(set.samples[i].solver_id, "sa");
        if (i) {
            EXPECT_LE(set.samples[i - 1].energy, set.samples[i].energy);
        }
    }
}

TEST(SimulatedAnnealing, never_beats_continuous_bound) {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 5; ++t) {
        const auto sys = assemble_system(random_gates(4, 2, rng), random_state(2, rng));
        const auto inst = encode_qubo(sys, FixedPointScheme(2, 0));
        for (const auto &s : solve_sa(inst, quick_schedule(8, static_cast<std::uint64_t>(t))).samples)
            EXPECT_GE(s.energy, -0.5 - 1e-9);
    }
}

TEST(SimulatedAnnealing, schedule_validation) {
    QuboInstance q = scalar_instance();
    SaSchedule s;
    s.sweeps = 0;
    EXPECT_THROW(solve_sa(q, s), InvalidInput);
    s = SaSchedule{};
    s.restarts = 0;
    EXPECT_THROW(solve_sa(q, s), InvalidInput);
    s = SaSchedule{};
    s.beta_initial = 2;
    s.beta_final = 1;
    EXPECT_THROW(solve_sa(q, s), InvalidInput);
    s = SaSchedule{};
    const Bits wrong(3, 0);
    EXPECT_THROW(solve_sa(q, s, &wrong), ShapeError);
}

TEST(SimulatedAnnealing, geometric_ladder) {
    SaSchedule s;
    s.sweeps = 3;
    s.beta_initial = 1;
    s.beta_final = 4;
    EXPECT_DOUBLE_EQ(s.beta_at(0), 1.0);
    EXPECT_DOUBLE_EQ(s.beta_at(1), 2.0);
    EXPECT_DOUBLE_EQ(s.beta_at(2), 4.0);
}

TEST(Greedy, descends_monotonically_to_local_minimum) {
    std::mt19937_64 rng(45);
    for (int t = 0; t < 20; ++t) {
        const auto inst = random_qubo(20, rng);
        std::vector<double> trace;
        const auto s = solve_greedy(inst, random_bits(20, rng), 1000, &trace);
        for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LT(trace[i], trace[i - 1]);
        EXPECT_NEAR(trace.back(), s.energy, 1e-9);
        for (std::size_t k = 0; k < 20; ++k) {
            Bits flipped = s.bits;
            flipped[k] ^= 1U;
            EXPECT_GE(qubo_energy(inst, flipped), s.energy - 1e-9);
        }
    }
}

TEST(Greedy, pass_budget_and_fixed_points) {
    const auto q = scalar_instance();
    std::vector<double> trace;
    EXPECT_EQ(solve_greedy(q, Bits{0}, 0, &trace).bits, Bits{0});
    EXPECT_EQ(trace.size(), 1U);
    const auto s = solve_greedy(q, Bits{0}, 5, &trace);
    EXPECT_EQ(s.bits, Bits{1});
    EXPECT_EQ(trace, (std::vector<double>{1.5, -0.5}));
    EXPECT_THROW(solve_greedy(q, Bits{}, 1), ShapeError);
}

TEST(Samples, csv_and_bitstrings) {
    EXPECT_EQ(bits_to_string(Bits{1, 0, 1}), "101");
    EXPECT_EQ(bits_from_string("0110"), (Bits{0, 1, 1, 0}));
    EXPECT_THROW(bits_from_string("012"), InvalidInput);
    SampleSet set;
    set.samples.push_back(Sample{Bits{1}, -0.5, "sa", 3});
    EXPECT_EQ(sampleset_to_csv(set), "energy,bits,solver_id,seed\n-0.5,1,sa,3\n");
    EXPECT_THROW(SampleSet{}.best(), InvalidInput);
}
