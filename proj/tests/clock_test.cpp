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

#include "clockqubo/clock.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace clockqubo;
using clockqubo::testing::rabi_case;
using clockqubo::testing::random_gates;
using clockqubo::testing::random_state;

namespace {

std::vector<UnitaryGate> scalar_identity_gates(std::size_t count) {
    return std::vector<UnitaryGate>(count, UnitaryGate{CMatrix::Identity(1, 1), 0});
}

} // namespace

TEST(ClockOperator, two_times_scalar) {
    RMatrix expected(2, 2);
    expected << 0.5, -0.5, -0.5, 0.5;
    EXPECT_EQ(build_clock_operator(scalar_identity_gates(1)).real(), expected);
    EXPECT_EQ(build_clock_operator(scalar_identity_gates(1)).imag(), RMatrix::Zero(2, 2));
}

TEST(ClockOperator, three_times_scalar_is_tridiagonal) {
    RMatrix expected(3, 3);
    expected << 0.5, -0.5, 0, -0.5, 1, -0.5, 0, -0.5, 0.5;
    EXPECT_EQ(build_clock_operator(scalar_identity_gates(2)).real(), expected);
}

TEST(ClockOperator, rejects_mixed_dimensions) {
    std::vector<UnitaryGate> gates{UnitaryGate{CMatrix::Identity(2, 2), 0}, UnitaryGate{CMatrix::Identity(3, 3), 1}};
    EXPECT_THROW(build_clock_operator(gates), ShapeError);
    EXPECT_THROW(build_clock_operator({}), ShapeError);
}

TEST(ClockOperator, annihilates_history_states) {
    std::mt19937_64 rng(100);
    for (int seed = 0; seed < 100; ++seed) {
        const Eigen::Index L = 1 + seed % 4;
        const std::size_t N = 2 + static_cast<std::size_t>(seed % 7);
        const auto gates = random_gates(N - 1, L, rng);
        const CMatrix c = build_clock_operator(gates);
        EXPECT_LE((c - c.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        const CVector psi = history_state(exact_trajectory(gates, random_state(L, rng)));
        EXPECT_LE((c * psi).norm(), 1e-10) << "seed " << seed;
    }
}

TEST(AssembleSystem, scalar_example) {
    CVector psi0(1);
    psi0 << 1;
    const auto sys = assemble_system(scalar_identity_gates(1), psi0);
    RMatrix a(2, 2);
    a << 1.5, -0.5, -0.5, 0.5;
    EXPECT_EQ(sys.a_complex.real(), a);
    EXPECT_EQ(sys.phi_complex(0), complex(1));
    EXPECT_EQ(sys.phi_complex(1), complex(0));
    EXPECT_TRUE(sys.positive_definite);

    // Hand inverse: A⁻¹ = [[1, 1], [1, 3]], so Ψ = A⁻¹ (1, 0) = (1, 1).
    const RVector x = continuous_solve(sys);
    RVector expected(4);
    expected << 1, 0, 1, 0;
    EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(quadratic_objective(sys, x), -0.5, 1e-15);
}

TEST(AssembleSystem, rejects_bad_initial_state) {
    CVector psi0(1);
    psi0 << 2;
    EXPECT_THROW(assemble_system(scalar_identity_gates(1), psi0), InvalidInput);
    EXPECT_THROW(assemble_system(scalar_identity_gates(1), CVector::Ones(2) / std::sqrt(2.0)), ShapeError);
}

TEST(AssembleSystem, rabi_solution_matches_serial_evolution) {
    const auto rc = rabi_case(6);
    EXPECT_EQ(rc.system.real_size(), 24U);
    const auto traj = trajectory_from_real(rc.system, rc.grid, continuous_solve(rc.system));
    for (std::size_t n = 0; n < 6; ++n) EXPECT_LE((traj.states[n] - rc.exact.states[n]).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Realify, imaginary_unit) {
    CMatrix i(1, 1);
    i << complex(0, 1);
    RMatrix expected(2, 2);
    expected << 0, 1, -1, 0;
    EXPECT_EQ(realify_matrix(i), expected);
    EXPECT_EQ(realify_matrix(i) * realify_matrix(i), -RMatrix::Identity(2, 2));
    CVector v(1);
    v << complex(0, 1);
    EXPECT_EQ(realify_vector(v), (RVector(2) << 0, -1).finished());
}

TEST(Realify, real_matrix_duplicates_blocks) {
    CMatrix m(2, 2);
    m << 1, 2, 3, 4;
    RMatrix expected(4, 4);
    expected << 1, 0, 2, 0, 0, 1, 0, 2, 3, 0, 4, 0, 0, 3, 0, 4;
    EXPECT_EQ(realify_matrix(m), expected);
    CVector v(2);
    v << 1, 0;
    EXPECT_EQ(realify_vector(v), (RVector(4) << 1, 0, 0, 0).finished());
}

TEST(Realify, homomorphism_and_vector_consistency) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const CMatrix a = clockqubo::testing::random_complex(n, n, rng);
        const CMatrix b = clockqubo::testing::random_complex(n, n, rng);
        const CVector v = clockqubo::testing::random_complex(n, 1, rng);
        EXPECT_LE((realify_matrix(a * b) - realify_matrix(a) * realify_matrix(b)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((realify_vector(a * v) - realify_matrix(a) * realify_vector(v)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(complexify_vector(realify_vector(v)), v);
        EXPECT_EQ(complexify_matrix(realify_matrix(a)), a);
        const CMatrix h = clockqubo::testing::random_hermitian(n, rng);
        const RMatrix hr = realify_matrix(h);
        EXPECT_EQ(hr, hr.transpose());
    }
}

TEST(Realify, complexify_rejects_odd_length) {
    EXPECT_THROW(complexify_vector(RVector::Zero(3)), ShapeError);
    EXPECT_THROW(complexify_matrix(RMatrix::Zero(3, 2)), ShapeError);
}

TEST(ClockSystemProperties, random_unitary_instances) {
    std::mt19937_64 rng(77);
    for (int seed = 0; seed < 100; ++seed) {
        const Eigen::Index L = 1 + seed % 4;
        const std::size_t N = 2 + static_cast<std::size_t>((seed / 4) % 7);
        const auto gates = random_gates(N - 1, L, rng);
        const CVector psi0 = random_state(L, rng);
        const auto sys = assemble_system(gates, psi0);
        ASSERT_TRUE(sys.positive_definite) << "seed " << seed;
        EXPECT_LE((sys.a_complex - sys.a_complex.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((sys.a_real - sys.a_real.transpose()).cwiseAbs().maxCoeff(), 1e-12);

        const RVector x = continuous_solve(sys);
        EXPECT_LE((sys.a_real * x - sys.phi_real).norm(), 1e-10 * sys.phi_real.norm());
        EXPECT_NEAR(quadratic_objective(sys, x), -0.5, 1e-9);

        const auto exact = exact_trajectory(gates, psi0);
        const auto decoded = trajectory_from_real(sys, exact.grid, x);
        for (std::size_t n = 0; n < N; ++n) EXPECT_LE((decoded.states[n] - exact.states[n]).cwiseAbs().maxCoeff(), 1e-9);

        const auto ls = least_squares_form(sys);
        EXPECT_LE(least_squares_value(sys, x), 1e-18 * ls.constant);
        EXPECT_NEAR(ls.value(x), 0.0, 1e-12);
    }
}

TEST(QuadraticObjective, values_and_gradient) {
    std::mt19937_64 rng(9);
    const auto gates = random_gates(3, 2, rng);
    const auto sys = assemble_system(gates, random_state(2, rng));
    const auto n = static_cast<Eigen::Index>(sys.real_size());
    EXPECT_EQ(quadratic_objective(sys, RVector::Zero(n)), 0.0);

    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        RVector x(n);
        for (auto &v : x) v = g(rng);
        EXPECT_NEAR(quadratic_objective(sys, x), clockqubo::testing::objective_by_loops(sys.a_real, sys.phi_real, x), 1e-12);
        const RVector grad = objective_gradient(sys, x);
        const double eps = 1e-5;
        for (Eigen::Index i = 0; i < n; ++i) {
            RVector xp = x, xm = x;
            xp(i) += eps;
            xm(i) -= eps;
            const double fd = (quadratic_objective(sys, xp) - quadratic_objective(sys, xm)) / (2 * eps);
            EXPECT_NEAR(fd, grad(i), 1e-6);
        }
    }
    EXPECT_THROW(quadratic_objective(sys, RVector::Zero(n + 1)), ShapeError);
}

TEST(QuadraticObjective, scalar_unit_system) {
    // Complex scalar A = [1], Φ = [1]; real form is I₂ and (1, 0).
    RVector phi(2);
    phi << 1, 0;
    const auto sys = system_from_real(1, 1, RMatrix::Identity(2, 2), phi);
    EXPECT_EQ(quadratic_objective(sys, phi), -0.5);

    const auto ls = least_squares_form(sys);
    EXPECT_EQ(ls.gram, RMatrix::Identity(2, 2));
    EXPECT_EQ(ls.rhs, phi);
    EXPECT_EQ(ls.constant, 1.0);
    EXPECT_EQ(ls.value(phi), 0.0);
}

TEST(LeastSquares, non_negative_on_random_points) {
    std::mt19937_64 rng(21);
    const auto sys = assemble_system(random_gates(4, 3, rng), random_state(3, rng));
    const auto ls = least_squares_form(sys);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        RVector x(static_cast<Eigen::Index>(sys.real_size()));
        for (auto &v : x) v = g(rng);
        EXPECT_GE(ls.value(x), -1e-12);
        EXPECT_NEAR(ls.value(x), (sys.a_real * x - sys.phi_real).squaredNorm(), 1e-9 * (1 + ls.value(x)));
    }
}

TEST(ContinuousSolve, refuses_indefinite_system) {
    RMatrix a = RMatrix::Identity(4, 4);
    a(2, 2) = a(3, 3) = -1;
    const auto sys = system_from_real(2, 1, a, RVector::Ones(4));
    EXPECT_FALSE(sys.positive_definite);
    EXPECT_THROW(continuous_solve(sys), SingularSystem);
}

TEST(SystemFromReal, rejects_non_complex_structure) {
    RMatrix a = RMatrix::Identity(2, 2);
    a(1, 1) = 2;
    EXPECT_THROW(system_from_real(1, 1, a, RVector::Zero(2)), InvalidInput);
    EXPECT_THROW(system_from_real(2, 1, RMatrix::Identity(2, 2), RVector::Zero(2)), ShapeError);
}

TEST(ClockSystemIndex, layout_round_trip) {
    const auto rc = rabi_case(3);
    const auto &sys = rc.system;
    EXPECT_EQ(sys.index_of(0), (RealIndex{0, 0, Part::real}));
    EXPECT_EQ(sys.index_of(3), (RealIndex{0, 1, Part::imag}));
    EXPECT_EQ(sys.index_of(6), (RealIndex{1, 1, Part::real}));
    for (std::size_t k = 0; k < sys.real_size(); ++k) EXPECT_EQ(sys.flat_index(sys.index_of(k)), k);
    EXPECT_THROW(sys.index_of(sys.real_size()), ShapeError);
}

TEST(ClockSystemJson, round_trip) {
    const auto rc = rabi_case(4);
    const auto j = to_json(rc.system);
    EXPECT_EQ(j["real_size"], 16);
    EXPECT_EQ(j["index_map"].size(), 16U);
    const auto back = system_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.a_real, rc.system.a_real);
    EXPECT_EQ(back.phi_real, rc.system.phi_real);
    EXPECT_EQ(back.a_complex, rc.system.a_complex);
}
