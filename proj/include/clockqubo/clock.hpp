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

#pragma once

// Feynman clock construction. The history state Ψ = Σ_n |t_n⟩ ⊗ ψ(t_n) is the
// unique solution of A Ψ = |t_0⟩ ⊗ ψ_0 with A = C + |t_0⟩⟨t_0| ⊗ I, and the
// real embedding of that system is what the encoding stage binarizes.
//
// Real layout: the complex component k of block n lands at real indices
// 2(nL + k) (real part) and 2(nL + k) + 1 (minus the imaginary part).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "clockqubo/common.hpp"
#include "clockqubo/dynamics.hpp"

namespace clockqubo {

enum class Part { real, imag };

struct RealIndex {
    std::size_t time = 0;
    std::size_t component = 0;
    Part part = Part::real;

    bool operator==(const RealIndex &) const = default;
};

struct ClockSystem {
    std::size_t num_times = 0;
    std::size_t dim = 0;
    CMatrix a_complex;
    CVector phi_complex;
    RMatrix a_real;
    RVector phi_real;
    bool positive_definite = false;

    std::size_t complex_size() const { return num_times * dim; }
    std::size_t real_size() const { return 2 * num_times * dim; }

    RealIndex index_of(std::size_t flat) const {
        if (flat >= real_size()) throw ShapeError("real index " + std::to_string(flat) + " out of range");
        const std::size_t c = flat / 2;
        return RealIndex{c / dim, c % dim, flat % 2 == 0 ? Part::real : Part::imag};
    }

    std::size_t flat_index(const RealIndex &idx) const {
        if (idx.time >= num_times || idx.component >= dim) throw ShapeError("real index out of range");
        return 2 * (idx.time * dim + idx.component) + (idx.part == Part::imag ? 1 : 0);
    }
};

// Each entry a+bi becomes the 2x2 real block [[a, b], [-b, a]].
inline RMatrix realify_matrix(const CMatrix &m) {
    if (!detail::all_finite(m)) throw InvalidInput("realify_matrix: non-finite entries");
    RMatrix out(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double a = m(i, j).real(), b = m(i, j).imag();
            out(2 * i, 2 * j) = a;
            out(2 * i, 2 * j + 1) = b;
            out(2 * i + 1, 2 * j) = -b;
            out(2 * i + 1, 2 * j + 1) = a;
        }
    return out;
}

/// Inverse of realify_matrix; reads a and b from the top row of each block.
inline CMatrix complexify_matrix(const RMatrix &m) {
    if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
        throw ShapeError("complexify_matrix needs even dimensions, got " + detail::shape_str(m.rows(), m.cols()));
    CMatrix out(m.rows() / 2, m.cols() / 2);
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = complex(m(2 * i, 2 * j), m(2 * i, 2 * j + 1));
    return out;
}

// z = a+bi ↦ (a, -b), the vector convention that makes
// realify(M v) = realify_matrix(M) realify_vector(v).
inline RVector realify_vector(const CVector &v) {
    if (!detail::all_finite(v)) throw InvalidInput("realify_vector: non-finite entries");
    RVector out(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(2 * i) = v(i).real();
        out(2 * i + 1) = -v(i).imag();
    }
    return out;
}

inline CVector complexify_vector(const RVector &x) {
    if (x.size() % 2 != 0) throw ShapeError("complexify_vector needs even length, got " + std::to_string(x.size()));
    CVector out(x.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = complex(x(2 * i), -x(2 * i + 1));
    return out;
}

/// Concatenation of the trajectory's states, block n holding ψ(t_n).
inline CVector history_state(const Trajectory &traj) {
    const auto L = static_cast<Eigen::Index>(traj.dim());
    CVector psi(static_cast<Eigen::Index>(traj.size()) * L);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (traj.states[n].size() != L) throw ShapeError("trajectory states have inconsistent dimensions");
        psi.segment(static_cast<Eigen::Index>(n) * L, L) = traj.states[n];
    }
    return psi;
}

/// Symmetric clock operator
///   C = Σ_n ½(|t_n⟩⟨t_n| + |t_{n+1}⟩⟨t_{n+1}|) ⊗ I
///         − ½(|t_{n+1}⟩⟨t_n| ⊗ U_n + |t_n⟩⟨t_{n+1}| ⊗ U_n†),
/// positive semidefinite with the consistent histories as its kernel.
inline CMatrix build_clock_operator(const std::vector<UnitaryGate> &gates) {
    if (gates.empty()) throw ShapeError("clock operator needs at least one gate");
    const Eigen::Index L = gates.front().matrix.rows();
    for (const auto &g : gates)
        if (g.matrix.rows() != L || g.matrix.cols() != L)
            throw ShapeError("gate " + std::to_string(g.step_index) + " is " +
                             detail::shape_str(g.matrix.rows(), g.matrix.cols()) + ", expected " +
                             detail::shape_str(L, L));
    const auto N = static_cast<Eigen::Index>(gates.size()) + 1;
    CMatrix c = CMatrix::Zero(N * L, N * L);
    const CMatrix half_identity = 0.5 * CMatrix::Identity(L, L);
    for (Eigen::Index n = 0; n + 1 < N; ++n) {
        const CMatrix &u = gates[static_cast<std::size_t>(n)].matrix;
        c.block(n * L, n * L, L, L) += half_identity;
        c.block((n + 1) * L, (n + 1) * L, L, L) += half_identity;
        c.block((n + 1) * L, n * L, L, L) -= 0.5 * u;
        c.block(n * L, (n + 1) * L, L, L) -= 0.5 * u.adjoint();
    }
    return c;
}

namespace detail {

inline void finish_system(ClockSystem &sys) {
    sys.a_real = realify_matrix(sys.a_complex);
    sys.phi_real = realify_vector(sys.phi_complex);
    const double asym = (sys.a_real - sys.a_real.transpose()).cwiseAbs().maxCoeff();
    if (asym > kHermiticityTol) throw NumericalInconsistency("system matrix is not symmetric (deviation " + std::to_string(asym) + ")");
    Eigen::LLT<RMatrix> llt(sys.a_real);
    sys.positive_definite = llt.info() == Eigen::Success;
}

} // namespace detail

/// A = C + |t_0⟩⟨t_0| ⊗ I and Φ = |t_0⟩ ⊗ ψ_0, together with their real forms.
inline ClockSystem assemble_system(const std::vector<UnitaryGate> &gates, const CVector &psi0) {
    if (gates.empty()) throw ShapeError("system needs at least one gate");
    const Eigen::Index L = gates.front().matrix.rows();
    if (psi0.size() != L)
        throw ShapeError("initial state has length " + std::to_string(psi0.size()) + ", gates act on " + std::to_string(L));
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidInput("initial state must be normalized");

    ClockSystem sys;
    sys.num_times = gates.size() + 1;
    sys.dim = static_cast<std::size_t>(L);
    sys.a_complex = build_clock_operator(gates);
    sys.a_complex.topLeftCorner(L, L) += CMatrix::Identity(L, L);
    sys.phi_complex = CVector::Zero(static_cast<Eigen::Index>(sys.complex_size()));
    sys.phi_complex.head(L) = psi0;
    detail::finish_system(sys);
    return sys;
}

/// Builds a system directly from its real form; a_real must have the
/// [[a, b], [-b, a]] block structure. Used after coefficient quantization.
inline ClockSystem system_from_real(std::size_t num_times, std::size_t dim, RMatrix a_real, RVector phi_real) {
    const auto n = static_cast<Eigen::Index>(2 * num_times * dim);
    if (a_real.rows() != n || a_real.cols() != n || phi_real.size() != n)
        throw ShapeError("real system does not match " + std::to_string(num_times) + " times x " + std::to_string(dim) + " components");
    ClockSystem sys;
    sys.num_times = num_times;
    sys.dim = dim;
    sys.a_complex = complexify_matrix(a_real);
    sys.phi_complex = complexify_vector(phi_real);
    if ((realify_matrix(sys.a_complex) - a_real).cwiseAbs().maxCoeff() > 0)
        throw InvalidInput("real matrix is not the image of a complex matrix");
    detail::finish_system(sys);
    return sys;
}

/// Direct solve of A_real x = Φ_real through a Cholesky factorization.
inline RVector continuous_solve(const ClockSystem &sys) {
    Eigen::LLT<RMatrix> llt(sys.a_real);
    if (llt.info() != Eigen::Success) throw SingularSystem("system matrix is not positive definite; Cholesky failed");
    RVector x = llt.solve(sys.phi_real);
    const double scale = sys.phi_real.norm();
    const double resid = (sys.a_real * x - sys.phi_real).norm();
    if (!(resid <= 1e-10 * scale))
        throw SingularSystem("direct solve residual " + std::to_string(resid) + " exceeds tolerance");
    return x;
}

namespace detail {

inline void check_dim(const ClockSystem &sys, const RVector &x) {
    if (x.size() != static_cast<Eigen::Index>(sys.real_size()))
        throw ShapeError("vector of length " + std::to_string(x.size()) + " does not match system of size " +
                         std::to_string(sys.real_size()));
}

} // namespace detail

/// f(x) = ½ xᵀ A x − xᵀ Φ.
inline double quadratic_objective(const ClockSystem &sys, const RVector &x) {
    detail::check_dim(sys, x);
    return 0.5 * x.dot(sys.a_real * x) - x.dot(sys.phi_real);
}

inline RVector objective_gradient(const ClockSystem &sys, const RVector &x) {
    detail::check_dim(sys, x);
    return sys.a_real * x - sys.phi_real;
}

/// h(x) = ‖A x − Φ‖² = xᵀ G x − 2 xᵀ c + k with G = AᵀA, c = AᵀΦ, k = ‖Φ‖².
struct LeastSquaresForm {
    RMatrix gram;
    RVector rhs;
    double constant = 0.0;

    double value(const RVector &x) const {
        if (x.size() != rhs.size()) throw ShapeError("least-squares form: dimension mismatch");
        return x.dot(gram * x) - 2.0 * x.dot(rhs) + constant;
    }
};

inline LeastSquaresForm least_squares_form(const ClockSystem &sys) {
    LeastSquaresForm ls;
    ls.gram = sys.a_real.transpose() * sys.a_real;
    ls.rhs = sys.a_real.transpose() * sys.phi_real;
    ls.constant = sys.phi_real.squaredNorm();
    return ls;
}

/// h(x) = ‖A x − Φ‖² evaluated from the residual (no cancellation).
inline double least_squares_value(const ClockSystem &sys, const RVector &x) {
    detail::check_dim(sys, x);
    return (sys.a_real * x - sys.phi_real).squaredNorm();
}

/// Splits a real solution vector back into per-time complex states.
inline Trajectory trajectory_from_real(const ClockSystem &sys, const TimeGrid &grid, const RVector &x) {
    detail::check_dim(sys, x);
    if (grid.size() != sys.num_times) throw ShapeError("grid does not match the number of clock times");
    const CVector z = complexify_vector(x);
    const auto L = static_cast<Eigen::Index>(sys.dim);
    std::vector<CVector> states;
    states.reserve(sys.num_times);
    for (std::size_t n = 0; n < sys.num_times; ++n) states.emplace_back(z.segment(static_cast<Eigen::Index>(n) * L, L));
    return Trajectory{grid, std::move(states)};
}

/// Debug dump: dimensions, row-major entries, vectors and the real index map.
inline nlohmann::json to_json(const ClockSystem &sys) {
    nlohmann::json j;
    j["num_times"] = sys.num_times;
    j["dim"] = sys.dim;
    j["real_size"] = sys.real_size();
    j["positive_definite"] = sys.positive_definite;
    auto &a = j["a_real"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < sys.a_real.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < sys.a_real.cols(); ++c) row.push_back(sys.a_real(r, c));
        a.push_back(std::move(row));
    }
    auto &phi = j["phi_real"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < sys.phi_real.size(); ++r) phi.push_back(sys.phi_real(r));
    auto &im = j["index_map"] = nlohmann::json::array();
    for (std::size_t k = 0; k < sys.real_size(); ++k) {
        const auto idx = sys.index_of(k);
        im.push_back({{"time", idx.time}, {"component", idx.component}, {"part", idx.part == Part::real ? "re" : "neg_im"}});
    }
    return j;
}

inline ClockSystem system_from_json(const nlohmann::json &j) {
    const auto N = j.at("num_times").get<std::size_t>();
    const auto L = j.at("dim").get<std::size_t>();
    const auto n = static_cast<Eigen::Index>(2 * N * L);
    RMatrix a(n, n);
    RVector phi(n);
    const auto &rows = j.at("a_real");
    if (static_cast<Eigen::Index>(rows.size()) != n) throw ShapeError("a_real has the wrong number of rows");
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto &row = rows.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n) throw ShapeError("a_real row has the wrong length");
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    for (Eigen::Index r = 0; r < n; ++r) phi(r) = j.at("phi_real").at(static_cast<std::size_t>(r)).get<double>();
    return system_from_real(N, L, std::move(a), std::move(phi));
}

} // namespace clockqubo
