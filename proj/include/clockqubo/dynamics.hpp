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

// Unitary step gates for dψ/dt = -i H(t) ψ (ħ = 1) and the serial reference
// evolution used as the oracle for everything downstream.

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clockqubo/common.hpp"

namespace clockqubo {

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kUnitarityTol = 1e-10;

class TimeGrid {
  public:
    explicit TimeGrid(std::vector<double> points) : points_(std::move(points)) {
        if (points_.size() < 2) throw InvalidInput("time grid needs at least 2 points");
        for (std::size_t n = 0; n < points_.size(); ++n) {
            if (!std::isfinite(points_[n])) throw InvalidInput("time grid contains a non-finite point");
            if (n > 0 && !(points_[n] > points_[n - 1]))
                throw InvalidInput("time grid must be strictly increasing (index " + std::to_string(n) + ")");
        }
    }

    static TimeGrid uniform(double t0, double dt, std::size_t count) {
        if (!(dt > 0)) throw InvalidInput("time step must be positive");
        std::vector<double> pts(count);
        for (std::size_t n = 0; n < count; ++n) pts[n] = t0 + dt * static_cast<double>(n);
        return TimeGrid(std::move(pts));
    }

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t n) const { return points_[n]; }
    const std::vector<double> &points() const { return points_; }

  private:
    std::vector<double> points_;
};

enum class GeneratorKind { constant, sampled };

/// Hermitian generator H(t). `constant` generators ignore t; `sampled`
/// generators are evaluated wherever the gate rule asks.
class HermitianGenerator {
  public:
    using Eval = std::function<CMatrix(double)>;

    static HermitianGenerator constant(CMatrix h) {
        if (h.rows() != h.cols() || h.rows() < 1)
            throw InvalidGenerator("generator must be square and non-empty, got " + detail::shape_str(h.rows(), h.cols()));
        const auto dim = static_cast<std::size_t>(h.rows());
        return HermitianGenerator(dim, [h = std::move(h)](double) { return h; }, GeneratorKind::constant);
    }

    static HermitianGenerator sampled(std::size_t dim, Eval eval) {
        if (dim < 1) throw InvalidGenerator("generator dimension must be >= 1");
        return HermitianGenerator(dim, std::move(eval), GeneratorKind::sampled);
    }

    std::size_t dim() const { return dim_; }
    GeneratorKind kind() const { return kind_; }

    // Evaluates H(t) and enforces the shape and hermiticity contract.
    CMatrix operator()(double t) const {
        CMatrix h = eval_(t);
        if (h.rows() != static_cast<Eigen::Index>(dim_) || h.cols() != static_cast<Eigen::Index>(dim_))
            throw InvalidGenerator("generator returned " + detail::shape_str(h.rows(), h.cols()) + ", expected " +
                                   detail::shape_str(dim_, dim_));
        if (!detail::all_finite(h)) throw InvalidGenerator("generator has non-finite entries at t=" + std::to_string(t));
        const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
        if (dev > kHermiticityTol)
            throw InvalidGenerator("generator is not Hermitian at t=" + std::to_string(t) +
                                   " (max deviation " + std::to_string(dev) + ")");
        return h;
    }

  private:
    HermitianGenerator(std::size_t dim, Eval eval, GeneratorKind kind)
        : dim_(dim), eval_(std::move(eval)), kind_(kind) {}

    std::size_t dim_;
    Eval eval_;
    GeneratorKind kind_;
};

struct UnitaryGate {
    CMatrix matrix;
    std::size_t step_index = 0;
};

/// Wraps a user-supplied matrix as a gate after checking ‖U†U − I‖_max.
inline UnitaryGate make_gate(CMatrix u, std::size_t step_index) {
    if (u.rows() != u.cols() || u.rows() < 1)
        throw ShapeError("gate must be square, got " + detail::shape_str(u.rows(), u.cols()));
    const CMatrix defect = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    if (defect.cwiseAbs().maxCoeff() > kUnitarityTol)
        throw InvalidInput("gate " + std::to_string(step_index) + " is not unitary");
    return UnitaryGate{std::move(u), step_index};
}

struct Trajectory {
    TimeGrid grid;
    std::vector<CVector> states;

    std::size_t size() const { return states.size(); }
    std::size_t dim() const { return states.empty() ? 0 : static_cast<std::size_t>(states.front().size()); }
};

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, complex(0, -1), complex(0, 1), 0;
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// Two-level Rabi generator H = ω σ_y.
inline HermitianGenerator rabi_generator(double omega) { return HermitianGenerator::constant(omega * pauli_y()); }

// exp(M) by scaling and squaring: M is scaled by 2^-s until its 1-norm is at
// most 1/2, the Taylor series is summed to double precision, then squared s
// times.
inline CMatrix matrix_exponential(const CMatrix &m) {
    if (m.rows() != m.cols()) throw ShapeError("matrix_exponential needs a square matrix, got " + detail::shape_str(m.rows(), m.cols()));
    if (!detail::all_finite(m)) throw InvalidInput("matrix_exponential: non-finite entries");
    const Eigen::Index n = m.rows();
    if (n == 0) return m;

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const CMatrix x = m / std::ldexp(1.0, squarings);

    CMatrix result = CMatrix::Identity(n, n);
    CMatrix term = CMatrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * x) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Constant generators use exp(-i H Δt) exactly; sampled ones the midpoint
// rule exp(-i H((t_n + t_{n+1})/2) Δt).
inline std::vector<UnitaryGate> build_gates(const HermitianGenerator &gen, const TimeGrid &grid) {
    std::vector<UnitaryGate> gates;
    gates.reserve(grid.size() - 1);
    CMatrix h_const;
    if (gen.kind() == GeneratorKind::constant) h_const = gen(grid[0]);
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        const double dt = grid[n + 1] - grid[n];
        const CMatrix h = gen.kind() == GeneratorKind::constant ? h_const : gen(0.5 * (grid[n] + grid[n + 1]));
        gates.push_back(UnitaryGate{matrix_exponential(complex(0, -dt) * h), n});
    }
    return gates;
}

inline Trajectory exact_trajectory(const TimeGrid &grid, const std::vector<UnitaryGate> &gates, const CVector &psi0) {
    if (gates.size() + 1 != grid.size())
        throw ShapeError("grid has " + std::to_string(grid.size()) + " points but " + std::to_string(gates.size()) +
                         " gates were given");
    if (!(psi0.norm() > 0)) throw InvalidInput("initial state has zero norm");
    std::vector<CVector> states;
    states.reserve(grid.size());
    states.push_back(psi0);
    for (const auto &g : gates) {
        if (g.matrix.cols() != psi0.size() || g.matrix.rows() != psi0.size())
            throw ShapeError("gate " + std::to_string(g.step_index) + " is " +
                             detail::shape_str(g.matrix.rows(), g.matrix.cols()) + " but the state has length " +
                             std::to_string(psi0.size()));
        states.push_back(g.matrix * states.back());
    }
    return Trajectory{grid, std::move(states)};
}

/// Integer-time grid 0, 1, …, gates.size().
inline Trajectory exact_trajectory(const std::vector<UnitaryGate> &gates, const CVector &psi0) {
    return exact_trajectory(TimeGrid::uniform(0.0, 1.0, gates.size() + 1), gates, psi0);
}

/// ⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩ for Hermitian O.
inline double expectation(const CMatrix &observable, const CVector &state) {
    if (observable.rows() != state.size() || observable.cols() != state.size())
        throw ShapeError("observable " + detail::shape_str(observable.rows(), observable.cols()) +
                         " does not match state of length " + std::to_string(state.size()));
    if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol)
        throw InvalidInput("observable is not Hermitian");
    const double nrm2 = state.squaredNorm();
    if (!(nrm2 > 0)) throw InvalidInput("expectation of a zero-norm state");
    const complex v = state.dot(observable * state) / nrm2;
    if (std::abs(v.imag()) > 1e-10)
        throw NumericalInconsistency("expectation value has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

// ---------------------------------------------------------------------------
// Text specification of a generator: either the builtin "rabi" with omega, or
// an inline dense matrix given row by row as whitespace-separated "re,im"
// pairs.

struct GeneratorSpec {
    std::string kind = "rabi";
    double omega = 1.5707963267948966;
    std::vector<std::string> rows;
};

/// Parses one row such as "0,0 0,-1". A bare number is read as a real entry.
inline std::vector<complex> parse_complex_row(const std::string &row) {
    std::vector<complex> out;
    std::istringstream in(row);
    std::string tok;
    while (in >> tok) {
        const auto comma = tok.find(',');
        try {
            std::size_t used = 0;
            if (comma == std::string::npos) {
                const double re = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                out.emplace_back(re, 0.0);
            } else {
                const std::string re_s = tok.substr(0, comma), im_s = tok.substr(comma + 1);
                std::size_t u1 = 0, u2 = 0;
                const double re = std::stod(re_s, &u1);
                const double im = std::stod(im_s, &u2);
                if (u1 != re_s.size() || u2 != im_s.size()) throw std::invalid_argument(tok);
                out.emplace_back(re, im);
            }
        } catch (const std::logic_error &) {
            throw InvalidInput("cannot parse complex entry '" + tok + "'");
        }
    }
    return out;
}

inline HermitianGenerator generator_from_spec(const GeneratorSpec &spec) {
    if (spec.kind == "rabi") {
        if (!std::isfinite(spec.omega)) throw InvalidGenerator("rabi omega must be finite");
        return rabi_generator(spec.omega);
    }
    if (spec.kind == "matrix") {
        const auto n = static_cast<Eigen::Index>(spec.rows.size());
        if (n == 0) throw InvalidGenerator("matrix generator has no rows");
        CMatrix h(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = parse_complex_row(spec.rows[static_cast<std::size_t>(i)]);
            if (static_cast<Eigen::Index>(row.size()) != n)
                throw InvalidGenerator("matrix row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                       " entries, expected " + std::to_string(n));
            for (Eigen::Index j = 0; j < n; ++j) h(i, j) = row[static_cast<std::size_t>(j)];
        }
        auto gen = HermitianGenerator::constant(std::move(h));
        (void)gen(0.0);
        return gen;
    }
    throw InvalidGenerator("unknown generator kind '" + spec.kind + "' (expected rabi or matrix)");
}

} // namespace clockqubo
