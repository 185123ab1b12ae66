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

// Fixed-point binarization of the clock system and the QUBO / Ising
// instances handed to solvers.
//
// A real variable x_i is carried by R bits q_i^0 … q_i^{R-1} (q_i^0 most
// significant):
//
//     x_i = 2^D (2 Σ_α 2^{-α} q_i^α − 1)
//
// so the representable grid is {2^D (m 2^{2-R} − 1) : m = 0 … 2^R − 1}.
// Note this is asymmetric; R = 2, D = 0 gives {−1, 0, 1, 2}.
//
// Bit (i, α) has flat index i·R + α.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clockqubo/clock.hpp"
#include "clockqubo/common.hpp"

namespace clockqubo {

class FixedPointScheme {
  public:
    FixedPointScheme(int bits, int exponent) : bits_(bits), exponent_(exponent) {
        if (bits < 1) throw InvalidInput("fixed-point scheme needs R >= 1 bits");
        if (bits > 30) throw InvalidInput("fixed-point scheme supports at most 30 bits per variable");
        if (exponent < -60 || exponent > 60) throw InvalidInput("fixed-point exponent D out of range");
    }

    int bits() const { return bits_; }
    int exponent() const { return exponent_; }

    /// Weight of bit α: 2^{1−α+D}.
    double weight(int alpha) const { return std::ldexp(1.0, 1 - alpha + exponent_); }
    /// Value of the all-zero pattern is −shift() = −2^D.
    double shift() const { return std::ldexp(1.0, exponent_); }

    /// Grid value for integer code m (bit pattern read with q^0 as MSB).
    double value_of_code(std::uint64_t m) const {
        return std::ldexp(static_cast<double>(m), 2 - bits_ + exponent_) - shift();
    }

    std::uint64_t num_codes() const { return std::uint64_t{1} << bits_; }

    /// Every representable value, ascending.
    std::vector<double> grid() const {
        std::vector<double> g(num_codes());
        for (std::uint64_t m = 0; m < g.size(); ++m) g[m] = value_of_code(m);
        return g;
    }

    double min_value() const { return value_of_code(0); }
    double max_value() const { return value_of_code(num_codes() - 1); }

    bool operator==(const FixedPointScheme &) const = default;

  private:
    int bits_;
    int exponent_;
};

inline double decode_bits(std::span<const std::uint8_t> q, const FixedPointScheme &scheme) {
    if (q.size() != static_cast<std::size_t>(scheme.bits()))
        throw ShapeError("expected " + std::to_string(scheme.bits()) + " bits, got " + std::to_string(q.size()));
    double acc = 0.0;
    for (int alpha = 0; alpha < scheme.bits(); ++alpha)
        if (q[static_cast<std::size_t>(alpha)]) acc += std::ldexp(1.0, -alpha);
    return scheme.shift() * (2.0 * acc - 1.0);
}

/// Bits of the grid value nearest to x (ties go to the smaller value),
/// clamped to the grid range.
inline Bits nearest_bits(double x, const FixedPointScheme &scheme) {
    if (!std::isfinite(x)) throw InvalidInput("cannot encode a non-finite value");
    const double code = (x / scheme.shift() + 1.0) * std::ldexp(1.0, scheme.bits() - 2);
    double m = std::ceil(code - 0.5);
    m = std::clamp(m, 0.0, static_cast<double>(scheme.num_codes() - 1));
    const auto mi = static_cast<std::uint64_t>(m);
    Bits q(static_cast<std::size_t>(scheme.bits()));
    for (int alpha = 0; alpha < scheme.bits(); ++alpha) q[static_cast<std::size_t>(alpha)] = (mi >> (scheme.bits() - 1 - alpha)) & 1U;
    return q;
}

inline bool is_representable(double x, const FixedPointScheme &scheme) {
    return decode_bits(nearest_bits(x, scheme), scheme) == x;
}

/// Decodes a full bitstring into the real vector it represents.
inline RVector decode_real(std::span<const std::uint8_t> q, const FixedPointScheme &scheme) {
    const auto R = static_cast<std::size_t>(scheme.bits());
    if (q.size() % R != 0) throw ShapeError("bitstring length " + std::to_string(q.size()) + " is not a multiple of R=" + std::to_string(R));
    RVector x(static_cast<Eigen::Index>(q.size() / R));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = decode_bits(q.subspan(static_cast<std::size_t>(i) * R, R), scheme);
    return x;
}

/// Per-variable nearest-grid encoding of a real vector.
inline Bits encode_real(const RVector &x, const FixedPointScheme &scheme) {
    Bits q;
    q.reserve(static_cast<std::size_t>(x.size()) * static_cast<std::size_t>(scheme.bits()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Bits b = nearest_bits(x(i), scheme);
        q.insert(q.end(), b.begin(), b.end());
    }
    return q;
}

// ---------------------------------------------------------------------------

struct BitLocation {
    std::size_t variable = 0;
    int bit = 0;
};

/// E(q) = offset + Σ_i linear[i] q_i + Σ_{i<j} quadratic[(i,j)] q_i q_j.
struct QuboInstance {
    std::size_t num_bits = 0;
    std::map<std::size_t, double> linear;
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic;
    double offset = 0.0;
    // R of the fixed-point scheme that produced the instance; 1 for plain QUBOs.
    int bits_per_variable = 1;

    std::size_t bit_index(std::size_t variable, int bit) const {
        return variable * static_cast<std::size_t>(bits_per_variable) + static_cast<std::size_t>(bit);
    }
    BitLocation location_of(std::size_t flat) const {
        const auto R = static_cast<std::size_t>(bits_per_variable);
        return BitLocation{flat / R, static_cast<int>(flat % R)};
    }

    void add_linear(std::size_t i, double v) {
        if (i >= num_bits) throw ShapeError("linear index " + std::to_string(i) + " out of range");
        linear[i] += v;
    }

    /// i == j folds into the linear term since q² = q.
    void add_quadratic(std::size_t i, std::size_t j, double v) {
        if (i >= num_bits || j >= num_bits) throw ShapeError("quadratic index out of range");
        if (i == j) {
            add_linear(i, v);
            return;
        }
        if (i > j) std::swap(i, j);
        quadratic[{i, j}] += v;
    }
};

inline double qubo_energy(const QuboInstance &inst, std::span<const std::uint8_t> q, bool include_offset = true) {
    if (q.size() != inst.num_bits)
        throw ShapeError("bitstring has " + std::to_string(q.size()) + " bits, instance has " + std::to_string(inst.num_bits));
    double e = 0.0;
    for (const auto &[i, a] : inst.linear)
        if (q[i]) e += a;
    for (const auto &[ij, b] : inst.quadratic)
        if (q[ij.first] && q[ij.second]) e += b;
    return include_offset ? e + inst.offset : e;
}

namespace detail {

// Substitutes x = W q − 2^D into g(x) = xᵀ Q x + lᵀ x + k (Q symmetric):
//   same bit (i,α):        Q_ii w_α²            (folded, q² = q)
//   bit pair (i,α)<(j,β):  2 Q_ij w_α w_β
//   linear (i,α):          w_α (Q_ii w_α − 2·2^D Σ_j Q_ij + l_i)
//   offset:                k + 2^{2D} Σ_ij Q_ij − 2^D Σ_i l_i
// With Q = A/2, l = −Φ, k = 0 these are the coefficients of f(q) with the
// pair term A_ij 2^{1−α−β+2D} counted once per ordering.
inline QuboInstance binarize_quadratic(const RMatrix &quad, const RVector &lin, double constant, const FixedPointScheme &scheme) {
    const auto n = static_cast<std::size_t>(lin.size());
    const auto R = static_cast<std::size_t>(scheme.bits());
    const double s = scheme.shift();
    QuboInstance inst;
    inst.num_bits = n * R;
    inst.bits_per_variable = scheme.bits();

    double sum_q = 0.0, sum_l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double row = quad.row(ii).sum();
        sum_q += row;
        sum_l += lin(ii);
        for (std::size_t a = 0; a < R; ++a) {
            const double w = scheme.weight(static_cast<int>(a));
            inst.linear[i * R + a] = w * (quad(ii, ii) * w - 2.0 * s * row + lin(ii));
        }
    }
    inst.offset = constant + s * s * sum_q - s * sum_l;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double qij = quad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (qij == 0.0) continue;
            for (std::size_t a = 0; a < R; ++a)
                for (std::size_t b = (i == j ? a + 1 : 0); b < R; ++b) {
                    const double v = 2.0 * qij * scheme.weight(static_cast<int>(a)) * scheme.weight(static_cast<int>(b));
                    inst.quadratic[{i * R + a, j * R + b}] = v;
                }
        }
    return inst;
}

} // namespace detail

/// QUBO of f(x) = ½ xᵀ A x − xᵀ Φ over the fixed-point grid. Requires a
/// positive definite system; see encode_qubo_least_squares otherwise.
inline QuboInstance encode_qubo(const ClockSystem &sys, const FixedPointScheme &scheme) {
    if (!sys.positive_definite)
        throw InvalidInput("encode_qubo: system is not positive definite, so f(x) has no unique minimizer; "
                           "use encode_qubo_least_squares");
    return detail::binarize_quadratic(0.5 * sys.a_real, -sys.phi_real, 0.0, scheme);
}

/// QUBO of h(x) = ‖A x − Φ‖², valid for any system.
inline QuboInstance encode_qubo_least_squares(const ClockSystem &sys, const FixedPointScheme &scheme) {
    const auto ls = least_squares_form(sys);
    return detail::binarize_quadratic(ls.gram, -2.0 * ls.rhs, ls.constant, scheme);
}

inline Trajectory decode_solution(std::span<const std::uint8_t> q, const FixedPointScheme &scheme, const ClockSystem &sys,
                                  const TimeGrid &grid) {
    const std::size_t expected = sys.real_size() * static_cast<std::size_t>(scheme.bits());
    if (q.size() != expected)
        throw ShapeError("bitstring has " + std::to_string(q.size()) + " bits, expected " + std::to_string(expected));
    return trajectory_from_real(sys, grid, decode_real(q, scheme));
}

/// Bits of the grid point nearest to a trajectory (exact when the states lie
/// on the grid).
inline Bits encode_trajectory(const Trajectory &traj, const FixedPointScheme &scheme) {
    return encode_real(realify_vector(history_state(traj)), scheme);
}

// ---------------------------------------------------------------------------

/// E(s) = offset + Σ h_i s_i + Σ_{i<j} J_ij s_i s_j with s ∈ {−1, +1}.
struct IsingInstance {
    std::size_t num_spins = 0;
    std::map<std::size_t, double> h;
    std::map<std::pair<std::size_t, std::size_t>, double> J;
    double offset = 0.0;
    // Product of every uniform rescaling applied since to_ising.
    double scale = 1.0;
};

using Spins = std::vector<std::int8_t>;

inline Spins spins_from_bits(std::span<const std::uint8_t> q) {
    Spins s(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) s[i] = q[i] ? 1 : -1;
    return s;
}

inline double ising_energy(const IsingInstance &inst, std::span<const std::int8_t> s) {
    if (s.size() != inst.num_spins)
        throw ShapeError("spin vector has " + std::to_string(s.size()) + " entries, instance has " + std::to_string(inst.num_spins));
    double e = inst.offset;
    for (const auto &[i, v] : inst.h) e += v * s[i];
    for (const auto &[ij, v] : inst.J) e += v * s[ij.first] * s[ij.second];
    return e;
}

/// q = (1 + s)/2, so the Ising energy at s = 2q − 1 equals the QUBO energy at q.
inline IsingInstance to_ising(const QuboInstance &qubo) {
    IsingInstance out;
    out.num_spins = qubo.num_bits;
    double offset = qubo.offset;
    for (const auto &[i, a] : qubo.linear) {
        out.h[i] += 0.5 * a;
        offset += 0.5 * a;
    }
    for (const auto &[ij, b] : qubo.quadratic) {
        out.J[ij] += 0.25 * b;
        out.h[ij.first] += 0.25 * b;
        out.h[ij.second] += 0.25 * b;
        offset += 0.25 * b;
    }
    out.offset = offset;
    return out;
}

/// Inverse substitution s = 2q − 1; energies match to rounding.
inline QuboInstance to_qubo(const IsingInstance &ising) {
    QuboInstance out;
    out.num_bits = ising.num_spins;
    double offset = ising.offset;
    for (const auto &[i, v] : ising.h) {
        out.add_linear(i, 2.0 * v);
        offset -= v;
    }
    for (const auto &[ij, v] : ising.J) {
        out.add_quadratic(ij.first, ij.second, 4.0 * v);
        out.add_linear(ij.first, -2.0 * v);
        out.add_linear(ij.second, -2.0 * v);
        offset += v;
    }
    out.offset = offset;
    return out;
}

/// Uniform positive rescaling into the programmable ranges |J| ≤ 1, |h| ≤ 2.
/// Never scales up; an all-zero instance is returned unchanged.
inline IsingInstance normalize_for_hardware(const IsingInstance &inst) {
    double max_j = 0.0, max_h = 0.0;
    for (const auto &[k, v] : inst.J) max_j = std::max(max_j, std::abs(v));
    for (const auto &[k, v] : inst.h) max_h = std::max(max_h, std::abs(v));
    double factor = 1.0;
    if (max_j > 0) factor = std::min(factor, 1.0 / max_j);
    if (max_h > 0) factor = std::min(factor, 2.0 / max_h);
    IsingInstance out = inst;
    if (factor == 1.0) return out;
    for (auto &[k, v] : out.h) v *= factor;
    for (auto &[k, v] : out.J) v *= factor;
    out.offset *= factor;
    out.scale *= factor;
    return out;
}

/// Adds independent N(0, σ²) control errors to every field and coupling.
/// Draw order: h by ascending index, then J by ascending pair.
inline IsingInstance perturb_instance(const IsingInstance &inst, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0) || !std::isfinite(sigma)) throw InvalidInput("noise sigma must be finite and >= 0");
    IsingInstance out = inst;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto &[k, v] : out.h) v += noise(rng);
    for (auto &[k, v] : out.J) v += noise(rng);
    return out;
}

/// Uniform r-bit (sign included) quantization of every coefficient of the
/// real system: e ↦ round(e 2^{r−1} / M) M / 2^{r−1}, M the largest |entry|
/// over A and Φ together. The upper triangle is quantized and mirrored.
inline ClockSystem truncate_coefficients(const ClockSystem &sys, int r) {
    if (r < 1) throw InvalidInput("coefficient precision r must be >= 1");
    const double m = std::max(sys.a_real.cwiseAbs().maxCoeff(), sys.phi_real.cwiseAbs().maxCoeff());
    if (m == 0.0) return sys;
    const double step = m / std::ldexp(1.0, r - 1);
    auto quantize = [step](double e) { return std::round(e / step) * step; };

    RMatrix a = sys.a_real;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i; j < a.cols(); ++j) {
            a(i, j) = quantize(sys.a_real(i, j));
            a(j, i) = a(i, j);
        }
    RVector phi = sys.phi_real.unaryExpr(quantize);
    return system_from_real(sys.num_times, sys.dim, std::move(a), std::move(phi));
}

} // namespace clockqubo
