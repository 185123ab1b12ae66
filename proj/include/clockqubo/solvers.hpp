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

// Classical minimizers for QuboInstance: exhaustive Gray-code enumeration
// (ground-truth oracle, n <= 30), single-flip Metropolis simulated annealing
// with seeded restarts, and best-improvement greedy descent.
//
// All three keep a local field f_k = a_k + Σ_j B_kj q_j per bit, so a flip of
// bit k changes the energy by (1 − 2 q_k) f_k and costs O(n) to apply.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "clockqubo/common.hpp"
#include "clockqubo/encoding.hpp"
#include "clockqubo/io.hpp"

namespace clockqubo {

struct Sample {
    Bits bits;
    double energy = 0.0;
    std::string solver_id;
    std::uint64_t seed = 0;
};

/// Sorted ascending by energy, then lexicographically by bits, then by seed.
struct SampleSet {
    std::vector<Sample> samples;
    std::uint64_t instance_digest = 0;

    bool empty() const { return samples.empty(); }
    const Sample &best() const {
        if (samples.empty()) throw InvalidInput("empty sample set");
        return samples.front();
    }
};

struct SaSchedule {
    std::size_t sweeps = 2000;
    double beta_initial = 0.1;
    double beta_final = 50.0;
    std::size_t restarts = 200;
    std::uint64_t base_seed = 0;
    // Worker threads for restarts; 0 picks the hardware concurrency. The
    // result does not depend on this value.
    unsigned threads = 0;

    void validate() const {
        if (sweeps < 1) throw InvalidInput("SA schedule needs at least one sweep");
        if (restarts < 1) throw InvalidInput("SA schedule needs at least one restart");
        if (!(beta_initial > 0)) throw InvalidInput("beta_initial must be positive");
        if (!(beta_final >= beta_initial)) throw InvalidInput("beta_final must be >= beta_initial");
    }

    /// Geometric ladder from beta_initial to beta_final.
    double beta_at(std::size_t sweep) const {
        if (sweeps == 1 || beta_final == beta_initial) return beta_final;
        const double frac = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
        return beta_initial * std::pow(beta_final / beta_initial, frac);
    }
};

namespace detail {

inline bool lex_less(const Bits &a, const Bits &b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

inline void sort_samples(std::vector<Sample> &samples) {
    std::sort(samples.begin(), samples.end(), [](const Sample &x, const Sample &y) {
        if (x.energy != y.energy) return x.energy < y.energy;
        if (x.bits != y.bits) return lex_less(x.bits, y.bits);
        return x.seed < y.seed;
    });
}

// Dense view of a QUBO: linear vector plus symmetric coupling matrix with
// zero diagonal (each upper-triangular entry stored on both sides).
class DenseQubo {
  public:
    explicit DenseQubo(const QuboInstance &inst)
        : n_(inst.num_bits), offset_(inst.offset), linear_(n_, 0.0), coupling_(n_ * n_, 0.0) {
        for (const auto &[i, a] : inst.linear) linear_[i] = a;
        for (const auto &[ij, b] : inst.quadratic) {
            coupling_[ij.first * n_ + ij.second] += b;
            coupling_[ij.second * n_ + ij.first] += b;
        }
    }

    std::size_t size() const { return n_; }
    double offset() const { return offset_; }
    const double *row(std::size_t k) const { return coupling_.data() + k * n_; }

    std::vector<double> fields(const Bits &q) const {
        std::vector<double> f(linear_);
        for (std::size_t j = 0; j < n_; ++j)
            if (q[j]) {
                const double *r = row(j);
                for (std::size_t k = 0; k < n_; ++k) f[k] += r[k];
            }
        return f;
    }

    double energy(const Bits &q) const {
        double e = offset_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!q[i]) continue;
            e += linear_[i];
            const double *r = row(i);
            for (std::size_t j = i + 1; j < n_; ++j)
                if (q[j]) e += r[j];
        }
        return e;
    }

    // Flips bit k in place and updates the fields.
    void flip(Bits &q, std::vector<double> &f, std::size_t k) const {
        q[k] ^= 1U;
        const double sign = q[k] ? 1.0 : -1.0;
        const double *r = row(k);
        for (std::size_t j = 0; j < n_; ++j) f[j] += sign * r[j];
    }

  private:
    std::size_t n_;
    double offset_;
    std::vector<double> linear_;
    std::vector<double> coupling_;
};

inline double energy_tolerance(double e) { return 1e-9 * (1.0 + std::abs(e)); }

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double uniform01(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

} // namespace detail

struct ExhaustiveOptions {
    // How many lowest-energy assignments to return (1 = just the optimum).
    std::size_t keep = 1;
};

/// Exact minimum by Gray-code enumeration of all 2^n assignments. Among
/// equal-energy minima the lexicographically smallest bitstring wins.
inline SampleSet solve_exhaustive(const QuboInstance &inst, ExhaustiveOptions opts = {}) {
    const std::size_t n = inst.num_bits;
    if (n > 30) throw SizeLimit("exhaustive search is limited to 30 bits, instance has " + std::to_string(n));
    const detail::DenseQubo dense(inst);
    const std::size_t keep = std::max<std::size_t>(opts.keep, 1);

    auto lex_key = [n](std::uint64_t mask) {
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < n; ++i) key |= ((mask >> i) & 1U) << (n - 1 - i);
        return key;
    };

    Bits q(n, 0);
    std::vector<double> f = dense.fields(q);
    double e = dense.offset();
    std::uint64_t mask = 0;

    std::uint64_t best_mask = 0;
    double best_e = e;
    // Max-heap of (energy, lex key) holding the `keep` smallest seen so far.
    using Entry = std::pair<double, std::uint64_t>;
    std::priority_queue<Entry> heap;
    if (keep > 1) heap.emplace(e, lex_key(0));

    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        const auto k = static_cast<std::size_t>(std::countr_zero(t));
        e += q[k] ? -f[k] : f[k];
        dense.flip(q, f, k);
        mask ^= std::uint64_t{1} << k;

        if (keep == 1) {
            const double tol = detail::energy_tolerance(best_e);
            if (e < best_e - tol || (std::abs(e - best_e) <= tol && lex_key(mask) < lex_key(best_mask))) {
                best_mask = mask;
                best_e = e;
            }
        } else {
            const Entry cand{e, lex_key(mask)};
            if (heap.size() < keep) {
                heap.push(cand);
            } else if (cand < heap.top()) {
                heap.pop();
                heap.push(cand);
            }
        }
    }

    auto from_key = [n](std::uint64_t key) {
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = (key >> (n - 1 - i)) & 1U;
        return b;
    };

    SampleSet out;
    out.instance_digest = instance_digest(inst);
    if (keep == 1) {
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = (best_mask >> i) & 1U;
        out.samples.push_back(Sample{b, qubo_energy(inst, b), "exhaustive", 0});
    } else {
        while (!heap.empty()) {
            Bits b = from_key(heap.top().second);
            const double exact = qubo_energy(inst, b);
            out.samples.push_back(Sample{std::move(b), exact, "exhaustive", 0});
            heap.pop();
        }
        detail::sort_samples(out.samples);
    }
    return out;
}

namespace detail {

inline Sample anneal_once(const QuboInstance &inst, const DenseQubo &dense, const SaSchedule &schedule,
                          std::uint64_t seed, const Bits *initial) {
    const std::size_t n = dense.size();
    std::mt19937_64 rng(seed);
    Bits q(n);
    if (initial) {
        q = *initial;
    } else {
        for (auto &b : q) b = static_cast<std::uint8_t>(rng() >> 63);
    }
    std::vector<double> f = dense.fields(q);
    double e = dense.energy(q);
    Bits best = q;
    double best_e = e;

    for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
        const double beta = schedule.beta_at(sweep);
        for (std::size_t k = 0; k < n; ++k) {
            const double delta = q[k] ? -f[k] : f[k];
            if (delta > 0 && !(uniform01(rng()) < std::exp(-beta * delta))) continue;
            dense.flip(q, f, k);
            e += delta;
            if (e < best_e) {
                best_e = e;
                best = q;
            }
        }
    }

    const double exact = qubo_energy(inst, best);
    if (std::abs(exact - best_e) > energy_tolerance(exact))
        throw NumericalInconsistency("SA incremental energy drifted: tracked " + format_double(best_e) + ", recomputed " +
                                     format_double(exact));
    return Sample{std::move(best), exact, "sa", seed};
}

} // namespace detail

/// Simulated annealing. Restart r uses an independent stream seeded with
/// base_seed + r and contributes one sample (the lowest state it visited).
/// With `initial` set every restart starts there instead of at random bits.
inline SampleSet solve_sa(const QuboInstance &inst, const SaSchedule &schedule, const Bits *initial = nullptr) {
    schedule.validate();
    if (initial && initial->size() != inst.num_bits) throw ShapeError("initial bitstring has the wrong length");
    const detail::DenseQubo dense(inst);
    std::vector<Sample> samples(schedule.restarts);

    unsigned workers = schedule.threads ? schedule.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, schedule.restarts));
    auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t r = begin; r < schedule.restarts; r += stride)
            samples[r] = detail::anneal_once(inst, dense, schedule, schedule.base_seed + r, initial);
    };
    if (workers <= 1) {
        run_range(0, 1);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        run_range(w, workers);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (const auto &err : errors)
            if (err) std::rethrow_exception(err);
    }

    SampleSet out;
    out.samples = std::move(samples);
    detail::sort_samples(out.samples);
    out.instance_digest = instance_digest(inst);
    return out;
}

/// Best-improvement single-flip descent from `start`. Each pass flips the bit
/// with the most negative energy change (lowest index on ties); it stops at a
/// local minimum or after max_passes flips. When `trace` is given it receives
/// the energy after every step, starting with the initial energy.
inline Sample solve_greedy(const QuboInstance &inst, const Bits &start, std::size_t max_passes,
                           std::vector<double> *trace = nullptr) {
    if (start.size() != inst.num_bits) throw ShapeError("start bitstring has the wrong length");
    const detail::DenseQubo dense(inst);
    Bits q = start;
    std::vector<double> f = dense.fields(q);
    double e = dense.energy(q);
    if (trace) trace->assign(1, e);
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        std::size_t best_k = q.size();
        double best_delta = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double delta = q[k] ? -f[k] : f[k];
            if (delta < best_delta) {
                best_delta = delta;
                best_k = k;
            }
        }
        if (best_k == q.size()) break;
        dense.flip(q, f, best_k);
        e += best_delta;
        if (trace) trace->push_back(e);
    }
    const double exact = qubo_energy(inst, q);
    return Sample{std::move(q), exact, "greedy", 0};
}

// ---------------------------------------------------------------------------

inline std::string bits_to_string(const Bits &bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

inline Bits bits_from_string(const std::string &s) {
    Bits b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw InvalidInput("bitstring may only contain 0 and 1");
        b[i] = s[i] == '1';
    }
    return b;
}

/// CSV with columns energy,bits,solver_id,seed.
inline std::string sampleset_to_csv(const SampleSet &set) {
    std::string out = "energy,bits,solver_id,seed\n";
    for (const auto &s : set.samples)
        out += format_double(s.energy) + ',' + bits_to_string(s.bits) + ',' + s.solver_id + ',' + std::to_string(s.seed) + '\n';
    return out;
}

inline nlohmann::json to_json(const SampleSet &set) {
    nlohmann::json j;
    j["instance_digest"] = set.instance_digest;
    auto &arr = j["samples"] = nlohmann::json::array();
    for (const auto &s : set.samples)
        arr.push_back({{"energy", s.energy}, {"bits", bits_to_string(s.bits)}, {"solver_id", s.solver_id}, {"seed", s.seed}});
    return j;
}

} // namespace clockqubo
