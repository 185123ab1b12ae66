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

// End-to-end pipelines: dynamics -> clock system -> QUBO -> solver -> decoded
// trajectory, plus the parameter sweeps and histogram/export helpers. Every
// output is plain CSV/JSON written with 17 significant digits, and every
// random choice is derived from the configured seed, so identical configs
// produce byte-identical files.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clockqubo/clock.hpp"
#include "clockqubo/common.hpp"
#include "clockqubo/config.hpp"
#include "clockqubo/dynamics.hpp"
#include "clockqubo/encoding.hpp"
#include "clockqubo/io.hpp"
#include "clockqubo/solvers.hpp"

namespace clockqubo {

inline constexpr const char *kVersion = "0.1.0";

/// Seed for job `index` of a sweep (splitmix64 of the global seed and index).
inline std::uint64_t derive_seed(std::uint64_t global, std::uint64_t index) {
    std::uint64_t z = global + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// σ_z for qubits; for other dimensions the population of component 0 minus
/// the rest.
inline CMatrix z_observable(std::size_t dim) {
    if (dim == 2) return pauli_z();
    CMatrix z = -CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    z(0, 0) = 1.0;
    return z;
}

/// Expectation that maps a zero-norm state to NaN instead of throwing.
inline double z_expectation(const CVector &state) {
    if (!(state.squaredNorm() > 0)) return std::numeric_limits<double>::quiet_NaN();
    return expectation(z_observable(static_cast<std::size_t>(state.size())), state);
}

inline double max_state_error(const Trajectory &a, const Trajectory &b) {
    if (a.size() != b.size()) throw ShapeError("trajectories differ in length");
    double err = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) err = std::max(err, (a.states[n] - b.states[n]).cwiseAbs().maxCoeff());
    return err;
}

namespace detail {

inline int sign_of(double v) { return v > 1e-9 ? 1 : (v < -1e-9 ? -1 : 0); }

} // namespace detail

/// True when ⟨Z⟩ of both trajectories has the same sign at every time.
inline bool sign_pattern_matches(const Trajectory &decoded, const Trajectory &exact) {
    for (std::size_t n = 0; n < exact.size(); ++n) {
        const double d = z_expectation(decoded.states[n]);
        if (std::isnan(d) || detail::sign_of(d) != detail::sign_of(z_expectation(exact.states[n]))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

/// Everything derived from a config before solving.
struct Pipeline {
    TimeGrid grid;
    std::vector<UnitaryGate> gates;
    Trajectory exact;
    ClockSystem system;
    FixedPointScheme scheme;
    QuboInstance qubo;
    RVector continuous;
    double continuous_optimum = 0.0;
};

inline CVector initial_state(const ExperimentConfig &cfg, std::size_t dim) {
    CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(dim));
    if (cfg.psi0.empty()) {
        psi0(0) = 1.0;
        return psi0;
    }
    const auto entries = parse_complex_row(cfg.psi0);
    if (entries.size() != dim)
        throw InvalidInput("psi0 has " + std::to_string(entries.size()) + " entries, system dimension is " + std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) psi0(static_cast<Eigen::Index>(i)) = entries[i];
    return psi0;
}

inline Pipeline build_pipeline(const ExperimentConfig &cfg) {
    const auto gen = generator_from_spec(cfg.system);
    auto grid = TimeGrid::uniform(cfg.t0, cfg.dt, cfg.num_times);
    auto gates = build_gates(gen, grid);
    const CVector psi0 = initial_state(cfg, gen.dim());
    auto exact = exact_trajectory(grid, gates, psi0);
    auto system = assemble_system(gates, psi0);
    FixedPointScheme scheme(cfg.bits, cfg.exponent);
    auto qubo = encode_qubo(system, scheme);
    RVector x0 = continuous_solve(system);
    const double fmin = quadratic_objective(system, x0);
    return Pipeline{std::move(grid), std::move(gates), std::move(exact), std::move(system),
                    scheme, std::move(qubo), std::move(x0), fmin};
}

inline SaSchedule effective_schedule(const ExperimentConfig &cfg, std::uint64_t seed) {
    SaSchedule s = cfg.schedule;
    s.base_seed = seed;
    if (cfg.preset == "tau20") s.sweeps = cfg.tau_base_sweeps;
    else if (cfg.preset == "tau200") s.sweeps = 10 * cfg.tau_base_sweeps;
    else if (cfg.preset == "tau2000") s.sweeps = 100 * cfg.tau_base_sweeps;
    return s;
}

/// Runs the configured solver on a QUBO.
inline SampleSet solve_with(const ExperimentConfig &cfg, const QuboInstance &qubo, std::uint64_t seed) {
    std::string kind = cfg.solver;
    if (kind == "auto") kind = qubo.num_bits <= cfg.exhaustive_limit ? "exhaustive" : "sa";
    if (kind == "exhaustive") return solve_exhaustive(qubo);
    if (kind == "greedy") {
        SampleSet set;
        set.samples.push_back(solve_greedy(qubo, Bits(qubo.num_bits, 0), cfg.greedy_passes));
        set.instance_digest = instance_digest(qubo);
        return set;
    }
    return solve_sa(qubo, effective_schedule(cfg, seed));
}

// ---------------------------------------------------------------------------

struct TimeRow {
    double t = 0.0;
    double sigma_z_decoded = 0.0;
    double sigma_z_exact = 0.0;
    double state_error = 0.0;
};

struct RunReport {
    std::vector<TimeRow> rows;
    std::size_t num_bits = 0;
    double best_energy = 0.0;
    double offset = 0.0;
    double continuous_optimum = 0.0;
    double continuous_residual = 0.0;
    // Lowest energy reachable on the grid, when it can be established.
    std::optional<double> grid_optimum;
    double trajectory_error = 0.0;
    bool sign_pattern_ok = false;
    bool reached_optimum = false;
    std::vector<CVector> decoded_states;
    SampleSet samples;
    std::uint64_t seed = 0;
    std::string config_echo;

    /// The thresholds requested in the config's [acceptance] section.
    bool meets(const ExperimentConfig &cfg) const {
        if (!reached_optimum) return false;
        if (!(best_energy - continuous_optimum <= cfg.max_energy_gap)) return false;
        if (cfg.require_sign_pattern && !sign_pattern_ok) return false;
        return true;
    }
};

namespace detail {

inline void ensure_dir(const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::string csv_line(std::initializer_list<std::string> cells) {
    std::string s;
    bool first = true;
    for (const auto &c : cells) {
        if (!first) s += ',';
        s += c;
        first = false;
    }
    return s + '\n';
}

inline std::string fmt_bool(bool b) { return b ? "1" : "0"; }

inline nlohmann::json provenance(const ExperimentConfig &cfg, std::uint64_t seed) {
    nlohmann::json j{{"version", kVersion}, {"seed", seed}, {"config", cfg.echo}};
    if (cfg.timestamp) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
    return j;
}

} // namespace detail

/// Grid optimum: the encoded exact trajectory when it lies on the grid to
/// within 1e-9 (its energy then equals the continuous minimum), else an exhaustive solve
/// when small enough.
inline std::optional<double> grid_optimum(const Pipeline &p, std::size_t exhaustive_limit) {
    const RVector x = realify_vector(history_state(p.exact));
    const Bits nearest = encode_real(x, p.scheme);
    if ((decode_real(nearest, p.scheme) - x).cwiseAbs().maxCoeff() <= 1e-9) return qubo_energy(p.qubo, nearest);
    if (p.qubo.num_bits <= exhaustive_limit) return solve_exhaustive(p.qubo).best().energy;
    return std::nullopt;
}

inline RunReport make_report(const ExperimentConfig &cfg, const Pipeline &p, SampleSet samples, std::uint64_t seed) {
    RunReport rep;
    rep.num_bits = p.qubo.num_bits;
    rep.samples = std::move(samples);
    const Sample &best = rep.samples.best();
    rep.best_energy = best.energy;
    rep.offset = p.qubo.offset;
    rep.continuous_optimum = p.continuous_optimum;
    rep.continuous_residual = (p.system.a_real * p.continuous - p.system.phi_real).norm();
    const Trajectory decoded = decode_solution(best.bits, p.scheme, p.system, p.grid);
    rep.trajectory_error = max_state_error(decoded, p.exact);
    rep.sign_pattern_ok = sign_pattern_matches(decoded, p.exact);
    rep.grid_optimum = grid_optimum(p, cfg.exhaustive_limit);
    rep.reached_optimum = rep.grid_optimum ? rep.best_energy <= *rep.grid_optimum + 1e-6 : true;
    for (std::size_t n = 0; n < p.grid.size(); ++n) {
        rep.rows.push_back(TimeRow{p.grid[n], z_expectation(decoded.states[n]), z_expectation(p.exact.states[n]),
                                   (decoded.states[n] - p.exact.states[n]).cwiseAbs().maxCoeff()});
    }
    rep.decoded_states = decoded.states;
    rep.seed = seed;
    rep.config_echo = cfg.echo;
    return rep;
}

inline nlohmann::json to_json(const RunReport &rep, const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["num_bits"] = rep.num_bits;
    j["best_energy"] = rep.best_energy;
    j["best_energy_minus_offset"] = rep.best_energy - rep.offset;
    j["offset"] = rep.offset;
    j["continuous_optimum"] = rep.continuous_optimum;
    j["continuous_residual"] = rep.continuous_residual;
    j["grid_optimum"] = rep.grid_optimum ? nlohmann::json(*rep.grid_optimum) : nlohmann::json(nullptr);
    j["trajectory_error"] = rep.trajectory_error;
    j["sign_pattern_ok"] = rep.sign_pattern_ok;
    j["reached_optimum"] = rep.reached_optimum;
    j["meets_acceptance"] = rep.meets(cfg);
    j["best_bits"] = bits_to_string(rep.samples.best().bits);
    j["instance_digest"] = rep.samples.instance_digest;
    auto &rows = j["rows"] = nlohmann::json::array();
    for (const auto &r : rep.rows)
        rows.push_back({{"t", r.t}, {"sigma_z_decoded", r.sigma_z_decoded}, {"sigma_z_exact", r.sigma_z_exact}, {"state_error", r.state_error}});
    j["provenance"] = detail::provenance(cfg, rep.seed);
    return j;
}

inline std::string rabi_csv(const RunReport &rep) {
    std::string out = "t,sigma_z_decoded,sigma_z_exact,state_error\n";
    for (const auto &r : rep.rows)
        out += detail::csv_line({format_double(r.t), format_double(r.sigma_z_decoded), format_double(r.sigma_z_exact), format_double(r.state_error)});
    return out;
}

/// Full pipeline. Writes rabi.csv, energies.csv, instance.{qubo,ising,json},
/// instance_hw.ising (hardware-normalized) and report.json into `out`.
inline RunReport run_rabi(const ExperimentConfig &cfg, const std::filesystem::path &out) {
    const Pipeline p = build_pipeline(cfg);
    RunReport rep = make_report(cfg, p, solve_with(cfg, p.qubo, cfg.seed), cfg.seed);
    detail::ensure_dir(out);
    detail::write_file(out / "rabi.csv", rabi_csv(rep));
    detail::write_file(out / "energies.csv", sampleset_to_csv(rep.samples));
    export_instance(p.qubo, InstanceFormat::qubo_text, out / "instance.qubo");
    export_instance(p.qubo, InstanceFormat::ising_text, out / "instance.ising");
    export_instance(p.qubo, InstanceFormat::qubo_json, out / "instance.json");
    export_instance(normalize_for_hardware(to_ising(p.qubo)), InstanceFormat::ising_text, out / "instance_hw.ising");
    detail::write_file(out / "report.json", to_json(rep, cfg).dump(2) + '\n');
    return rep;
}

// ---------------------------------------------------------------------------

struct SweepRow {
    double parameter = 0.0;
    std::size_t num_bits = 0;
    std::string solver;
    double best_energy = 0.0;
    double energy_gap = 0.0;
    double trajectory_error = 0.0;
    bool sign_pattern_ok = false;
    double continuous_error = std::numeric_limits<double>::quiet_NaN();
    bool positive_definite = true;
    std::string objective = "quadratic";
    double hamming_distance = 0.0;
};

namespace detail {

inline std::string solver_used(const ExperimentConfig &cfg, std::size_t bits) {
    if (cfg.solver == "auto") return bits <= cfg.exhaustive_limit ? "exhaustive" : "sa";
    return cfg.solver;
}

inline SweepRow sweep_point(const ExperimentConfig &cfg, double parameter, std::uint64_t seed) {
    const Pipeline p = build_pipeline(cfg);
    const SampleSet set = solve_with(cfg, p.qubo, seed);
    const Trajectory decoded = decode_solution(set.best().bits, p.scheme, p.system, p.grid);
    SweepRow row;
    row.parameter = parameter;
    row.num_bits = p.qubo.num_bits;
    row.solver = solver_used(cfg, p.qubo.num_bits);
    row.best_energy = set.best().energy;
    row.energy_gap = row.best_energy - p.continuous_optimum;
    row.trajectory_error = max_state_error(decoded, p.exact);
    row.sign_pattern_ok = sign_pattern_matches(decoded, p.exact);
    row.continuous_error = max_state_error(trajectory_from_real(p.system, p.grid, p.continuous), p.exact);
    return row;
}

} // namespace detail

/// Precision sweep over R. Emits sweep_R.csv.
inline std::vector<SweepRow> sweep_precision(const ExperimentConfig &cfg, const std::vector<int> &r_values,
                                             const std::filesystem::path &out) {
    std::vector<SweepRow> rows;
    std::string csv = "R,num_bits,solver,best_energy,energy_gap,trajectory_error,sign_pattern_ok\n";
    for (std::size_t k = 0; k < r_values.size(); ++k) {
        ExperimentConfig c = cfg;
        c.bits = r_values[k];
        const auto row = detail::sweep_point(c, r_values[k], derive_seed(cfg.seed, k));
        csv += detail::csv_line({std::to_string(r_values[k]), std::to_string(row.num_bits), row.solver, format_double(row.best_energy),
                                 format_double(row.energy_gap), format_double(row.trajectory_error), detail::fmt_bool(row.sign_pattern_ok)});
        rows.push_back(row);
    }
    detail::ensure_dir(out);
    detail::write_file(out / "sweep_R.csv", csv);
    return rows;
}

/// Time-points sweep over N. Emits sweep_N.csv.
inline std::vector<SweepRow> sweep_timepoints(const ExperimentConfig &cfg, const std::vector<std::size_t> &n_values,
                                              const std::filesystem::path &out) {
    std::vector<SweepRow> rows;
    std::string csv = "N,num_bits,solver,best_energy,energy_gap,trajectory_error,continuous_error,sign_pattern_ok\n";
    for (std::size_t k = 0; k < n_values.size(); ++k) {
        ExperimentConfig c = cfg;
        c.num_times = n_values[k];
        const auto row = detail::sweep_point(c, static_cast<double>(n_values[k]), derive_seed(cfg.seed, k));
        csv += detail::csv_line({std::to_string(n_values[k]), std::to_string(row.num_bits), row.solver, format_double(row.best_energy),
                                 format_double(row.energy_gap), format_double(row.trajectory_error),
                                 format_double(row.continuous_error), detail::fmt_bool(row.sign_pattern_ok)});
        rows.push_back(row);
    }
    detail::ensure_dir(out);
    detail::write_file(out / "sweep_N.csv", csv);
    return rows;
}

/// Coefficient-precision sweep over r. Each point quantizes the real system,
/// encodes it (the least-squares objective when quantization destroyed
/// positive definiteness), solves exhaustively when small enough and SA
/// otherwise. Emits sweep_r.csv. The error column is not monotone in r in
/// general.
inline std::vector<SweepRow> sweep_truncation(const ExperimentConfig &cfg, const std::vector<int> &r_values,
                                              const std::filesystem::path &out) {
    const Pipeline p = build_pipeline(cfg);
    std::vector<SweepRow> rows;
    std::string csv = "r,positive_definite,objective,num_bits,solver,best_energy,trajectory_error,sign_pattern_ok,continuous_error\n";
    for (std::size_t k = 0; k < r_values.size(); ++k) {
        const ClockSystem trunc = truncate_coefficients(p.system, r_values[k]);
        SweepRow row;
        row.parameter = r_values[k];
        row.positive_definite = trunc.positive_definite;
        row.objective = trunc.positive_definite ? "quadratic" : "least_squares";
        const QuboInstance q = trunc.positive_definite ? encode_qubo(trunc, p.scheme) : encode_qubo_least_squares(trunc, p.scheme);
        row.num_bits = q.num_bits;
        const bool small = q.num_bits <= cfg.exhaustive_limit;
        row.solver = small ? "exhaustive" : "sa";
        const SampleSet set = small ? solve_exhaustive(q) : solve_sa(q, effective_schedule(cfg, derive_seed(cfg.seed, k)));
        row.best_energy = set.best().energy;
        const Trajectory decoded = decode_solution(set.best().bits, p.scheme, trunc, p.grid);
        row.trajectory_error = max_state_error(decoded, p.exact);
        row.sign_pattern_ok = sign_pattern_matches(decoded, p.exact);
        if (trunc.positive_definite)
            row.continuous_error = max_state_error(trajectory_from_real(trunc, p.grid, continuous_solve(trunc)), p.exact);
        csv += detail::csv_line({std::to_string(r_values[k]), detail::fmt_bool(row.positive_definite), row.objective,
                                 std::to_string(row.num_bits), row.solver, format_double(row.best_energy),
                                 format_double(row.trajectory_error), detail::fmt_bool(row.sign_pattern_ok),
                                 format_double(row.continuous_error)});
        rows.push_back(row);
    }
    detail::ensure_dir(out);
    detail::write_file(out / "sweep_r.csv", csv);
    return rows;
}

/// Control-error sweep: the hardware-normalized Ising instance is perturbed
/// with N(0, σ²) noise, re-solved, and compared with the noiseless optimum
/// (Hamming distance of the best bitstrings). Emits sweep_noise.csv.
inline std::vector<SweepRow> sweep_noise(const ExperimentConfig &cfg, const std::vector<double> &sigmas,
                                         const std::filesystem::path &out) {
    const Pipeline p = build_pipeline(cfg);
    const IsingInstance base = normalize_for_hardware(to_ising(p.qubo));
    const Bits reference = solve_with(cfg, p.qubo, derive_seed(cfg.seed, sigmas.size())).best().bits;
    std::vector<SweepRow> rows;
    std::string csv = "sigma,num_bits,solver,energy_unperturbed,hamming_distance,trajectory_error,sign_pattern_ok\n";
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        const auto seed = derive_seed(cfg.seed, k);
        const QuboInstance noisy = to_qubo(perturb_instance(base, sigmas[k], seed));
        const Bits bits = solve_with(cfg, noisy, seed).best().bits;
        SweepRow row;
        row.parameter = sigmas[k];
        row.num_bits = noisy.num_bits;
        row.solver = detail::solver_used(cfg, noisy.num_bits);
        row.best_energy = qubo_energy(p.qubo, bits);
        std::size_t dist = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) dist += bits[i] != reference[i];
        row.hamming_distance = static_cast<double>(dist);
        const Trajectory decoded = decode_solution(bits, p.scheme, p.system, p.grid);
        row.trajectory_error = max_state_error(decoded, p.exact);
        row.sign_pattern_ok = sign_pattern_matches(decoded, p.exact);
        csv += detail::csv_line({format_double(sigmas[k]), std::to_string(row.num_bits), row.solver, format_double(row.best_energy),
                                 std::to_string(dist), format_double(row.trajectory_error), detail::fmt_bool(row.sign_pattern_ok)});
        rows.push_back(row);
    }
    detail::ensure_dir(out);
    detail::write_file(out / "sweep_noise.csv", csv);
    return rows;
}

// ---------------------------------------------------------------------------

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::size_t count = 0;
};

/// Fixed-width bins between the minimum and maximum sample energy. When all
/// energies coincide a single degenerate bin holds every sample.
inline std::vector<HistogramBin> energy_histogram(const SampleSet &set, std::size_t bins) {
    if (set.empty()) throw InvalidInput("cannot build a histogram of an empty sample set");
    if (bins < 1) throw InvalidInput("histogram needs at least one bin");
    double lo = set.samples.front().energy, hi = lo;
    for (const auto &s : set.samples) {
        lo = std::min(lo, s.energy);
        hi = std::max(hi, s.energy);
    }
    if (hi == lo) return {HistogramBin{lo, hi, set.samples.size()}};
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out[k].left = lo + width * static_cast<double>(k);
        out[k].right = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
    }
    for (const auto &s : set.samples) {
        auto k = static_cast<std::size_t>((s.energy - lo) / width);
        out[std::min(k, bins - 1)].count += 1;
    }
    return out;
}

inline std::vector<HistogramBin> emit_histogram(const SampleSet &set, std::size_t bins, const std::filesystem::path &path) {
    auto hist = energy_histogram(set, bins);
    std::string csv = "bin_left,bin_right,count\n";
    for (const auto &b : hist) csv += detail::csv_line({format_double(b.left), format_double(b.right), std::to_string(b.count)});
    if (path.has_parent_path()) detail::ensure_dir(path.parent_path());
    detail::write_file(path, csv);
    return hist;
}

/// Solves the configured instance under each annealing-time preset and writes
/// histogram_<preset>.csv plus energies_<preset>.csv.
inline void histogram_presets(const ExperimentConfig &cfg, const std::filesystem::path &out) {
    const Pipeline p = build_pipeline(cfg);
    const char *presets[] = {"tau20", "tau200", "tau2000"};
    for (std::size_t k = 0; k < 3; ++k) {
        ExperimentConfig c = cfg;
        c.preset = presets[k];
        const SampleSet set = solve_sa(p.qubo, effective_schedule(c, derive_seed(cfg.seed, k)));
        emit_histogram(set, cfg.histogram_bins, out / (std::string("histogram_") + presets[k] + ".csv"));
        detail::write_file(out / (std::string("energies_") + presets[k] + ".csv"), sampleset_to_csv(set));
    }
}

/// Serial reference evolution: trajectory.csv with t, sigma_z and the state
/// components.
inline Trajectory simulate(const ExperimentConfig &cfg, const std::filesystem::path &out) {
    const auto gen = generator_from_spec(cfg.system);
    const auto grid = TimeGrid::uniform(cfg.t0, cfg.dt, cfg.num_times);
    const auto traj = exact_trajectory(grid, build_gates(gen, grid), initial_state(cfg, gen.dim()));
    std::string csv = "t,sigma_z";
    for (std::size_t k = 0; k < gen.dim(); ++k) csv += ",re" + std::to_string(k) + ",im" + std::to_string(k);
    csv += '\n';
    for (std::size_t n = 0; n < traj.size(); ++n) {
        csv += format_double(grid[n]) + ',' + format_double(z_expectation(traj.states[n]));
        for (Eigen::Index k = 0; k < traj.states[n].size(); ++k)
            csv += ',' + format_double(traj.states[n](k).real()) + ',' + format_double(traj.states[n](k).imag());
        csv += '\n';
    }
    detail::ensure_dir(out);
    detail::write_file(out / "trajectory.csv", csv);
    return traj;
}

/// Writes system.json (the real clock system), instance.qubo and
/// instance.json; returns the pipeline.
inline Pipeline build_qubo_files(const ExperimentConfig &cfg, const std::filesystem::path &out) {
    Pipeline p = build_pipeline(cfg);
    detail::ensure_dir(out);
    detail::write_file(out / "system.json", to_json(p.system).dump(2) + '\n');
    export_instance(p.qubo, InstanceFormat::qubo_text, out / "instance.qubo");
    export_instance(p.qubo, InstanceFormat::qubo_json, out / "instance.json");
    return p;
}

/// Every experiment with default sweep lists, into one directory.
inline void run_suite(const ExperimentConfig &cfg, const std::filesystem::path &out) {
    simulate(cfg, out);
    run_rabi(cfg, out);
    sweep_precision(cfg, cfg.sweep_bits, out);
    sweep_timepoints(cfg, cfg.sweep_times, out);
    sweep_truncation(cfg, cfg.sweep_precision, out);
    sweep_noise(cfg, cfg.sweep_noise, out);
    histogram_presets(cfg, out);
}

} // namespace clockqubo
