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

// Experiment configuration: a flat INI file (key = value, [sections]) read
// through boost::property_tree. Every key is optional; see configs/rabi.ini
// for the full list with defaults. Overrides of the form "section.key=value"
// are applied on top of the file before interpretation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "clockqubo/common.hpp"
#include "clockqubo/dynamics.hpp"
#include "clockqubo/solvers.hpp"

namespace clockqubo {

using ConfigTree = boost::property_tree::ptree;

struct ExperimentConfig {
    GeneratorSpec system;
    // Empty means |0⟩.
    std::string psi0;

    double t0 = 0.0;
    double dt = 1.0;
    std::size_t num_times = 6;

    int bits = 2;
    int exponent = 0;

    // sa | exhaustive | greedy | auto (exhaustive up to exhaustive_limit bits, else sa)
    std::string solver = "sa";
    SaSchedule schedule;
    // "" or tau20 | tau200 | tau2000: multiplies tau_base_sweeps by 1, 10, 100.
    std::string preset;
    std::size_t tau_base_sweeps = 20;
    std::size_t greedy_passes = 10000;
    std::size_t exhaustive_limit = 24;

    std::vector<int> sweep_bits{1, 2, 3};
    std::vector<std::size_t> sweep_times{2, 3, 4, 6, 8, 10};
    std::vector<int> sweep_precision{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> sweep_noise{0.0, 0.001, 0.01, 0.05};
    std::size_t histogram_bins = 20;

    std::string output_dir = "out";
    bool timestamp = false;
    std::uint64_t seed = 0;

    double max_energy_gap = 1e-6;
    bool require_sign_pattern = true;

    // Effective configuration echoed into reports.
    std::string echo;
};

/// Reals accept plain numbers and the forms pi, -pi, pi/k, k*pi, k*pi/m.
inline double parse_real(const std::string &raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '\t') s += c;
    auto number = [&](const std::string &t) -> double {
        if (t.empty()) throw InvalidInput("empty number in '" + raw + "'");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::logic_error &) {
            throw InvalidInput("cannot parse real '" + raw + "'");
        }
        if (used != t.size()) throw InvalidInput("cannot parse real '" + raw + "'");
        return v;
    };
    const auto pos = s.find("pi");
    if (pos == std::string::npos) return number(s);
    double factor = 1.0;
    std::string before = s.substr(0, pos), after = s.substr(pos + 2);
    if (before == "-") {
        factor = -1.0;
    } else if (!before.empty()) {
        if (before.back() != '*') throw InvalidInput("cannot parse real '" + raw + "'");
        factor = number(before.substr(0, before.size() - 1));
    }
    double divisor = 1.0;
    if (!after.empty()) {
        if (after.front() != '/') throw InvalidInput("cannot parse real '" + raw + "'");
        divisor = number(after.substr(1));
    }
    return factor * std::numbers::pi / divisor;
}

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string &raw, T (*conv)(const std::string &)) {
    std::vector<T> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(conv(item.substr(b, e - b + 1)));
    }
    return out;
}

inline long long parse_integer(const std::string &s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::logic_error &) {
        throw InvalidInput("cannot parse integer '" + s + "'");
    }
    if (used != s.size()) throw InvalidInput("cannot parse integer '" + s + "'");
    return v;
}

inline std::size_t parse_count(const std::string &s) {
    const long long v = parse_integer(s);
    if (v < 0) throw InvalidInput("expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

inline int parse_int(const std::string &s) { return static_cast<int>(parse_integer(s)); }
inline double parse_real_item(const std::string &s) { return parse_real(s); }

inline bool parse_bool(const std::string &s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw InvalidInput("cannot parse boolean '" + s + "'");
}

inline std::optional<std::string> get(const ConfigTree &tree, const std::string &key) {
    if (auto v = tree.get_optional<std::string>(key)) return *v;
    return std::nullopt;
}

} // namespace detail

inline ConfigTree read_config_tree(const std::string &path) {
    ConfigTree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw IoError("config '" + path + "': " + e.what());
    }
    return tree;
}

/// Applies "section.key=value".
inline void apply_override(ConfigTree &tree, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("override must look like section.key=value, got '" + assignment + "'");
    tree.put(assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline ExperimentConfig config_from_tree(const ConfigTree &tree) {
    using namespace detail;
    ExperimentConfig c;
    if (auto v = get(tree, "system.kind")) c.system.kind = *v;
    if (auto v = get(tree, "system.omega")) c.system.omega = parse_real(*v);
    if (auto rows = get(tree, "system.rows")) {
        const std::size_t n = parse_count(*rows);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = get(tree, "system.row" + std::to_string(i));
            if (!row) throw InvalidInput("config declares " + std::to_string(n) + " rows but system.row" + std::to_string(i) + " is missing");
            c.system.rows.push_back(*row);
        }
    }
    if (auto v = get(tree, "system.psi0")) c.psi0 = *v;

    if (auto v = get(tree, "grid.t0")) c.t0 = parse_real(*v);
    if (auto v = get(tree, "grid.dt")) c.dt = parse_real(*v);
    if (auto v = get(tree, "grid.N")) c.num_times = parse_count(*v);

    if (auto v = get(tree, "scheme.R")) c.bits = parse_int(*v);
    if (auto v = get(tree, "scheme.D")) c.exponent = parse_int(*v);

    if (auto v = get(tree, "solver.kind")) c.solver = *v;
    if (auto v = get(tree, "solver.sweeps")) c.schedule.sweeps = parse_count(*v);
    if (auto v = get(tree, "solver.restarts")) c.schedule.restarts = parse_count(*v);
    if (auto v = get(tree, "solver.beta_initial")) c.schedule.beta_initial = parse_real(*v);
    if (auto v = get(tree, "solver.beta_final")) c.schedule.beta_final = parse_real(*v);
    if (auto v = get(tree, "solver.threads")) c.schedule.threads = static_cast<unsigned>(parse_count(*v));
    if (auto v = get(tree, "solver.preset")) c.preset = *v;
    if (auto v = get(tree, "solver.tau_base_sweeps")) c.tau_base_sweeps = parse_count(*v);
    if (auto v = get(tree, "solver.greedy_passes")) c.greedy_passes = parse_count(*v);
    if (auto v = get(tree, "solver.exhaustive_limit")) c.exhaustive_limit = parse_count(*v);

    if (auto v = get(tree, "sweep.R")) c.sweep_bits = parse_list<int>(*v, parse_int);
    if (auto v = get(tree, "sweep.N")) c.sweep_times = parse_list<std::size_t>(*v, parse_count);
    if (auto v = get(tree, "sweep.r")) c.sweep_precision = parse_list<int>(*v, parse_int);
    if (auto v = get(tree, "sweep.sigma")) c.sweep_noise = parse_list<double>(*v, parse_real_item);
    if (auto v = get(tree, "sweep.bins")) c.histogram_bins = parse_count(*v);

    if (auto v = get(tree, "output.dir")) c.output_dir = *v;
    if (auto v = get(tree, "output.timestamp")) c.timestamp = parse_bool(*v);
    if (auto v = get(tree, "run.seed")) c.seed = static_cast<std::uint64_t>(parse_integer(*v));

    if (auto v = get(tree, "acceptance.max_energy_gap")) c.max_energy_gap = parse_real(*v);
    if (auto v = get(tree, "acceptance.require_sign_pattern")) c.require_sign_pattern = parse_bool(*v);

    // Validation of everything the pipelines rely on.
    if (c.num_times < 2) throw InvalidInput("grid.N must be >= 2");
    if (!(c.dt > 0)) throw InvalidInput("grid.dt must be positive");
    if (c.bits < 1) throw InvalidInput("scheme.R must be >= 1");
    if (c.solver != "sa" && c.solver != "exhaustive" && c.solver != "greedy" && c.solver != "auto")
        throw InvalidInput("solver.kind must be sa, exhaustive, greedy or auto");
    if (!c.preset.empty() && c.preset != "tau20" && c.preset != "tau200" && c.preset != "tau2000")
        throw InvalidInput("solver.preset must be tau20, tau200 or tau2000");
    c.schedule.validate();
    if (c.histogram_bins < 1) throw InvalidInput("sweep.bins must be >= 1");
    for (int r : c.sweep_bits)
        if (r < 1) throw InvalidInput("sweep.R values must be >= 1");
    for (std::size_t n : c.sweep_times)
        if (n < 2) throw InvalidInput("sweep.N values must be >= 2");
    for (int r : c.sweep_precision)
        if (r < 1) throw InvalidInput("sweep.r values must be >= 1");
    for (double s : c.sweep_noise)
        if (!(s >= 0)) throw InvalidInput("sweep.sigma values must be >= 0");
    (void)generator_from_spec(c.system);

    std::ostringstream echo;
    boost::property_tree::ini_parser::write_ini(echo, tree);
    c.echo = echo.str();
    return c;
}

inline ExperimentConfig load_config(const std::string &path, const std::vector<std::string> &overrides = {}) {
    ConfigTree tree = path.empty() ? ConfigTree{} : read_config_tree(path);
    for (const auto &o : overrides) apply_override(tree, o);
    return config_from_tree(tree);
}

} // namespace clockqubo
