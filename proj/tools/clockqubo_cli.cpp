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

// clockqubo: compile a time evolution into a QUBO, solve it, and emit
// plot-ready CSV.
//
//   clockqubo [--config FILE] [--seed N] [--out DIR] [--set section.key=value]... <verb>
//
// Verbs: simulate, build-qubo, solve, sweep-r, sweep-R, sweep-N, sweep-noise,
// export, histogram, suite.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clockqubo/clockqubo.hpp"

namespace cq = clockqubo;

namespace {

int report_sweep(const std::string &name, const std::vector<cq::SweepRow> &rows, const std::filesystem::path &out) {
    std::cout << name << ": " << rows.size() << " points written to " << out.string() << '\n';
    for (const auto &r : rows)
        std::cout << "  " << cq::format_double(r.parameter) << "  bits=" << r.num_bits << "  error=" << cq::format_double(r.trajectory_error)
                  << "  sign_ok=" << (r.sign_pattern_ok ? "yes" : "no") << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"clockqubo: time evolution as a QUBO ground-state search"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::int64_t> seed;
    std::optional<std::string> out_dir;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Global seed (overrides run.seed)");
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--set", overrides, "Override a config key: section.key=value (repeatable)");

    auto *simulate = app.add_subcommand("simulate", "Serial reference evolution -> trajectory.csv");
    auto *build = app.add_subcommand("build-qubo", "Clock system and QUBO files -> system.json, instance.qubo, instance.json");
    auto *solve = app.add_subcommand("solve", "Full pipeline -> rabi.csv, energies.csv, instance files, report.json");
    auto *sweep_r = app.add_subcommand("sweep-r", "Coefficient-precision sweep -> sweep_r.csv");
    auto *sweep_R = app.add_subcommand("sweep-R", "Solution-precision sweep -> sweep_R.csv");
    auto *sweep_N = app.add_subcommand("sweep-N", "Time-points sweep -> sweep_N.csv");
    auto *sweep_noise = app.add_subcommand("sweep-noise", "Control-error sweep -> sweep_noise.csv");
    auto *histogram = app.add_subcommand("histogram", "SA energy histograms for the tau presets");
    auto *suite = app.add_subcommand("suite", "Every experiment into one directory");

    auto *exporter = app.add_subcommand("export", "Export the instance for external solvers");
    std::string format = "qubo";
    std::optional<std::string> export_path;
    bool normalize = false;
    double noise = 0.0;
    exporter->add_option("--format", format, "qubo | ising | qubo-json | ising-json");
    exporter->add_option("--path", export_path, "Output file (default <out>/instance.<ext>)");
    exporter->add_flag("--normalize", normalize, "Rescale Ising couplings into |J|<=1, |h|<=2");
    exporter->add_option("--noise", noise, "Gaussian control-error sigma added to the Ising instance")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (seed) overrides.push_back("run.seed=" + std::to_string(*seed));
        if (out_dir) overrides.push_back("output.dir=" + *out_dir);
        const cq::ExperimentConfig cfg = cq::load_config(config_path, overrides);
        const std::filesystem::path out = cfg.output_dir;

        if (simulate->parsed()) {
            const auto traj = cq::simulate(cfg, out);
            std::cout << "trajectory with " << traj.size() << " points written to " << (out / "trajectory.csv").string() << '\n';
            return 0;
        }
        if (build->parsed()) {
            const auto p = cq::build_qubo_files(cfg, out);
            std::cout << "num_bits " << p.qubo.num_bits << "  linear " << p.qubo.linear.size() << "  quadratic "
                      << p.qubo.quadratic.size() << "  offset " << cq::format_double(p.qubo.offset) << '\n';
            return 0;
        }
        if (solve->parsed()) {
            const auto rep = cq::run_rabi(cfg, out);
            std::cout << "best energy " << cq::format_double(rep.best_energy) << "  continuous optimum "
                      << cq::format_double(rep.continuous_optimum) << "  trajectory error " << cq::format_double(rep.trajectory_error)
                      << '\n';
            for (const auto &r : rep.rows)
                std::cout << "  t=" << cq::format_double(r.t) << "  <sz> decoded " << cq::format_double(r.sigma_z_decoded) << "  exact "
                          << cq::format_double(r.sigma_z_exact) << '\n';
            if (!rep.meets(cfg)) {
                std::cerr << "acceptance thresholds not met (reached_optimum=" << rep.reached_optimum
                          << ", sign_pattern_ok=" << rep.sign_pattern_ok << ")\n";
                return 2;
            }
            return 0;
        }
        if (sweep_r->parsed()) return report_sweep("sweep-r", cq::sweep_truncation(cfg, cfg.sweep_precision, out), out);
        if (sweep_R->parsed()) return report_sweep("sweep-R", cq::sweep_precision(cfg, cfg.sweep_bits, out), out);
        if (sweep_N->parsed()) return report_sweep("sweep-N", cq::sweep_timepoints(cfg, cfg.sweep_times, out), out);
        if (sweep_noise->parsed()) return report_sweep("sweep-noise", cq::sweep_noise(cfg, cfg.sweep_noise, out), out);
        if (histogram->parsed()) {
            cq::histogram_presets(cfg, out);
            std::cout << "histograms written to " << out.string() << '\n';
            return 0;
        }
        if (suite->parsed()) {
            cq::run_suite(cfg, out);
            std::cout << "suite written to " << out.string() << '\n';
            return 0;
        }
        if (exporter->parsed()) {
            const auto fmt = cq::parse_instance_format(format);
            const auto p = cq::build_pipeline(cfg);
            std::filesystem::path path;
            if (export_path) {
                path = *export_path;
            } else {
                const char *ext = fmt == cq::InstanceFormat::qubo_text    ? "instance.qubo"
                                  : fmt == cq::InstanceFormat::ising_text ? "instance.ising"
                                  : fmt == cq::InstanceFormat::qubo_json  ? "instance.json"
                                                                          : "instance_ising.json";
                path = out / ext;
            }
            if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
            const bool ising = fmt == cq::InstanceFormat::ising_text || fmt == cq::InstanceFormat::ising_json;
            if (!ising && (normalize || noise > 0)) throw cq::InvalidInput("--normalize and --noise apply to Ising formats only");
            if (ising) {
                auto inst = cq::to_ising(p.qubo);
                if (normalize) inst = cq::normalize_for_hardware(inst);
                inst = cq::perturb_instance(inst, noise, cfg.seed);
                cq::export_instance(inst, fmt, path);
            } else {
                cq::export_instance(p.qubo, fmt, path);
            }
            std::cout << p.qubo.num_bits << " variables written to " << path.string() << '\n';
            return 0;
        }
    } catch (const cq::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
