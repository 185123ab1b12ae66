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

// Text and JSON interchange for QUBO and Ising instances.
//
//   # comment lines are ignored
//   p qubo <num_bits> <num_linear> <num_quadratic> <offset>
//   i i a_i          (linear term, zero-based)
//   i j b_ij         (i < j)
//
// Ising files use "p ising" with h_i and J_ij in the same positions. Numbers
// are written with 17 significant digits so a write/read cycle is bit-exact.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "clockqubo/common.hpp"
#include "clockqubo/encoding.hpp"

namespace clockqubo {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string instance_body(const char *tag, std::size_t n, const std::map<std::size_t, double> &lin,
                          const std::map<std::pair<std::size_t, std::size_t>, double> &quad, double offset) {
    std::ostringstream out;
    out << "p " << tag << ' ' << n << ' ' << lin.size() << ' ' << quad.size() << ' ' << format_double(offset) << '\n';
    for (const auto &[i, v] : lin) out << i << ' ' << i << ' ' << format_double(v) << '\n';
    for (const auto &[ij, v] : quad) out << ij.first << ' ' << ij.second << ' ' << format_double(v) << '\n';
    return out.str();
}

struct ParsedInstance {
    std::size_t n = 0;
    double offset = 0.0;
    std::map<std::size_t, double> lin;
    std::map<std::pair<std::size_t, std::size_t>, double> quad;
};

inline double parse_number(const std::string &tok, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used == tok.size()) return v;
    } catch (const std::logic_error &) {
    }
    throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse number '" + tok + "'");
}

inline std::size_t parse_index(const std::string &tok, std::size_t line_no) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("line " + std::to_string(line_no) + ": bad index '" + tok + "'");
    return static_cast<std::size_t>(std::stoull(tok));
}

inline ParsedInstance parse_instance(std::istream &in, const std::string &tag) {
    ParsedInstance p;
    bool have_header = false;
    std::size_t want_lin = 0, want_quad = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, c, d, e, f, extra;
        if (!have_header) {
            ls >> a >> b >> c >> d >> e >> f;
            if (a != "p" || b != tag || f.empty() || (ls >> extra))
                throw InvalidInput("line " + std::to_string(line_no) + ": expected header 'p " + tag +
                                   " <n> <num_linear> <num_quadratic> <offset>'");
            p.n = parse_index(c, line_no);
            want_lin = parse_index(d, line_no);
            want_quad = parse_index(e, line_no);
            p.offset = parse_number(f, line_no);
            have_header = true;
            continue;
        }
        ls >> a >> b >> c;
        if (c.empty() || (ls >> extra)) throw InvalidInput("line " + std::to_string(line_no) + ": expected 'i j value'");
        const std::size_t i = parse_index(a, line_no), j = parse_index(b, line_no);
        const double v = parse_number(c, line_no);
        if (i >= p.n || j >= p.n) throw InvalidInput("line " + std::to_string(line_no) + ": index out of range");
        if (i == j) {
            if (!p.lin.emplace(i, v).second) throw InvalidInput("line " + std::to_string(line_no) + ": duplicate linear term");
        } else {
            if (i > j) throw InvalidInput("line " + std::to_string(line_no) + ": quadratic terms need i < j");
            if (!p.quad.emplace(std::make_pair(i, j), v).second)
                throw InvalidInput("line " + std::to_string(line_no) + ": duplicate quadratic term");
        }
    }
    if (!have_header) throw InvalidInput("missing 'p " + tag + "' header");
    if (p.lin.size() != want_lin || p.quad.size() != want_quad)
        throw InvalidInput("term counts do not match the header");
    return p;
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

inline std::string qubo_to_text(const QuboInstance &inst) {
    std::string out = "# bits_per_variable " + std::to_string(inst.bits_per_variable) + '\n';
    return out + detail::instance_body("qubo", inst.num_bits, inst.linear, inst.quadratic, inst.offset);
}

inline QuboInstance qubo_from_text(const std::string &text) {
    std::istringstream in(text);
    auto p = detail::parse_instance(in, "qubo");
    QuboInstance inst;
    inst.num_bits = p.n;
    inst.offset = p.offset;
    inst.linear = std::move(p.lin);
    inst.quadratic = std::move(p.quad);
    return inst;
}

inline std::string ising_to_text(const IsingInstance &inst) {
    std::string out = "# scale " + format_double(inst.scale) + '\n';
    return out + detail::instance_body("ising", inst.num_spins, inst.h, inst.J, inst.offset);
}

inline IsingInstance ising_from_text(const std::string &text) {
    std::istringstream in(text);
    auto p = detail::parse_instance(in, "ising");
    IsingInstance inst;
    inst.num_spins = p.n;
    inst.offset = p.offset;
    inst.h = std::move(p.lin);
    inst.J = std::move(p.quad);
    return inst;
}

inline nlohmann::json to_json(const QuboInstance &inst) {
    nlohmann::json j{{"format", "qubo"}, {"num_bits", inst.num_bits}, {"offset", inst.offset},
                     {"bits_per_variable", inst.bits_per_variable}};
    auto &lin = j["linear"] = nlohmann::json::array();
    for (const auto &[i, v] : inst.linear) lin.push_back({i, v});
    auto &quad = j["quadratic"] = nlohmann::json::array();
    for (const auto &[ij, v] : inst.quadratic) quad.push_back({ij.first, ij.second, v});
    return j;
}

inline nlohmann::json to_json(const IsingInstance &inst) {
    nlohmann::json j{{"format", "ising"}, {"num_spins", inst.num_spins}, {"offset", inst.offset}, {"scale", inst.scale}};
    auto &h = j["h"] = nlohmann::json::array();
    for (const auto &[i, v] : inst.h) h.push_back({i, v});
    auto &jj = j["J"] = nlohmann::json::array();
    for (const auto &[ij, v] : inst.J) jj.push_back({ij.first, ij.second, v});
    return j;
}

inline QuboInstance qubo_from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "qubo") throw InvalidInput("JSON document is not a qubo instance");
    QuboInstance inst;
    inst.num_bits = j.at("num_bits").get<std::size_t>();
    inst.offset = j.at("offset").get<double>();
    inst.bits_per_variable = j.value("bits_per_variable", 1);
    for (const auto &e : j.at("linear")) inst.add_linear(e.at(0).get<std::size_t>(), e.at(1).get<double>());
    for (const auto &e : j.at("quadratic")) {
        const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
        if (i >= k) throw InvalidInput("quadratic terms need i < j");
        inst.add_quadratic(i, k, e.at(2).get<double>());
    }
    return inst;
}

inline IsingInstance ising_from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "ising") throw InvalidInput("JSON document is not an ising instance");
    IsingInstance inst;
    inst.num_spins = j.at("num_spins").get<std::size_t>();
    inst.offset = j.at("offset").get<double>();
    inst.scale = j.value("scale", 1.0);
    for (const auto &e : j.at("h")) {
        const auto i = e.at(0).get<std::size_t>();
        if (i >= inst.num_spins) throw InvalidInput("field index out of range");
        inst.h[i] = e.at(1).get<double>();
    }
    for (const auto &e : j.at("J")) {
        const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
        if (i >= k || k >= inst.num_spins) throw InvalidInput("bad coupling index");
        inst.J[{i, k}] = e.at(2).get<double>();
    }
    return inst;
}

/// FNV-1a over the canonical text body (comments excluded).
inline std::uint64_t instance_digest(const QuboInstance &inst) {
    const std::string body = detail::instance_body("qubo", inst.num_bits, inst.linear, inst.quadratic, inst.offset);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : body) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

enum class InstanceFormat { qubo_text, ising_text, qubo_json, ising_json };

inline InstanceFormat parse_instance_format(const std::string &name) {
    if (name == "qubo") return InstanceFormat::qubo_text;
    if (name == "ising") return InstanceFormat::ising_text;
    if (name == "qubo-json") return InstanceFormat::qubo_json;
    if (name == "ising-json") return InstanceFormat::ising_json;
    throw InvalidInput("unknown instance format '" + name + "' (qubo, ising, qubo-json, ising-json)");
}

/// Writes the QUBO in the requested format; Ising formats convert first.
inline void export_instance(const QuboInstance &inst, InstanceFormat format, const std::filesystem::path &path) {
    std::string content;
    switch (format) {
    case InstanceFormat::qubo_text: content = qubo_to_text(inst); break;
    case InstanceFormat::ising_text: content = ising_to_text(to_ising(inst)); break;
    case InstanceFormat::qubo_json: content = to_json(inst).dump(2) + '\n'; break;
    case InstanceFormat::ising_json: content = to_json(to_ising(inst)).dump(2) + '\n'; break;
    }
    detail::write_file(path, content);
}

inline void export_instance(const IsingInstance &inst, InstanceFormat format, const std::filesystem::path &path) {
    if (format == InstanceFormat::ising_text)
        detail::write_file(path, ising_to_text(inst));
    else if (format == InstanceFormat::ising_json)
        detail::write_file(path, to_json(inst).dump(2) + '\n');
    else
        throw InvalidInput("an Ising instance can only be exported as ising or ising-json");
}

inline QuboInstance import_qubo(const std::filesystem::path &path) {
    const std::string text = detail::read_file(path);
    try {
        if (path.extension() == ".json") return qubo_from_json(nlohmann::json::parse(text));
        return qubo_from_text(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(path.string() + ": " + e.what());
    } catch (const InvalidInput &e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

inline IsingInstance import_ising(const std::filesystem::path &path) {
    const std::string text = detail::read_file(path);
    try {
        if (path.extension() == ".json") return ising_from_json(nlohmann::json::parse(text));
        return ising_from_text(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(path.string() + ": " + e.what());
    } catch (const InvalidInput &e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

} // namespace clockqubo
