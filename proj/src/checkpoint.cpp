// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qcl {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void write_double(std::ostream& os, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
    }
    os.write(bytes, 8);
}

double read_double(std::istream& is) {
    unsigned char bytes[8];
    is.read(reinterpret_cast<char*>(bytes), 8);
    if (!is) {
        throw Error("read_checkpoint: truncated data blob");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_checkpoint(const std::string& path, const CheckpointHeader& header, const HybridState& state) {
    nlohmann::json probabilities = nlohmann::json::array();
    for (const auto& c : state.components()) {
        probabilities.push_back(c.probability);
    }
    const std::size_t blob_bytes = state.components().size() * static_cast<std::size_t>(state.joint_dim()) * 16;
    const nlohmann::json head = {{"format", "qclab-checkpoint-1"},
                                 {"config_hash", hash_hex(header.config_hash)},
                                 {"epsilon", header.epsilon},
                                 {"t", header.t},
                                 {"particle_dim", state.particle_dim()},
                                 {"fock_dim", state.fock_dim()},
                                 {"probabilities", probabilities},
                                 {"blob_bytes", blob_bytes}};
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("write_checkpoint: cannot open " + path);
    }
    os << head.dump() << '\n';
    for (const auto& c : state.components()) {
        for (Eigen::Index i = 0; i < c.vector.size(); ++i) {
            write_double(os, c.vector(i).real());
            write_double(os, c.vector(i).imag());
        }
    }
    if (!os) {
        throw Error("write_checkpoint: write failed for " + path);
    }
}

std::pair<CheckpointHeader, HybridState> read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("read_checkpoint: cannot open " + path);
    }
    std::string line;
    std::getline(is, line);
    const auto head = nlohmann::json::parse(line);
    if (head.at("format") != "qclab-checkpoint-1") {
        throw Error("read_checkpoint: unknown format in " + path);
    }
    CheckpointHeader header;
    header.config_hash = std::stoull(head.at("config_hash").get<std::string>(), nullptr, 16);
    header.epsilon = head.at("epsilon").get<double>();
    header.t = head.at("t").get<double>();
    const auto pdim = head.at("particle_dim").get<Eigen::Index>();
    const auto fdim = head.at("fock_dim").get<Eigen::Index>();
    std::vector<StateComponent> components;
    for (const auto& p : head.at("probabilities")) {
        CVec v(pdim * fdim);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double re = read_double(is);
            const double im = read_double(is);
            v(i) = cplx(re, im);
        }
        components.push_back({p.get<double>(), std::move(v)});
    }
    return {header, HybridState(pdim, fdim, std::move(components))};
}

nlohmann::json trajectory_to_json(const std::vector<double>& times, const std::vector<StateValuedMeasure>& measures) {
    if (times.size() != measures.size()) {
        throw DimensionError("trajectory_to_json: times and measures differ in length");
    }
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        out.push_back({{"t", times[i]}, {"measure", to_json(measures[i])}});
    }
    return {{"trajectory", std::move(out)}};
}

std::pair<std::vector<double>, std::vector<StateValuedMeasure>> trajectory_from_json(const nlohmann::json& j) {
    std::vector<double> times;
    std::vector<StateValuedMeasure> measures;
    for (const auto& entry : j.at("trajectory")) {
        times.push_back(entry.at("t").get<double>());
        measures.push_back(measure_from_json(entry.at("measure")));
    }
    return {std::move(times), std::move(measures)};
}

std::uint64_t config_hash(const nlohmann::json& config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : config.dump()) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hash_hex(std::uint64_t hash) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash;
    return os.str();
}

}  // namespace qcl
