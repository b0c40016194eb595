// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/measures.hpp"
#include "qcl/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qcl {

struct CheckpointHeader {
    std::uint64_t config_hash = 0;
    double epsilon = 0.0;
    double t = 0.0;
};

/// One JSON header line followed by the component vectors as raw
/// little-endian doubles (re, im interleaved). Reloading is bit-exact.
void write_checkpoint(const std::string& path, const CheckpointHeader& header, const HybridState& state);
[[nodiscard]] std::pair<CheckpointHeader, HybridState> read_checkpoint(const std::string& path);

/// {"trajectory": [{"t": ..., "measure": <measures JSON>}, ...]}
[[nodiscard]] nlohmann::json trajectory_to_json(const std::vector<double>& times,
                                                const std::vector<StateValuedMeasure>& measures);
[[nodiscard]] std::pair<std::vector<double>, std::vector<StateValuedMeasure>> trajectory_from_json(
    const nlohmann::json& j);

/// FNV-1a over the compact JSON dump.
[[nodiscard]] std::uint64_t config_hash(const nlohmann::json& config);
[[nodiscard]] std::string hash_hex(std::uint64_t hash);

}  // namespace qcl
