// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/harness.hpp"

#include <string>
#include <vector>

namespace qcl {

/// Rows as config_hash,seed,epsilon,t,metric,value.
void write_csv(const ResultTable& table, const std::string& path);
[[nodiscard]] ResultTable read_csv(const std::string& path);

/// Rows, checks and warnings together with the source config and build provenance.
[[nodiscard]] nlohmann::json table_to_json(const ResultTable& table, const nlohmann::json& config,
                                           const std::string& command);
void write_json(const nlohmann::json& j, const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Log-log line plot; nonpositive values are dropped.
[[nodiscard]] std::string svg_loglog(const std::vector<PlotSeries>& series, const std::string& title,
                                     const std::string& x_label, const std::string& y_label);
void write_text(const std::string& text, const std::string& path);

/// One series per time of `metric` against epsilon.
[[nodiscard]] std::vector<PlotSeries> metric_series(const ResultTable& table, const std::string& metric);

}  // namespace qcl
