#pragma once

// Persistence of campaign results: results.csv, summary.json and static
// SVG charts. Output bytes are deterministic for fixed input except the
// wall-time fields of summary.json.

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "steerlab/harness/campaign.hpp"

namespace steerlab::harness {

/// One row per trial record, frozen column order (see README).
void write_results_csv(const CampaignResult& result, const std::string& path);

nlohmann::json summarize(const CampaignResult& result);

/// Writes results.csv and summary.json into the configured output directory.
void write_results(const CampaignResult& result);

/// Rebuilds charts from a results directory. formats: csv, json, svg.
void emit_reports(const std::string& dir, const std::vector<std::string>& formats);

std::string histogram_svg(const std::vector<double>& values, const std::string& title);
std::string bars_svg(const std::vector<std::pair<std::string, double>>& bars,
                     const std::string& title);

}  // namespace steerlab::harness
