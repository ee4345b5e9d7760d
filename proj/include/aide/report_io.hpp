#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "aide/eval.hpp"
#include "aide/intents.hpp"
#include "aide/types.hpp"

namespace aide {

// Shortest round-trip decimal rendering (std::to_chars), locale-independent.
std::string format_double(double value);

// Writes content to a sibling temp file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

nlohmann::ordered_json report_to_json(const ExplanationReport& report,
                                      const Dataset& dataset);

// train_id,target_id,score rows in dataset order, full precision.
std::string influence_csv(const std::vector<InfluenceRecord>& records);

// target_a,target_b,instance_sim,explanation_sim rows.
std::string continuity_csv(const std::vector<ContinuityPair>& pairs);

// bin_low,bin_high,count rows.
std::string histogram_csv(const DistributionSummary& summary);

}  // namespace aide
