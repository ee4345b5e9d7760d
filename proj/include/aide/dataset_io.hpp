#pragma once

#include <filesystem>
#include <string>

#include "aide/types.hpp"

namespace aide {

// JSON-lines records {"id": ..., "features": [...], "label": 0|1,
// "text"?: ...}. Targets may omit the label (require_labels = false);
// datasets for training may not. Parse errors name the offending line.
Dataset load_jsonl(const std::filesystem::path& path, bool require_labels = true);

// CSV with header id,label,f0..f{d-1}. Accepted for convenience.
Dataset load_csv(const std::filesystem::path& path);

// Dispatch on extension: .csv goes to the CSV reader, everything else is
// treated as JSON lines.
Dataset load_dataset(const std::filesystem::path& path, bool require_labels = true);

void save_jsonl(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace aide
