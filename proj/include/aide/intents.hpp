#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aide/selection.hpp"

namespace aide {

enum class Intent { InterpretCorrect, InvestigateWrong, ClarifyAmbiguous };

const char* intent_name(Intent intent);  // "interpret_correct", ...

inline constexpr double kDefaultAmbiguityBand = 0.15;

struct PredictionMeta {
  std::string target_id;
  int predicted_class = 0;
  double predicted_probability = 0.0;
  std::optional<int> ground_truth_label;
};

struct ExplanationReport {
  std::string target_id;
  int predicted_class = 0;
  double predicted_probability = 0.0;
  std::optional<int> ground_truth_label;
  Intent intent = Intent::InterpretCorrect;
  std::vector<std::pair<Quadrant, ExplanationSet>> shown_quadrants;
  std::vector<std::string> notes;  // machine-readable flags
  double iqr_upper_threshold = 0.0;
  double iqr_lower_threshold = 0.0;
};

// Picks the quadrants for the intent, in fixed order:
//   InterpretCorrect  -> S, SC
//   InvestigateWrong  -> S, SC, O, OC
//   ClarifyAmbiguous  -> S, O
// Sets pass through unchanged; empty shown quadrants are flagged in notes.
ExplanationReport present(Intent intent,
                          const std::map<Quadrant, ExplanationSet>& quadrants,
                          const PredictionMeta& meta,
                          std::vector<std::string> extra_notes = {});

// Same, with prediction metadata and IQR notes taken from the pipeline
// outcome.
ExplanationReport present(Intent intent, const SelectionOutcome& outcome,
                          const PredictionMeta& meta);

// Advisory default intent: ambiguous when the probability sits inside the
// band around 0.5, wrong when ground truth disagrees with the prediction,
// correct otherwise.
Intent suggest_intent(double predicted_probability,
                      std::optional<int> ground_truth_label,
                      double ambiguity_band = kDefaultAmbiguityBand);

}  // namespace aide
