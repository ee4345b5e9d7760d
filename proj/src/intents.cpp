#include "aide/intents.hpp"

#include <cmath>

#include "aide/error.hpp"
#include "aide/model.hpp"

namespace aide {

namespace {

std::vector<Quadrant> shown_for(Intent intent) {
  switch (intent) {
    case Intent::InterpretCorrect:
      return {Quadrant::Support, Quadrant::SupportByContrast};
    case Intent::InvestigateWrong:
      return {Quadrant::Support, Quadrant::SupportByContrast, Quadrant::Oppose,
              Quadrant::OpposeByContrast};
    case Intent::ClarifyAmbiguous:
      return {Quadrant::Support, Quadrant::Oppose};
  }
  return {};
}

}  // namespace

const char* intent_name(Intent intent) {
  switch (intent) {
    case Intent::InterpretCorrect:
      return "interpret_correct";
    case Intent::InvestigateWrong:
      return "investigate_wrong";
    case Intent::ClarifyAmbiguous:
      return "clarify_ambiguous";
  }
  return "unknown";
}

ExplanationReport present(Intent intent,
                          const std::map<Quadrant, ExplanationSet>& quadrants,
                          const PredictionMeta& meta,
                          std::vector<std::string> extra_notes) {
  ExplanationReport report;
  report.target_id = meta.target_id;
  report.predicted_class = meta.predicted_class;
  report.predicted_probability = meta.predicted_probability;
  report.ground_truth_label = meta.ground_truth_label;
  report.intent = intent;
  report.notes = std::move(extra_notes);

  for (Quadrant q : shown_for(intent)) {
    const auto it = quadrants.find(q);
    if (it == quadrants.end()) {
      throw InvalidInput(std::string("quadrant map is missing ") +
                         quadrant_name(q));
    }
    if (it->second.members.empty()) {
      report.notes.push_back(std::string("empty_quadrant:") + quadrant_name(q));
    }
    report.shown_quadrants.emplace_back(q, it->second);
  }
  return report;
}

ExplanationReport present(Intent intent, const SelectionOutcome& outcome,
                          const PredictionMeta& meta) {
  std::vector<std::string> notes;
  if (outcome.iqr_fallback) {
    notes.emplace_back("iqr_fallback");
  }
  ExplanationReport report = present(intent, outcome.sets, meta, std::move(notes));
  report.iqr_upper_threshold = outcome.iqr_upper_threshold;
  report.iqr_lower_threshold = outcome.iqr_lower_threshold;
  return report;
}

Intent suggest_intent(double predicted_probability,
                      std::optional<int> ground_truth_label,
                      double ambiguity_band) {
  if (ambiguity_band <= 0.0 || ambiguity_band >= 0.5) {
    throw InvalidInput("ambiguity_band must lie in (0, 0.5)");
  }
  if (std::abs(predicted_probability - 0.5) < ambiguity_band) {
    return Intent::ClarifyAmbiguous;
  }
  if (ground_truth_label.has_value() &&
      *ground_truth_label != predicted_class(predicted_probability)) {
    return Intent::InvestigateWrong;
  }
  return Intent::InterpretCorrect;
}

}  // namespace aide
