#include "aide/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "aide/error.hpp"

namespace aide {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) {
    throw NumericalError("failed to format double");
  }
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidInput("cannot write to " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw InvalidInput("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw InvalidInput("failed to move " + tmp.string() + " into place: " +
                       ec.message());
  }
}

nlohmann::ordered_json report_to_json(const ExplanationReport& report,
                                      const Dataset& dataset) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["target_id"] = report.target_id;
  doc["predicted_class"] = report.predicted_class;
  doc["predicted_probability"] = report.predicted_probability;
  if (report.ground_truth_label.has_value()) {
    doc["ground_truth_label"] = *report.ground_truth_label;
  } else {
    doc["ground_truth_label"] = nullptr;
  }
  doc["intent"] = intent_name(report.intent);
  doc["iqr"] = {{"upper_threshold", report.iqr_upper_threshold},
                {"lower_threshold", report.iqr_lower_threshold}};
  doc["shown_quadrants"] = nlohmann::ordered_json::array();
  for (const auto& [quadrant, set] : report.shown_quadrants) {
    nlohmann::ordered_json q;
    q["quadrant"] = quadrant_name(quadrant);
    q["objective_value"] = set.objective_value;
    q["members"] = nlohmann::ordered_json::array();
    for (const SelectedMember& member : set.members) {
      nlohmann::ordered_json m;
      m["train_id"] = member.train_id;
      m["influence"] = member.influence;
      m["proximity"] = member.proximity;
      const Example* ex = dataset.find(member.train_id);
      if (ex != nullptr && ex->display_payload.has_value()) {
        m["display_payload"] = *ex->display_payload;
      } else {
        m["display_payload"] = nullptr;
      }
      q["members"].push_back(std::move(m));
    }
    doc["shown_quadrants"].push_back(std::move(q));
  }
  doc["notes"] = report.notes;
  return doc;
}

std::string influence_csv(const std::vector<InfluenceRecord>& records) {
  std::string out = "train_id,target_id,score\n";
  for (const InfluenceRecord& r : records) {
    out += r.train_id;
    out += ',';
    out += r.target_id;
    out += ',';
    out += format_double(r.score);
    out += '\n';
  }
  return out;
}

std::string continuity_csv(const std::vector<ContinuityPair>& pairs) {
  std::string out = "target_a,target_b,instance_sim,explanation_sim\n";
  for (const ContinuityPair& p : pairs) {
    out += p.target_a;
    out += ',';
    out += p.target_b;
    out += ',';
    out += format_double(p.instance_similarity);
    out += ',';
    out += format_double(p.explanation_similarity);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const DistributionSummary& summary) {
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < summary.bin_counts.size(); ++b) {
    out += format_double(summary.bin_edges[b]);
    out += ',';
    out += format_double(summary.bin_edges[b + 1]);
    out += ',';
    out += std::to_string(summary.bin_counts[b]);
    out += '\n';
  }
  return out;
}

}  // namespace aide
