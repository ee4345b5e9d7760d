#include "aide/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "aide/error.hpp"
#include "aide/report_io.hpp"

namespace aide {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw InvalidInput(path.string() + ": parse error at line " +
                     std::to_string(line) + ": " + what);
}

Example parse_jsonl_record(const json& record, bool require_label,
                           const std::filesystem::path& path, std::size_t line) {
  if (!record.is_object()) {
    fail_line(path, line, "expected a JSON object");
  }
  Example ex;
  if (!record.contains("id") || !record["id"].is_string()) {
    fail_line(path, line, "missing string field 'id'");
  }
  ex.id = record["id"].get<std::string>();
  if (!record.contains("features") || !record["features"].is_array() ||
      record["features"].empty()) {
    fail_line(path, line, "missing non-empty array field 'features'");
  }
  const auto& feats = record["features"];
  ex.features.resize(static_cast<Eigen::Index>(feats.size()));
  for (std::size_t i = 0; i < feats.size(); ++i) {
    if (!feats[i].is_number()) {
      fail_line(path, line, "feature " + std::to_string(i) + " is not a number");
    }
    ex.features(static_cast<Eigen::Index>(i)) = feats[i].get<double>();
  }
  if (record.contains("label")) {
    if (!record["label"].is_number_integer()) {
      fail_line(path, line, "field 'label' must be an integer 0 or 1");
    }
    ex.label = record["label"].get<int>();
    if (ex.label != 0 && ex.label != 1) {
      fail_line(path, line, "label must be 0 or 1");
    }
  } else if (require_label) {
    fail_line(path, line, "missing field 'label'");
  }
  if (record.contains("text")) {
    if (!record["text"].is_string()) {
      fail_line(path, line, "field 'text' must be a string");
    }
    ex.display_payload = record["text"].get<std::string>();
  }
  return ex;
}

}  // namespace

Dataset load_jsonl(const std::filesystem::path& path, bool require_labels) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open dataset file " + path.string());
  }
  std::vector<Example> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;  // blank line
    }
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(path, line_no, e.what());
    }
    examples.push_back(parse_jsonl_record(record, require_labels, path, line_no));
  }
  if (examples.empty()) {
    throw InvalidInput(path.string() + ": no records");
  }
  try {
    return Dataset(std::move(examples));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open dataset file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidInput(path.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line.rfind("id,label,", 0) != 0) {
    throw InvalidInput(path.string() +
                       ": parse error at line 1: header must start with "
                       "'id,label,f0'");
  }

  std::vector<Example> examples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() < 3) {
      fail_line(path, line_no, "expected id,label,f0,...");
    }
    Example ex;
    ex.id = cells[0];
    try {
      std::size_t pos = 0;
      ex.label = std::stoi(cells[1], &pos);
      if (pos != cells[1].size()) {
        throw std::invalid_argument(cells[1]);
      }
      ex.features.resize(static_cast<Eigen::Index>(cells.size() - 2));
      for (std::size_t i = 2; i < cells.size(); ++i) {
        ex.features(static_cast<Eigen::Index>(i - 2)) = std::stod(cells[i], &pos);
        if (pos != cells[i].size()) {
          throw std::invalid_argument(cells[i]);
        }
      }
    } catch (const std::exception&) {
      fail_line(path, line_no, "malformed numeric field");
    }
    if (ex.label != 0 && ex.label != 1) {
      fail_line(path, line_no, "label must be 0 or 1");
    }
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) {
    throw InvalidInput(path.string() + ": no records");
  }
  try {
    return Dataset(std::move(examples));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

Dataset load_dataset(const std::filesystem::path& path, bool require_labels) {
  if (path.extension() == ".csv") {
    return load_csv(path);
  }
  return load_jsonl(path, require_labels);
}

void save_jsonl(const Dataset& dataset, const std::filesystem::path& path) {
  std::string out;
  for (const Example& ex : dataset.examples()) {
    nlohmann::ordered_json record;
    record["id"] = ex.id;
    record["features"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < ex.features.size(); ++i) {
      record["features"].push_back(ex.features(i));
    }
    record["label"] = ex.label;
    if (ex.display_payload.has_value()) {
      record["text"] = *ex.display_payload;
    }
    out += record.dump();
    out += '\n';
  }
  atomic_write(path, out);
}

}  // namespace aide
