#include "aide/model_io.hpp"

#include <fstream>
#include <limits>

#include "json.hpp"

#include "aide/error.hpp"
#include "aide/report_io.hpp"

namespace aide {

namespace {
constexpr int kModelVersion = 1;
}

void save_model(const ModelParams& params, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["version"] = kModelVersion;
  doc["dim"] = static_cast<long long>(params.theta.size() - 1);
  doc["theta"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < params.theta.size(); ++i) {
    doc["theta"].push_back(params.theta(i));
  }
  doc["l2_strength"] = params.l2_strength;
  doc["converged"] = params.converged;
  doc["final_objective"] = params.final_objective;
  atomic_write(path, doc.dump(2) + "\n");
}

ModelParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open model file " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  if (!doc.contains("version") || doc["version"].get<int>() != kModelVersion) {
    throw InvalidInput(path.string() + ": unsupported model version");
  }
  for (const char* field : {"dim", "theta", "l2_strength", "converged",
                            "final_objective"}) {
    if (!doc.contains(field)) {
      throw InvalidInput(path.string() + ": missing field '" +
                         std::string(field) + "'");
    }
  }
  ModelParams params;
  const auto dim = doc["dim"].get<long long>();
  const auto& theta = doc["theta"];
  if (!theta.is_array() || static_cast<long long>(theta.size()) != dim + 1) {
    throw InvalidInput(path.string() + ": theta must have dim + 1 entries");
  }
  params.theta.resize(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    params.theta(static_cast<Eigen::Index>(i)) = theta[i].get<double>();
  }
  params.l2_strength = doc["l2_strength"].get<double>();
  params.converged = doc["converged"].get<bool>();
  params.final_objective = doc["final_objective"].get<double>();
  params.final_gradient_norm = std::numeric_limits<double>::quiet_NaN();
  return params;
}

}  // namespace aide
