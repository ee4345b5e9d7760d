#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aide {

// One labelled training or target instance. `features` is a precomputed
// embedding; `display_payload` carries the original text or an image path
// and is echoed verbatim in reports.
struct Example {
  std::string id;
  Eigen::VectorXd features;
  int label = 0;  // {0,1}
  std::optional<std::string> display_payload;
};

// Ordered collection of examples sharing one feature dimension, with unique
// ids. Construction validates both invariants.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Example> examples);

  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  Eigen::Index dim() const { return dim_; }

  const std::vector<Example>& examples() const { return examples_; }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  const Example* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

  // Training precondition: n >= 2 and both labels present.
  void require_trainable() const;

 private:
  std::vector<Example> examples_;
  Eigen::Index dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainConfig {
  double l2_strength = 1e-3;        // ridge weight on the non-bias coordinates
  int max_iterations = 100;
  double gradient_tolerance = 1e-10;
  double probability_clamp = 1e-7;  // epsilon_p, keeps probabilities in (0, 1)
};

// Fitted parameters of the regularized logistic model. theta has length
// d + 1; the last coordinate is the bias.
struct ModelParams {
  Eigen::VectorXd theta;
  double l2_strength = 0.0;
  bool converged = false;
  double final_objective = 0.0;
  double final_gradient_norm = 0.0;
};

}  // namespace aide
