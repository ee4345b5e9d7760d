#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "aide/types.hpp"

namespace aide {

// Gaussian-mixture embedding generator used by the evaluation harness and
// the CLI. Two class clusters sit at +/- (class_separation/2) along a seeded
// unit axis. An optional rule cluster sits off to the side along a second,
// orthogonal axis with alternating labels, giving the rule-injection
// protocol an ambiguous region to relabel. label_noise_fraction flips the
// labels of a seeded subset of non-rule points (planted outliers).
struct MixtureSpec {
  int n = 600;
  int d = 8;
  double class_separation = 4.0;
  double noise_sigma = 1.0;
  double rule_cluster_fraction = 0.0;
  double rule_cluster_distance = 8.0;
  double label_noise_fraction = 0.0;
  std::uint64_t seed = 1;
  std::string id_prefix = "tr";
};

struct MixtureData {
  Dataset dataset;
  Eigen::VectorXd class_axis;  // unit vector between the class means
  Eigen::VectorXd rule_axis;   // unit vector toward the rule cluster
  std::vector<std::string> rule_cluster_ids;
  std::vector<std::string> noise_flipped_ids;
};

MixtureData make_mixture(const MixtureSpec& spec);

}  // namespace aide
