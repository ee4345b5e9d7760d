#include "aide/synth.hpp"

#include <cmath>
#include <random>

#include "aide/error.hpp"
#include "aide/stats.hpp"

namespace aide {

namespace {

Eigen::VectorXd random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d);
  do {
    for (int i = 0; i < d; ++i) {
      v(i) = normal(rng);
    }
  } while (v.norm() < 1e-9);
  return v / v.norm();
}

std::string padded_id(const std::string& prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", i);
  return prefix + buf;
}

}  // namespace

MixtureData make_mixture(const MixtureSpec& spec) {
  if (spec.n < 4 || spec.d < 2) {
    throw InvalidInput("mixture needs n >= 4 and d >= 2");
  }
  if (spec.rule_cluster_fraction < 0.0 || spec.rule_cluster_fraction >= 1.0 ||
      spec.label_noise_fraction < 0.0 || spec.label_noise_fraction >= 1.0) {
    throw InvalidInput("mixture fractions must lie in [0, 1)");
  }

  std::mt19937_64 rng(mix_seed(spec.seed, 17));
  std::normal_distribution<double> normal(0.0, 1.0);

  MixtureData data;
  data.class_axis = random_unit_vector(spec.d, rng);
  // Second axis orthogonal to the class axis so the rule cluster carries no
  // class signal of its own.
  Eigen::VectorXd raw = random_unit_vector(spec.d, rng);
  raw -= raw.dot(data.class_axis) * data.class_axis;
  if (raw.norm() < 1e-9) {
    raw = Eigen::VectorXd::Unit(spec.d, 0) -
          data.class_axis(0) * data.class_axis;
  }
  data.rule_axis = raw / raw.norm();

  const int n_rule =
      static_cast<int>(std::llround(spec.rule_cluster_fraction * spec.n));
  const Eigen::VectorXd mean0 = -0.5 * spec.class_separation * data.class_axis;
  const Eigen::VectorXd mean1 = 0.5 * spec.class_separation * data.class_axis;
  const Eigen::VectorXd mean_rule = spec.rule_cluster_distance * data.rule_axis;

  std::vector<Example> examples;
  examples.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    Example ex;
    ex.id = padded_id(spec.id_prefix, i);
    Eigen::VectorXd noise(spec.d);
    for (int j = 0; j < spec.d; ++j) {
      noise(j) = spec.noise_sigma * normal(rng);
    }
    if (i < n_rule) {
      ex.label = i % 2;  // ambiguous region: alternating labels
      ex.features = mean_rule + noise;
      data.rule_cluster_ids.push_back(ex.id);
    } else {
      ex.label = i % 2;
      ex.features = (ex.label == 0 ? mean0 : mean1) + noise;
    }
    examples.push_back(std::move(ex));
  }

  // Planted outliers: flip the labels of a seeded subset of non-rule points.
  if (spec.label_noise_fraction > 0.0) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = static_cast<std::size_t>(n_rule); i < examples.size();
         ++i) {
      eligible.push_back(i);
    }
    std::mt19937_64 noise_rng(mix_seed(spec.seed, 31));
    seeded_shuffle(eligible, noise_rng);
    const auto flips = static_cast<std::size_t>(
        std::llround(spec.label_noise_fraction *
                     static_cast<double>(eligible.size())));
    for (std::size_t i = 0; i < flips && i < eligible.size(); ++i) {
      Example& ex = examples[eligible[i]];
      ex.label = 1 - ex.label;
      data.noise_flipped_ids.push_back(ex.id);
    }
  }

  data.dataset = Dataset(std::move(examples));
  return data;
}

}  // namespace aide
