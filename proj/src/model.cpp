#include "aide/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "aide/error.hpp"

namespace aide {

namespace {

double stable_sigmoid(double score) {
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

double clamp_probability(double p, double clamp) {
  return std::min(1.0 - clamp, std::max(clamp, p));
}

double affine_score(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
  const Eigen::Index d = theta.size() - 1;
  if (x.size() != d) {
    throw InvalidInput("feature dimension " + std::to_string(x.size()) +
                       " does not match model dimension " + std::to_string(d));
  }
  return theta.head(d).dot(x) + theta(d);
}

// Gradient of the objective: (1/n) sum (p_i - y_i)[x_i; 1] + l2 [w; 0].
Eigen::VectorXd objective_gradient(const Eigen::VectorXd& theta,
                                   const Dataset& dataset, double l2,
                                   double clamp) {
  const Eigen::Index p = theta.size();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
  for (const Example& ex : dataset.examples()) {
    const double prob =
        clamp_probability(stable_sigmoid(affine_score(theta, ex.features)), clamp);
    const double residual = prob - static_cast<double>(ex.label);
    grad.head(p - 1) += residual * ex.features;
    grad(p - 1) += residual;
  }
  grad /= static_cast<double>(dataset.size());
  grad.head(p - 1) += l2 * theta.head(p - 1);
  return grad;
}

double objective_at(const Eigen::VectorXd& theta, const Dataset& dataset,
                    double l2, double clamp) {
  double total = 0.0;
  for (const Example& ex : dataset.examples()) {
    const double prob =
        clamp_probability(stable_sigmoid(affine_score(theta, ex.features)), clamp);
    const double y = static_cast<double>(ex.label);
    total += -(y * std::log(prob) + (1.0 - y) * std::log(1.0 - prob));
  }
  total /= static_cast<double>(dataset.size());
  total += 0.5 * l2 * theta.head(theta.size() - 1).squaredNorm();
  return total;
}

Eigen::MatrixXd hessian_at(const Eigen::VectorXd& theta, const Dataset& dataset,
                           double l2, double clamp) {
  const Eigen::Index p = theta.size();
  Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd aug(p);
  for (const Example& ex : dataset.examples()) {
    const double prob =
        clamp_probability(stable_sigmoid(affine_score(theta, ex.features)), clamp);
    aug.head(p - 1) = ex.features;
    aug(p - 1) = 1.0;
    hessian.noalias() += (prob * (1.0 - prob)) * (aug * aug.transpose());
  }
  hessian /= static_cast<double>(dataset.size());
  for (Eigen::Index i = 0; i + 1 < p; ++i) {
    hessian(i, i) += l2;  // bias stays unregularized
  }
  return hessian;
}

}  // namespace

Dataset::Dataset(std::vector<Example> examples) : examples_(std::move(examples)) {
  if (!examples_.empty()) {
    dim_ = examples_.front().features.size();
  }
  index_.reserve(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const Example& ex = examples_[i];
    if (ex.features.size() != dim_) {
      throw InvalidInput("example '" + ex.id + "' has dimension " +
                         std::to_string(ex.features.size()) + ", expected " +
                         std::to_string(dim_));
    }
    if (ex.label != 0 && ex.label != 1) {
      throw InvalidInput("example '" + ex.id + "' has label " +
                         std::to_string(ex.label) + ", expected 0 or 1");
    }
    if (!index_.emplace(ex.id, i).second) {
      throw InvalidInput("duplicate example id '" + ex.id + "'");
    }
  }
}

const Example* Dataset::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &examples_[it->second];
}

std::optional<std::size_t> Dataset::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void Dataset::require_trainable() const {
  if (size() < 2) {
    throw InvalidInput("training needs at least 2 examples");
  }
  bool has0 = false, has1 = false;
  for (const Example& ex : examples_) {
    (ex.label == 0 ? has0 : has1) = true;
  }
  if (!has0 || !has1) {
    throw InvalidInput("training needs both labels present");
  }
}

ModelParams train(const Dataset& dataset, const TrainConfig& config,
                  const Eigen::VectorXd* warm_start) {
  dataset.require_trainable();
  if (config.l2_strength <= 0.0) {
    throw InvalidInput("train requires l2_strength > 0");
  }
  if (config.max_iterations <= 0 || config.gradient_tolerance <= 0.0) {
    throw InvalidInput("train requires positive iteration budget and tolerance");
  }
  if (config.probability_clamp <= 0.0 || config.probability_clamp >= 0.5) {
    throw InvalidInput("probability_clamp must lie in (0, 0.5)");
  }

  const Eigen::Index p = dataset.dim() + 1;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr) {
    if (warm_start->size() != p) {
      throw InvalidInput("warm start dimension mismatch");
    }
    theta = *warm_start;
  }

  const double l2 = config.l2_strength;
  const double clamp = config.probability_clamp;
  double current = objective_at(theta, dataset, l2, clamp);
  bool converged = false;
  double grad_norm = 0.0;

  for (int iter = 0; iter <= config.max_iterations; ++iter) {
    const Eigen::VectorXd grad = objective_gradient(theta, dataset, l2, clamp);
    grad_norm = grad.norm();
    if (grad_norm <= config.gradient_tolerance) {
      converged = true;
      break;
    }
    if (iter == config.max_iterations) {
      break;
    }
    const Eigen::MatrixXd hessian = hessian_at(theta, dataset, l2, clamp);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = ldlt.solve(-grad);
    } else {
      step = -grad;  // curvature unusable, fall back to steepest descent
    }
    // Halve the step until the objective decreases.
    double scale = 1.0;
    double next = objective_at(theta + scale * step, dataset, l2, clamp);
    while (next > current && scale > 1e-12) {
      scale *= 0.5;
      next = objective_at(theta + scale * step, dataset, l2, clamp);
    }
    if (next > current) {
      break;  // no decrease along the Newton direction; report as-is
    }
    theta += scale * step;
    current = next;
  }

  ModelParams params;
  params.theta = std::move(theta);
  params.l2_strength = l2;
  params.converged = converged;
  params.final_objective = current;
  params.final_gradient_norm = grad_norm;
  return params;
}

double predict_proba(const ModelParams& params, const Eigen::VectorXd& features,
                     double clamp) {
  return clamp_probability(
      stable_sigmoid(affine_score(params.theta, features)), clamp);
}

double loss(const ModelParams& params, const Example& example, double clamp) {
  const double p = predict_proba(params, example.features, clamp);
  const double y = static_cast<double>(example.label);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

Eigen::VectorXd loss_gradient(const ModelParams& params, const Example& example,
                              double clamp) {
  const double p = predict_proba(params, example.features, clamp);
  const double residual = p - static_cast<double>(example.label);
  const Eigen::Index d = example.features.size();
  Eigen::VectorXd grad(d + 1);
  grad.head(d) = residual * example.features;
  grad(d) = residual;
  return grad;
}

double objective(const ModelParams& params, const Dataset& dataset,
                 double l2_strength, double clamp) {
  if (dataset.empty()) {
    throw InvalidInput("objective of an empty dataset");
  }
  return objective_at(params.theta, dataset, l2_strength, clamp);
}

Eigen::MatrixXd objective_hessian(const ModelParams& params,
                                  const Dataset& dataset, double l2_strength,
                                  double clamp) {
  if (dataset.empty()) {
    throw InvalidInput("hessian of an empty dataset");
  }
  if (dataset.dim() + 1 != params.theta.size()) {
    throw InvalidInput("dataset dimension does not match model");
  }
  return hessian_at(params.theta, dataset, l2_strength, clamp);
}

double loss_prob_derivative(const ModelParams& params, const Example& example,
                            double clamp) {
  const double p = predict_proba(params, example.features, clamp);
  return (p - static_cast<double>(example.label)) / (p * (1.0 - p));
}

}  // namespace aide
