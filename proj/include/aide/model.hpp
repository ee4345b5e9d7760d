#pragma once

#include <Eigen/Dense>

#include "aide/types.hpp"

namespace aide {

inline constexpr double kDefaultProbabilityClamp = 1e-7;

// Fits the L2-regularized logistic model by damped Newton iterations
// (step halving until the objective decreases). The bias coordinate is
// excluded from regularization. l2_strength must be positive so the
// Hessian is positive definite. An optional warm start seeds theta.
ModelParams train(const Dataset& dataset, const TrainConfig& config,
                  const Eigen::VectorXd* warm_start = nullptr);

// Sigmoid of the affine score theta_w . x + bias, clamped to
// [clamp, 1 - clamp].
double predict_proba(const ModelParams& params, const Eigen::VectorXd& features,
                     double clamp = kDefaultProbabilityClamp);

inline int predicted_class(double probability) {
  return probability >= 0.5 ? 1 : 0;
}

// Logistic loss -(y log p + (1-y) log(1-p)) on the clamped probability.
double loss(const ModelParams& params, const Example& example,
            double clamp = kDefaultProbabilityClamp);

// Per-example loss gradient g(z) = (p - y) [x; 1], length d + 1.
Eigen::VectorXd loss_gradient(const ModelParams& params, const Example& example,
                              double clamp = kDefaultProbabilityClamp);

// Mean training loss plus the ridge term (bias excluded).
double objective(const ModelParams& params, const Dataset& dataset,
                 double l2_strength, double clamp = kDefaultProbabilityClamp);

// Hessian of the objective at theta:
//   (1/n) sum p(1-p) [x;1][x;1]^T + l2 * diag(1,...,1,0).
Eigen::MatrixXd objective_hessian(const ModelParams& params,
                                  const Dataset& dataset, double l2_strength,
                                  double clamp = kDefaultProbabilityClamp);

// Derivative of the logistic loss with respect to the predicted
// probability: h(z) = (p - y) / (p (1 - p)).
double loss_prob_derivative(const ModelParams& params, const Example& example,
                            double clamp = kDefaultProbabilityClamp);

}  // namespace aide
