#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "aide/model.hpp"
#include "aide/types.hpp"

namespace aide {

enum class SolveMethod { direct_factorization, conjugate_gradient };

struct HessianSolve {
  SolveMethod method = SolveMethod::direct_factorization;
  double damping = 0.0;  // added to the diagonal before solving
  double cg_tolerance = 1e-10;
  int cg_max_iters = 1000;
};

// Direct factorization while it is affordable, conjugate gradient with a
// small damping beyond that.
HessianSolve default_hessian_solve(Eigen::Index p);

struct InfluenceRecord {
  std::string train_id;
  std::string target_id;
  double score = 0.0;
};

// Solves (H + damping I) x = v. Direct solves are exact to machine
// precision; CG stops at ||Ax - v|| <= cg_tolerance ||v||. A matrix that is
// not positive definite after damping raises NumericalError.
Eigen::VectorXd ihvp(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& v,
                     const HessianSolve& solve);

// Reusable inverse-Hessian application: factors once (direct) or keeps the
// damped matrix (CG) so many right-hand sides share the setup cost.
class HessianOperator {
 public:
  HessianOperator(Eigen::MatrixXd hessian, HessianSolve solve);

  Eigen::VectorXd solve(const Eigen::VectorXd& v) const;
  Eigen::Index dim() const { return damped_.rows(); }
  const HessianSolve& config() const { return cfg_; }

 private:
  HessianSolve cfg_;
  Eigen::MatrixXd damped_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

// Convenience: Hessian of (dataset, params) under params.l2_strength.
HessianOperator make_hessian_operator(const ModelParams& params,
                                      const Dataset& dataset,
                                      const HessianSolve& solve);

// Bilinear influence score g(z_t)^T H^{-1} g(z). Symmetric in (z, z_t).
double influence(const ModelParams& params, const HessianOperator& hessian,
                 const Example& z, const Example& z_t);

// Influence of every training example on one target: the shared
// H^{-1} g(z_t) is computed once, then one dot product per example.
// Output order is the dataset order for any worker count.
std::vector<InfluenceRecord> influence_all(const ModelParams& params,
                                           const HessianOperator& hessian,
                                           const Dataset& dataset,
                                           const Example& target,
                                           int workers = 1);

// Leave-one-out oracle: retrains without `train_id` and returns the change
// in the target's loss. The reduced objective keeps the original 1/n
// weighting of each remaining loss term, so the ridge weight is rescaled by
// n/(n-1) relative to the reduced mean. `base` may hold the full-data
// optimum to skip refitting it; retraining warm starts from it.
double exact_influence_loo(const Dataset& dataset, const Example& target,
                           std::string_view train_id, const TrainConfig& config,
                           const ModelParams* base = nullptr);

struct Lemma1Check {
  double lhs = 0.0;  // I(z, z_t)
  double rhs = 0.0;  // -((1-p)/p)^(2 y_t - 1) * I(z, z_t with label flipped)
};

// Evaluates both sides of the label-flip identity relating the influence on
// a target and on its label-flipped counterfactual.
Lemma1Check lemma1_check(const ModelParams& params,
                         const HessianOperator& hessian, const Example& z,
                         const Example& z_t);

}  // namespace aide
