#include "aide/influence.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <string>
#include <utility>

#include "aide/error.hpp"
#include "aide/parallel.hpp"

namespace aide {

namespace {

void check_symmetric(const Eigen::MatrixXd& hessian) {
  if (hessian.rows() != hessian.cols()) {
    throw InvalidInput("hessian must be square");
  }
  const double scale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
  const double asym = (hessian - hessian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw InvalidInput("hessian must be symmetric");
  }
}

Eigen::MatrixXd damped_copy(const Eigen::MatrixXd& hessian, double damping) {
  Eigen::MatrixXd damped = hessian;
  if (damping != 0.0) {
    damped.diagonal().array() += damping;
  }
  return damped;
}

Eigen::VectorXd cg_solve(const Eigen::MatrixXd& damped, const Eigen::VectorXd& v,
                         const HessianSolve& cfg) {
  Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(cfg.cg_tolerance);
  cg.setMaxIterations(cfg.cg_max_iters);
  cg.compute(damped);
  const Eigen::VectorXd x = cg.solve(v);
  if (cg.info() != Eigen::Success) {
    throw NumericalError(
        "conjugate gradient did not reach tolerance " +
        std::to_string(cfg.cg_tolerance) + " within " +
        std::to_string(cfg.cg_max_iters) + " iterations");
  }
  return x;
}

}  // namespace

HessianSolve default_hessian_solve(Eigen::Index p) {
  HessianSolve solve;
  if (p > 2000) {
    solve.method = SolveMethod::conjugate_gradient;
    solve.damping = 1e-4;
  }
  return solve;
}

Eigen::VectorXd ihvp(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& v,
                     const HessianSolve& solve) {
  return HessianOperator(hessian, solve).solve(v);
}

HessianOperator::HessianOperator(Eigen::MatrixXd hessian, HessianSolve solve)
    : cfg_(solve) {
  check_symmetric(hessian);
  if (cfg_.damping < 0.0) {
    throw InvalidInput("damping must be nonnegative");
  }
  damped_ = damped_copy(hessian, cfg_.damping);
  if (cfg_.method == SolveMethod::direct_factorization) {
    ldlt_.compute(damped_);
    if (ldlt_.info() != Eigen::Success || !ldlt_.isPositive() ||
        ldlt_.vectorD().minCoeff() <= 0.0) {
      throw NumericalError(
          "hessian is not positive definite after damping; direct solve refused");
    }
  }
}

Eigen::VectorXd HessianOperator::solve(const Eigen::VectorXd& v) const {
  if (v.size() != damped_.rows()) {
    throw InvalidInput("ihvp right-hand side dimension mismatch");
  }
  if (cfg_.method == SolveMethod::direct_factorization) {
    return ldlt_.solve(v);
  }
  return cg_solve(damped_, v, cfg_);
}

HessianOperator make_hessian_operator(const ModelParams& params,
                                      const Dataset& dataset,
                                      const HessianSolve& solve) {
  return HessianOperator(objective_hessian(params, dataset, params.l2_strength),
                         solve);
}

double influence(const ModelParams& params, const HessianOperator& hessian,
                 const Example& z, const Example& z_t) {
  const Eigen::VectorXd target_grad = loss_gradient(params, z_t);
  return hessian.solve(target_grad).dot(loss_gradient(params, z));
}

std::vector<InfluenceRecord> influence_all(const ModelParams& params,
                                           const HessianOperator& hessian,
                                           const Dataset& dataset,
                                           const Example& target, int workers) {
  const Eigen::VectorXd shared = hessian.solve(loss_gradient(params, target));
  std::vector<InfluenceRecord> records(dataset.size());
  parallel_for(dataset.size(), workers, [&](std::size_t i) {
    const Example& ex = dataset[i];
    records[i] = InfluenceRecord{ex.id, target.id,
                                 shared.dot(loss_gradient(params, ex))};
  });
  return records;
}

double exact_influence_loo(const Dataset& dataset, const Example& target,
                           std::string_view train_id, const TrainConfig& config,
                           const ModelParams* base) {
  if (dataset.size() < 3) {
    throw InvalidInput("leave-one-out needs at least 3 examples");
  }
  const auto removed = dataset.index_of(train_id);
  if (!removed.has_value()) {
    throw InvalidInput("unknown train id '" + std::string(train_id) + "'");
  }

  ModelParams full;
  if (base != nullptr) {
    full = *base;
  } else {
    full = train(dataset, config);
    if (!full.converged) {
      throw NumericalError("full-data training did not converge");
    }
  }

  std::vector<Example> reduced;
  reduced.reserve(dataset.size() - 1);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (i != *removed) {
      reduced.push_back(dataset[i]);
    }
  }
  const double n = static_cast<double>(dataset.size());
  TrainConfig reduced_config = config;
  reduced_config.l2_strength = config.l2_strength * n / (n - 1.0);

  const ModelParams retrained =
      train(Dataset(std::move(reduced)), reduced_config, &full.theta);
  if (!retrained.converged) {
    throw NumericalError("leave-one-out retraining did not converge for '" +
                         std::string(train_id) + "'");
  }
  return loss(retrained, target, config.probability_clamp) -
         loss(full, target, config.probability_clamp);
}

Lemma1Check lemma1_check(const ModelParams& params,
                         const HessianOperator& hessian, const Example& z,
                         const Example& z_t) {
  Example flipped = z_t;
  flipped.label = 1 - z_t.label;

  const double p = predict_proba(params, z_t.features);
  const double odds = (1.0 - p) / p;
  const double exponent = 2.0 * static_cast<double>(z_t.label) - 1.0;

  Lemma1Check check;
  check.lhs = influence(params, hessian, z, z_t);
  check.rhs = -std::pow(odds, exponent) * influence(params, hessian, z, flipped);
  return check;
}

}  // namespace aide
