#include "aide/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aide/error.hpp"
#include "aide/stats.hpp"

namespace aide {

namespace {

// Mean pairwise mapped similarity, the shared core of diversity.
double mean_pairwise_similarity(const std::vector<const Eigen::VectorXd*>& xs) {
  const std::size_t m = xs.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      total += mapped_similarity(*xs[i], *xs[j]);
    }
  }
  // Ordered pairs double the sum and the count; the mean is unchanged.
  return total * 2.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
}

}  // namespace

const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::Support:
      return "support";
    case Quadrant::SupportByContrast:
      return "support_by_contrast";
    case Quadrant::Oppose:
      return "oppose";
    case Quadrant::OpposeByContrast:
      return "oppose_by_contrast";
  }
  return "unknown";
}

double mapped_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("similarity of vectors with different dimensions");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    return 0.5;  // cosine treated as 0
  }
  double cosine = a.dot(b) / (na * nb);
  cosine = std::clamp(cosine, -1.0, 1.0);
  return 0.5 * (1.0 + cosine);
}

double proximity(const Example& z, const Example& z_t) {
  return mapped_similarity(z.features, z_t.features);
}

double diversity(const std::vector<const Eigen::VectorXd*>& members) {
  if (members.empty()) {
    throw InvalidInput("diversity of an empty set");
  }
  if (members.size() == 1) {
    return 1.0;  // convention: a singleton is maximally diverse
  }
  return 1.0 - mean_pairwise_similarity(members);
}

double diversity(const std::vector<Example>& members) {
  std::vector<const Eigen::VectorXd*> xs;
  xs.reserve(members.size());
  for (const Example& ex : members) {
    xs.push_back(&ex.features);
  }
  return diversity(xs);
}

IqrFilterResult iqr_filter(const std::vector<InfluenceRecord>& records,
                           double lambda_iqr) {
  if (lambda_iqr < 0.0) {
    throw InvalidInput("lambda_iqr must be nonnegative");
  }
  IqrFilterResult result;
  if (records.size() < 4) {
    result.fallback = true;
    for (const InfluenceRecord& r : records) {
      if (r.score > 0.0) {
        result.positive_kept.push_back(r);
      } else if (r.score < 0.0) {
        result.negative_kept.push_back(r);
      }
    }
    return result;
  }

  std::vector<double> scores;
  scores.reserve(records.size());
  for (const InfluenceRecord& r : records) {
    scores.push_back(r.score);
  }
  std::sort(scores.begin(), scores.end());
  result.q1 = quantile_type7(scores, 0.25);
  result.q3 = quantile_type7(scores, 0.75);
  result.iqr = result.q3 - result.q1;
  result.upper_threshold = result.q3 + lambda_iqr * result.iqr;
  result.lower_threshold = result.q1 - lambda_iqr * result.iqr;

  for (const InfluenceRecord& r : records) {
    if (r.score > result.upper_threshold) {
      result.positive_kept.push_back(r);
    } else if (r.score < result.lower_threshold) {
      result.negative_kept.push_back(r);
    }
  }
  return result;
}

std::map<Quadrant, std::vector<QuadrantCandidate>> partition_quadrants(
    const IqrFilterResult& filtered, const Dataset& dataset,
    int predicted_class) {
  if (predicted_class != 0 && predicted_class != 1) {
    throw InvalidInput("predicted_class must be 0 or 1");
  }
  std::map<Quadrant, std::vector<QuadrantCandidate>> quadrants;
  quadrants[Quadrant::Support];
  quadrants[Quadrant::SupportByContrast];
  quadrants[Quadrant::Oppose];
  quadrants[Quadrant::OpposeByContrast];

  auto place = [&](const InfluenceRecord& r) {
    if (r.score == 0.0) {
      return;  // zero influence carries no sign, dropped
    }
    const auto index = dataset.index_of(r.train_id);
    if (!index.has_value()) {
      throw InvalidInput("record references unknown train id '" + r.train_id +
                         "'");
    }
    const bool same_label = dataset[*index].label == predicted_class;
    Quadrant q;
    if (r.score > 0.0) {
      q = same_label ? Quadrant::Support : Quadrant::SupportByContrast;
    } else {
      q = same_label ? Quadrant::OpposeByContrast : Quadrant::Oppose;
    }
    quadrants[q].push_back(QuadrantCandidate{*index, r.train_id, r.score});
  };

  for (const InfluenceRecord& r : filtered.positive_kept) {
    place(r);
  }
  for (const InfluenceRecord& r : filtered.negative_kept) {
    place(r);
  }
  return quadrants;
}

double selection_objective(const std::vector<QuadrantCandidate>& members,
                           const Dataset& dataset,
                           const Eigen::VectorXd& target_features,
                           const SelectionConfig& config) {
  if (members.empty()) {
    return 0.0;
  }
  double total = 0.0;
  std::vector<const Eigen::VectorXd*> xs;
  xs.reserve(members.size());
  for (const QuadrantCandidate& m : members) {
    const Eigen::VectorXd& x = dataset[m.dataset_index].features;
    total += config.alpha * std::abs(m.influence) +
             config.beta * mapped_similarity(x, target_features);
    xs.push_back(&x);
  }
  return total + config.gamma * diversity(xs);
}

ExplanationSet greedy_select(Quadrant quadrant,
                             const std::vector<QuadrantCandidate>& candidates,
                             const Dataset& dataset,
                             const Eigen::VectorXd& target_features,
                             const SelectionConfig& config) {
  if (config.k <= 0) {
    throw InvalidInput("k must be positive");
  }
  ExplanationSet set;
  set.quadrant = quadrant;
  if (candidates.empty()) {
    return set;
  }

  // Per-candidate parts that never change across rounds.
  std::vector<double> prox(candidates.size());
  std::vector<double> base_gain(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    prox[i] = mapped_similarity(dataset[candidates[i].dataset_index].features,
                                target_features);
    base_gain[i] =
        config.alpha * std::abs(candidates[i].influence) + config.beta * prox[i];
  }

  std::vector<bool> used(candidates.size(), false);
  std::vector<std::size_t> picked;
  std::vector<const Eigen::VectorXd*> picked_xs;
  double current_diversity = 0.0;  // of the picked set; unused until size 2

  while (picked.size() < static_cast<std::size_t>(config.k)) {
    std::size_t best = candidates.size();
    double best_gain = -std::numeric_limits<double>::infinity();
    double best_new_diversity = 0.0;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) {
        continue;
      }
      const Eigen::VectorXd& x = dataset[candidates[i].dataset_index].features;
      bool near_duplicate = false;
      for (const Eigen::VectorXd* sel : picked_xs) {
        if (mapped_similarity(x, *sel) >= config.sim_threshold) {
          near_duplicate = true;
          break;
        }
      }
      if (near_duplicate) {
        continue;
      }

      double gain = base_gain[i];
      double new_diversity = 0.0;
      if (!picked.empty()) {
        std::vector<const Eigen::VectorXd*> trial = picked_xs;
        trial.push_back(&x);
        new_diversity = diversity(trial);
        const double old_diversity =
            picked.size() == 1 ? 1.0 : current_diversity;
        gain += config.gamma * (new_diversity - old_diversity);
      }

      const bool better =
          gain > best_gain ||
          (gain == best_gain && best < candidates.size() &&
           candidates[i].train_id < candidates[best].train_id);
      if (better) {
        best = i;
        best_gain = gain;
        best_new_diversity = new_diversity;
      }
    }

    if (best == candidates.size()) {
      break;  // exhausted: everything left is used or a near-duplicate
    }
    used[best] = true;
    picked.push_back(best);
    picked_xs.push_back(&dataset[candidates[best].dataset_index].features);
    if (picked.size() >= 2) {
      current_diversity = best_new_diversity;
    }
  }

  std::vector<QuadrantCandidate> chosen;
  chosen.reserve(picked.size());
  for (std::size_t idx : picked) {
    const QuadrantCandidate& c = candidates[idx];
    chosen.push_back(c);
    set.members.push_back(SelectedMember{
        c.train_id, c.influence,
        mapped_similarity(dataset[c.dataset_index].features, target_features)});
  }
  set.objective_value =
      selection_objective(chosen, dataset, target_features, config);
  return set;
}

SelectionOutcome select_explanations(const ModelParams& params,
                                     const HessianOperator& hessian,
                                     const Dataset& dataset,
                                     const Example& target,
                                     const SelectionConfig& config,
                                     int workers) {
  if (!params.converged) {
    throw InvalidInput("select_explanations requires a converged model");
  }
  SelectionOutcome outcome;
  outcome.predicted_probability = predict_proba(params, target.features);
  outcome.predicted_class = predicted_class(outcome.predicted_probability);

  const std::vector<InfluenceRecord> records =
      influence_all(params, hessian, dataset, target, workers);
  const IqrFilterResult filtered = iqr_filter(records, config.lambda_iqr);
  outcome.q1 = filtered.q1;
  outcome.q3 = filtered.q3;
  outcome.iqr_upper_threshold = filtered.upper_threshold;
  outcome.iqr_lower_threshold = filtered.lower_threshold;
  outcome.iqr_fallback = filtered.fallback;

  const auto quadrants =
      partition_quadrants(filtered, dataset, outcome.predicted_class);
  for (const auto& [quadrant, candidates] : quadrants) {
    outcome.sets[quadrant] =
        greedy_select(quadrant, candidates, dataset, target.features, config);
  }
  return outcome;
}

}  // namespace aide
