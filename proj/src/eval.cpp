#include "aide/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "aide/error.hpp"
#include "aide/intents.hpp"
#include "aide/model.hpp"
#include "aide/parallel.hpp"
#include "aide/stats.hpp"

namespace aide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost assignment of every row to a distinct column (rows <= cols),
// classic potential/augmenting-path formulation.
double assignment_min_cost(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    if (match[j] != 0) {
      total += cost(match[j] - 1, j - 1);
    }
  }
  return total;
}

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

double mean_log_likelihood(const ModelParams& model, const Dataset& dataset,
                           const std::vector<std::size_t>& indices) {
  if (indices.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i : indices) {
    total -= loss(model, dataset[i]);
  }
  return total / static_cast<double>(indices.size());
}

double mean_forced_probability(const ModelParams& model, const Dataset& dataset,
                               const std::vector<std::size_t>& indices,
                               int forced_label) {
  if (indices.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i : indices) {
    const double p1 = predict_proba(model, dataset[i].features);
    total += forced_label == 1 ? p1 : 1.0 - p1;
  }
  return total / static_cast<double>(indices.size());
}

}  // namespace

bool RuleSpec::satisfies(const Eigen::VectorXd& x) const {
  if (predicate == Predicate::halfspace) {
    if (weights.size() != x.size()) {
      throw InvalidInput("rule weight dimension mismatch");
    }
    return weights.dot(x) > offset;
  }
  if (coordinate < 0 || coordinate >= x.size()) {
    throw InvalidInput("rule coordinate out of range");
  }
  return x(coordinate) > offset;
}

double halfspace_offset_for_count(const Dataset& dataset,
                                  const Eigen::VectorXd& direction,
                                  std::size_t count) {
  if (count == 0 || count >= dataset.size()) {
    throw InvalidInput("rule count must be in [1, n-1]");
  }
  std::vector<double> projections;
  projections.reserve(dataset.size());
  for (const Example& ex : dataset.examples()) {
    projections.push_back(direction.dot(ex.features));
  }
  std::sort(projections.begin(), projections.end());
  // Points strictly above the offset satisfy the rule.
  const double hi = projections[dataset.size() - count];
  const double lo = projections[dataset.size() - count - 1];
  return 0.5 * (lo + hi);
}

RuleInjectionResult inject_rule(const Dataset& dataset, const RuleSpec& rule,
                                std::uint64_t seed) {
  if (rule.forced_label != 0 && rule.forced_label != 1) {
    throw InvalidInput("forced_label must be 0 or 1");
  }
  if (rule.breaker_fraction < 0.0 || rule.breaker_fraction >= 0.5) {
    throw InvalidInput("breaker_fraction must lie in [0, 0.5)");
  }

  std::vector<std::size_t> satisfying;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (rule.satisfies(dataset[i].features)) {
      satisfying.push_back(i);
    }
  }
  if (satisfying.size() < 20) {
    throw InvalidInput("rule condition is satisfied by only " +
                       std::to_string(satisfying.size()) +
                       " examples; need at least 20");
  }

  const auto n_breakers = static_cast<std::size_t>(std::llround(
      rule.breaker_fraction * static_cast<double>(satisfying.size())));
  std::vector<std::size_t> order = satisfying;
  std::mt19937_64 rng(mix_seed(seed, 101));
  seeded_shuffle(order, rng);

  std::unordered_set<std::size_t> breaker_set(order.begin(),
                                              order.begin() + n_breakers);
  std::vector<Example> relabeled = dataset.examples();

  RuleInjectionResult result;
  result.rule = rule;
  for (std::size_t i = 0; i < relabeled.size(); ++i) {
    if (!rule.satisfies(relabeled[i].features)) {
      result.untouched_ids.push_back(relabeled[i].id);
      continue;
    }
    if (breaker_set.count(i) > 0) {
      relabeled[i].label = 1 - rule.forced_label;
      result.breaker_ids.push_back(relabeled[i].id);
    } else {
      relabeled[i].label = rule.forced_label;
      result.follower_ids.push_back(relabeled[i].id);
    }
  }
  std::sort(result.follower_ids.begin(), result.follower_ids.end());
  std::sort(result.breaker_ids.begin(), result.breaker_ids.end());
  result.dataset = Dataset(std::move(relabeled));
  return result;
}

RuleLearnedReport rule_learned_check(const ModelParams& model_before,
                                     const ModelParams& model_after,
                                     const RuleInjectionResult& result,
                                     const Dataset& holdout) {
  std::vector<std::size_t> intervened, untouched;
  for (std::size_t i = 0; i < result.dataset.size(); ++i) {
    if (result.rule.satisfies(result.dataset[i].features)) {
      intervened.push_back(i);
    } else {
      untouched.push_back(i);
    }
  }

  RuleLearnedReport report;
  report.ll_intervened_before =
      mean_log_likelihood(model_before, result.dataset, intervened);
  report.ll_intervened_after =
      mean_log_likelihood(model_after, result.dataset, intervened);
  report.ll_untouched_before =
      mean_log_likelihood(model_before, result.dataset, untouched);
  report.ll_untouched_after =
      mean_log_likelihood(model_after, result.dataset, untouched);

  const int forced = result.rule.forced_label;
  report.prob_forced_intervened_before =
      mean_forced_probability(model_before, result.dataset, intervened, forced);
  report.prob_forced_intervened_after =
      mean_forced_probability(model_after, result.dataset, intervened, forced);
  report.prob_forced_untouched_before =
      mean_forced_probability(model_before, result.dataset, untouched, forced);
  report.prob_forced_untouched_after =
      mean_forced_probability(model_after, result.dataset, untouched, forced);

  std::size_t correct = 0;
  for (const Example& ex : holdout.examples()) {
    if (!result.rule.satisfies(ex.features)) {
      continue;
    }
    ++report.holdout_rule_count;
    const double p = predict_proba(model_after, ex.features);
    if (predicted_class(p) == forced) {
      ++correct;
    }
  }
  report.rule_accuracy =
      report.holdout_rule_count == 0
          ? 0.0
          : static_cast<double>(correct) /
                static_cast<double>(report.holdout_rule_count);
  return report;
}

CorrectnessResult correctness(
    const std::vector<PerTargetExplanation>& explanations,
    const RuleInjectionResult& rule_result) {
  if (explanations.empty()) {
    throw InvalidInput("correctness needs at least one explained target");
  }
  const std::unordered_set<std::string> followers(
      rule_result.follower_ids.begin(), rule_result.follower_ids.end());
  const std::unordered_set<std::string> breakers(
      rule_result.breaker_ids.begin(), rule_result.breaker_ids.end());

  CorrectnessResult result;
  double f_total = 0.0, b_total = 0.0;
  for (const PerTargetExplanation& expl : explanations) {
    if (expl.positive_ids.empty()) {
      ++result.empty_positive_sets;  // contributes 0
    } else {
      std::size_t hits = 0;
      for (const std::string& id : expl.positive_ids) {
        hits += followers.count(id);
      }
      f_total += static_cast<double>(hits) /
                 static_cast<double>(expl.positive_ids.size());
    }
    if (expl.negative_ids.empty()) {
      ++result.empty_negative_sets;
    } else {
      std::size_t hits = 0;
      for (const std::string& id : expl.negative_ids) {
        hits += breakers.count(id);
      }
      b_total += static_cast<double>(hits) /
                 static_cast<double>(expl.negative_ids.size());
    }
  }
  result.cor_f = f_total / static_cast<double>(explanations.size());
  result.cor_b = b_total / static_cast<double>(explanations.size());
  return result;
}

double max_weight_matching_total(const Eigen::MatrixXd& weights) {
  if (weights.rows() == 0 || weights.cols() == 0) {
    return 0.0;
  }
  if (weights.minCoeff() < 0.0) {
    throw InvalidInput("matching weights must be nonnegative");
  }
  // All weights are nonnegative, so matching every element of the smaller
  // side is optimal and zero-padding is harmless.
  const Eigen::MatrixXd cost =
      weights.rows() <= weights.cols()
          ? Eigen::MatrixXd(-weights)
          : Eigen::MatrixXd(-weights.transpose());
  return -assignment_min_cost(cost);
}

double fuzzy_jaccard(const std::vector<std::string>& set_a,
                     const std::vector<std::string>& set_b,
                     const SimilarityOracle& sim, bool* flagged_empty) {
  if (flagged_empty != nullptr) {
    *flagged_empty = false;
  }
  const std::vector<std::string> a = sorted_unique(set_a);
  const std::vector<std::string> b = sorted_unique(set_b);
  if (a.empty() && b.empty()) {
    if (flagged_empty != nullptr) {
      *flagged_empty = true;
    }
    return 1.0;  // convention for two empty explanations
  }
  if (a.empty() || b.empty()) {
    return 0.0;
  }

  Eigen::MatrixXd weights(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double s = sim(a[i], b[j]);
      if (s < 0.0 || s > 1.0 || !std::isfinite(s)) {
        throw InvalidInput("similarity kernel must map into [0, 1]");
      }
      weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  }
  const double matched = max_weight_matching_total(weights);
  const double denom =
      static_cast<double>(a.size()) + static_cast<double>(b.size()) - matched;
  return matched / denom;
}

ContinuityResult continuity_experiment(const ModelParams& params,
                                       const Dataset& dataset,
                                       ContinuityExplainer explainer,
                                       int n_targets, int m_neighbors,
                                       std::uint64_t seed,
                                       const SelectionConfig& config,
                                       int workers) {
  if (n_targets <= 0 || m_neighbors <= 0) {
    throw InvalidInput("continuity needs positive target and neighbor counts");
  }
  const HessianOperator hessian = make_hessian_operator(
      params, dataset, default_hessian_solve(params.theta.size()));

  // Seeded target sample, in draw order.
  std::vector<std::size_t> indices(dataset.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    indices[i] = i;
  }
  std::mt19937_64 rng(mix_seed(seed, 53));
  seeded_shuffle(indices, rng);
  const std::size_t take =
      std::min<std::size_t>(indices.size(), static_cast<std::size_t>(n_targets));
  const std::vector<std::size_t> targets(indices.begin(),
                                         indices.begin() + take);

  std::vector<double> probabilities(dataset.size());
  std::vector<int> predictions(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    probabilities[i] = predict_proba(params, dataset[i].features);
    predictions[i] = predicted_class(probabilities[i]);
  }

  // Work out which examples need an explanation: the targets plus every
  // partner they get paired with.
  struct PairPlan {
    std::size_t a;
    std::size_t b;
    double instance_sim;
    bool similar_group;
  };
  std::vector<PairPlan> plan;
  std::set<std::size_t> need;
  for (std::size_t t : targets) {
    need.insert(t);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      if (j == t || predictions[j] != predictions[t]) {
        continue;
      }
      ranked.emplace_back(
          mapped_similarity(dataset[j].features, dataset[t].features), j);
    }
    auto by_similarity_desc = [&](const auto& lhs, const auto& rhs) {
      if (lhs.first != rhs.first) {
        return lhs.first > rhs.first;
      }
      return dataset[lhs.second].id < dataset[rhs.second].id;
    };
    std::sort(ranked.begin(), ranked.end(), by_similarity_desc);
    const auto m = std::min<std::size_t>(ranked.size(),
                                         static_cast<std::size_t>(m_neighbors));
    for (std::size_t i = 0; i < m; ++i) {
      plan.push_back(PairPlan{t, ranked[i].second, ranked[i].first, true});
      need.insert(ranked[i].second);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto& far = ranked[ranked.size() - 1 - i];
      plan.push_back(PairPlan{t, far.second, far.first, false});
      need.insert(far.second);
    }
  }

  // Explanation id-sets, computed in parallel over per-index slots.
  const std::vector<std::size_t> need_list(need.begin(), need.end());
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < need_list.size(); ++i) {
    slot[need_list[i]] = i;
  }
  std::vector<std::vector<std::string>> explanations(need_list.size());
  parallel_for(need_list.size(), workers, [&](std::size_t i) {
    const std::size_t idx = need_list[i];
    const Example& target = dataset[idx];
    if (explainer == ContinuityExplainer::topk_baseline) {
      const auto records = influence_all(params, hessian, dataset, target);
      explanations[i] = topk_baseline(records, config.k).top_positive;
      return;
    }
    const SelectionOutcome outcome =
        select_explanations(params, hessian, dataset, target, config);
    const Intent intent =
        suggest_intent(outcome.predicted_probability, target.label);
    PredictionMeta meta{target.id, outcome.predicted_class,
                        outcome.predicted_probability, target.label};
    const ExplanationReport report = present(intent, outcome, meta);
    std::vector<std::string> ids;
    for (const auto& [quadrant, set] : report.shown_quadrants) {
      for (const SelectedMember& member : set.members) {
        ids.push_back(member.train_id);
      }
    }
    explanations[i] = sorted_unique(std::move(ids));
  });

  const SimilarityOracle kernel = [&](const std::string& u,
                                      const std::string& v) {
    const Example* eu = dataset.find(u);
    const Example* ev = dataset.find(v);
    if (eu == nullptr || ev == nullptr) {
      throw InvalidInput("continuity kernel saw an unknown id");
    }
    return mapped_similarity(eu->features, ev->features);
  };

  ContinuityResult result;
  std::vector<double> xs, ys;
  double similar_total = 0.0, dissimilar_total = 0.0;
  std::size_t similar_count = 0, dissimilar_count = 0;
  for (const PairPlan& pair : plan) {
    const double fj = fuzzy_jaccard(explanations[slot[pair.a]],
                                    explanations[slot[pair.b]], kernel);
    result.pairs.push_back(ContinuityPair{dataset[pair.a].id, dataset[pair.b].id,
                                          pair.instance_sim, fj});
    xs.push_back(pair.instance_sim);
    ys.push_back(fj);
    if (pair.similar_group) {
      similar_total += fj;
      ++similar_count;
    } else {
      dissimilar_total += fj;
      ++dissimilar_count;
    }
  }
  result.pearson_r = pearson(xs, ys);
  const LinearFit fit = least_squares(xs, ys);
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  result.mean_similar_pairs =
      similar_count == 0 ? 0.0 : similar_total / similar_count;
  result.mean_dissimilar_pairs =
      dissimilar_count == 0 ? 0.0 : dissimilar_total / dissimilar_count;
  return result;
}

DistributionSummary influence_distribution(
    const std::vector<InfluenceRecord>& records, double lambda_iqr, int bins) {
  if (records.empty()) {
    throw InvalidInput("influence_distribution of an empty record set");
  }
  if (bins <= 0) {
    throw InvalidInput("histogram needs at least one bin");
  }
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const InfluenceRecord& r : records) {
    scores.push_back(r.score);
  }
  std::sort(scores.begin(), scores.end());

  DistributionSummary summary;
  summary.total = records.size();
  summary.q1 = quantile_type7(scores, 0.25);
  summary.q3 = quantile_type7(scores, 0.75);
  summary.iqr = summary.q3 - summary.q1;
  summary.upper_threshold = summary.q3 + lambda_iqr * summary.iqr;
  summary.lower_threshold = summary.q1 - lambda_iqr * summary.iqr;

  const double lo = scores.front();
  const double hi = scores.back();
  if (lo == hi) {
    summary.bin_edges = {lo, hi};
    summary.bin_counts = {records.size()};
  } else {
    summary.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) {
      summary.bin_edges[b] = lo + width * b;
    }
    summary.bin_edges[bins] = hi;
    summary.bin_counts.assign(bins, 0);
    for (double s : scores) {
      auto b = static_cast<std::size_t>((s - lo) / width);
      if (b >= static_cast<std::size_t>(bins)) {
        b = bins - 1;
      }
      ++summary.bin_counts[b];
    }
  }

  for (double s : scores) {
    if (s > summary.upper_threshold) {
      ++summary.above_upper;
    } else if (s < summary.lower_threshold) {
      ++summary.below_lower;
    }
  }
  return summary;
}

TopkResult topk_baseline(const std::vector<InfluenceRecord>& records, int k) {
  if (k <= 0) {
    throw InvalidInput("topk_baseline needs k >= 1");
  }
  TopkResult result;
  auto take = std::min<std::size_t>(records.size(), static_cast<std::size_t>(k));
  result.truncated = static_cast<std::size_t>(k) > records.size();

  std::vector<const InfluenceRecord*> ordered;
  ordered.reserve(records.size());
  for (const InfluenceRecord& r : records) {
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const InfluenceRecord* a, const InfluenceRecord* b) {
              if (a->score != b->score) {
                return a->score > b->score;
              }
              return a->train_id < b->train_id;
            });
  for (std::size_t i = 0; i < take; ++i) {
    result.top_positive.push_back(ordered[i]->train_id);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const InfluenceRecord* a, const InfluenceRecord* b) {
              if (a->score != b->score) {
                return a->score < b->score;
              }
              return a->train_id < b->train_id;
            });
  for (std::size_t i = 0; i < take; ++i) {
    result.bottom_negative.push_back(ordered[i]->train_id);
  }
  return result;
}

}  // namespace aide
