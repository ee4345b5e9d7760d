#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aide/influence.hpp"
#include "aide/selection.hpp"
#include "aide/types.hpp"

namespace aide {

// Labeling rule c(x) => y = forced_label over feature space, either a
// halfspace w.x > offset or a single-coordinate threshold x[j] > offset.
struct RuleSpec {
  enum class Predicate { halfspace, coordinate_threshold };

  Predicate predicate = Predicate::halfspace;
  Eigen::VectorXd weights;  // halfspace normal
  int coordinate = 0;       // coordinate_threshold index
  double offset = 0.0;
  int forced_label = 1;
  double breaker_fraction = 0.0;  // in [0, 0.5): breakers stay the minority

  bool satisfies(const Eigen::VectorXd& x) const;
};

// Offset such that exactly `count` dataset examples satisfy the halfspace
// along `direction` (midpoint between the bracketing order statistics).
double halfspace_offset_for_count(const Dataset& dataset,
                                  const Eigen::VectorXd& direction,
                                  std::size_t count);

struct RuleInjectionResult {
  Dataset dataset;  // relabeled copy
  RuleSpec rule;
  std::vector<std::string> follower_ids;   // satisfy c, labeled forced_label
  std::vector<std::string> breaker_ids;    // satisfy c, labeled opposite
  std::vector<std::string> untouched_ids;  // do not satisfy c
};

// Relabels every condition-satisfying example to forced_label, then flips a
// seeded breaker_fraction subset back. Requires >= 20 satisfying examples.
RuleInjectionResult inject_rule(const Dataset& dataset, const RuleSpec& rule,
                                std::uint64_t seed);

// Did the model actually absorb the injected rule? Log-likelihood and
// forced-label probability of intervened vs untouched training points under
// the before/after models, plus after-model accuracy (vs forced_label) on
// condition-satisfying holdout examples.
struct RuleLearnedReport {
  double rule_accuracy = 0.0;
  std::size_t holdout_rule_count = 0;
  double ll_intervened_before = 0.0;
  double ll_intervened_after = 0.0;
  double ll_untouched_before = 0.0;
  double ll_untouched_after = 0.0;
  double prob_forced_intervened_before = 0.0;
  double prob_forced_intervened_after = 0.0;
  double prob_forced_untouched_before = 0.0;
  double prob_forced_untouched_after = 0.0;
};

RuleLearnedReport rule_learned_check(const ModelParams& model_before,
                                     const ModelParams& model_after,
                                     const RuleInjectionResult& result,
                                     const Dataset& holdout);

// One explained target: ids returned as positively / negatively influential.
struct PerTargetExplanation {
  std::string target_id;
  std::vector<std::string> positive_ids;
  std::vector<std::string> negative_ids;
};

struct CorrectnessResult {
  double cor_f = 0.0;  // mean fraction of followers among positive ids
  double cor_b = 0.0;  // mean fraction of breakers among negative ids
  std::size_t empty_positive_sets = 0;  // contribute 0, flagged
  std::size_t empty_negative_sets = 0;
};

// Explainer correctness for rule-satisfying targets. Empty sets contribute
// zero to the mean.
CorrectnessResult correctness(const std::vector<PerTargetExplanation>& explanations,
                              const RuleInjectionResult& rule_result);

// Total weight of a maximum-weight bipartite matching (partial matchings
// allowed; weights must be nonnegative). Exact Hungarian-style assignment.
double max_weight_matching_total(const Eigen::MatrixXd& weights);

using SimilarityOracle =
    std::function<double(const std::string&, const std::string&)>;

// Soft set similarity M / (|A| + |B| - M) where M is the maximum-weight
// matching total over pairwise similarities in [0, 1]. Equals classic
// Jaccard under the 0/1 identity kernel. Two empty sets give 1 (flagged).
double fuzzy_jaccard(const std::vector<std::string>& set_a,
                     const std::vector<std::string>& set_b,
                     const SimilarityOracle& sim, bool* flagged_empty = nullptr);

struct ContinuityPair {
  std::string target_a;
  std::string target_b;
  double instance_similarity = 0.0;     // mapped cosine of the embeddings
  double explanation_similarity = 0.0;  // fuzzy Jaccard of explanation ids
};

enum class ContinuityExplainer { aide_union, topk_baseline };

struct ContinuityResult {
  std::vector<ContinuityPair> pairs;
  double pearson_r = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double mean_similar_pairs = 0.0;     // mean explanation similarity, near pairs
  double mean_dissimilar_pairs = 0.0;  // mean explanation similarity, far pairs
};

// For each of n_targets seeded targets drawn from the dataset, pairs it with
// its m most similar and m most dissimilar co-predicted examples and scores
// explanation overlap with fuzzy Jaccard. AIDE explanations are the union of
// the quadrants shown for the auto-suggested intent; the baseline takes the
// top-k influence ids.
ContinuityResult continuity_experiment(const ModelParams& params,
                                       const Dataset& dataset,
                                       ContinuityExplainer explainer,
                                       int n_targets, int m_neighbors,
                                       std::uint64_t seed,
                                       const SelectionConfig& config = {},
                                       int workers = 1);

struct DistributionSummary {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double upper_threshold = 0.0;  // Q3 + lambda IQR, as used by the filter
  double lower_threshold = 0.0;  // Q1 - lambda IQR
  std::vector<double> bin_edges;          // bins + 1 values
  std::vector<std::size_t> bin_counts;    // sums to total
  std::size_t above_upper = 0;
  std::size_t below_lower = 0;
  std::size_t total = 0;
};

DistributionSummary influence_distribution(
    const std::vector<InfluenceRecord>& records, double lambda_iqr = 3.0,
    int bins = 20);

struct TopkResult {
  std::vector<std::string> top_positive;    // k highest scores
  std::vector<std::string> bottom_negative; // k lowest scores
  bool truncated = false;                   // k exceeded n
};

// Plain influence-ranking explanation; ties break on train_id.
TopkResult topk_baseline(const std::vector<InfluenceRecord>& records, int k);

}  // namespace aide
