#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "aide/influence.hpp"
#include "aide/types.hpp"

namespace aide {

// Cross of influence sign and (training label vs predicted class).
enum class Quadrant { Support, SupportByContrast, Oppose, OpposeByContrast };

const char* quadrant_name(Quadrant q);  // "support", "oppose_by_contrast", ...

struct SelectionConfig {
  double alpha = 0.2;        // weight on |influence|
  double beta = 0.8;         // weight on proximity
  double gamma = 0.5;        // weight on diversity
  double lambda_iqr = 3.0;   // IQR multiplier for the influence filter
  int k = 4;                 // examples per quadrant
  double sim_threshold = 0.95;  // near-duplicate cutoff on mapped similarity
};

struct SelectedMember {
  std::string train_id;
  double influence = 0.0;
  double proximity = 0.0;
};

struct ExplanationSet {
  Quadrant quadrant = Quadrant::Support;
  std::vector<SelectedMember> members;  // in greedy pick order
  double objective_value = 0.0;
};

// Cosine similarity mapped affinely onto [0, 1]: (1 + cos)/2. A zero vector
// is treated as cosine 0, i.e. similarity 0.5.
double mapped_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Proximity P(z, z_t) between a training example and the target, in [0, 1].
double proximity(const Example& z, const Example& z_t);

// Diversity D(E) = 1 - mean pairwise mapped similarity; 1 for a singleton.
double diversity(const std::vector<const Eigen::VectorXd*>& members);
double diversity(const std::vector<Example>& members);

struct IqrFilterResult {
  std::vector<InfluenceRecord> positive_kept;  // score > Q3 + lambda IQR
  std::vector<InfluenceRecord> negative_kept;  // score < Q1 - lambda IQR
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double upper_threshold = 0.0;
  double lower_threshold = 0.0;
  bool fallback = false;  // fewer than 4 records: all nonzero scores kept
};

// Quartiles are taken over all scores together; retention is strict.
IqrFilterResult iqr_filter(const std::vector<InfluenceRecord>& records,
                           double lambda_iqr);

struct QuadrantCandidate {
  std::size_t dataset_index = 0;
  std::string train_id;
  double influence = 0.0;
};

// Buckets the kept records by (own score sign, label vs predicted class).
// Zero-score records are discarded. Every quadrant is present in the map,
// possibly empty.
std::map<Quadrant, std::vector<QuadrantCandidate>> partition_quadrants(
    const IqrFilterResult& filtered, const Dataset& dataset,
    int predicted_class);

// Greedy maximization of
//   sum_z (alpha |I(z)| + beta P(z, t)) + gamma D(E)
// over candidates of one quadrant. The first pick treats the diversity gain
// as zero; later picks use the marginal change of D. Candidates whose mapped
// similarity to any selected member reaches sim_threshold are skipped. Ties
// go to the lexicographically smaller train_id. objective_value is the full
// objective of the final set.
ExplanationSet greedy_select(Quadrant quadrant,
                             const std::vector<QuadrantCandidate>& candidates,
                             const Dataset& dataset,
                             const Eigen::VectorXd& target_features,
                             const SelectionConfig& config);

// Value of the selection objective for an arbitrary member set (used by the
// greedy routine and by exhaustive-search oracles).
double selection_objective(const std::vector<QuadrantCandidate>& members,
                           const Dataset& dataset,
                           const Eigen::VectorXd& target_features,
                           const SelectionConfig& config);

struct SelectionOutcome {
  std::map<Quadrant, ExplanationSet> sets;
  int predicted_class = 0;
  double predicted_probability = 0.0;
  double iqr_upper_threshold = 0.0;
  double iqr_lower_threshold = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  bool iqr_fallback = false;
};

// Full pipeline for one target: influence of every training example, IQR
// filtering, quadrant partition, and greedy selection per quadrant.
SelectionOutcome select_explanations(const ModelParams& params,
                                     const HessianOperator& hessian,
                                     const Dataset& dataset,
                                     const Example& target,
                                     const SelectionConfig& config,
                                     int workers = 1);

}  // namespace aide
