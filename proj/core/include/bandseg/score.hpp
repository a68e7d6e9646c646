#pragma once
// Log-linear segment scoring: Bernoulli, Poisson, and fixed-variance Gaussian
// closed forms, plus the exact density comparison shared by border code.

#include <string>

#include "bandseg/grid.hpp"

namespace bandseg {

enum class ModelKind { Bernoulli, Poisson, Gaussian };

struct ScoreModel {
  ModelKind kind = ModelKind::Bernoulli;
  double sigma2 = 1.0;  // Gaussian only

  static ScoreModel bernoulli() { return {ModelKind::Bernoulli, 1.0}; }
  static ScoreModel poisson() { return {ModelKind::Poisson, 1.0}; }
  static ScoreModel gaussian(double sigma2 = 1.0);
  friend bool operator==(const ScoreModel&, const ScoreModel&) = default;
};

const char* model_name(ModelKind kind);

/// Mean value of a non-empty segment.
double density(const SegmentStats& stats);

/// Three-way density comparison: exact cross-multiplication when both sums
/// are exactly representable integers, otherwise within |eps| = 1e-12.
/// Returns -1, 0, or +1.
int compare_density(const SegmentStats& a, const SegmentStats& b);

/// Maximum log-likelihood of the segment under the model, additive constants
/// independent of the segmentation dropped, 0*log 0 = 0. Empty segments
/// score 0.
double segment_score(const SegmentStats& stats, const ScoreModel& model);

/// Checks the model's value-domain requirement against every active entry.
bool model_compatible(const ValueGrid& grid, const ScoreModel& model,
                      std::string* why = nullptr);

}  // namespace bandseg
