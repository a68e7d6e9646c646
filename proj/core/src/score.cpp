#include "bandseg/score.hpp"

#include <cmath>
#include <stdexcept>

namespace bandseg {

namespace {

constexpr double kDensityEps = 1e-12;
constexpr double kMaxExactInt = 9.007199254740992e15;  // 2^53

bool exact_int(double x) { return std::abs(x) <= kMaxExactInt && x == std::floor(x); }

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

ScoreModel ScoreModel::gaussian(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("gaussian variance must be positive");
  return {ModelKind::Gaussian, sigma2};
}

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Bernoulli: return "bernoulli";
    case ModelKind::Poisson: return "poisson";
    case ModelKind::Gaussian: return "gaussian";
  }
  return "?";
}

double density(const SegmentStats& stats) {
  if (stats.count <= 0) throw std::invalid_argument("empty segment has no density");
  return stats.sum / static_cast<double>(stats.count);
}

int compare_density(const SegmentStats& a, const SegmentStats& b) {
  if (a.count <= 0 || b.count <= 0)
    throw std::invalid_argument("empty segment has no density");
  if (exact_int(a.sum) && exact_int(b.sum)) {
    const __int128 lhs = static_cast<__int128>(std::llround(a.sum)) * b.count;
    const __int128 rhs = static_cast<__int128>(std::llround(b.sum)) * a.count;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }
  const double da = density(a);
  const double db = density(b);
  if (std::abs(da - db) <= kDensityEps) return 0;
  return da < db ? -1 : 1;
}

double segment_score(const SegmentStats& stats, const ScoreModel& model) {
  if (stats.count == 0) return 0.0;
  if (stats.count < 0) throw std::invalid_argument("negative segment count");
  const double n = static_cast<double>(stats.count);
  switch (model.kind) {
    case ModelKind::Bernoulli: {
      if (stats.sum < 0.0 || stats.sum > n)
        throw std::invalid_argument("bernoulli model requires values in {0,1}");
      const double p = stats.sum / n;
      return n * (xlogx(p) + xlogx(1.0 - p));
    }
    case ModelKind::Poisson: {
      if (stats.sum < 0.0)
        throw std::invalid_argument("poisson model requires non-negative values");
      const double p = stats.sum / n;
      return n * xlogx(p) - stats.sum;
    }
    case ModelKind::Gaussian: {
      const double sse = std::max(0.0, stats.sum_sq - stats.sum * stats.sum / n);
      return -sse / (2.0 * model.sigma2);
    }
  }
  throw std::logic_error("unknown model kind");
}

bool model_compatible(const ValueGrid& grid, const ScoreModel& model, std::string* why) {
  if (model.kind == ModelKind::Gaussian) return true;
  for (const Entry& e : grid.active_entries()) {
    const double v = grid.value(e);
    if (model.kind == ModelKind::Bernoulli && v != 0.0 && v != 1.0) {
      if (why) *why = "bernoulli model requires values in {0,1}";
      return false;
    }
    if (model.kind == ModelKind::Poisson && v < 0.0) {
      if (why) *why = "poisson model requires non-negative values";
      return false;
    }
  }
  return true;
}

}  // namespace bandseg
