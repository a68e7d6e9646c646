#include "bandseg/segmentation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Segmentation assemble(const BorderChain& chain, const ScoreModel& model,
                      const std::vector<std::size_t>& bounds) {
  Segmentation seg;
  seg.bands.reserve(bounds.size() - 1);
  double total = 0.0;
  for (std::size_t t = 1; t < bounds.size(); ++t) {
    Band b;
    b.begin = bounds[t - 1];
    b.end = bounds[t];
    b.stats = chain.range_stats(b.begin, b.end);
    b.score = segment_score(b.stats, model);
    seg.bands.push_back(b);
  }
  // Right-fold matches the DP's nested-sum association exactly.
  for (std::size_t t = seg.bands.size(); t-- > 0;) total = seg.bands[t].score + total;
  seg.total_score = total;
  seg.effective_k = 0;
  for (const Band& b : seg.bands)
    if (!b.empty()) ++seg.effective_k;
  return seg;
}

}  // namespace

Segmentation segment_dp(const BorderChain& chain, int k, const ScoreModel& model) {
  if (chain.empty()) throw std::invalid_argument("cannot segment an empty chain");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t L = chain.size();
  const std::size_t K = static_cast<std::size_t>(k);

  auto seg_score = [&](std::size_t i, std::size_t j) {
    return i == j ? 0.0 : segment_score(chain.range_stats(i, j), model);
  };

  // B[t][i]: best score for segments (i..L] split into t bands.
  std::vector<std::vector<double>> B(K + 1, std::vector<double>(L + 1, kNegInf));
  B[0][L] = 0.0;
  for (std::size_t t = 1; t <= K; ++t)
    for (std::size_t i = 0; i <= L; ++i) {
      double best = kNegInf;
      for (std::size_t j = i; j <= L; ++j) {
        if (B[t - 1][j] == kNegInf) continue;
        const double v = seg_score(i, j) + B[t - 1][j];
        if (v > best) best = v;
      }
      B[t][i] = best;
    }

  // Lexicographically smallest boundary vector among the optima, built left
  // to right; candidate values reuse the recurrence's own additions so the
  // equality tests are exact.
  std::vector<std::size_t> bounds(K + 1, 0);
  bounds[K] = L;
  std::size_t prev = 0;
  for (std::size_t t = 1; t < K; ++t) {
    const std::size_t remaining = K - t;
    for (std::size_t e = prev; e <= L; ++e) {
      if (B[remaining][e] == kNegInf) continue;
      if (seg_score(prev, e) + B[remaining][e] == B[remaining + 1][prev]) {
        bounds[t] = e;
        prev = e;
        break;
      }
    }
  }
  return assemble(chain, model, bounds);
}

Segmentation brute_force_segmentation(const BorderChain& chain, int k, const ScoreModel& model) {
  if (chain.empty()) throw std::invalid_argument("cannot segment an empty chain");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t L = chain.size();
  const std::size_t K = static_cast<std::size_t>(k);

  // Number of weak-monotone boundary vectors is C(L+K-1, K-1).
  double combos = 1.0;
  for (std::size_t i = 1; i < K; ++i) combos *= static_cast<double>(L + i) / i;
  if (combos > 2e6) throw std::runtime_error("instance too large for exhaustive segmentation");

  auto seg_score = [&](std::size_t i, std::size_t j) {
    return i == j ? 0.0 : segment_score(chain.range_stats(i, j), model);
  };

  std::vector<std::size_t> bounds(K + 1, 0), best_bounds;
  bounds[K] = L;
  double best = kNegInf;
  // Enumerate boundary vectors in lexicographic order; keep the first among
  // score ties.
  auto rec = [&](auto&& self, std::size_t t) -> void {
    if (t == K) {
      double total = 0.0;
      for (std::size_t s = K; s-- > 0;) total = seg_score(bounds[s], bounds[s + 1]) + total;
      if (total > best) {
        best = total;
        best_bounds = bounds;
      }
      return;
    }
    for (std::size_t e = bounds[t - 1]; e <= L; ++e) {
      bounds[t] = e;
      self(self, t + 1);
    }
  };
  rec(rec, 1);
  return assemble(chain, model, best_bounds);
}

std::vector<Staircase> bands_to_staircases(const BorderChain& chain, const Segmentation& seg) {
  std::vector<Staircase> out;
  out.reserve(seg.bands.size() + 1);
  out.push_back(chain.base());
  for (const Band& b : seg.bands)
    out.push_back(b.empty() ? out.back() : chain.upper(b.end - 1));
  return out;
}

}  // namespace bandseg
