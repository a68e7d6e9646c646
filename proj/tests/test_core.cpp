#include <doctest.h>

#include <cmath>

#include "bandseg/exact.hpp"
#include "bandseg/grid.hpp"
#include "bandseg/rng.hpp"
#include "bandseg/score.hpp"

using namespace bandseg;

namespace {

// Log-likelihood at a fixed natural parameter r, the quantity the closed
// forms take the supremum of.
double score_at(const SegmentStats& s, const ScoreModel& m, double r) {
  const double n = static_cast<double>(s.count);
  const double mean = s.sum / n;
  switch (m.kind) {
    case ModelKind::Bernoulli:
      return n * (-std::log1p(std::exp(r)) + r * mean);
    case ModelKind::Poisson:
      return n * (-std::exp(r) + r * mean);
    case ModelKind::Gaussian:
      return n * (-r * r * m.sigma2 / 2.0 + r * mean) - s.sum_sq / (2.0 * m.sigma2);
  }
  return 0.0;
}

double numeric_sup(const SegmentStats& s, const ScoreModel& m) {
  double lo = -60.0, hi = 60.0;
  for (int i = 0; i < 300; ++i) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (score_at(s, m, a) < score_at(s, m, b))
      lo = a;
    else
      hi = b;
  }
  return score_at(s, m, (lo + hi) / 2.0);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("density ratios") {
  CHECK(density({4, 2.0, 2.0}) == doctest::Approx(0.5));
  CHECK(density({3, 3.0, 3.0}) == doctest::Approx(1.0));
  CHECK(density({5, 0.0, 0.0}) == doctest::Approx(0.0));
  CHECK_THROWS_WITH(density({0, 0.0, 0.0}), doctest::Contains("empty segment"));
}

TEST_CASE("density comparison is exact on integral data") {
  CHECK(compare_density({2, 1.0, 0}, {4, 2.0, 0}) == 0);
  CHECK(compare_density({3, 2.0, 0}, {3, 1.0, 0}) == 1);
  CHECK(compare_density({3, 1.0, 0}, {3, 2.0, 0}) == -1);
  // Huge counts where floating densities would collide.
  CHECK(compare_density({3000000000LL, 1000000001.0, 0}, {3, 1.0, 0}) == 1);
  // Real-valued path uses the absolute tolerance.
  CHECK(compare_density({2, 0.6, 0}, {2, 0.6 + 1e-15, 0}) == 0);
  CHECK(compare_density({2, 0.6, 0}, {2, 0.7, 0}) == -1);
}

TEST_CASE("segment scores match the numeric supremum") {
  const ScoreModel bern = ScoreModel::bernoulli();
  const ScoreModel pois = ScoreModel::poisson();
  const ScoreModel gaus = ScoreModel::gaussian();

  const SegmentStats half{4, 2.0, 2.0};
  CHECK(segment_score(half, bern) == doctest::Approx(-4.0 * std::log(2.0)));
  CHECK(segment_score(half, bern) == doctest::Approx(numeric_sup(half, bern)).epsilon(1e-6));

  CHECK(segment_score({3, 3.0, 3.0}, bern) == doctest::Approx(0.0));
  CHECK(segment_score({5, 0.0, 0.0}, bern) == doctest::Approx(0.0));

  const SegmentStats counts{2, 4.0, 8.0};
  CHECK(segment_score(counts, pois) == doctest::Approx(4.0 * std::log(2.0) - 4.0));
  CHECK(segment_score(counts, pois) == doctest::Approx(numeric_sup(counts, pois)).epsilon(1e-6));

  const SegmentStats gs{2, 2.0, 4.0};
  CHECK(segment_score(gs, gaus) == doctest::Approx(-1.0));
  CHECK(segment_score(gs, gaus) == doctest::Approx(numeric_sup(gs, gaus)).epsilon(1e-6));

  CHECK(segment_score({}, bern) == 0.0);
  CHECK_THROWS(segment_score({2, 3.0, 5.0}, bern));   // mean above 1
  CHECK_THROWS(segment_score({2, -1.0, 1.0}, pois));  // negative sum
}

TEST_CASE("score dominates every fixed-parameter likelihood") {
  Rng rng(42);
  const ScoreModel models[] = {ScoreModel::bernoulli(), ScoreModel::poisson(),
                               ScoreModel::gaussian(2.0)};
  for (const ScoreModel& m : models) {
    for (int trial = 0; trial < 20; ++trial) {
      SegmentStats s;
      const int n = 1 + static_cast<int>(rng.below(30));
      for (int i = 0; i < n; ++i) {
        double v;
        if (m.kind == ModelKind::Bernoulli)
          v = rng.uniform() < 0.4 ? 1.0 : 0.0;
        else if (m.kind == ModelKind::Poisson)
          v = std::floor(rng.uniform() * 5.0);
        else
          v = rng.uniform() * 4.0 - 2.0;
        s.add_value(v);
      }
      const double sup = segment_score(s, m);
      for (int i = 0; i < 100; ++i) {
        const double r = rng.uniform() * 20.0 - 10.0;
        CHECK(sup >= score_at(s, m, r) - 1e-9);
      }
    }
  }
}

TEST_CASE("gaussian score scales inversely with variance") {
  const SegmentStats s{5, 7.0, 13.0};
  const double one = segment_score(s, ScoreModel::gaussian(1.0));
  const double two = segment_score(s, ScoreModel::gaussian(2.0));
  CHECK(two == doctest::Approx(one / 2.0));
}

TEST_CASE("staircase validation") {
  const ValueGrid rect = ValueGrid::rectangle(4, 3, std::vector<double>(12, 0.0));
  CHECK(validate_staircase(Staircase({3, 3, 1, 0}), rect));
  CHECK_FALSE(validate_staircase(Staircase({3, 1, 2, 0}), rect));

  const ValueGrid two = ValueGrid::rectangle(2, 2, std::vector<double>(4, 0.0));
  CHECK_FALSE(validate_staircase(Staircase({1, 2}), two));
  CHECK(validate_staircase(Staircase({2, 1}), two));

  // Triangle N=3 with band ends [2, 3, -]: widths (1, 1, 0).
  const ValueGrid tri = ValueGrid::upper_triangle(3, std::vector<double>(9, 0.0));
  CHECK(validate_staircase(Staircase({1, 1, 0}), tri));
  CHECK(validate_staircase(Staircase({2, 1, 0}), tri));
  CHECK_FALSE(validate_staircase(Staircase({2, 0, 0}), tri));  // band end drops from 3 to 2

  // Base containment.
  const ValueGrid based =
      ValueGrid::rectangle(2, 2, std::vector<double>(4, 0.0), Staircase({1, 0}));
  CHECK(validate_staircase(Staircase({2, 1}), based));
  CHECK_FALSE(validate_staircase(Staircase({0, 0}), based));
}

TEST_CASE("corner counts match the lattice-path formula") {
  for (Index m = 1; m <= 5; ++m)
    for (Index n = 1; n <= 5; ++n) {
      const ValueGrid grid =
          ValueGrid::rectangle(m, n, std::vector<double>(static_cast<std::size_t>(m) * n, 0.0));
      const auto corners = enumerate_corners(grid);
      CHECK(static_cast<double>(corners.size()) == binom(n + m, m));
      for (const Staircase& s : corners) CHECK(validate_staircase(s, grid));
    }
}

TEST_CASE("stats add exactly over disjoint unions") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    SegmentStats a, b;
    for (int i = 0; i < 40; ++i) {
      const double v = std::floor(rng.uniform() * 9.0) - 4.0;
      if (rng.uniform() < 0.5)
        a.add_value(v);
      else
        b.add_value(v);
    }
    SegmentStats whole = a;
    whole += b;
    SegmentStats direct;
    direct.count = a.count + b.count;
    direct.sum = a.sum + b.sum;
    direct.sum_sq = a.sum_sq + b.sum_sq;
    CHECK(whole == direct);
    CHECK((whole - b) == a);
  }
}

TEST_CASE("grid construction rejects bad input") {
  CHECK_THROWS(ValueGrid::rectangle(2, 2, {1.0, 2.0, 3.0}));
  CHECK_THROWS(ValueGrid::rectangle(2, 2, {1.0, std::nan(""), 0.0, 0.0}));
  CHECK_THROWS(ValueGrid::rectangle(2, 2, std::vector<double>(4, 0.0), Staircase({1, 2})));
  const ValueGrid tri = ValueGrid::upper_triangle(4, std::vector<double>(16, 1.0));
  CHECK(tri.active_area() == 6);
  CHECK(tri.active_entries().size() == 6);
  CHECK(tri.stats_between(tri.base(), tri.full()).count == 6);
}
