#include "bandseg/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "bandseg/rng.hpp"

namespace bandseg {

namespace {

// One connected component with a local CSR Laplacian operator.
struct ComponentOp {
  std::vector<Index> verts;  // local index -> vertex id, ascending
  std::vector<double> deg;
  std::vector<std::size_t> off;
  std::vector<int> nbr;
  std::vector<double> wgt;

  int size() const { return static_cast<int>(verts.size()); }

  void apply(const double* x, double* y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
      double acc = deg[static_cast<std::size_t>(i)] * x[i];
      for (std::size_t k = off[static_cast<std::size_t>(i)]; k < off[static_cast<std::size_t>(i) + 1]; ++k)
        acc -= wgt[k] * x[static_cast<std::size_t>(nbr[k])];
      y[i] = acc;
    }
  }
};

ComponentOp component_op(const Graph& graph, const std::vector<Index>& verts) {
  ComponentOp op;
  op.verts = verts;
  const int n = op.size();
  std::vector<int> local(static_cast<std::size_t>(graph.vertex_count()) + 1, -1);
  for (int i = 0; i < n; ++i) local[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] = i;
  op.deg.assign(static_cast<std::size_t>(n), 0.0);
  op.off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    op.off[static_cast<std::size_t>(i) + 1] =
        op.off[static_cast<std::size_t>(i)] +
        graph.neighbors(verts[static_cast<std::size_t>(i)]).size();
  op.nbr.resize(op.off.back());
  op.wgt.resize(op.off.back());
  for (int i = 0; i < n; ++i) {
    std::size_t k = op.off[static_cast<std::size_t>(i)];
    for (const auto& [u, w] : graph.neighbors(verts[static_cast<std::size_t>(i)])) {
      op.nbr[k] = local[static_cast<std::size_t>(u)];
      op.wgt[k] = w;
      op.deg[static_cast<std::size_t>(i)] += w;
      ++k;
    }
  }
  return op;
}

struct LanczosResult {
  std::vector<double> vec;
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
};

// Smallest eigenpair of the Laplacian restricted to the complement of the
// constant vector: Lanczos with full reorthogonalization, Ritz restarts.
LanczosResult lanczos_fiedler(const ComponentOp& op, const FiedlerOptions& opts) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const int n = op.size();
  const int m_cap = std::min(n, 400);

  VectorXd start(n);
  Rng rng(hash_combine(opts.seed, 0x5eedULL));
  for (int i = 0; i < n; ++i) start[i] = rng.uniform() - 0.5;

  auto deflate = [&](VectorXd& v) { v.array() -= v.mean(); };

  LanczosResult best;
  best.residual = std::numeric_limits<double>::infinity();
  int matvecs = 0;

  VectorXd tmp(n);
  auto apply = [&](const VectorXd& x, VectorXd& y) {
    op.apply(x.data(), y.data());
    ++matvecs;
  };

  while (matvecs < opts.max_iter) {
    deflate(start);
    double nrm = start.norm();
    if (nrm < 1e-300) {
      for (int i = 0; i < n; ++i) start[i] = rng.uniform() - 0.5;
      continue;
    }
    MatrixXd basis(n, m_cap);
    std::vector<double> alpha, beta;
    basis.col(0) = start / nrm;
    int m = 0;
    bool exhausted = false;

    auto ritz = [&](LanczosResult& out) {
      MatrixXd T = MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
      const int lo = 0;  // smallest Ritz value
      VectorXd y = basis.leftCols(m) * es.eigenvectors().col(lo);
      deflate(y);
      y.normalize();
      apply(y, tmp);
      const double theta = y.dot(tmp);
      out.value = theta;
      out.residual = (tmp - theta * y).norm();
      out.vec.assign(y.data(), y.data() + n);
      out.converged = out.residual <= opts.tol;
    };

    while (m < m_cap && matvecs < opts.max_iter) {
      const int j = m;
      VectorXd w(n);
      apply(basis.col(j), w);
      const double a = basis.col(j).dot(w);
      alpha.push_back(a);
      w -= a * basis.col(j);
      if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
      deflate(w);
      // Full reorthogonalization keeps the basis clean on clustered spectra.
      for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
      const double b = w.norm();
      ++m;
      if (b < 1e-12) {
        exhausted = true;
        break;
      }
      beta.push_back(b);
      if (m < m_cap) basis.col(m) = w / b;

      if (m % 16 == 0 || m == m_cap) {
        LanczosResult cur;
        ritz(cur);
        if (cur.residual < best.residual) best = cur;
        if (best.converged) return best;
      }
    }
    if (m > 0) {
      LanczosResult cur;
      ritz(cur);
      if (cur.residual < best.residual) best = cur;
      if (best.converged || exhausted) break;
      start = Eigen::Map<const VectorXd>(best.vec.data(), n);  // Ritz restart
    }
  }
  return best;
}

std::vector<double> component_fiedler(const ComponentOp& op, const FiedlerOptions& opts) {
  LanczosResult r = lanczos_fiedler(op, opts);
  if (!r.converged && !(r.residual <= opts.tol))
    throw FiedlerError("fiedler vector did not converge; best residual " +
                           std::to_string(r.residual),
                       r.residual);
  // Sign convention: first entry of nontrivial magnitude positive.
  for (double v : r.vec) {
    if (std::abs(v) > 1e-12) {
      if (v < 0)
        for (double& x : r.vec) x = -x;
      break;
    }
  }
  return r.vec;
}

}  // namespace

std::vector<std::vector<Index>> connected_components(const Graph& graph) {
  const Index n = graph.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<Index>> comps;
  for (Index v = 1; v <= n; ++v) {
    if (seen[static_cast<std::size_t>(v)]) continue;
    std::vector<Index> comp, stack{v};
    seen[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& [t, w] : graph.neighbors(u)) {
        (void)w;
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return comps;
}

std::vector<double> fiedler_vector(const Graph& graph, const FiedlerOptions& opts) {
  if (graph.vertex_count() < 2)
    throw std::invalid_argument("fiedler vector needs at least two vertices");
  const auto comps = connected_components(graph);
  if (comps.size() != 1)
    throw std::invalid_argument("graph is disconnected; order components separately");
  return component_fiedler(component_op(graph, comps.front()), opts);
}

VertexOrder fiedler_order(const Graph& graph, const FiedlerOptions& opts) {
  std::vector<Index> positions;
  positions.reserve(static_cast<std::size_t>(graph.vertex_count()));
  for (const auto& comp : connected_components(graph)) {
    if (comp.size() <= 2) {
      for (Index v : comp) positions.push_back(v);
      continue;
    }
    const std::vector<double> f = component_fiedler(component_op(graph, comp), opts);
    std::vector<std::size_t> idx(comp.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (f[a] != f[b]) return f[a] < f[b];
      return comp[a] < comp[b];
    });
    for (std::size_t i : idx) positions.push_back(comp[i]);
  }
  return VertexOrder::from_positions(std::move(positions));
}

namespace {

// Per-position band boundary signature under a fixed segmentation: the K row
// band-ends and K column band-starts. Positions sharing a signature can be
// permuted without moving any entry across a segment boundary.
struct BandGeometry {
  Index n = 0;
  int k = 0;
  std::vector<Index> row_end;    // k * n, band-end column per (band, row)
  std::vector<Index> col_start;  // k * n, first row whose band reaches the column

  Index re(int band, Index pos) const {
    return row_end[static_cast<std::size_t>(band) * n + (pos - 1)];
  }
  Index cs(int band, Index pos) const {
    return col_start[static_cast<std::size_t>(band) * n + (pos - 1)];
  }
  bool same_signature(Index a, Index b) const {
    for (int t = 0; t < k; ++t)
      if (re(t, a) != re(t, b) || cs(t, a) != cs(t, b)) return false;
    return true;
  }
};

BandGeometry band_geometry(const BorderChain& chain, const Segmentation& seg, Index n) {
  const std::vector<Staircase> stairs = bands_to_staircases(chain, seg);
  BandGeometry g;
  g.n = n;
  g.k = static_cast<int>(seg.bands.size());
  g.row_end.assign(static_cast<std::size_t>(g.k) * n, 0);
  g.col_start.assign(static_cast<std::size_t>(g.k) * n, 0);
  for (int t = 0; t < g.k; ++t) {
    const Staircase& s = stairs[static_cast<std::size_t>(t) + 1];
    for (Index r = 1; r <= n; ++r)
      g.row_end[static_cast<std::size_t>(t) * n + (r - 1)] = s.end_col(DomainKind::UpperTriangle, r);
    // First row whose band-end reaches column c; n+1 when none does.
    Index r = 1;
    for (Index c = 1; c <= n; ++c) {
      while (r <= n && s.end_col(DomainKind::UpperTriangle, r) < c) ++r;
      g.col_start[static_cast<std::size_t>(t) * n + (c - 1)] = r;
      if (r > n) {
        for (Index cc = c + 1; cc <= n; ++cc)
          g.col_start[static_cast<std::size_t>(t) * n + (cc - 1)] = n + 1;
        break;
      }
    }
  }
  return g;
}

struct SwapBatch {
  long long swaps = 0;
};

SwapBatch run_swap_batch(const Graph& graph, VertexOrder& order, const BandGeometry& geom) {
  SwapBatch out;
  const Index n = geom.n;
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);

  auto is_edge_at = [&](Index a, Index b) {
    return graph.has_edge(order.vertex_at(a), order.vertex_at(b));
  };
  auto count_edges_into = [&](Index pos, Index lo, Index hi) {
    int c = 0;
    for (const auto& [u, w] : graph.neighbors(order.vertex_at(pos))) {
      (void)w;
      const Index p = order.position_of(u);
      if (p >= lo && p <= hi) ++c;
    }
    return c;
  };

  // Inner bands first, frontier rows top-down.
  for (int band = 0; band + 1 < geom.k; ++band) {
    for (Index x = 1; x <= n; ++x) {
      const Index y = geom.re(band, x);
      if (y <= x) continue;
      if (x > 1 && geom.re(band, x - 1) >= y) continue;  // not a frontier row
      if (!is_edge_at(x, y)) continue;

      Index xlo = x;
      while (xlo > 1 && !used[static_cast<std::size_t>(xlo - 1)] &&
             geom.same_signature(xlo - 1, x))
        --xlo;
      Index yhi = y;
      while (yhi < n && !used[static_cast<std::size_t>(yhi + 1)] &&
             geom.same_signature(yhi + 1, y))
        ++yhi;
      if (used[static_cast<std::size_t>(x)] || used[static_cast<std::size_t>(y)]) continue;
      if (xlo == x && yhi == y) continue;  // nothing to permute with

      // Cheapest non-edge in the swap rectangle.
      bool found = false;
      Index bu = 0, bv = 0;
      int best_cost = 0;
      for (Index u = xlo; u <= x; ++u)
        for (Index v = y; v <= yhi; ++v) {
          if (is_edge_at(u, v)) continue;
          const int cost = count_edges_into(u, y, yhi) + count_edges_into(v, xlo, x);
          if (!found || cost < best_cost) {
            found = true;
            best_cost = cost;
            bu = u;
            bv = v;
          }
        }
      if (!found) continue;

      if (bu != x) {
        std::swap(order.to_vertex[static_cast<std::size_t>(x - 1)],
                  order.to_vertex[static_cast<std::size_t>(bu - 1)]);
        std::swap(order.to_pos[static_cast<std::size_t>(order.vertex_at(x))],
                  order.to_pos[static_cast<std::size_t>(order.vertex_at(bu))]);
      }
      if (bv != y) {
        std::swap(order.to_vertex[static_cast<std::size_t>(y - 1)],
                  order.to_vertex[static_cast<std::size_t>(bv - 1)]);
        std::swap(order.to_pos[static_cast<std::size_t>(order.vertex_at(y))],
                  order.to_pos[static_cast<std::size_t>(order.vertex_at(bv))]);
      }
      ++out.swaps;
      for (Index p = xlo; p <= x; ++p) used[static_cast<std::size_t>(p)] = 1;
      for (Index p = y; p <= yhi; ++p) used[static_cast<std::size_t>(p)] = 1;
    }
  }
  return out;
}

}  // namespace

RefineResult refine_order(const Graph& graph, const VertexOrder& order,
                          const BorderChain& chain, const Segmentation& segmentation,
                          const Resegmenter& resegment, const RefineOptions& opts) {
  RefineResult res{order, chain, segmentation, 0, 0};
  const Index n = graph.vertex_count();

  while (res.rounds < opts.max_rounds) {
    const BandGeometry geom = band_geometry(res.chain, res.segmentation, n);
    VertexOrder trial = res.order;
    long long round_swaps = 0;
    for (int pass = 0; pass < 64; ++pass) {
      const SwapBatch batch = run_swap_batch(graph, trial, geom);
      round_swaps += batch.swaps;
      if (batch.swaps == 0) break;
    }
    if (round_swaps == 0) break;

    auto [new_chain, new_seg] = resegment(graph, trial);
    if (new_seg.total_score <
        res.segmentation.total_score - 1e-9 * (1.0 + std::abs(res.segmentation.total_score)))
      break;  // keep the pre-round state; the score may never decrease
    res.order = std::move(trial);
    res.chain = std::move(new_chain);
    res.segmentation = std::move(new_seg);
    res.swaps += round_swaps;
    ++res.rounds;
  }
  return res;
}

}  // namespace bandseg
