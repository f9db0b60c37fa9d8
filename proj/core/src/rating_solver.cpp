#include "oddsrank/rating_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace oddsrank {
namespace {

void check_coverage(std::span<const DirectedEdge> edges, std::size_t n) {
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n)
      throw MissingRating("no rating for player " + std::to_string(std::max(e.from, e.to)));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Symmetric weights S_ab = W_ab + W_ba as an adjacency list, plus the
/// normal-equations right-hand side b_a = sum_b (W_ab E_ab - W_ba E_ba).
struct Laplacian {
  std::vector<std::vector<std::pair<PlayerIndex, double>>> neighbours;
  std::vector<double> diagonal;
  std::vector<double> rhs;

  Laplacian(std::size_t n, std::span<const DirectedEdge> edges)
      : neighbours(n), diagonal(n, 0.0), rhs(n, 0.0) {
    for (const auto& e : edges) {
      if (e.from == e.to || !(e.weight > 0.0)) continue;
      neighbours[e.from].emplace_back(e.to, e.weight);
      neighbours[e.to].emplace_back(e.from, e.weight);
      diagonal[e.from] += e.weight;
      diagonal[e.to] += e.weight;
      rhs[e.from] += e.weight * e.mean;
      rhs[e.to] -= e.weight * e.mean;
    }
    // Merge parallel entries so each neighbour appears once, in index order.
    for (auto& list : neighbours) {
      std::sort(list.begin(), list.end());
      std::vector<std::pair<PlayerIndex, double>> merged;
      for (const auto& [j, w] : list) {
        if (!merged.empty() && merged.back().first == j)
          merged.back().second += w;
        else
          merged.emplace_back(j, w);
      }
      list = std::move(merged);
    }
  }

  void apply(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < neighbours.size(); ++i) {
      double s = diagonal[i] * x[i];
      for (const auto& [j, w] : neighbours[i]) s -= w * x[j];
      out[i] = s;
    }
  }
};

int solve_conjugate_gradient(const Laplacian& lap, std::vector<double>& x,
                             const SolverConfig& cfg, double tolerance, bool& converged) {
  const std::size_t n = x.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  lap.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = lap.rhs[i] - q[i];

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = lap.diagonal[i] > 0.0 ? in[i] / lap.diagonal[i] : 0.0;
  };

  // Gradient of f is -2 r.
  if (2.0 * inf_norm(r) <= tolerance) {
    converged = true;
    return 0;
  }
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  int iter = 0;
  converged = false;
  while (iter < cfg.max_iterations) {
    ++iter;
    lap.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (2.0 * inf_norm(r) <= tolerance) {
      converged = true;
      break;
    }
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (!converged) {
    // Recompute the true residual; recurrence drift can hide convergence.
    lap.apply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = lap.rhs[i] - q[i];
    converged = 2.0 * inf_norm(r) <= tolerance;
  }
  return iter;
}

int solve_lbfgs(std::span<const DirectedEdge> edges, std::vector<double>& x,
                const SolverConfig& cfg, double tolerance, bool& converged) {
  constexpr std::size_t kHistory = 8;
  const std::size_t n = x.size();
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  auto g = gradient(edges, x);
  converged = inf_norm(g) <= tolerance;
  int iter = 0;
  std::vector<double> d(n), x_next(n);
  while (!converged && iter < cfg.max_iterations) {
    ++iter;
    // Two-loop recursion.
    d = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y_hist[k][i];
    }
    double scale = 1.0;
    if (!s_hist.empty()) scale = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto& v : d) v *= scale;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double b = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha[k] - b);
    }
    for (auto& v : d) v = -v;

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      // Not a descent direction; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }
    // The objective is quadratic, so the line minimum along d is closed-form.
    double curvature = 0.0;
    for (const auto& e : edges) {
      const double dd = d[e.from] - d[e.to];
      curvature += e.weight * dd * dd;
    }
    if (!(curvature > 0.0)) break;
    const double step = -slope / (2.0 * curvature);
    for (std::size_t i = 0; i < n; ++i) x_next[i] = x[i] + step * d[i];

    auto g_next = gradient(edges, x_next);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_next[i] - x[i];
      y[i] = g_next[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x.swap(x_next);
    g = std::move(g_next);
    converged = inf_norm(g) <= tolerance;
  }
  return iter;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
  if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("gradient_tolerance must be > 0");
}

void RatingVector::enforce_zero_mean() {
  const std::size_t n = ratings.size();
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[component[i]] += ratings[i];
    ++count[component[i]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = component[i];
    ratings[i] -= sum[c] / static_cast<double>(count[c]);
  }
}

double objective(std::span<const DirectedEdge> edges, std::span<const double> ratings) {
  check_coverage(edges, ratings.size());
  double f = 0.0;
  for (const auto& e : edges) {
    const double residual = (ratings[e.from] - ratings[e.to]) - e.mean;
    f += e.weight * residual * residual;
  }
  return f;
}

double objective(const OddsGraph& graph, const RatingVector& r) {
  return objective(graph.edges(), r.ratings);
}

std::vector<double> gradient(std::span<const DirectedEdge> edges, std::span<const double> ratings) {
  check_coverage(edges, ratings.size());
  std::vector<double> g(ratings.size(), 0.0);
  for (const auto& e : edges) {
    const double term = 2.0 * e.weight * ((ratings[e.from] - ratings[e.to]) - e.mean);
    g[e.from] += term;
    g[e.to] -= term;
  }
  return g;
}

std::vector<double> gradient(const OddsGraph& graph, const RatingVector& r) {
  return gradient(graph.edges(), r.ratings);
}

std::vector<PlayerIndex> connected_components(std::size_t players,
                                              std::span<const DirectedEdge> edges) {
  std::vector<PlayerIndex> parent(players);
  std::iota(parent.begin(), parent.end(), PlayerIndex{0});
  auto find = [&](PlayerIndex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges) {
    if (!(e.weight > 0.0) || e.from >= players || e.to >= players) continue;
    auto a = find(e.from);
    auto b = find(e.to);
    // Smaller index becomes the root, so the root is the component minimum.
    if (a < b)
      parent[b] = a;
    else if (b < a)
      parent[a] = b;
  }
  std::vector<PlayerIndex> label(players);
  for (PlayerIndex i = 0; i < players; ++i) label[i] = find(i);
  return label;
}

std::vector<PlayerIndex> connected_components(const OddsGraph& graph) {
  return connected_components(graph.player_count(), graph.edges());
}

RatingVector fit(std::size_t players, std::span<const DirectedEdge> edges,
                 const SolverConfig& cfg, const std::optional<RatingVector>& warm_start) {
  cfg.validate();
  check_coverage(edges, players);

  RatingVector out;
  out.component = connected_components(players, edges);
  out.degree.assign(players, 0);
  {
    Laplacian lap(players, edges);
    for (std::size_t i = 0; i < players; ++i) out.degree[i] = lap.neighbours[i].size();
  }
  out.ratings.assign(players, 0.0);
  if (warm_start) {
    const auto m = std::min(players, warm_start->ratings.size());
    std::copy_n(warm_start->ratings.begin(), m, out.ratings.begin());
    out.enforce_zero_mean();
  }

  bool converged = false;
  if (cfg.method == SolverMethod::NormalEquations) {
    Laplacian lap(players, edges);
    out.iterations =
        solve_conjugate_gradient(lap, out.ratings, cfg, cfg.gradient_tolerance, converged);
  } else {
    out.iterations = solve_lbfgs(edges, out.ratings, cfg, cfg.gradient_tolerance, converged);
  }
  out.converged = converged;
  out.enforce_zero_mean();
  out.objective_value = objective(edges, out.ratings);
  return out;
}

RatingVector fit(const OddsGraph& graph, const SolverConfig& cfg,
                 const std::optional<RatingVector>& warm_start) {
  return fit(graph.player_count(), graph.edges(), cfg, warm_start);
}

RatingLookup rating_of(const RatingVector& r, std::optional<PlayerIndex> player,
                       std::span<const std::optional<PlayerIndex>> pool) {
  if (player && r.solved(*player)) return {r.ratings[*player], false};
  std::optional<double> lowest;
  for (const auto& entrant : pool) {
    if (!entrant || !r.solved(*entrant)) continue;
    const double v = r.ratings[*entrant];
    if (!lowest || v < *lowest) lowest = v;
  }
  if (!lowest) throw MissingRating("player has no rating and the entrant pool has no rated player");
  return {*lowest, true};
}

}  // namespace oddsrank
