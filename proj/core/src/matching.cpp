#include "swarmpatrol/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "swarmpatrol/errors.hpp"

namespace swarmpatrol {

namespace {

// Dense O(n^3) maximum-weight matching with blossom shrinking, primal-dual.
// Vertices are 1..n; ids above n are shrunken blossoms. st maps a vertex to
// the id of the blossom currently containing it (itself when unshrunk), lab
// holds dual values, slack[x] the outer vertex with the tightest edge into x.
// S: 0 = outer, 1 = inner, -1 = unreached in the current phase.
struct BlossomSolver {
  struct E {
    int u = 0, v = 0;
    int64_t w = 0;
  };
  static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

  int n = 0, n_x = 0;
  std::vector<std::vector<E>> g;
  std::vector<int64_t> lab;
  std::vector<int> match, slack, st, pa, S, vis;
  std::vector<std::vector<int>> flower, flower_from;
  std::deque<int> q;
  int lca_stamp = 0;

  explicit BlossomSolver(int n_in) : n(n_in) {
    const int m = 2 * n + 2;
    g.assign(m, std::vector<E>(m));
    lab.assign(m, 0);
    match.assign(m, 0);
    slack.assign(m, 0);
    st.assign(m, 0);
    pa.assign(m, 0);
    S.assign(m, -1);
    vis.assign(m, 0);
    flower.assign(m, {});
    flower_from.assign(m, std::vector<int>(n + 1, 0));
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) g[u][v] = {u, v, 0};
  }

  int64_t e_delta(const E& e) const { return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2; }

  void update_slack(int u, int x) {
    if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
  }

  void set_slack(int x) {
    slack[x] = 0;
    for (int u = 1; u <= n; ++u)
      if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n) {
      q.push_back(x);
    } else {
      for (int sub : flower[x]) q_push(sub);
    }
  }

  void set_st(int x, int b) {
    st[x] = b;
    if (x > n)
      for (int sub : flower[x]) set_st(sub, b);
  }

  int get_pr(int b, int xr) {
    int pr = static_cast<int>(std::find(flower[b].begin(), flower[b].end(), xr) -
                              flower[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower[b].begin() + 1, flower[b].end());
      return static_cast<int>(flower[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match[u] = g[u][v].v;
    if (u <= n) return;
    const E e = g[u][v];
    const int xr = flower_from[u][e.u];
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st[match[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st[pa[xnv]]);
      u = st[pa[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++lca_stamp; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis[u] == lca_stamp) return u;
      vis[u] = lca_stamp;
      u = st[match[u]];
      if (u) u = st[pa[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n + 1;
    while (b <= n_x && st[b]) ++b;
    if (b > n_x) ++n_x;
    lab[b] = 0;
    S[b] = 0;
    match[b] = match[lca];
    flower[b].clear();
    flower[b].push_back(lca);
    for (int x = u, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    std::reverse(flower[b].begin() + 1, flower[b].end());
    for (int x = v, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
    for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
    for (int xs : flower[b]) {
      for (int x = 1; x <= n_x; ++x) {
        if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
          g[b][x] = g[xs][x];
          g[x][b] = g[x][xs];
        }
      }
      for (int x = 1; x <= n; ++x) {
        if (flower_from[xs][x]) flower_from[b][x] = xs;
      }
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int sub : flower[b]) set_st(sub, sub);
    const int xr = flower_from[b][g[b][pa[b]].u];
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower[b][i];
      const int xns = flower[b][i + 1];
      pa[xs] = g[xns][xs].u;
      S[xs] = 1;
      S[xns] = 0;
      slack[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    S[xr] = 1;
    pa[xr] = pa[b];
    for (size_t i = pr + 1; i < flower[b].size(); ++i) {
      S[flower[b][i]] = -1;
      set_slack(flower[b][i]);
    }
    st[b] = 0;
  }

  bool on_found_edge(const E& e) {
    const int u = st[e.u];
    const int v = st[e.v];
    if (S[v] == -1) {
      pa[v] = e.u;
      S[v] = 1;
      const int nu = st[match[v]];
      slack[v] = slack[nu] = 0;
      S[nu] = 0;
      q_push(nu);
    } else if (S[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool grow_phase() {
    std::fill(S.begin(), S.begin() + n_x + 1, -1);
    std::fill(slack.begin(), slack.begin() + n_x + 1, 0);
    q.clear();
    for (int x = 1; x <= n_x; ++x) {
      if (st[x] == x && !match[x]) {
        pa[x] = 0;
        S[x] = 0;
        q_push(x);
      }
    }
    if (q.empty()) return false;
    for (;;) {
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        if (S[st[u]] == 1) continue;
        for (int v = 1; v <= n; ++v) {
          if (g[u][v].w > 0 && st[u] != st[v]) {
            if (e_delta(g[u][v]) == 0) {
              if (on_found_edge(g[u][v])) return true;
            } else {
              update_slack(u, st[v]);
            }
          }
        }
      }
      int64_t d = kInf;
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && S[b] == 1) d = std::min(d, lab[b] / 2);
      for (int x = 1; x <= n_x; ++x) {
        if (st[x] == x && slack[x]) {
          if (S[x] == -1)
            d = std::min(d, e_delta(g[slack[x]][x]));
          else if (S[x] == 0)
            d = std::min(d, e_delta(g[slack[x]][x]) / 2);
        }
      }
      for (int u = 1; u <= n; ++u) {
        if (S[st[u]] == 0) {
          if (lab[u] <= d) return false;
          lab[u] -= d;
        } else if (S[st[u]] == 1) {
          lab[u] += d;
        }
      }
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] == b) {
          if (S[b] == 0)
            lab[b] += d * 2;
          else if (S[b] == 1)
            lab[b] -= d * 2;
        }
      }
      q.clear();
      for (int x = 1; x <= n_x; ++x) {
        if (st[x] == x && slack[x] && st[slack[x]] != x &&
            e_delta(g[slack[x]][x]) == 0) {
          if (on_found_edge(g[slack[x]][x])) return true;
        }
      }
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
      }
    }
  }

  void solve() {
    std::fill(match.begin(), match.end(), 0);
    n_x = n;
    int64_t w_max = 0;
    for (int u = 0; u <= n; ++u) {
      st[u] = u;
      flower[u].clear();
    }
    for (int u = 1; u <= n; ++u) {
      for (int v = 1; v <= n; ++v) {
        flower_from[u][v] = (u == v ? u : 0);
        w_max = std::max(w_max, g[u][v].w);
      }
    }
    for (int u = 1; u <= n; ++u) lab[u] = w_max;
    while (grow_phase()) {
    }
  }
};

}  // namespace

std::vector<int> max_weight_perfect_matching_int(
    const std::vector<std::vector<int64_t>>& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) return {};
  if (n % 2 != 0) throw InvariantError("matching needs an even node count");
  BlossomSolver solver(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) solver.g[i + 1][j + 1].w = w[i][j];
  solver.solve();
  std::vector<int> out(n, -1);
  for (int u = 1; u <= n; ++u) {
    if (solver.match[u] == 0)
      throw InvariantError("matching engine left a node unmatched");
    out[u - 1] = solver.match[u] - 1;
  }
  return out;
}

std::vector<std::pair<int, int>> min_weight_perfect_matching(
    const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n % 2 != 0) throw InvariantError("matching needs an even node count");
  if (n == 0) return {};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(weights[i].size()) != n)
      throw InvariantError("matching weight matrix must be square");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!std::isfinite(weights[i][j]))
        throw InvariantError("matching weight not finite");
      lo = std::min(lo, weights[i][j]);
      hi = std::max(hi, weights[i][j]);
    }
  }
  // Shift to non-negative, quantize, and flip to a maximization problem with
  // weights large enough that every perfect matching beats any smaller one.
  const double span = std::max(1e-12, hi - lo);
  const double scale = 1e11 / span;
  int64_t max_q = 0;
  std::vector<std::vector<int64_t>> q(n, std::vector<int64_t>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sym = 0.5 * (weights[i][j] + weights[j][i]);
      q[i][j] = llround((sym - lo) * scale);
      max_q = std::max(max_q, q[i][j]);
    }
  }
  const int64_t big = static_cast<int64_t>(n) * (max_q + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) q[i][j] = big - q[i][j];
  const std::vector<int> mate = max_weight_perfect_matching_int(q);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n / 2);
  for (int i = 0; i < n; ++i) {
    if (mate[i] > i) pairs.emplace_back(i, mate[i]);
  }
  return pairs;
}

}  // namespace swarmpatrol
