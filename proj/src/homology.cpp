#include "flatdeg/homology.hpp"

#include <algorithm>
#include <numeric>

#include "flatdeg/errors.hpp"
#include "flatdeg/rational.hpp"

namespace flatdeg {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(at(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[at(x)] != x) x = parent[at(x)] = parent[at(parent[at(x)])];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[at(a)] = b;
    return true;
  }
};

}  // namespace

IntVector boundary(const Origami& o, const Chain& z) {
  int d = o.size();
  auto vid = o.vertex_of_square();
  int nv = 1 + *std::max_element(vid.begin(), vid.end());
  IntVector out = IntVector::Zero(nv);
  for (int s = 0; s < d; ++s) {
    long long b = z(s), l = z(d + s);
    out(vid[at(s)]) -= b + l;
    out(vid[at(o.h()[s])]) += b;
    out(vid[at(o.v()[s])]) += l;
  }
  return out;
}

// zeta_t crosses b_{v t} upwards (+1); sigma_t crosses l_{h t} rightwards (-1).
long long pairing(const Origami& o, const Chain& z, const Chain& y) {
  int d = o.size();
  long long acc = 0;
  for (int t = 0; t < d; ++t) acc += z(o.v()[t]) * y(d + t) - z(d + o.h()[t]) * y(t);
  return acc;
}

std::array<long long, 2> holonomy(const Chain& z) {
  auto d = z.size() / 2;
  return {z.head(d).sum(), z.tail(d).sum()};
}

IntMatrix unimodular_inverse(const IntMatrix& A) {
  int n = static_cast<int>(A.rows());
  std::vector<std::vector<Rational>> m(at(n), std::vector<Rational>(at(2 * n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[at(i)][at(j)] = static_cast<long>(A(i, j));
    m[at(i)][at(n + i)] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && m[at(piv)][at(c)] == 0) ++piv;
    if (piv == n) throw InternalError("singular matrix where a unimodular one was expected");
    std::swap(m[at(piv)], m[at(c)]);
    Rational inv = 1 / m[at(c)][at(c)];
    for (auto& x : m[at(c)]) x *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || m[at(r)][at(c)] == 0) continue;
      Rational f = m[at(r)][at(c)];
      for (int j = 0; j < 2 * n; ++j) m[at(r)][at(j)] -= f * m[at(c)][at(j)];
    }
  }
  IntMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational x = m[at(i)][at(n + j)];
      x.canonicalize();
      if (x.get_den() != 1) throw InternalError("matrix is not unimodular");
      out(i, j) = x.get_num().get_si();
    }
  return out;
}

HomologyBasis homology_basis(const Origami& o) {
  int d = o.size();
  const Perm &h = o.h(), &v = o.v();
  auto vid = o.vertex_of_square();
  int nv = 1 + *std::max_element(vid.begin(), vid.end());

  // Dual edge e < d is sigma_e: e -> h(e); e >= d is zeta_{e-d}: e-d -> v(e-d).
  auto dual_head = [&](int e) { return e < d ? h[e] : v[e - d]; };
  auto dual_tail = [&](int e) { return e < d ? e : e - d; };
  // Primal edge crossed by dual edge e: l_{h e} (index d + h e) or b_{v e}.
  auto crossed = [&](int e) { return e < d ? d + h[e] : v[e - d]; };

  // Dual spanning forest by BFS; parent_edge[s] = (edge, +1 if it points towards s).
  std::vector<int> parent(at(d), -2), parent_edge(at(d), -1), parent_sign(at(d), 0);
  std::vector<bool> in_cotree(at(2 * d), false);
  Perm hi = h.inverse(), vi = v.inverse();
  for (int root = 0; root < d; ++root) {
    if (parent[at(root)] != -2) continue;
    parent[at(root)] = -1;
    std::vector<int> queue{root};
    for (std::size_t k = 0; k < queue.size(); ++k) {
      int s = queue[k];
      // Outgoing sigma_s, zeta_s and incoming sigma_{h^-1 s}, zeta_{v^-1 s}.
      const std::array<std::pair<int, int>, 4> nbrs{{{s, h[s]}, {d + s, v[s]}, {hi[s], hi[s]}, {d + vi[s], vi[s]}}};
      for (int k2 = 0; k2 < 4; ++k2) {
        auto [e, t] = nbrs[at(k2)];
        if (parent[at(t)] != -2) continue;
        parent[at(t)] = s;
        parent_edge[at(t)] = e;
        parent_sign[at(t)] = k2 < 2 ? 1 : -1;
        in_cotree[at(e)] = true;
        queue.push_back(t);
      }
    }
  }

  // Primal spanning forest among edges whose dual is not in the cotree.
  std::vector<bool> in_tree(at(2 * d), false);
  UnionFind uf(nv);
  for (int e = 0; e < 2 * d; ++e) {
    if (in_cotree[at(e)]) continue;
    int p = crossed(e);
    int a = vid[at(p < d ? p : p - d)];
    int b = p < d ? vid[at(h[p])] : vid[at(v[p - d])];
    if (uf.unite(a, b)) in_tree[at(e)] = true;
  }

  HomologyBasis out;
  out.surface = o;
  out.squares = d;
  auto to_root = [&](int s, Chain& y, long long sign) {
    while (parent[at(s)] >= 0) {
      // Walking from s to its parent runs against an edge pointing towards s.
      y(parent_edge[at(s)]) -= sign * parent_sign[at(s)];
      s = parent[at(s)];
    }
  };
  for (int e = 0; e < 2 * d; ++e) {
    if (in_cotree[at(e)] || in_tree[at(e)]) continue;
    Chain y = Chain::Zero(2 * d);
    y(e) += 1;
    to_root(dual_head(e), y, 1);
    to_root(dual_tail(e), y, -1);
    out.cycles.push_back(y);
  }
  out.rank = static_cast<int>(out.cycles.size());

  int comps = 0;
  for (int s = 0; s < d; ++s) comps += parent[at(s)] == -1;
  if (out.rank != d - nv + 2 * comps) throw InternalError("homology rank does not match Euler characteristic");
  out.J.resize(out.rank, out.rank);
  for (int i = 0; i < out.rank; ++i) {
    if (!boundary(o, out.cycles[at(i)]).isZero()) throw InternalError("basis chain is not a cycle");
    for (int j = 0; j < out.rank; ++j) out.J(i, j) = pairing(o, out.cycles[at(i)], out.cycles[at(j)]);
  }
  if (out.rank > 0) out.Jinv_T = unimodular_inverse(out.J.transpose());
  return out;
}

IntVector HomologyBasis::coords(const Chain& z) const {
  IntVector p(rank);
  for (int j = 0; j < rank; ++j) p(j) = pairing(surface, z, cycles[at(j)]);
  return Jinv_T * p;
}

Chain move_chain(const Origami& before, Move m, const Chain& z) {
  int d = before.size();
  const Perm& h = before.h();
  Perm hi = h.inverse();
  Chain out = Chain::Zero(2 * d);
  for (int s = 0; s < d; ++s) {
    long long b = z(s), l = z(d + s);
    switch (m) {
      case Move::T:  // l_s becomes the diagonal of the sheared square
        out(s) += b + l;
        out(d + h[s]) += l;
        break;
      case Move::Tinv:
        out(s) += b;
        out(hi[s]) -= l;
        out(d + hi[s]) += l;
        break;
      case Move::S:  // quarter turn: bottom edges become left edges run downwards
        out(d + s) -= b;
        out(hi[s]) += l;
        break;
    }
  }
  return out;
}

Chain involution_chain(const Origami& o, const Perm& involution, const Chain& z) {
  int d = o.size();
  Chain out = Chain::Zero(2 * d);
  for (int s = 0; s < d; ++s) {
    int t = involution[s];
    out(o.v()[t]) -= z(s);
    out(d + o.h()[t]) -= z(d + s);
  }
  return out;
}

Chain relabel_chain(const Perm& labels, const Chain& z) {
  int d = labels.size();
  Chain out(2 * d);
  for (int s = 0; s < d; ++s) {
    out(labels[s]) = z(s);
    out(d + labels[s]) = z(d + s);
  }
  return out;
}

std::array<long long, 4> move_matrix(Move m) {
  switch (m) {
    case Move::S: return {0, 1, -1, 0};
    case Move::T: return {1, 1, 0, 1};
    case Move::Tinv: return {1, -1, 0, 1};
  }
  return {1, 0, 0, 1};
}

CocycleResult induced_cocycle(const OrbitPoint& p, const std::vector<Move>& word) {
  auto start = homology_basis(p.surface);
  std::vector<Chain> images = start.cycles;
  CocycleResult out{IntMatrix(), p, ""};
  for (Move m : word) {
    for (auto& z : images) z = move_chain(out.final_point.surface, m, z);
    out.final_point = apply_generator(out.final_point, m);
    out.word += to_char(m);
  }
  auto end = homology_basis(out.final_point.surface);
  out.M.resize(end.rank, start.rank);
  for (int j = 0; j < start.rank; ++j) out.M.col(j) = end.coords(images[at(j)]);
  return out;
}

CocycleResult induced_cocycle(const Origami& o, const std::vector<Move>& word) {
  return induced_cocycle(OrbitPoint{o, std::nullopt}, word);
}

IntMatrix involution_matrix(const HomologyBasis& b, const Origami& o, const Perm& involution) {
  return induced_matrix(b, b, [&](const Chain& z) { return involution_chain(o, involution, z); });
}

}  // namespace flatdeg
