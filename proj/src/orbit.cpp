#include "flatdeg/orbit.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "flatdeg/errors.hpp"

namespace flatdeg {

char to_char(Move m) {
  switch (m) {
    case Move::S: return 'S';
    case Move::T: return 'T';
    case Move::Tinv: return 't';
  }
  return '?';
}

std::string OrbitPoint::to_string() const {
  std::string s = surface.to_string();
  if (involution) s += "; " + involution->to_string();
  return s;
}

OrbitPoint from_double_cover(const DoubleCover& dc) { return {dc.surface, dc.involution}; }

// Products act on the right, so the function v o h^-1 is h^-1 * v.
Origami apply_generator(const Origami& o, Move m) {
  const Perm &h = o.h(), &v = o.v();
  switch (m) {
    case Move::S: return Origami(v, h.inverse());
    case Move::T: return Origami(h, h.inverse() * v);
    case Move::Tinv: return Origami(h, h * v);
  }
  throw InternalError("bad move");
}

OrbitPoint apply_generator(const OrbitPoint& p, Move m) {
  OrbitPoint out{apply_generator(p.surface, m), p.involution};
  if (out.involution) {
    const Perm& h = p.surface.h();
    if (m == Move::T) out.involution = *p.involution * h;
    if (m == Move::Tinv) out.involution = *p.involution * h.inverse();
  }
  return out;
}

OrbitPoint relabel(const OrbitPoint& p, const Perm& labels) {
  OrbitPoint out{Origami(p.surface.h().relabel(labels), p.surface.v().relabel(labels)), std::nullopt};
  if (p.involution) out.involution = p.involution->relabel(labels);
  return out;
}

namespace {

// Greedy BFS labelling from `start`; empty if not everything is reached.
std::vector<int> bfs_labels(const std::vector<const std::vector<int>*>& gens, int n, int start) {
  std::vector<int> lab(static_cast<std::size_t>(n), -1), order;
  order.reserve(static_cast<std::size_t>(n));
  lab[static_cast<std::size_t>(start)] = 0;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int x = order[head];
    for (const auto* g : gens) {
      int y = (*g)[static_cast<std::size_t>(x)];
      if (lab[static_cast<std::size_t>(y)] < 0) {
        lab[static_cast<std::size_t>(y)] = static_cast<int>(order.size());
        order.push_back(y);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return {};
  return lab;
}

// Images of the relabelled generators, concatenated: the comparison key.
void encode(const std::vector<const std::vector<int>*>& base, const std::vector<int>& lab, std::vector<int>& out) {
  out.clear();
  std::size_t n = lab.size();
  std::vector<int> inv(n);
  for (std::size_t x = 0; x < n; ++x) inv[static_cast<std::size_t>(lab[x])] = static_cast<int>(x);
  for (const auto* g : base)
    for (std::size_t y = 0; y < n; ++y) out.push_back(lab[static_cast<std::size_t>((*g)[static_cast<std::size_t>(inv[y])])]);
}

}  // namespace

CanonicalForm canonical_form(const OrbitPoint& p) {
  int n = p.size();
  Perm hi = p.surface.h().inverse(), vi = p.surface.v().inverse();
  std::vector<const std::vector<int>*> base{&p.surface.h().images(), &p.surface.v().images()};
  if (p.involution) base.push_back(&p.involution->images());
  std::vector<const std::vector<int>*> gens = base;
  gens.push_back(&hi.images());
  gens.push_back(&vi.images());

  std::vector<int> best_key, key, best_lab;
  for (int start = 0; start < n; ++start) {
    auto lab = bfs_labels(gens, n, start);
    if (lab.empty()) throw ConnectivityError("surface is not connected");
    encode(base, lab, key);
    if (best_lab.empty() || key < best_key) {
      best_key.swap(key);
      best_lab = std::move(lab);
    }
  }
  Perm r(best_lab);
  return {relabel(p, r), r};
}

int OrbitGraph::find(const OrbitPoint& canonical) const {
  for (int i = 0; i < size(); ++i)
    if (vertices[static_cast<std::size_t>(i)] == canonical) return i;
  return -1;
}

namespace {

std::vector<int> key_of(const OrbitPoint& p) {
  std::vector<int> k = p.surface.h().images();
  k.insert(k.end(), p.surface.v().images().begin(), p.surface.v().images().end());
  if (p.involution) k.insert(k.end(), p.involution->images().begin(), p.involution->images().end());
  return k;
}

}  // namespace

OrbitGraph enumerate_orbit(const OrbitPoint& seed, int cap) {
  if (seed.involution && !is_half_translation_involution(seed.surface, *seed.involution))
    throw PreconditionError("involution is not a half-translation involution");
  OrbitGraph g;
  std::map<std::vector<int>, int> index;
  auto add = [&](OrbitPoint p) {
    auto [it, fresh] = index.emplace(key_of(p), g.size());
    if (fresh) {
      if (g.size() >= cap)
        throw ResourceError("orbit exceeds cap of " + std::to_string(cap) + " vertices");
      g.vertices.push_back(std::move(p));
    }
    return it->second;
  };
  add(canonical_form(seed).point);
  for (int v = 0; v < g.size(); ++v) {
    for (Move m : {Move::S, Move::T, Move::Tinv}) {
      auto c = canonical_form(apply_generator(g.vertices[static_cast<std::size_t>(v)], m));
      int w = add(std::move(c.point));
      g.edges.push_back({v, m, w, std::move(c.relabel)});
    }
  }
  return g;
}

OrbitGraph enumerate_orbit(const Origami& seed, int cap) { return enumerate_orbit(OrbitPoint{seed, std::nullopt}, cap); }

std::string dump(const OrbitGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> keys;
  for (const auto& p : g.vertices) keys.push_back(key_of(p));
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  std::vector<int> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

  std::ostringstream out;
  for (std::size_t i = 0; i < order.size(); ++i)
    out << "v " << i << "; " << g.vertices[static_cast<std::size_t>(order[i])].to_string() << '\n';
  std::vector<std::tuple<int, char, int>> edges;
  for (const auto& e : g.edges)
    if (e.move != Move::Tinv)
      edges.emplace_back(rank[static_cast<std::size_t>(e.from)], to_char(e.move), rank[static_cast<std::size_t>(e.to)]);
  std::sort(edges.begin(), edges.end());
  for (auto [a, m, b] : edges) out << "e " << a << ' ' << m << ' ' << b << '\n';
  return out.str();
}

}  // namespace flatdeg
