#include "flatdeg/permsurf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "flatdeg/errors.hpp"
#include "text_util.hpp"

namespace flatdeg {

int Stratum::pole_count() const {
  return static_cast<int>(std::count(orders.begin(), orders.end(), -1));
}

std::vector<int> Stratum::without_marked() const {
  std::vector<int> out;
  for (int m : orders)
    if (m != 0) out.push_back(m);
  return out;
}

std::string Stratum::label(bool with_marked) const {
  std::vector<int> shown = with_marked ? orders : without_marked();
  std::ostringstream os;
  os << (kind == StratumKind::abelian ? "H(" : "Q(");
  std::size_t i = 0;
  bool first = true;
  while (i < shown.size()) {
    std::size_t j = i;
    while (j < shown.size() && shown[j] == shown[i]) ++j;
    os << (first ? "" : ", ") << shown[i];
    if (j - i > 1) os << '^' << j - i;
    first = false;
    i = j;
  }
  os << ')';
  return os.str();
}

Stratum make_stratum(StratumKind kind, std::vector<int> orders) {
  std::sort(orders.rbegin(), orders.rend());
  int total = std::accumulate(orders.begin(), orders.end(), 0);
  int per_genus = kind == StratumKind::abelian ? 2 : 4;
  // abelian: total = 2g - 2, quadratic: total = 4g - 4
  if ((total + per_genus) % per_genus != 0)
    throw InternalError("orders do not satisfy the degree relation");
  for (int m : orders)
    if (m < (kind == StratumKind::abelian ? 0 : -1)) throw InternalError("invalid order");
  return Stratum{kind, std::move(orders), (total + per_genus) / per_genus};
}

Origami::Origami(Perm h, Perm v) : h_(std::move(h)), v_(std::move(v)) {
  if (h_.size() != v_.size() || h_.size() == 0)
    throw ParseError("origami permutations must have the same positive degree");
}

Origami Origami::parse(std::string_view line) {
  auto parts = detail::split(line, ';');
  if (parts.size() != 3) throw ParseError("origami line must be 'd; h; v'");
  int d = detail::parse_int(parts[0]);
  return Origami(Perm::from_cycles(d, parts[1]), Perm::from_cycles(d, parts[2]));
}

Perm Origami::vertex_perm() const { return v_.inverse() * h_.inverse() * v_ * h_; }

std::vector<int> Origami::vertex_of_square() const {
  std::vector<int> id(static_cast<std::size_t>(size()));
  int k = 0;
  for (const auto& c : vertex_perm().cycles()) {
    for (int s : c) id[static_cast<std::size_t>(s)] = k;
    ++k;
  }
  return id;
}

bool Origami::is_connected() const {
  std::array<Perm, 2> gens{h_, v_};
  return is_transitive(size(), gens);
}

std::string Origami::to_string() const {
  return std::to_string(size()) + "; " + h_.to_string() + "; " + v_.to_string();
}

PillowCover::PillowCover(std::array<Perm, 4> g) : g_(std::move(g)) {
  int d = g_[0].size();
  if (d <= 0) throw ParseError("pillow cover degree must be positive");
  for (const auto& p : g_)
    if (p.size() != d) throw ParseError("pillow cover permutations must have equal degree");
  if (!(g_[0] * g_[1] * g_[2] * g_[3]).is_identity())
    throw MonodromyError("monodromy violates g0*g1*g2*g3 = id");
  if (!is_transitive(d, g_)) throw ConnectivityError("pillow cover monodromy is not transitive");
}

PillowCover PillowCover::parse(std::string_view line) {
  auto parts = detail::split(line, ';');
  if (parts.size() != 5) throw ParseError("pillow cover line must be 'd; g0; g1; g2; g3'");
  int d = detail::parse_int(parts[0]);
  return PillowCover({Perm::from_cycles(d, parts[1]), Perm::from_cycles(d, parts[2]),
                      Perm::from_cycles(d, parts[3]), Perm::from_cycles(d, parts[4])});
}

std::string PillowCover::to_string() const {
  std::string s = std::to_string(degree());
  for (const auto& p : g_) s += "; " + p.to_string();
  return s;
}

Stratum origami_stratum(const Origami& o) {
  if (!o.is_connected()) throw ConnectivityError("origami is not connected");
  std::vector<int> orders;
  for (int len : o.vertex_perm().cycle_type()) orders.push_back(len - 1);
  return make_stratum(StratumKind::abelian, std::move(orders));
}

Stratum pillow_stratum(const PillowCover& p) {
  std::vector<int> orders;
  int ramification = 0;
  for (const auto& g : p.monodromy())
    for (int len : g.cycle_type()) {
      orders.push_back(len - 2);
      ramification += len - 1;
    }
  Stratum s = make_stratum(StratumKind::quadratic, std::move(orders));
  // Riemann-Hurwitz over the sphere: 2 - 2g = 2d - ramification.
  if (2 - 2 * s.genus != 2 * p.degree() - ramification)
    throw InternalError("Riemann-Hurwitz mismatch in pillow_stratum");
  return s;
}

DoubleCover orientation_double_cover(const PillowCover& p) {
  const int d = p.degree();
  // Edge crossings front -> back across the bottom, right, top and left
  // edges of the pillowcase; bottom is the identity by choice of labels.
  const Perm& g0 = p.corner(0);
  Perm g1inv = p.corner(1).inverse();
  Perm g2inv = p.corner(2).inverse();
  const Perm& e_left = g0;
  const Perm& e_right = g1inv;
  Perm e_top = g2inv * g1inv;  // apply g2^-1, then g1^-1
  Perm e_left_inv = e_left.inverse();
  Perm e_right_inv = e_right.inverse();
  Perm e_top_inv = e_top.inverse();

  auto sq = [](int x, int q) { return 4 * x + q; };
  enum { q00 = 0, q10 = 1, q01 = 2, q11 = 3 };
  std::vector<int> h(static_cast<std::size_t>(4 * d)), v(h.size()), inv(h.size());
  for (int x = 0; x < d; ++x) {
    auto at = [&](std::vector<int>& a, int q) -> int& { return a[static_cast<std::size_t>(sq(x, q))]; };
    at(h, q00) = sq(e_right[x], q10);
    at(h, q10) = sq(e_left_inv[x], q00);
    at(h, q11) = sq(e_left[x], q01);
    at(h, q01) = sq(e_right_inv[x], q11);
    at(v, q00) = sq(e_top[x], q01);
    at(v, q01) = sq(x, q00);
    at(v, q11) = sq(x, q10);
    at(v, q10) = sq(e_top_inv[x], q11);
    at(inv, q00) = sq(x, q11);
    at(inv, q11) = sq(x, q00);
    at(inv, q10) = sq(x, q01);
    at(inv, q01) = sq(x, q10);
  }
  DoubleCover dc{Origami(Perm(std::move(h)), Perm(std::move(v))), Perm(std::move(inv)), true};
  dc.connected = dc.surface.is_connected();
  return dc;
}

bool is_half_translation_involution(const Origami& s, const Perm& i) {
  if (i.size() != s.size() || !i.is_involution() || i.fixed_points() != 0) return false;
  return i * s.h() * i == s.h().inverse() && i * s.v() * i == s.v().inverse();
}

Stratum quotient_stratum(const Origami& surface, const Perm& involution) {
  if (!is_half_translation_involution(surface, involution))
    throw InternalError("not a half-translation involution");
  const auto vertex = surface.vertex_of_square();
  Perm c = surface.vertex_perm();
  // Lower-left corner of s goes to the upper-right corner of i(s), which is
  // the lower-left corner of h(v(i(s))).
  std::map<int, int> image, length;
  for (int s = 0; s < surface.size(); ++s) {
    int t = surface.h()[surface.v()[involution[s]]];
    image[vertex[static_cast<std::size_t>(s)]] = vertex[static_cast<std::size_t>(t)];
    ++length[vertex[static_cast<std::size_t>(s)]];
  }
  std::vector<int> orders;
  for (auto [a, len] : length) {
    int b = image[a];
    if (a == b)
      orders.push_back(len - 2);
    else if (a < b)
      orders.push_back(2 * (len - 1));
  }
  return make_stratum(StratumKind::quadratic, std::move(orders));
}

}  // namespace flatdeg
