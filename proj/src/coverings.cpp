#include "flatdeg/coverings.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "flatdeg/errors.hpp"
#include "text_util.hpp"

namespace flatdeg {

CyclicCoverSpec CyclicCoverSpec::parse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<int> vals;
  std::string tok;
  while (in >> tok) vals.push_back(detail::parse_int(tok));
  if (vals.size() != 5) throw ParseError("cyclic datum needs 5 integers: '" + std::string(line) + "'");
  CyclicCoverSpec s{vals[0], {vals[1], vals[2], vals[3], vals[4]}};
  s.validate();
  return s;
}

std::string CyclicCoverSpec::to_string() const {
  std::ostringstream out;
  out << N;
  for (int x : a) out << ' ' << x;
  return out.str();
}

void CyclicCoverSpec::validate() const {
  if (N < 1) throw DatumError("N must be positive");
  int g = N, sum = 0;
  for (int x : a) {
    if (x < 1 || x > N) throw DatumError("need 0 < a_i <= N in (" + to_string() + ")");
    g = std::gcd(g, x);
    sum += x;
  }
  if (g != 1) throw DatumError("gcd(a_1..a_4, N) != 1 in (" + to_string() + ")");
  if (sum % N != 0) throw DatumError("sum of a_i not divisible by N in (" + to_string() + ")");
}

CyclicCover cyclic_to_pillow(const CyclicCoverSpec& s) {
  s.validate();
  std::array<Perm, 4> g;
  std::vector<RamificationRow> table;
  for (int i = 0; i < 4; ++i) {
    int ai = s.a[static_cast<std::size_t>(i)];
    g[static_cast<std::size_t>(i)] = Perm::rotation(s.N, ai % s.N);
    int c = std::gcd(s.N, ai);
    table.push_back({i, c, s.N / c});
  }
  return {PillowCover(g), table};
}

int branch_count(const PillowCover& p) {
  int b = 0;
  for (const auto& g : p.monodromy()) b += !g.is_identity();
  return b;
}

Criterion is_determinant_locus(const CyclicCoverSpec& s) {
  auto cc = cyclic_to_pillow(s);
  Criterion out;
  std::vector<int> hits;
  for (int i = 0; i < 4; ++i)
    if (s.a[static_cast<std::size_t>(i)] == s.N) hits.push_back(i);
  out.value = !hits.empty();
  bool galois = branch_count(cc.cover) <= 3;
  if (galois != out.value) throw InternalError("determinant-locus criteria disagree on (" + s.to_string() + ")");
  std::ostringstream r;
  if (out.value) {
    r << "unbranched over corner";
    for (int i : hits) r << ' ' << i;
  } else {
    r << "branched over all four corners";
  }
  out.reason = r.str();
  return out;
}

CoverReport cover_report(const PillowCover& p, bool galois) {
  CoverReport r;
  r.stratum = pillow_stratum(p);
  r.genus = r.stratum.genus;
  r.n = r.stratum.pole_count();
  r.branch_count = branch_count(p);
  r.degree = p.degree();
  r.galois = galois;
  r.unbranched_pole = r.branch_count < 4;
  return r;
}

CoverReport cover_report(const CyclicCoverSpec& s) { return cover_report(cyclic_to_pillow(s).cover, true); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "?";
}

std::vector<BoundCheck> check_bounds(const CoverReport& r, bool degenerate) {
  std::vector<BoundCheck> out;
  auto verdict = [](bool applies, bool ok) {
    return !applies ? Verdict::skipped : ok ? Verdict::pass : Verdict::fail;
  };

  BoundCheck poles;
  poles.name = "pole_bound";
  poles.lhs = r.n;
  poles.rhs = std::max(2 * r.genus - 2, 2);
  bool applies = degenerate && r.genus >= 1;
  poles.verdict = verdict(applies, poles.lhs >= poles.rhs);
  poles.note = applies ? "n >= max(2g-2, 2)" : "not degenerate or genus 0";
  out.push_back(poles);

  BoundCheck deg;
  deg.name = "degree_bound";
  deg.lhs = r.degree;
  deg.rhs = 3L * (r.genus - 1);
  applies = degenerate && r.branch_count == 4;
  deg.verdict = verdict(applies, deg.lhs >= deg.rhs);
  deg.note = applies ? "d >= 3(g-1)" : "needs a degenerate cover with four branch points";
  out.push_back(deg);

  BoundCheck pole;
  pole.name = "unbranched_pole";
  pole.lhs = 4 - r.branch_count;
  pole.rhs = 1;
  applies = degenerate && r.galois;
  pole.verdict = verdict(applies, r.unbranched_pole);
  pole.note = applies ? "some pole of q is not a branch point" : "needs a degenerate Galois cover";
  out.push_back(pole);
  return out;
}

LocusSpec LocusSpec::parse(std::string_view line) {
  auto f = detail::split(line, ';');
  if (f.size() != 6) throw ParseError("locus line needs 'm; k; d; h0; h1; hinf'");
  LocusSpec L;
  std::istringstream in(f[0]);
  std::string tok;
  while (in >> tok) L.m.push_back(detail::parse_int(tok));
  L.k = detail::parse_int(f[1]);
  int d = detail::parse_int(f[2]);
  if (d < 1) throw ParseError("cover degree must be positive");
  L.cover = {Perm::from_cycles(d, f[3]), Perm::from_cycles(d, f[4]), Perm::from_cycles(d, f[5])};
  L.validate();
  return L;
}

void LocusSpec::validate() const {
  for (int x : m)
    if (x < 1) throw SpecError("zero orders must be positive");
  if (k < 3) throw SpecError("need at least three simple poles (0, 1, infinity)");
  int total = std::accumulate(m.begin(), m.end(), 0);
  if (total - k != -4) throw SpecError("orders and poles violate sum(m) - k = -4");
  int d = cover[0].size();
  if (cover[1].size() != d || cover[2].size() != d) throw SpecError("cover monodromy degrees differ");
  // A nontrivial product means extra branching away from {0, 1, inf}.
  if (!(cover[0] * cover[1] * cover[2]).is_identity())
    throw SpecError("h0 h1 hinf != id: branch locus not contained in {0, 1, inf}");
  if (!is_transitive(d, cover)) throw ConnectivityError("cover monodromy is not transitive");
}

LocusMetadata locus_metadata(const LocusSpec& L) {
  L.validate();
  LocusMetadata out;
  int d = L.cover[0].size();
  out.degree = d;
  int r = static_cast<int>(L.m.size());
  int fixed = 0, ram = 0;
  std::vector<int> orders;
  for (const auto& h : L.cover) {
    fixed += h.fixed_points();
    for (int e : h.cycle_type()) {
      ram += e - 1;
      orders.push_back(e - 2);
    }
  }
  for (int i = 0; i < L.k - 3; ++i) orders.insert(orders.end(), static_cast<std::size_t>(d), -1);
  for (int mj : L.m) orders.insert(orders.end(), static_cast<std::size_t>(d), mj);
  out.n = fixed + d * (L.k - 3);
  out.dim = r + L.k - 2;
  out.genus_Y = (ram - 2 * d + 2) / 2;
  out.target = make_stratum(StratumKind::quadratic, orders);
  if (out.target.pole_count() != out.n) throw InternalError("locus pole count mismatch");
  return out;
}

BaseDifferential::BaseDifferential(std::vector<int> m, int k, std::vector<Point> zeros, std::vector<Point> poles)
    : m_(std::move(m)), k_(k), zeros_(std::move(zeros)), poles_(std::move(poles)) {
  for (int x : m_)
    if (x < 1) throw SpecError("zero orders must be positive");
  if (k_ < 3) throw SpecError("need at least three simple poles");
  if (std::accumulate(m_.begin(), m_.end(), 0) - k_ != -4)
    throw SpecError("orders and poles violate sum(m) - k = -4");
  if (zeros_.size() != m_.size()) throw SpecError("one point per zero order expected");
  if (static_cast<int>(poles_.size()) != k_ - 3) throw SpecError("need k - 3 poles besides 0, 1, infinity");
  std::vector<Point> all{Point(0, 0), Point(1, 0)};
  all.insert(all.end(), poles_.begin(), poles_.end());
  all.insert(all.end(), zeros_.begin(), zeros_.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!std::isfinite(all[i].real()) || !std::isfinite(all[i].imag()))
      throw GeometryError("special points must be finite (infinity is already a pole)");
    for (std::size_t j = 0; j < i; ++j)
      if (all[i] == all[j]) throw GeometryError("coincident special points");
  }
}

int BaseDifferential::order_at(Point z) const {
  if (z == Point(0, 0) || z == Point(1, 0)) return -1;
  for (const auto& x : poles_)
    if (z == x) return -1;
  for (std::size_t j = 0; j < zeros_.size(); ++j)
    if (z == zeros_[j]) return m_[j];
  return 0;
}

// f ~ z^{sum m - (k - 1)} and dz^2 = w^-4 dw^2 at w = 1/z.
int BaseDifferential::order_at_infinity() const {
  return (k_ - 1) - std::accumulate(m_.begin(), m_.end(), 0) - 4;
}

std::vector<std::pair<std::optional<BaseDifferential::Point>, int>> BaseDifferential::divisor() const {
  std::vector<std::pair<std::optional<Point>, int>> out{{Point(0, 0), -1}, {Point(1, 0), -1}};
  for (const auto& x : poles_) out.push_back({x, -1});
  for (std::size_t j = 0; j < zeros_.size(); ++j) out.push_back({zeros_[j], m_[j]});
  out.push_back({std::nullopt, order_at_infinity()});
  return out;
}

BaseDifferential::Point BaseDifferential::operator()(Point z) const {
  Point num(1, 0), den = z * (z - 1.0);
  for (std::size_t j = 0; j < zeros_.size(); ++j) num *= std::pow(z - zeros_[j], m_[j]);
  for (const auto& x : poles_) den *= z - x;
  return num / den;
}

BaseDifferential sample_base_differential(const std::vector<int>& m, int k,
                                          const std::vector<BaseDifferential::Point>& zeros,
                                          const std::vector<BaseDifferential::Point>& poles) {
  return BaseDifferential(m, k, zeros, poles);
}

}  // namespace flatdeg
