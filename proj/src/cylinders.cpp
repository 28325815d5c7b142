#include "flatdeg/cylinders.hpp"

#include <numeric>

#include "flatdeg/coverings.hpp"
#include "flatdeg/errors.hpp"

namespace flatdeg {

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

int CylinderDecomposition::area() const {
  int a = 0;
  for (const auto& c : cylinders) a += c.width * c.height;
  return a;
}

Rational CylinderDecomposition::modulus_sum() const {
  Rational s = 0;
  for (const auto& c : cylinders) s += Rational(c.height, c.width);
  s.canonicalize();
  return s;
}

CylinderDecomposition horizontal_cylinders(const Origami& o, MarkedPolicy policy) {
  CylinderDecomposition out;
  out.row_squares = o.h().cycles();
  int d = o.size();
  int nrows = static_cast<int>(out.row_squares.size());
  std::vector<int> row_of(static_cast<std::size_t>(d));
  for (int r = 0; r < nrows; ++r)
    for (int s : out.row_squares[static_cast<std::size_t>(r)]) row_of[static_cast<std::size_t>(s)] = r;

  // above[r] is the row glued across a regular top circle, -1 if the circle is singular.
  std::vector<int> above(static_cast<std::size_t>(nrows), -1);
  if (policy == MarkedPolicy::regular) {
    Perm c = o.vertex_perm();
    auto vid = o.vertex_of_square();
    std::vector<int> cyc_len(static_cast<std::size_t>(d), 0);
    for (int s = 0; s < d; ++s) ++cyc_len[static_cast<std::size_t>(vid[static_cast<std::size_t>(s)])];
    for (int r = 0; r < nrows; ++r) {
      bool regular = true;
      // The upper-left corner of s is the lower-left corner of v(s).
      for (int s : out.row_squares[static_cast<std::size_t>(r)])
        regular &= cyc_len[static_cast<std::size_t>(vid[static_cast<std::size_t>(o.v()[s])])] == 1;
      if (regular) above[static_cast<std::size_t>(r)] = row_of[static_cast<std::size_t>(o.v()[out.row_squares[static_cast<std::size_t>(r)][0]])];
    }
  }
  std::vector<int> below(static_cast<std::size_t>(nrows), -1);
  for (int r = 0; r < nrows; ++r)
    if (above[static_cast<std::size_t>(r)] >= 0) below[static_cast<std::size_t>(above[static_cast<std::size_t>(r)])] = r;

  std::vector<bool> used(static_cast<std::size_t>(nrows), false);
  auto stack_from = [&](int r) {
    Cylinder cyl;
    cyl.width = static_cast<int>(out.row_squares[static_cast<std::size_t>(r)].size());
    while (r >= 0 && !used[static_cast<std::size_t>(r)]) {
      used[static_cast<std::size_t>(r)] = true;
      cyl.rows.push_back(r);
      if (static_cast<int>(out.row_squares[static_cast<std::size_t>(r)].size()) != cyl.width)
        throw InternalError("rows glued across a regular circle differ in width");
      r = above[static_cast<std::size_t>(r)];
    }
    cyl.height = static_cast<int>(cyl.rows.size());
    out.cylinders.push_back(std::move(cyl));
  };
  // Bottom rows first; what is left are closed stacks (flat tori without marked points).
  for (int r = 0; r < nrows; ++r)
    if (below[static_cast<std::size_t>(r)] < 0) stack_from(r);
  for (int r = 0; r < nrows; ++r)
    if (!used[static_cast<std::size_t>(r)]) stack_from(r);
  if (out.area() != d) throw InternalError("cylinder areas do not add up");
  return out;
}

Rational raw_sv_average(const OrbitGraph& g) {
  Rational total = 0;
  for (const auto& v : g.vertices) total += horizontal_cylinders(v.surface).modulus_sum();
  total /= g.size();
  total.canonicalize();
  return total;
}

Rational sv_term(const OrbitGraph& g, const Rational& kappa) {
  Rational r = kappa * raw_sv_average(g);
  r.canonicalize();
  return r;
}

EKZReport ekz_sum(const Stratum& s, int n, const Rational& sv) {
  if (s.kind != StratumKind::quadratic) throw PreconditionError("EKZ sum needs a quadratic stratum");
  if (n != s.pole_count())
    throw PreconditionError("pole count " + std::to_string(n) + " does not match stratum " + s.label());
  EKZReport r;
  r.stratum = s;
  r.n = n;
  r.kappa_term = 0;
  r.zero_term = 0;
  for (int m : s.orders)
    if (m >= 1) {
      r.kappa_term += Rational(m * (m + 4), 24 * (m + 2));
      r.zero_term += Rational(m, m + 2);
    }
  r.pole_term = Rational(n, 8);
  r.sv_term = sv;
  r.lyap_sum = r.kappa_term - r.pole_term + r.sv_term;
  r.two_g_minus_two = 2 * s.genus - 2;
  r.residual = n - r.two_g_minus_two - r.zero_term;
  for (Rational* x : {&r.kappa_term, &r.zero_term, &r.pole_term, &r.lyap_sum, &r.residual}) x->canonicalize();
  if (r.lyap_sum == 0) r.bound_chain = std::array<Rational, 3>{r.two_g_minus_two, r.zero_term + r.two_g_minus_two, Rational(n)};
  r.residual_is_12_sv = r.residual == 12 * r.sv_term;
  return r;
}

ExactChannel exact_channel(const PillowCover& p, const Rational& kappa, int orbit_cap) {
  auto g = enumerate_orbit(from_double_cover(orientation_double_cover(p)), orbit_cap);
  ExactChannel out;
  out.orbit_size = g.size();
  out.raw_sv = raw_sv_average(g);
  auto s = pillow_stratum(p);
  out.report = ekz_sum(s, s.pole_count(), sv_term(g, kappa));
  return out;
}

SvCalibration calibrate_sv(int orbit_cap) {
  struct Target {
    CyclicCoverSpec spec;
    int lyap_sum;  // 0 on the degenerate families, 1 on the orientable control
  };
  const Target targets[] = {{{3, {1, 1, 1, 3}}, 0}, {{5, {1, 2, 2, 5}}, 0}, {{2, {1, 1, 1, 1}}, 1}};
  SvCalibration cal;
  for (const auto& t : targets) {
    auto ch = exact_channel(cyclic_to_pillow(t.spec).cover, 0, orbit_cap);
    Rational required = t.lyap_sum - ch.report.kappa_term + ch.report.pole_term;
    required.canonicalize();
    if (ch.raw_sv == 0) throw CalibrationError("vanishing Siegel-Veech sum on " + t.spec.to_string());
    cal.cases.push_back({t.spec.to_string(), ch.raw_sv, required});
  }
  cal.kappa = cal.cases[0].required / cal.cases[0].raw;
  cal.kappa.canonicalize();
  for (const auto& c : cal.cases)
    if (cal.kappa * c.raw != c.required)
      throw CalibrationError("no single Siegel-Veech normalization: " + c.datum + " needs " +
                             to_string(c.required / c.raw) + ", p = 3 gives " + to_string(cal.kappa));
  return cal;
}

}  // namespace flatdeg
