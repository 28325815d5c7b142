#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatdeg/permsurf.hpp"

namespace flatdeg {

// The curve w^N = prod (z - z_i)^{a_i} over the four poles of the pillowcase,
// 0 < a_i <= N. a_i == N means the cover is unbranched over z_i.
struct CyclicCoverSpec {
  int N = 1;
  std::array<int, 4> a{1, 1, 1, 1};

  static CyclicCoverSpec parse(std::string_view line);  // "N a1 a2 a3 a4"
  std::string to_string() const;
  // Throws DatumError unless 0 < a_i <= N, gcd(a, N) == 1, sum a == 0 mod N.
  void validate() const;
};

struct RamificationRow {
  int corner = 0;
  int cycles = 0;  // gcd(N, a_i) points over z_i
  int length = 0;  // ramification index N / gcd(N, a_i)
};

struct CyclicCover {
  PillowCover cover;
  std::vector<RamificationRow> ramification;
};

// g_i is translation by a_i on Z/N.
CyclicCover cyclic_to_pillow(const CyclicCoverSpec& s);

// Number of corners with nontrivial monodromy.
int branch_count(const PillowCover& p);

struct Criterion {
  bool value = false;
  std::string reason;
};

// Cyclic covers lie in the determinant locus iff some a_i == N, iff the
// branch locus has at most three points. Both are computed; disagreement
// throws InternalError.
Criterion is_determinant_locus(const CyclicCoverSpec& s);

struct CoverReport {
  int genus = 0;
  Stratum stratum;
  int n = 0;  // simple poles of the pulled-back differential
  int branch_count = 0;
  int degree = 0;
  bool galois = false;
  // Some pole of the base differential is not a branch point.
  bool unbranched_pole = false;
};

CoverReport cover_report(const PillowCover& p, bool galois);
CoverReport cover_report(const CyclicCoverSpec& s);

enum class Verdict { pass, fail, skipped };
std::string to_string(Verdict v);

struct BoundCheck {
  std::string name;
  Verdict verdict = Verdict::skipped;
  long lhs = 0;
  long rhs = 0;
  std::string note;
};

// Pole bound n >= max(2g-2, 2), degree bound d >= 3(g-1) (four branch points
// only) and, for Galois covers, an unbranched pole. All three only apply to
// degenerate covers.
std::vector<BoundCheck> check_bounds(const CoverReport& r, bool degenerate);

// Base differential with r zeros of orders m and k simple poles, three of
// them at 0, 1, infinity; the cover Y -> P^1 is branched over {0, 1, inf}
// with monodromy (h0, h1, hinf).
struct LocusSpec {
  std::vector<int> m;
  int k = 4;
  std::array<Perm, 3> cover{Perm(1), Perm(1), Perm(1)};

  // "m1 m2 ...; k; d; h0; h1; hinf", the first field may be empty.
  static LocusSpec parse(std::string_view line);
  void validate() const;
};

struct LocusMetadata {
  int n = 0;
  int dim = 0;
  int degree = 0;
  int genus_Y = 0;
  Stratum target;  // stratum of pi^* q on Y
};

LocusMetadata locus_metadata(const LocusSpec& L);

// q = prod (z - y_j)^{m_j} / [z (z - 1) prod (z - x_i)] dz^2 on the sphere.
class BaseDifferential {
 public:
  using Point = std::complex<double>;

  BaseDifferential(std::vector<int> m, int k, std::vector<Point> zeros, std::vector<Point> poles);

  // Order at a finite point; 0 away from the special points.
  int order_at(Point z) const;
  int order_at_infinity() const;
  // Special points with their orders; infinity is reported as nullopt.
  std::vector<std::pair<std::optional<Point>, int>> divisor() const;
  // Coefficient f with q = f(z) dz^2.
  Point operator()(Point z) const;

 private:
  std::vector<int> m_;
  int k_;
  std::vector<Point> zeros_, poles_;
};

BaseDifferential sample_base_differential(const std::vector<int>& m, int k,
                                          const std::vector<BaseDifferential::Point>& zeros,
                                          const std::vector<BaseDifferential::Point>& poles);

}  // namespace flatdeg
