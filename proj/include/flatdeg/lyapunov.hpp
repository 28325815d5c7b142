#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flatdeg/coverings.hpp"
#include "flatdeg/cylinders.hpp"
#include "flatdeg/homology.hpp"

namespace flatdeg {

// The cocycle over the orbit of a double cover, reduced to orthonormal bases
// of the invariant (+) and anti-invariant (-) eigenspaces of the involution.
struct CocycleModel {
  OrbitGraph graph;
  std::vector<HomologyBasis> bases;
  std::vector<IntMatrix> involutions;         // I* per vertex
  std::vector<Eigen::MatrixXd> Qp, Qm;        // orthonormal eigenbases per vertex
  std::vector<IntMatrix> edges;               // integer cocycle, edges[3 v + move]
  std::vector<Eigen::MatrixXd> Ep, Em;        // reduced blocks per edge
  // Running T (or T^-1) from v returns to v after period steps, acting by
  // the reduced cycle matrix; kept exact to decide unipotency.
  struct Cycle {
    int period = 0;
    IntMatrix exact;
    bool unipotent = false;
    Eigen::MatrixXd Ap, Am;
  };
  std::vector<Cycle> t_cycles, tinv_cycles;
  int dim_plus = 0, dim_minus = 0;
  int genus = 0;        // of the quotient X
  int genus_cover = 0;  // of the double cover (counted over components)
};

CocycleModel build_cocycle_model(const PillowCover& p, int orbit_cap = 10000);

// Continued fraction digits of independent uniform slopes, read off the exact
// Euclidean algorithm on (2^K, m) with m a random K-bit integer. Only the
// leading digits of each chunk are used, where they follow the Gauss map.
class DigitSource {
 public:
  explicit DigitSource(std::uint64_t seed, int chunk = 4096);
  // Digits can exceed 64 bits in principle; they are capped at 2^62.
  std::uint64_t next();

 private:
  void refill();
  std::mt19937_64 rng_;
  int chunk_;
  std::vector<std::uint64_t> buf_;
  std::size_t pos_ = 0;
};

struct MonteCarloOptions {
  long steps = 100000;  // continued fraction digits
  std::uint64_t seed = 1;
  int blocks = 20;
  // Digits between QR steps. Waiting longer loses the contracting half of a
  // symplectic block to rounding (a frame grows like e^{1.19 k} over k
  // digits), which the folded spectrum needs.
  int reortho = 1;
  bool trace = false;
};

struct BlockRow {
  int block = 0;
  long digits = 0;
  double tau = 0;  // tautological log-growth in the block
  std::vector<double> plus, minus;
};

struct LyapunovEstimate {
  std::vector<double> lambda_plus, lambda_minus;  // top halves, nonincreasing
  std::vector<double> stderr_plus, stderr_minus;
  long steps = 0;
  std::uint64_t seed = 0;
  double tau_slope = 0;       // tautological growth per digit
  double tau_spread = 0;      // max relative deviation of block slopes
  bool converged = true;
  long underflows = 0;  // R diagonal entries lost to rounding and floored
  std::string diagnostic;
  std::vector<BlockRow> trace;
};

LyapunovEstimate run_monte_carlo(const CocycleModel& model, const MonteCarloOptions& opt);
LyapunovEstimate run_monte_carlo(const PillowCover& p, long steps, std::uint64_t seed, int blocks = 20);

// Runs seeds in parallel on `threads` workers (0: FLATDEG_THREADS or all cores).
std::vector<LyapunovEstimate> run_seeds(const CocycleModel& model, MonteCarloOptions opt,
                                        const std::vector<std::uint64_t>& seeds, int threads = 0);
int default_threads();

std::string trace_csv(const LyapunovEstimate& e);

enum class CertVerdict { pass, fail, contradiction };
std::string to_string(CertVerdict v);

struct Certificate {
  std::string input;
  std::optional<Criterion> criterion;  // symbolic, cyclic data only
  std::vector<LyapunovEstimate> runs;
  double max_lambda_plus = 0;
  double epsilon = 0;
  bool numeric_zero = false;
  std::optional<Rational> exact_sum;
  std::optional<bool> exact_zero;
  CertVerdict verdict = CertVerdict::fail;
  std::string reason;
};

struct CertifyOptions {
  double epsilon = 0.02;
  long steps = 100000;
  int seeds = 5;
  std::uint64_t first_seed = 1;
  int orbit_cap = 10000;
  int threads = 0;
  bool exact = true;
};

// Throws PreconditionError unless 0 < epsilon < 0.1 and seeds >= 3.
Certificate certify_degenerate(const PillowCover& p, const CertifyOptions& opt);
Certificate certify_degenerate(const CyclicCoverSpec& s, const CertifyOptions& opt);

}  // namespace flatdeg
