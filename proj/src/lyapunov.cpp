#include "flatdeg/lyapunov.hpp"

#include <gmp.h>

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "flatdeg/errors.hpp"

namespace flatdeg {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

Eigen::MatrixXd eigenbasis(const IntMatrix& I, int sign) {
  long n = I.rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + sign * I.cast<double>();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-9);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(qr.rank());
}

CocycleModel::Cycle make_cycle(const CocycleModel& m, int v, Move move) {
  CocycleModel::Cycle c;
  long n = m.bases[at(v)].rank;
  c.exact = IntMatrix::Identity(n, n);
  int w = v;
  do {
    const auto& e = m.graph.edge(w, move);
    c.exact = m.edges[at(3 * w + static_cast<int>(move))] * c.exact;
    w = e.to;
    ++c.period;
  } while (w != v);
  IntMatrix N = c.exact - IntMatrix::Identity(n, n);
  c.unipotent = (N * N).isZero();
  Eigen::MatrixXd A = c.exact.cast<double>();
  c.Ap = m.Qp[at(v)].transpose() * A * m.Qp[at(v)];
  c.Am = m.Qm[at(v)].transpose() * A * m.Qm[at(v)];
  return c;
}

}  // namespace

CocycleModel build_cocycle_model(const PillowCover& p, int orbit_cap) {
  CocycleModel m;
  auto dc = orientation_double_cover(p);
  m.graph = enumerate_orbit(from_double_cover(dc), orbit_cap);
  m.genus = pillow_stratum(p).genus;
  int nv = m.graph.size();
  for (const auto& x : m.graph.vertices) {
    m.bases.push_back(homology_basis(x.surface));
    m.involutions.push_back(involution_matrix(m.bases.back(), x.surface, *x.involution));
    m.Qp.push_back(eigenbasis(m.involutions.back(), 1));
    m.Qm.push_back(eigenbasis(m.involutions.back(), -1));
  }
  m.dim_plus = static_cast<int>(m.Qp[0].cols());
  m.dim_minus = static_cast<int>(m.Qm[0].cols());
  m.genus_cover = m.bases[0].rank / 2;
  if (m.dim_plus != 2 * m.genus) throw InternalError("invariant homology has the wrong dimension");

  for (int v = 0; v < nv; ++v) {
    const auto& from = m.graph.vertices[at(v)];
    for (Move mv : {Move::S, Move::T, Move::Tinv}) {
      const auto& e = m.graph.edge(v, mv);
      const auto& to_basis = m.bases[at(e.to)];
      IntMatrix M = induced_matrix(m.bases[at(v)], to_basis, [&](const Chain& z) {
        return relabel_chain(e.relabel, move_chain(from.surface, mv, z));
      });
      if (M.transpose() * to_basis.J * M != m.bases[at(v)].J) throw InternalError("cocycle is not symplectic");
      if (m.involutions[at(e.to)] * M != M * m.involutions[at(v)])
        throw InternalError("cocycle does not commute with the involution");
      Eigen::MatrixXd Md = M.cast<double>();
      m.Ep.push_back(m.Qp[at(e.to)].transpose() * Md * m.Qp[at(v)]);
      m.Em.push_back(m.Qm[at(e.to)].transpose() * Md * m.Qm[at(v)]);
      m.edges.push_back(std::move(M));
    }
  }
  for (int v = 0; v < nv; ++v) {
    m.t_cycles.push_back(make_cycle(m, v, Move::T));
    m.tinv_cycles.push_back(make_cycle(m, v, Move::Tinv));
  }
  return m;
}

DigitSource::DigitSource(std::uint64_t seed, int chunk) : rng_(seed), chunk_(chunk) {}

// Leading digits of m / 2^K agree with those of any real in the same dyadic
// interval while q_n^2 < 2^K; q_n grows like exp(pi^2 n / (12 log 2)), so
// K = 3.42 * chunk bits plus a margin suffices.
void DigitSource::refill() {
  long bits = static_cast<long>(3.43 * chunk_) + 256;
  long words = (bits + 63) / 64;
  std::vector<std::uint64_t> limbs(static_cast<std::size_t>(words));
  for (auto& w : limbs) w = rng_();
  mpz_t a, b, q, r;
  mpz_inits(a, b, q, r, nullptr);
  mpz_import(b, limbs.size(), -1, sizeof(std::uint64_t), 0, 0, limbs.data());
  mpz_setbit(a, static_cast<mp_bitcnt_t>(64 * words));
  buf_.clear();
  pos_ = 0;
  while (static_cast<int>(buf_.size()) < chunk_ && mpz_sgn(b) != 0) {
    mpz_tdiv_qr(q, r, a, b);
    std::uint64_t digit = mpz_sizeinbase(q, 2) > 62 ? (std::uint64_t{1} << 62) : mpz_get_ui(q);
    buf_.push_back(digit);
    mpz_swap(a, b);
    mpz_swap(b, r);
  }
  mpz_clears(a, b, q, r, nullptr);
}

std::uint64_t DigitSource::next() {
  if (pos_ >= buf_.size()) refill();
  return buf_[pos_++];
}

namespace {

struct Walker {
  const CocycleModel& m;
  int v = 0;
  Eigen::MatrixXd Fp, Fm;
  std::vector<double> logp, logm;
  double tau = 0;
  double u[2] = {1.0, std::sqrt(2.0) - 1.0};

  explicit Walker(const CocycleModel& model) : m(model), v(model.graph.base) {
    Fp = Eigen::MatrixXd::Identity(m.dim_plus, m.dim_plus);
    Fm = Eigen::MatrixXd::Identity(m.dim_minus, m.dim_minus);
    logp.assign(at(m.dim_plus), 0.0);
    logm.assign(at(m.dim_minus), 0.0);
  }

  void edge(Move mv) {
    std::size_t k = at(3 * v + static_cast<int>(mv));
    Fp = m.Ep[k] * Fp;
    Fm = m.Em[k] * Fm;
    v = m.graph.edge(v, mv).to;
  }

  static Eigen::MatrixXd power(const Eigen::MatrixXd& A, std::uint64_t q, bool unipotent) {
    long n = A.rows();
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    if (unipotent) return I + static_cast<double>(q) * (A - I);
    Eigen::MatrixXd out = I, base = A;
    for (; q; q >>= 1) {
      if (q & 1) out = base * out;
      base = base * base;
    }
    return out;
  }

  // a steps of T or T^-1 from the current vertex.
  void shear(Move mv, std::uint64_t a) {
    const auto& c = (mv == Move::T ? m.t_cycles : m.tinv_cycles)[at(v)];
    std::uint64_t q = a / static_cast<std::uint64_t>(c.period);
    int r = static_cast<int>(a % static_cast<std::uint64_t>(c.period));
    if (q > 0) {
      Fp = power(c.Ap, q, c.unipotent) * Fp;
      Fm = power(c.Am, q, c.unipotent) * Fm;
    }
    for (int i = 0; i < r; ++i) edge(mv);
  }

  void digit(long index, std::uint64_t a) {
    double da = static_cast<double>(a);
    if (index % 2 == 0) {  // T^-a
      shear(Move::Tinv, a);
      u[0] -= da * u[1];
    } else {  // S T^a S^-1 = [[1, 0], [-a, 1]]
      for (int i = 0; i < 3; ++i) edge(Move::S);
      shear(Move::T, a);
      edge(Move::S);
      u[1] -= da * u[0];
    }
    double nu = std::hypot(u[0], u[1]);
    tau += std::log(nu);
    u[0] /= nu;
    u[1] /= nu;
  }

  long underflows = 0;

  void orthonormalize(Eigen::MatrixXd& F, std::vector<double>& logs) {
    if (F.cols() == 0) return;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(F);
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd Q = qr.householderQ();
    for (long i = 0; i < F.cols(); ++i) {
      double rii = R(i, i);
      double mag = std::abs(rii);
      if (mag < std::numeric_limits<double>::min()) {
        mag = std::numeric_limits<double>::min();
        ++underflows;
      }
      logs[at(static_cast<int>(i))] += std::log(mag);
      if (rii < 0) Q.col(i) *= -1;
    }
    F = Q;
  }

  void orthonormalize() {
    orthonormalize(Fp, logp);
    orthonormalize(Fm, logm);
  }

  bool large() const {
    return (Fp.size() && Fp.cwiseAbs().maxCoeff() > 1e100) || (Fm.size() && Fm.cwiseAbs().maxCoeff() > 1e100);
  }
};

// Sorted spectrum of a symplectic block folded onto its top half:
// (mu_i - mu_{n+1-i}) / 2.
std::vector<double> fold(std::vector<double> mu) {
  std::sort(mu.begin(), mu.end(), std::greater<>());
  std::size_t n = mu.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n / 2; ++i) out.push_back((mu[i] - mu[n - 1 - i]) / 2);
  return out;
}

std::vector<double> scaled(std::vector<double> x, double by) {
  for (auto& y : x) y /= by;
  return x;
}

void block_stats(const std::vector<std::vector<double>>& rows, std::vector<double>& sd) {
  sd.assign(rows.empty() ? 0 : rows[0].size(), 0.0);
  std::size_t B = rows.size();
  if (B < 2) return;
  for (std::size_t i = 0; i < sd.size(); ++i) {
    double mean = 0, var = 0;
    for (const auto& r : rows) mean += r[i];
    mean /= static_cast<double>(B);
    for (const auto& r : rows) var += (r[i] - mean) * (r[i] - mean);
    sd[i] = std::sqrt(var / static_cast<double>(B - 1) / static_cast<double>(B));
  }
}

}  // namespace

LyapunovEstimate run_monte_carlo(const CocycleModel& model, const MonteCarloOptions& opt) {
  if (opt.steps < 1 || opt.blocks < 1 || opt.reortho < 1) throw PreconditionError("steps, blocks and reortho must be positive");
  Walker w(model);
  DigitSource digits(opt.seed);
  LyapunovEstimate est;
  est.steps = opt.steps;
  est.seed = opt.seed;

  std::vector<std::vector<double>> block_plus, block_minus;
  std::vector<double> block_tau_rate;
  long done = 0;
  for (int b = 0; b < opt.blocks; ++b) {
    long end = opt.steps * (b + 1) / opt.blocks;
    auto lp0 = w.logp, lm0 = w.logm;
    double tau0 = w.tau;
    long start = done;
    for (; done < end; ++done) {
      w.digit(done, digits.next());
      if ((done + 1) % opt.reortho == 0 || w.large()) w.orthonormalize();
    }
    w.orthonormalize();
    double tb = w.tau - tau0;
    std::vector<double> dp(lp0.size()), dm(lm0.size());
    for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = w.logp[i] - lp0[i];
    for (std::size_t i = 0; i < dm.size(); ++i) dm[i] = w.logm[i] - lm0[i];
    BlockRow row{b, end - start, tb, scaled(fold(dp), tb), scaled(fold(dm), tb)};
    block_plus.push_back(row.plus);
    block_minus.push_back(row.minus);
    block_tau_rate.push_back(tb / static_cast<double>(end - start));
    if (opt.trace) est.trace.push_back(std::move(row));
  }
  est.lambda_plus = scaled(fold(w.logp), w.tau);
  est.lambda_minus = scaled(fold(w.logm), w.tau);
  block_stats(block_plus, est.stderr_plus);
  block_stats(block_minus, est.stderr_minus);
  est.tau_slope = w.tau / static_cast<double>(opt.steps);
  for (double r : block_tau_rate) est.tau_spread = std::max(est.tau_spread, std::abs(r / est.tau_slope - 1));

  std::ostringstream diag;
  if (!(est.tau_slope > 0)) diag << "tautological growth is not positive; ";
  if (est.tau_spread > 0.2) diag << "tautological block slopes spread by " << est.tau_spread << "; ";
  for (double s : est.stderr_plus)
    if (s > 0.05) {
      diag << "block variance of lambda+ is large; ";
      break;
    }
  est.underflows = w.underflows;
  if (w.underflows > 0) diag << w.underflows << " QR pivots underflowed; ";
  est.diagnostic = diag.str();
  est.converged = est.diagnostic.empty();
  return est;
}

LyapunovEstimate run_monte_carlo(const PillowCover& p, long steps, std::uint64_t seed, int blocks) {
  MonteCarloOptions opt;
  opt.steps = steps;
  opt.seed = seed;
  opt.blocks = blocks;
  return run_monte_carlo(build_cocycle_model(p), opt);
}

int default_threads() {
  if (const char* env = std::getenv("FLATDEG_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<LyapunovEstimate> run_seeds(const CocycleModel& model, MonteCarloOptions opt,
                                        const std::vector<std::uint64_t>& seeds, int threads) {
  if (threads <= 0) threads = default_threads();
  std::vector<LyapunovEstimate> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  auto work = [&](std::size_t i) {
    try {
      MonteCarloOptions o = opt;
      o.seed = seeds[i];
      out[i] = run_monte_carlo(model, o);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  std::size_t next = 0;
  while (next < seeds.size()) {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads && next < seeds.size(); ++t) pool.emplace_back(work, next++);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string trace_csv(const LyapunovEstimate& e) {
  std::ostringstream out;
  out.precision(10);
  std::size_t np = e.lambda_plus.size(), nm = e.lambda_minus.size();
  out << "seed,block,digits,tau";
  for (std::size_t i = 0; i < np; ++i) out << ",plus" << i + 1;
  for (std::size_t i = 0; i < nm; ++i) out << ",minus" << i + 1;
  out << '\n';
  for (const auto& r : e.trace) {
    out << e.seed << ',' << r.block << ',' << r.digits << ',' << r.tau;
    for (double x : r.plus) out << ',' << x;
    for (double x : r.minus) out << ',' << x;
    out << '\n';
  }
  return out.str();
}

std::string to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::pass: return "PASS";
    case CertVerdict::fail: return "FAIL";
    case CertVerdict::contradiction: return "CONTRADICTION";
  }
  return "?";
}

namespace {

Certificate certify_impl(const PillowCover& p, const CertifyOptions& opt, std::string input,
                         std::optional<Criterion> criterion) {
  if (!(opt.epsilon > 0 && opt.epsilon < 0.1)) throw PreconditionError("epsilon must lie in (0, 0.1)");
  if (opt.seeds < 3) throw PreconditionError("at least three seeds are needed");
  Certificate c;
  c.input = std::move(input);
  c.criterion = std::move(criterion);
  c.epsilon = opt.epsilon;

  auto model = build_cocycle_model(p, opt.orbit_cap);
  MonteCarloOptions mc;
  mc.steps = opt.steps;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < opt.seeds; ++i) seeds.push_back(opt.first_seed + static_cast<std::uint64_t>(i));
  c.runs = run_seeds(model, mc, seeds, opt.threads);
  for (const auto& r : c.runs)
    for (double x : r.lambda_plus) c.max_lambda_plus = std::max(c.max_lambda_plus, x);
  c.numeric_zero = c.max_lambda_plus < opt.epsilon;

  if (opt.exact) {
    Rational kappa = calibrate_sv(opt.orbit_cap).kappa;
    c.exact_sum = exact_channel(p, kappa, opt.orbit_cap).report.lyap_sum;
    c.exact_zero = *c.exact_sum == 0;
  }

  std::ostringstream why;
  bool contradiction = false;
  if (c.exact_zero && *c.exact_zero != c.numeric_zero) {
    contradiction = true;
    why << "Monte Carlo says " << (c.numeric_zero ? "zero" : "nonzero") << " but the exact sum is "
        << to_string(*c.exact_sum) << "; ";
  }
  if (c.criterion && c.criterion->value != c.numeric_zero) {
    contradiction = true;
    why << "symbolic criterion (" << c.criterion->reason << ") disagrees with Monte Carlo; ";
  }
  if (contradiction) {
    c.verdict = CertVerdict::contradiction;
  } else if (c.numeric_zero) {
    c.verdict = CertVerdict::pass;
    why << "max lambda+ " << c.max_lambda_plus << " < " << opt.epsilon;
    if (c.exact_sum) why << ", exact sum 0";
  } else {
    c.verdict = CertVerdict::fail;
    why << "not degenerate: max lambda+ " << c.max_lambda_plus;
    if (c.exact_sum) why << ", exact sum " << to_string(*c.exact_sum);
  }
  c.reason = why.str();
  return c;
}

}  // namespace

Certificate certify_degenerate(const PillowCover& p, const CertifyOptions& opt) {
  return certify_impl(p, opt, p.to_string(), std::nullopt);
}

Certificate certify_degenerate(const CyclicCoverSpec& s, const CertifyOptions& opt) {
  if (!(opt.epsilon > 0 && opt.epsilon < 0.1)) throw PreconditionError("epsilon must lie in (0, 0.1)");
  return certify_impl(cyclic_to_pillow(s).cover, opt, s.to_string(), is_determinant_locus(s));
}

}  // namespace flatdeg
