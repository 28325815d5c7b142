#include "flatdeg/bform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <json.hpp>

#include "flatdeg/errors.hpp"

namespace flatdeg {

namespace {

constexpr double kPi = 3.14159265358979323846;

int pos_mod(long long x, int n) { return static_cast<int>(((x % n) + n) % n); }

std::string fmt_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  if (z.imag() == 0.0) {
    os << z.real();
  } else {
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- curve

void SuperellipticCurve::validate() const {
  if (N < 1) throw DatumError("N must be positive");
  if (points.size() != a.size()) throw DatumError("one exponent per branch point");
  int g = N;
  for (int x : a) {
    if (x < 1 || x > N) throw DatumError("exponents must lie in (0, N]");
    g = std::gcd(g, x);
  }
  if (g != 1) throw DatumError("gcd of exponents and N must be 1");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw GeometryError("branch points must be distinct");
}

int SuperellipticCurve::a_inf() const {
  long long s = 0;
  for (int x : a) s += x;
  return pos_mod(-s, N);
}

int SuperellipticCurve::genus() const {
  // 2g - 2 = -2N + sum over branch values of (N - #points in the fibre)
  long long r = 0;
  for (int x : a) r += N - std::gcd(N, x);
  r += N - std::gcd(N, a_inf());
  long long twice = r - 2LL * N + 2;
  if (twice < 0 || twice % 2) throw InternalError("Riemann-Hurwitz gave a non-integral genus");
  return static_cast<int>(twice / 2);
}

std::string SuperellipticCurve::to_string() const {
  std::ostringstream os;
  os << "w^" << N << " =";
  for (std::size_t i = 0; i < points.size(); ++i)
    os << " (z-" << fmt_complex(points[i]) << ")^" << a[i];
  return os.str();
}

std::string EigenForm::to_string() const {
  std::ostringstream os;
  os << "z^" << r << " w^-" << b << " dz";
  return os.str();
}

std::vector<EigenForm> candidate_forms(const SuperellipticCurve& c, int extra_r) {
  c.validate();
  std::vector<EigenForm> out;
  const int n = static_cast<int>(c.points.size());
  const int ainf = c.a_inf();
  const int einf = c.N / std::gcd(c.N, ainf);
  for (int b = 1; b < c.N; ++b) {
    EigenForm base;
    base.b = b;
    // Sum of the fractional parts, kept as a multiple of 1/N to stay exact.
    long long mu_num = 0;
    for (int i = 0; i < n; ++i) {
      long long ba = static_cast<long long>(b) * c.a[i];
      base.floors.push_back(static_cast<int>(ba / c.N));
      base.mu.push_back(static_cast<double>(ba % c.N) / c.N);
      int e = c.N / std::gcd(c.N, c.a[i]);
      // -e mu + e - 1, with e mu = (ba mod N) * e / N an integer
      base.valuation.push_back(-static_cast<int>((ba % c.N) * e / c.N) + e - 1);
      mu_num += ba % c.N;
    }
    int rmax = static_cast<int>(mu_num / c.N) + extra_r;
    for (int r = 0; r <= rmax; ++r) {
      EigenForm f = base;
      f.r = r;
      // einf (sum mu - r - 1) - 1
      long long num = static_cast<long long>(einf) * (mu_num - static_cast<long long>(r + 1) * c.N);
      if (num % c.N) throw InternalError("valuation at infinity is not integral");
      f.valuation_inf = static_cast<int>(num / c.N) - 1;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<EigenForm> holomorphic_basis(const SuperellipticCurve& c) {
  std::vector<EigenForm> out;
  for (auto& f : candidate_forms(c)) {
    bool ok = f.valuation_inf >= 0;
    for (int v : f.valuation) ok = ok && v >= 0;
    if (ok) out.push_back(std::move(f));
  }
  if (static_cast<int>(out.size()) != c.genus())
    throw InternalError("holomorphic basis has " + std::to_string(out.size()) +
                        " forms but the genus is " + std::to_string(c.genus()));
  return out;
}

// ---------------------------------------------------------------- quadratic differential

CoverQuadratic CoverQuadratic::pullback(const BaseDifferential& q) {
  CoverQuadratic out;
  for (const auto& [p, m] : q.divisor()) {
    if (!p) continue;
    auto it = std::find_if(out.factors.begin(), out.factors.end(),
                           [&](const auto& f) { return f.first == *p; });
    if (it == out.factors.end())
      out.factors.push_back({*p, m});
    else
      it->second += m;
  }
  std::erase_if(out.factors, [](const auto& f) { return f.second == 0; });
  return out;
}

CoverQuadratic CoverQuadratic::scaled(Complex c) const {
  CoverQuadratic out = *this;
  out.coefficient *= c;
  return out;
}

std::string CoverQuadratic::to_string() const {
  std::ostringstream os;
  os << fmt_complex(coefficient);
  if (character) os << " w^-" << character;
  for (const auto& [p, m] : factors) os << " (z-" << fmt_complex(p) << ")^" << m;
  os << " dz^2";
  return os.str();
}

// ---------------------------------------------------------------- quadrature

namespace {

// Smooth step: 1 on [0, 1/4], 0 on [1, inf).
double bump(double x) {
  constexpr double a = 0.25;
  if (x <= a) return 1.0;
  if (x >= 1.0) return 0.0;
  double t = (1.0 - x) / (1.0 - a);
  double g1 = std::exp(-1.0 / t), g0 = std::exp(-1.0 / (1.0 - t));
  return g1 / (g1 + g0);
}

// One integrand: scale * prod |z - p_j|^{mod_j} e^{i phase_j arg(z - p_j)} * |z|^{zmod} e^{i zphase arg z}.
struct Term {
  Complex scale;
  std::vector<double> mod;
  std::vector<int> phase;
  double zmod = 0;
  int zphase = 0;
};

struct Layout {
  std::vector<Complex> sites;
  std::vector<double> radius;
  double rho = 1.0;
};

Layout make_layout(std::vector<Complex> sites) {
  Layout l;
  l.sites = std::move(sites);
  const std::size_t k = l.sites.size();
  double far = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double d = 1.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) d = std::min(d, 0.5 * std::abs(l.sites[i] - l.sites[j]));
    l.radius.push_back(d);
    far = std::max(far, std::abs(l.sites[i]) + d);
  }
  l.rho = std::max(1.0, 1.1 * far);
  return l;
}

struct Evaluator {
  const Layout& layout;
  const std::vector<Term>& terms;
  std::vector<double> logabs, arg;

  Evaluator(const Layout& l, const std::vector<Term>& t)
      : layout(l), terms(t), logabs(l.sites.size()), arg(l.sites.size()) {}

  // chart: index of a site, sites.size() for infinity, -1 for the plane.
  void add(int chart, double r, double theta, Complex z, double weight, Eigen::VectorXcd& acc) {
    const int k = static_cast<int>(layout.sites.size());
    double logz = 0, argz = 0, logj = 0;
    bool zero_z = false;
    if (chart == k) {
      const Complex u = std::polar(r, theta);
      const double lr = std::log(r);
      for (int j = 0; j < k; ++j) {
        const Complex t = 1.0 - layout.sites[j] * u;
        logabs[j] = std::log(std::abs(t)) - lr;
        arg[j] = std::arg(t) - theta;
      }
      logz = -lr;
      argz = -theta;
      logj = -3.0 * lr;
    } else {
      for (int j = 0; j < k; ++j) {
        if (j == chart) {
          logabs[j] = std::log(r);
          arg[j] = theta;
        } else {
          const Complex d = z - layout.sites[j];
          logabs[j] = std::log(std::abs(d));
          arg[j] = std::arg(d);
        }
      }
      if (std::abs(z) == 0.0) zero_z = true;
      else {
        logz = std::log(std::abs(z));
        argz = std::arg(z);
      }
      if (chart >= 0) logj = std::log(r);
    }
    for (std::size_t e = 0; e < terms.size(); ++e) {
      const Term& t = terms[e];
      if (zero_z && t.zmod != 0) continue;
      double lm = logj, ph = 0;
      for (int j = 0; j < k; ++j) {
        if (t.mod[j] != 0) lm += t.mod[j] * logabs[j];
        if (t.phase[j] != 0) ph += t.phase[j] * arg[j];
      }
      if (t.zmod != 0) lm += t.zmod * logz;
      if (t.zphase != 0) ph += t.zphase * argz;
      acc[e] += weight * std::exp(lm) * std::polar(1.0, ph) * t.scale;
    }
  }
};

struct TanhSinh {
  std::vector<double> x, w;  // on [0, 1]
  explicit TanhSinh(double h) {
    const double tmax = 6.5;
    for (int i = -static_cast<int>(tmax / h); i * h <= tmax; ++i) {
      const double t = i * h;
      const double s = 0.5 * kPi * std::sinh(t);
      const double e = std::exp(-2.0 * std::abs(s));
      const double xi = s >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
      const double wi = h * 0.5 * kPi * std::cosh(t) * sech2 * 0.5;
      if (xi < 1e-300 || xi >= 1.0 || wi == 0.0) continue;
      x.push_back(xi);
      w.push_back(wi);
    }
  }
};

std::vector<std::pair<double, double>> gauss_nodes() {
  using G = boost::math::quadrature::gauss<double, 8>;
  std::vector<std::pair<double, double>> out;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back({a[i], w[i]});
    if (a[i] != 0.0) out.push_back({-a[i], w[i]});
  }
  return out;
}

struct LevelResult {
  std::vector<Eigen::VectorXcd> regions;  // sites, infinity, plane
  Eigen::VectorXcd total;
};

LevelResult integrate_level(const Layout& layout, const std::vector<Term>& terms, int level,
                            double tol) {
  const int k = static_cast<int>(layout.sites.size());
  const Eigen::Index m = static_cast<Eigen::Index>(terms.size());
  Evaluator ev(layout, terms);
  LevelResult res;
  res.regions.assign(k + 2, Eigen::VectorXcd::Zero(m));

  const TanhSinh ts(0.5 / (1 << level));
  const int nang = 16 << level;
  const double dtheta = 2.0 * kPi / nang;

  for (int c = 0; c <= k; ++c) {
    const double radius = c < k ? layout.radius[c] : 1.0 / layout.rho;
    for (std::size_t i = 0; i < ts.x.size(); ++i) {
      const double r = radius * ts.x[i];
      const double part = c < k ? bump(r / radius) : bump(r * layout.rho);
      if (part == 0.0) continue;
      const double wr = radius * ts.w[i] * part * dtheta;
      for (int a = 0; a < nang; ++a) {
        const double th = (a + 0.5) * dtheta;
        const Complex z = c < k ? layout.sites[c] + std::polar(r, th) : Complex{};
        ev.add(c, r, th, z, wr, res.regions[c]);
      }
    }
  }

  // Plane remainder: what the disks and the chart at infinity leave, on adaptive cells.
  const auto gl = gauss_nodes();
  const double half = 4.0 * layout.rho;  // the chart at infinity takes over fully at |z| = 4 rho
  const double box_area = 4.0 * half * half;
  auto plane_weight = [&](Complex z) {
    double w = 1.0 - bump(layout.rho / std::abs(z));
    for (int j = 0; j < k; ++j) w -= bump(std::abs(z - layout.sites[j]) / layout.radius[j]);
    return w;
  };
  auto cell = [&](double x0, double y0, double x1, double y1) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
    const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
    for (const auto& [ax, wx] : gl)
      for (const auto& [ay, wy] : gl) {
        const Complex z(x0 + hx * (ax + 1), y0 + hy * (ay + 1));
        const double pw = plane_weight(z);
        if (pw <= 0.0) continue;
        ev.add(-1, 0, 0, z, pw * wx * wy * hx * hy, acc);
      }
    return acc;
  };
  const double cell_tol = tol * std::pow(0.25, level) / box_area;
  const int max_depth = 10 + level;
  struct Cell { double x0, y0, x1, y1; Eigen::VectorXcd value; int depth; };
  std::vector<Cell> stack;
  const int coarse = 8;
  const double step = 2.0 * half / coarse;
  for (int i = 0; i < coarse; ++i)
    for (int j = 0; j < coarse; ++j) {
      const double x0 = -half + i * step, y0 = -half + j * step;
      stack.push_back({x0, y0, x0 + step, y0 + step, cell(x0, y0, x0 + step, y0 + step), 0});
    }
  while (!stack.empty()) {
    Cell c = std::move(stack.back());
    stack.pop_back();
    const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
    Cell kids[4] = {{c.x0, c.y0, xm, ym, {}, c.depth + 1},
                    {xm, c.y0, c.x1, ym, {}, c.depth + 1},
                    {c.x0, ym, xm, c.y1, {}, c.depth + 1},
                    {xm, ym, c.x1, c.y1, {}, c.depth + 1}};
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(m);
    for (auto& kd : kids) {
      kd.value = cell(kd.x0, kd.y0, kd.x1, kd.y1);
      sum += kd.value;
    }
    const double area = (c.x1 - c.x0) * (c.y1 - c.y0);
    const double diff = m ? (sum - c.value).cwiseAbs().maxCoeff() : 0.0;
    if (diff <= cell_tol * area || c.depth >= max_depth) {
      res.regions[k + 1] += sum;
    } else {
      for (auto& kd : kids) stack.push_back(std::move(kd));
    }
  }

  res.total = Eigen::VectorXcd::Zero(m);
  for (const auto& r : res.regions) res.total += r;
  return res;
}

std::string region_name(const Layout& l, int i) {
  const int k = static_cast<int>(l.sites.size());
  if (i < k) return "disk around z=" + fmt_complex(l.sites[i]);
  if (i == k) return "chart at infinity";
  return "plane cells";
}

}  // namespace

BFormReport pairing_matrices(const SuperellipticCurve& c, const CoverQuadratic& q,
                             const std::vector<EigenForm>& basis, const QuadratureOptions& opt) {
  c.validate();
  const int N = c.N;
  const int g = static_cast<int>(basis.size());
  BFormReport rep;
  rep.curve = c;
  rep.q = q;
  rep.basis = basis;
  rep.B = Eigen::MatrixXcd::Zero(g, g);
  rep.H = Eigen::MatrixXcd::Zero(g, g);
  rep.selected.setConstant(g, g, false);
  if (g == 0) return rep;

  if (q.coefficient == Complex{}) throw GeometryError("quadratic differential is zero");
  const int ch = pos_mod(q.character, N);

  // Sites: curve points first, then points of q not already present.
  std::vector<Complex> sites = c.points;
  std::vector<int> qsite;
  for (const auto& [p, mult] : q.factors) {
    auto it = std::find(sites.begin(), sites.end(), p);
    qsite.push_back(static_cast<int>(it - sites.begin()));
    if (it == sites.end()) sites.push_back(p);
  }
  const std::size_t ns = sites.size();
  const std::size_t nb = c.points.size();

  std::vector<Term> terms;
  struct Slot { int i, j; bool b_entry; };
  std::vector<Slot> slots;
  const Complex qphase = std::conj(q.coefficient) / std::abs(q.coefficient);

  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      const EigenForm& x = basis[i];
      const EigenForm& y = basis[j];
      if (x.b == y.b) {
        // Hodge pairing: the sheet sum gives N copies of |z|^.. prod |z - z_i|^{-2 mu_i}.
        Term t;
        t.scale = static_cast<double>(N);
        t.mod.assign(ns, 0.0);
        t.phase.assign(ns, 0);
        for (std::size_t s = 0; s < nb; ++s) t.mod[s] = -2.0 * x.mu[s];
        t.zmod = x.r + y.r;
        t.zphase = x.r - y.r;
        terms.push_back(std::move(t));
        slots.push_back({i, j, false});
      }
      if (pos_mod(x.b + y.b - ch, N) == 0) {
        rep.selected(i, j) = rep.selected(j, i) = true;
        // alpha beta / q times |q|: w^{ch - b_x - b_y} = prod (z - z_i)^{-k a_i}.
        const int kk = (x.b + y.b - ch) / N;
        Term t;
        t.scale = static_cast<double>(N) * qphase;
        t.mod.assign(ns, 0.0);
        t.phase.assign(ns, 0);
        for (std::size_t s = 0; s < nb; ++s) {
          const int n = x.floors[s] + y.floors[s] - kk * c.a[s];
          t.mod[s] = n - static_cast<double>(ch) * c.a[s] / N;
          t.phase[s] = n;
        }
        for (std::size_t f = 0; f < q.factors.size(); ++f) t.phase[qsite[f]] -= q.factors[f].second;
        t.zmod = x.r + y.r;
        t.zphase = x.r + y.r;
        terms.push_back(std::move(t));
        slots.push_back({i, j, true});
      }
    }

  const Layout layout = make_layout(sites);
  LevelResult prev = integrate_level(layout, terms, opt.min_level - 1, opt.tol);
  LevelResult cur;
  double err = 0.0;
  int worst = 0;
  int level = opt.min_level;
  for (;; ++level) {
    cur = integrate_level(layout, terms, level, opt.tol);
    err = (cur.total - prev.total).cwiseAbs().maxCoeff();
    double wv = -1;
    for (std::size_t r = 0; r < cur.regions.size(); ++r) {
      double d = (cur.regions[r] - prev.regions[r]).cwiseAbs().maxCoeff();
      if (d > wv) {
        wv = d;
        worst = static_cast<int>(r);
      }
    }
    const double scale = std::max(1.0, cur.total.cwiseAbs().maxCoeff());
    if (err <= opt.tol * scale) break;
    if (level >= opt.max_level) {
      if (opt.strict)
        throw NumericalError("quadrature did not converge: change " + std::to_string(err) +
                             " at level " + std::to_string(level) + ", worst in " +
                             region_name(layout, worst));
      break;
    }
    prev = std::move(cur);
  }
  rep.quad_error = err;
  rep.level = level;
  rep.worst_region = region_name(layout, worst);

  for (std::size_t e = 0; e < slots.size(); ++e) {
    const auto [i, j, is_b] = slots[e];
    const Complex v = cur.total[static_cast<Eigen::Index>(e)];
    if (is_b) {
      rep.B(i, j) = rep.B(j, i) = v;
    } else {
      rep.H(i, j) = v;
      rep.H(j, i) = std::conj(v);
    }
  }
  for (int i = 0; i < g; ++i) rep.H(i, i) = rep.H(i, i).real();
  rep.theta = theta_spectrum(rep);
  return rep;
}

std::vector<double> theta_spectrum(const BFormReport& report) {
  const Eigen::Index g = report.H.rows();
  if (g == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(report.H.conjugate());
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) throw NumericalError("Hodge Gram matrix is not positive definite");
  const Eigen::MatrixXcd C =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::MatrixXcd K = C.transpose() * report.B * C;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(K);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::string BFormReport::to_json() const {
  using nlohmann::json;
  auto mat = [](const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  json pts = json::array();
  for (auto p : curve.points) pts.push_back({p.real(), p.imag()});
  json forms = json::array();
  for (const auto& f : basis) forms.push_back({{"r", f.r}, {"b", f.b}});
  json j;
  j["curve"] = {{"N", curve.N}, {"points", pts}, {"a", curve.a}, {"genus", curve.genus()}};
  j["q"] = q.to_string();
  j["basis"] = forms;
  j["B"] = mat(B);
  j["H"] = mat(H);
  j["theta"] = theta;
  j["quad_error"] = quad_error;
  j["level"] = level;
  j["worst_region"] = worst_region;
  return j.dump(2);
}

}  // namespace flatdeg
