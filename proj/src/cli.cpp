#include "flatdeg/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "flatdeg/bform.hpp"
#include "flatdeg/coverings.hpp"
#include "flatdeg/cylinders.hpp"
#include "flatdeg/errors.hpp"
#include "flatdeg/lyapunov.hpp"
#include "flatdeg/orbit.hpp"
#include "text_util.hpp"

namespace flatdeg {

using nlohmann::json;

void RunConfig::validate() const {
  if (steps <= 0) throw ParseError("--steps must be positive");
  if (seeds <= 0) throw ParseError("--seeds must be positive");
  if (orbit_cap <= 0) throw ParseError("--orbit-cap must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.1)) throw ParseError("--epsilon must lie in (0, 0.1)");
  if (format != "json" && format != "csv") throw ParseError("--format must be json or csv");
}

namespace {

struct Line {
  int number;
  std::string text;
};

std::vector<Line> read_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw ParseError("cannot open " + path);
    in = &file;
  }
  std::vector<Line> out;
  std::string s;
  for (int n = 1; std::getline(*in, s); ++n) {
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    s = detail::trim(s);
    if (!s.empty()) out.push_back({n, s});
  }
  if (out.empty()) throw ParseError("no input records");
  return out;
}

// A cover line is either a cyclic datum "N a1 a2 a3 a4" or a monodromy tuple "d; g0; g1; g2; g3".
using CoverInput = std::variant<CyclicCoverSpec, PillowCover>;

CoverInput parse_cover(const std::string& s) {
  if (s.find(';') == std::string::npos) {
    auto spec = CyclicCoverSpec::parse(s);
    spec.validate();
    return spec;
  }
  return PillowCover::parse(s);
}

PillowCover as_pillow(const CoverInput& c) {
  if (auto* s = std::get_if<CyclicCoverSpec>(&c)) return cyclic_to_pillow(*s).cover;
  return std::get<PillowCover>(c);
}

json stratum_json(const Stratum& s) {
  return {{"label", s.label()}, {"genus", s.genus}, {"orders", s.orders}};
}

json rational_list(std::initializer_list<Rational> xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

json report_json(const std::string& input, const CoverReport& r) {
  return {{"spec", input},          {"genus", r.genus},
          {"stratum", stratum_json(r.stratum)},
          {"n", r.n},               {"branch_count", r.branch_count},
          {"degree", r.degree},     {"galois", r.galois},
          {"unbranched_pole", r.unbranched_pole}};
}

json estimate_json(const LyapunovEstimate& e) {
  return {{"seed", e.seed},
          {"steps", e.steps},
          {"lambda_plus", e.lambda_plus},
          {"lambda_minus", e.lambda_minus},
          {"stderr_plus", e.stderr_plus},
          {"stderr_minus", e.stderr_minus},
          {"tau_slope", e.tau_slope},
          {"converged", e.converged},
          {"underflows", e.underflows},
          {"diagnostic", e.diagnostic}};
}

Complex parse_complex(const std::string& s) {
  auto parts = detail::split(s, ',');
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw ParseError("trailing characters");
    return v;
  };
  try {
    if (parts.size() == 1) return {num(parts[0]), 0.0};
    if (parts.size() == 2) return {num(parts[0]), num(parts[1])};
  } catch (const std::exception&) {
  }
  throw ParseError("bad complex number '" + s + "' (use x or x,y)");
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::vector<int> ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& w : words(s)) out.push_back(detail::parse_int(w));
  return out;
}

// "N a1 a2 a3 a4 @ t": the cyclic cover over 0, 1, t, infinity with q = dz^2 / (z (z-1) (z-t)).
// "N; a1 .. ak; z1 .. zk; c; p:m ..": general curve and q = w^-c prod (z-p)^m dz^2.
std::pair<SuperellipticCurve, CoverQuadratic> parse_bform(const std::string& s) {
  if (auto at = s.find('@'); at != std::string::npos) {
    auto spec = CyclicCoverSpec::parse(s.substr(0, at));
    spec.validate();
    const Complex t = parse_complex(detail::trim(s.substr(at + 1)));
    SuperellipticCurve c{spec.N, {0.0, 1.0, t}, {spec.a[0], spec.a[1], spec.a[2]}};
    return {c, CoverQuadratic::pullback(BaseDifferential({}, 4, {}, {t}))};
  }
  auto f = detail::split(s, ';');
  if (f.size() < 4 || f.size() > 5) throw ParseError("bform line needs 4 or 5 ';'-separated fields");
  SuperellipticCurve c;
  c.N = detail::parse_int(f[0]);
  c.a = ints(f[1]);
  for (const auto& w : words(f[2])) c.points.push_back(parse_complex(w));
  c.validate();
  CoverQuadratic q;
  q.character = detail::parse_int(f[3]);
  if (f.size() == 5)
    for (const auto& w : words(f[4])) {
      auto colon = w.find(':');
      if (colon == std::string::npos) throw ParseError("q factor must be point:order");
      q.factors.push_back({parse_complex(w.substr(0, colon)), detail::parse_int(w.substr(colon + 1))});
    }
  return {c, q};
}

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  if (v.is_object()) return v.dump();
  if (v.is_null()) return "";
  return v.dump();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_output(const RunConfig& cfg, const json& records) {
  std::ostringstream os;
  if (cfg.format == "json") {
    os << records.dump(2) << "\n";
  } else {
    // A list of objects inside a record (bound checks, ramification rows) becomes one row each,
    // with the nested keys prefixed by the list name. Other nested values are flattened.
    json rows = json::array();
    for (const auto& r : records) {
      std::string list;
      for (auto it = r.begin(); it != r.end() && list.empty(); ++it)
        if (it->is_array() && !it->empty() && (*it)[0].is_object()) list = it.key();
      if (list.empty()) {
        rows.push_back(r);
        continue;
      }
      for (const auto& item : r[list]) {
        json row = r;
        row.erase(list);
        for (auto it = item.begin(); it != item.end(); ++it) row[list + "." + it.key()] = *it;
        rows.push_back(row);
      }
    }
    std::vector<std::string> keys;
    if (!rows.empty())
      for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i)
        os << (i ? "," : "") << quote(r.contains(keys[i]) ? csv_cell(r[keys[i]]) : "");
      os << "\n";
    }
  }
  if (cfg.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw ParseError("cannot write " + cfg.out);
    f << os.str();
  }
}

struct Outcome {
  json records = json::array();
  bool failed = false;
  bool contradiction = false;
};

void cmd_construct(const RunConfig&, const std::vector<Line>& lines, Outcome& o) {
  for (const auto& l : lines) {
    auto c = parse_cover(l.text);
    json r;
    if (auto* s = std::get_if<CyclicCoverSpec>(&c)) {
      auto cov = cyclic_to_pillow(*s);
      r = report_json(l.text, cover_report(*s));
      r["cover"] = cov.cover.to_string();
      json ram = json::array();
      for (const auto& row : cov.ramification)
        ram.push_back({{"corner", row.corner}, {"cycles", row.cycles}, {"length", row.length}});
      r["ramification"] = ram;
      auto crit = is_determinant_locus(*s);
      r["determinant_locus"] = crit.value;
      r["reason"] = crit.reason;
    } else {
      r = report_json(l.text, cover_report(std::get<PillowCover>(c), false));
    }
    o.records.push_back(r);
  }
}

void cmd_bounds(const RunConfig&, const std::vector<Line>& lines, Outcome& o) {
  for (const auto& l : lines) {
    auto c = parse_cover(l.text);
    CoverReport rep;
    bool degenerate = false;
    if (auto* s = std::get_if<CyclicCoverSpec>(&c)) {
      rep = cover_report(*s);
      degenerate = is_determinant_locus(*s).value;
    } else {
      throw ParseError("bounds takes cyclic data 'N a1 a2 a3 a4' (degeneracy is decided symbolically)");
    }
    json r = {{"spec", l.text}, {"genus", rep.genus}, {"stratum", rep.stratum.label()},
              {"n", rep.n}, {"degenerate", degenerate}};
    json checks = json::array();
    for (const auto& b : check_bounds(rep, degenerate)) {
      checks.push_back({{"name", b.name}, {"pass", to_string(b.verdict)}, {"lhs", b.lhs},
                        {"rhs", b.rhs}, {"note", b.note}});
      if (b.verdict == Verdict::fail) o.failed = true;
    }
    r["checks"] = checks;
    o.records.push_back(r);
  }
}

void cmd_locus(const RunConfig&, const std::vector<Line>& lines, Outcome& o) {
  for (const auto& l : lines) {
    auto spec = LocusSpec::parse(l.text);
    spec.validate();
    auto m = locus_metadata(spec);
    o.records.push_back({{"spec", l.text}, {"n", m.n}, {"dim", m.dim}, {"degree", m.degree},
                         {"genus_Y", m.genus_Y}, {"target", stratum_json(m.target)}});
  }
}

void cmd_orbit(const RunConfig& cfg, const std::vector<Line>& lines, Outcome& o) {
  for (const auto& l : lines) {
    OrbitGraph g;
    if (std::count(l.text.begin(), l.text.end(), ';') == 2) {
      g = enumerate_orbit(Origami::parse(l.text), cfg.orbit_cap);
    } else {
      auto dc = orientation_double_cover(as_pillow(parse_cover(l.text)));
      g = enumerate_orbit(from_double_cover(dc), cfg.orbit_cap);
    }
    json dumped = json::array();
    std::istringstream is(dump(g));
    for (std::string s; std::getline(is, s);) dumped.push_back(s);
    o.records.push_back({{"input", l.text}, {"size", g.size()}, {"dump", dumped}});
  }
}

void cmd_ekz(const RunConfig& cfg, const std::vector<Line>& lines, Outcome& o) {
  const auto cal = calibrate_sv(cfg.orbit_cap);
  for (const auto& l : lines) {
    auto ch = exact_channel(as_pillow(parse_cover(l.text)), cal.kappa, cfg.orbit_cap);
    const auto& r = ch.report;
    json j = {{"input", l.text},
              {"stratum", r.stratum.label()},
              {"n", r.n},
              {"kappa_term", to_string(r.kappa_term)},
              {"pole_term", to_string(r.pole_term)},
              {"sv_term", to_string(r.sv_term)},
              {"lyap_sum", to_string(r.lyap_sum)},
              {"decomposition", rational_list({r.two_g_minus_two, r.zero_term, r.residual})},
              {"orbit_size", ch.orbit_size},
              {"kappa_sv", to_string(cal.kappa)}};
    if (r.bound_chain) {
      const auto& b = *r.bound_chain;
      j["bound_chain"] = rational_list({b[0], b[1], b[2]});
    }
    o.records.push_back(j);
  }
}

void cmd_lyapunov(const RunConfig& cfg, const std::vector<Line>& lines, Outcome& o) {
  std::ofstream trace;
  if (!cfg.trace.empty()) {
    trace.open(cfg.trace);
    if (!trace) throw ParseError("cannot write " + cfg.trace);
  }
  bool header = true;
  for (const auto& l : lines) {
    auto model = build_cocycle_model(as_pillow(parse_cover(l.text)), cfg.orbit_cap);
    MonteCarloOptions opt;
    opt.steps = cfg.steps;
    opt.trace = trace.is_open();
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < cfg.seeds; ++i) seeds.push_back(cfg.first_seed + static_cast<std::uint64_t>(i));
    for (const auto& e : run_seeds(model, opt, seeds)) {
      json j = estimate_json(e);
      j["input"] = l.text;
      o.records.push_back(j);
      if (trace.is_open()) {
        std::string csv = trace_csv(e);
        if (!header) csv.erase(0, csv.find('\n') + 1);
        header = false;
        trace << csv;
      }
    }
  }
}

void cmd_certify(const RunConfig& cfg, const std::vector<Line>& lines, Outcome& o) {
  CertifyOptions opt;
  opt.epsilon = cfg.epsilon;
  opt.steps = cfg.steps;
  opt.seeds = cfg.seeds;
  opt.first_seed = cfg.first_seed;
  opt.orbit_cap = cfg.orbit_cap;
  for (const auto& l : lines) {
    auto in = parse_cover(l.text);
    Certificate c = std::holds_alternative<CyclicCoverSpec>(in)
                        ? certify_degenerate(std::get<CyclicCoverSpec>(in), opt)
                        : certify_degenerate(std::get<PillowCover>(in), opt);
    json exps = json::array(), errs = json::array();
    for (const auto& e : c.runs) {
      exps.push_back(e.lambda_plus);
      errs.push_back(e.stderr_plus);
    }
    json j = {{"input", l.text},
              {"criterion", c.criterion ? json{{"value", c.criterion->value},
                                                {"reason", c.criterion->reason}}
                                          : json(nullptr)},
              {"exponents", exps},
              {"stderr", errs},
              {"max_lambda_plus", c.max_lambda_plus},
              {"epsilon", c.epsilon},
              {"exact_sum", c.exact_sum ? json(to_string(*c.exact_sum)) : json(nullptr)},
              {"verdict", to_string(c.verdict)},
              {"reason", c.reason}};
    o.records.push_back(j);
    if (c.verdict == CertVerdict::contradiction) o.contradiction = true;
  }
}

void cmd_bform(const RunConfig&, const std::vector<Line>& lines, Outcome& o) {
  for (const auto& l : lines) {
    auto [curve, q] = parse_bform(l.text);
    auto rep = pairing_matrices(curve, q, holomorphic_basis(curve));
    json j = json::parse(rep.to_json());
    j["input"] = l.text;
    o.records.push_back(j);
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    cfg.validate();
    const auto lines = read_lines(cfg.input);
    Outcome o;
    if (cfg.command == "construct") cmd_construct(cfg, lines, o);
    else if (cfg.command == "certify") cmd_certify(cfg, lines, o);
    else if (cfg.command == "orbit") cmd_orbit(cfg, lines, o);
    else if (cfg.command == "ekz") cmd_ekz(cfg, lines, o);
    else if (cfg.command == "lyapunov") cmd_lyapunov(cfg, lines, o);
    else if (cfg.command == "bform") cmd_bform(cfg, lines, o);
    else if (cfg.command == "bounds") cmd_bounds(cfg, lines, o);
    else if (cfg.command == "locus") cmd_locus(cfg, lines, o);
    else throw ParseError("unknown command '" + cfg.command + "'");
    write_output(cfg, o.records);
    if (o.contradiction) return exit_contradiction;
    return o.failed ? exit_failed : exit_ok;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const DatumError& e) {
    err << "invalid datum: " << e.what() << "\n";
    return exit_parse;
  } catch (const SpecError& e) {
    err << "invalid spec: " << e.what() << "\n";
    return exit_parse;
  } catch (const MonodromyError& e) {
    err << "invalid monodromy: " << e.what() << "\n";
    return exit_parse;
  } catch (const GeometryError& e) {
    err << "invalid geometry: " << e.what() << "\n";
    return exit_parse;
  } catch (const ConnectivityError& e) {
    err << "disconnected input: " << e.what() << "\n";
    return exit_parse;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << "\n";
    return exit_resource;
  } catch (const CalibrationError& e) {
    err << "calibration contradiction: " << e.what() << "\n";
    return exit_contradiction;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_failed;
  }
}

}  // namespace flatdeg
