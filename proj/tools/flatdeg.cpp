#include <iostream>

#include <CLI11.hpp>

#include "flatdeg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Degenerate Lyapunov spectra of pillow-tiled and cyclic-cover surfaces"};
  app.require_subcommand(1);
  flatdeg::RunConfig cfg;

  const std::pair<const char*, const char*> commands[] = {
      {"construct", "cover report (genus, stratum, poles, ramification)"},
      {"certify", "degeneracy certificate from the exact and Monte-Carlo channels"},
      {"orbit", "SL(2,Z) orbit dump of the double cover or of an origami"},
      {"ekz", "exact Lyapunov sum and its decomposition"},
      {"lyapunov", "Monte-Carlo exponents, one record per seed"},
      {"bform", "B-form and Hodge matrices with the theta spectrum"},
      {"bounds", "pole, degree and unbranched-pole bounds"},
      {"locus", "metadata of a locus specification"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "input file, - for stdin")->required();
    sub->add_option("--steps", cfg.steps, "continued fraction digits per seed")->capture_default_str();
    sub->add_option("--seeds", cfg.seeds, "number of seeds")->capture_default_str();
    sub->add_option("--first-seed", cfg.first_seed, "first seed")->capture_default_str();
    sub->add_option("--epsilon", cfg.epsilon, "numeric-zero threshold for certificates")
        ->capture_default_str();
    sub->add_option("--orbit-cap", cfg.orbit_cap, "orbit size cap")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->capture_default_str();
    sub->add_option("--trace", cfg.trace, "CSV file for per-block partial exponents");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : flatdeg::exit_parse;
  }
  return flatdeg::run(cfg, std::cerr);
}
