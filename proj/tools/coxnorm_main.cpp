#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "coxnorm/report.hpp"

namespace {

void add_common(CLI::App* sub, coxnorm::cli::RunConfig& c) {
  sub->add_option("--format", c.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
  sub->add_option("--cache", c.cache, "shell cache directory (default: $COXNORM_CACHE)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--budget", c.budget, "backtracking node budget per search");
  sub->add_option("--oracle-limit", c.oracle_limit, "largest Coxeter group enumerated by the conjugacy oracle");
  sub->add_option("--example", c.example, "builtin example");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalizers of parabolic subgroups of Coxeter groups"};
  app.require_subcommand(1);
  coxnorm::cli::RunConfig c;
  c.verbose = true;
  bool quiet = false;
  bool list = false;
  app.add_flag("--quiet", quiet, "no progress messages");
  app.add_flag("--list-examples", list, "print the builtin examples of the subcommand and exit");

  auto* classify = app.add_subcommand("classify", "spherical type of a diagram, or an adjacency example");
  add_common(classify, c);
  classify->add_option("--pi", c.pi, "diagram file");

  auto* normalizer = app.add_subcommand("normalizer", "build Q4 and describe Gamma_Omega");
  add_common(normalizer, c);
  normalizer->add_option("--pi", c.pi, "diagram file or 'leech'");
  normalizer->add_option("--j", c.j, "J: comma separated node names, or a type such as E6 for leech");
  normalizer->add_option("--gamma-j", c.gamma_j, "full, trivial, or a generator file");
  normalizer->add_option("--r", c.r, "full, trivial, or a generator file");
  normalizer->add_option("--gamma-pi", c.gamma_pi, "finite Pi only: full, trivial, or a generator file");
  normalizer->add_option("--selector", c.selector, "leech configuration: first or largest")
      ->check(CLI::IsMember({"first", "largest"}));
  normalizer->add_option("--max-relators", c.max_relators, "skip the presentation above this many relators");
  normalizer->add_option("--tree-seed", c.tree_seed, "random spanning tree (testing)");

  auto* brink = app.add_subcommand("brink", "odd-bond graph of a node and its cycle rank");
  add_common(brink, c);
  brink->add_option("--pi", c.pi, "diagram file");
  brink->add_option("--node", c.node, "node name");

  auto* leech = app.add_subcommand("leech-example", "Leech lattice configurations");
  add_common(leech, c);

  auto* shells = app.add_subcommand("shells", "Golay code and shell self-checks");
  add_common(shells, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (list) {
    for (const auto& n : coxnorm::cli::example_names(c.command)) std::cout << n << "\n";
    return 0;
  }
  c.verbose = !quiet;
  auto res = coxnorm::cli::run(c);
  std::cout << res.output;
  if (res.status) std::cerr << "coxnorm: " << res.error << std::endl;
  return res.status;
}
