#include "gsi/bench.hpp"
#include "gsi/errors.hpp"
#include "gsi/io.hpp"
#include "gsi/lp.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <random>

namespace {

using namespace gsi;

void print_values(const Assignment& a) {
  for (std::size_t i = 0; i < a.size(); ++i) std::cout << "  " << a.domain()->name(i) << " = " << to_string(a[i]) << "\n";
}

void print_trace(const SolveResult& r, const Decomposition& dec) {
  std::cout << "trace\n";
  for (const auto& e : r.trace) {
    std::cout << "  #" << e.index << " " << to_string(e.event) << " [" << describe_strategy(dec, e.strategy) << "] "
              << to_string(e.values);
    if (e.event == TraceEvent::Skip)
      std::cout << " vicious " << to_string(e.vicious, *dec.domain()) << " delta " << to_string(*e.delta);
    std::cout << "\n";
  }
}

Strategy random_strategy(const Decomposition& dec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Strategy c(dec.size());
  for (std::size_t y = 0; y < dec.size(); ++y)
    c[y] = std::uniform_int_distribution<std::size_t>(0, dec.options(y).size() - 1)(rng);
  return c;
}

int solve_ssg_cmd(const std::string& path, bool below, bool trace, std::optional<std::uint64_t> seed) {
  const Ssg g = parse_ssg(read_file(path));
  const Decomposition dec = below ? max_decomposition(g) : min_decomposition(g);
  std::optional<Strategy> init;
  if (seed) init = random_strategy(dec, *seed);
  AboveOptions opts;
  opts.initial = init;
  const SolveResult r = below ? solve_ssg_below(g, init) : solve_ssg_above(g, opts);
  std::cout << "values\n";
  print_values(r.values);
  std::cout << (below ? "max strategy: " : "min strategy: ") << (dec.size() && !describe_strategy(dec, r.strategy).empty() ? describe_strategy(dec, r.strategy) : "(no choices)") << "\n";
  if (trace) print_trace(r, dec);
  return 0;
}

int solve_energy_cmd(const std::string& path, const std::string& method, bool trace) {
  const EnergyGame g = parse_energy(read_file(path));
  EnergyRun r = method == "kleene" ? solve_energy_kleene(g)
                : method == "vi"   ? solve_energy_vi(g)
                : method == "above" ? solve_energy_above(g)
                                    : solve_energy_below(g);
  std::cout << "values\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    std::cout << "  " << g.name(v) << " = " << to_string(r.solution.values[v]) << "\n";
  std::cout << "iterations: " << r.iterations << "\n";
  if (r.si) {
    const bool player0 = method == "above";
    const Decomposition dec = player0 ? energy_min_decomposition(r.transform.game, r.transform.k)
                                      : energy_max_decomposition(r.transform.game, r.transform.k);
    std::cout << (player0 ? "player 0 strategy: " : "player 1 strategy: ")
              << describe_energy_strategy(r.transform, dec, r.si->strategy) << "\n";
    if (trace) print_trace(*r.si, dec);
  }
  return 0;
}

int solve_pa_cmd(const std::string& path, bool trace) {
  const Pa pa = parse_pa(read_file(path));
  const PaResult r = solve_pa_above(pa);
  std::size_t width = 1;
  for (const auto& s : pa.states()) width = std::max(width, s.name.size());
  for (std::size_t s = 0; s < pa.size(); ++s)
    for (std::size_t t = 0; t < pa.size(); ++t) width = std::max(width, to_string(r.values[pa.pair(s, t)]).size());
  auto cell = [&](const std::string& x) { std::cout << " " << std::string(width - x.size(), ' ') << x; };
  std::cout << "distances\n";
  cell("");
  for (const auto& s : pa.states()) cell(s.name);
  std::cout << "\n";
  for (std::size_t s = 0; s < pa.size(); ++s) {
    cell(pa.state(s).name);
    for (std::size_t t = 0; t < pa.size(); ++t) cell(to_string(r.values[pa.pair(s, t)]));
    std::cout << "\n";
  }
  std::cout << "coupling\n" << describe(pa, r.coupling);
  if (trace) {
    std::cout << "trace\n";
    for (const auto& e : r.trace) {
      std::cout << "  #" << e.index << " " << to_string(e.event) << " " << to_string(e.values);
      if (e.event == TraceEvent::Skip)
        std::cout << " vicious " << to_string(e.vicious, *pa.pairs()) << " delta " << to_string(*e.delta);
      std::cout << "\n";
    }
  }
  return 0;
}

std::size_t env_workers() {
  const char* s = std::getenv("GSI_WORKERS");
  if (!s || !*s) return 1;
  try {
    const long v = std::stol(s);
    if (v < 1) throw InvariantError("GSI_WORKERS must be a positive integer");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw InvariantError("GSI_WORKERS must be a positive integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategy iteration for least fixpoints over MV-chains"};
  app.require_subcommand(1);

  std::string file;
  bool above = false, below = false, trace = false;
  std::optional<std::uint64_t> seed;

  auto* ssg = app.add_subcommand("solve-ssg", "Solve a simple stochastic game");
  ssg->add_option("file", file, "Game file")->required();
  auto* ssg_above = ssg->add_flag("--above", above, "Iterate Min strategies from above");
  ssg->add_flag("--below", below, "Iterate Max strategies from below")->excludes(ssg_above);
  ssg->add_flag("--trace", trace, "Print the iteration trace");
  ssg->add_option("--random-init", seed, "Start from a random strategy drawn with this seed");

  bool kleene = false, vi = false;
  auto* eg = app.add_subcommand("solve-energy", "Solve an energy game");
  eg->add_option("file", file, "Game file")->required();
  auto* g1 = eg->add_flag("--kleene", kleene, "Kleene iteration");
  auto* g2 = eg->add_flag("--vi", vi, "Value iteration");
  auto* g3 = eg->add_flag("--above", above, "Player-0 strategy iteration from above");
  auto* g4 = eg->add_flag("--below", below, "Player-1 strategy iteration from below");
  g1->excludes(g2)->excludes(g3)->excludes(g4);
  g2->excludes(g3)->excludes(g4);
  g3->excludes(g4);
  eg->add_flag("--trace", trace, "Print the strategy iteration trace");

  auto* pa = app.add_subcommand("solve-pa", "Behavioural distance of a probabilistic automaton");
  pa->add_option("file", file, "Automaton file")->required();
  pa->add_flag("--trace", trace, "Print the iteration trace");

  BenchConfig cfg;
  double p = 0;
  bool csv = false, no_timing = false;
  auto* bn = app.add_subcommand("bench", "Compare energy game solvers on random games");
  bn->add_option("--n", cfg.n, "States per game")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  bn->add_option("--p", p, "Edge probability (default 2/n)")->check(CLI::Range(0.0, 1.0));
  bn->add_option("--weight", cfg.weight, "Weight bound W (default n)")->check(CLI::PositiveNumber);
  bn->add_option("--seed", cfg.seed, "Random seed");
  bn->add_option("--runs", cfg.runs, "Number of games");
  bn->add_option("--solvers", cfg.solvers, "Solvers among TF KLE VI SI1 SI0")->delimiter(',');
  bn->add_option("--dump-dir", cfg.dump_dir, "Directory for counterexample files");
  bn->add_flag("--csv", csv, "Machine-readable rows");
  bn->add_flag("--no-timing", no_timing, "Omit wall-clock columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ssg) return solve_ssg_cmd(file, below, trace, seed);
    if (*eg) {
      const std::string method = kleene ? "kleene" : vi ? "vi" : below ? "below" : "above";
      return solve_energy_cmd(file, method, trace);
    }
    if (*pa) return solve_pa_cmd(file, trace);
    if (p > 0) cfg.p = p;
    cfg.workers = env_workers();
    const BenchReport r = bench(cfg);
    std::cout << (csv ? render_csv(r, !no_timing) : render_table(r, !no_timing));
    return r.all_agree ? 0 : 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const SoundnessError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const LpInfeasible& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const LpUnbounded& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
