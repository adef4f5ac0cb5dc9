#pragma once

// Random energy games and a cross-solver benchmark harness.

#include "gsi/energy.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gsi {

// Each ordered pair (self-loops included) is an edge with probability p;
// states left without an edge get one uniformly chosen edge. Weights are
// uniform in [-w, w], owners uniform.
EnergyGame random_energy_game(std::size_t n, double p, std::int64_t w, std::mt19937_64& rng);

struct SolverOutcome {
  std::optional<ExtendedSolution> solution;  // absent for TF
  std::size_t iterations = 0;
  std::size_t outer = 0;      // strategy switches, SI only
  std::string bound;          // strategy count, SI only
};

using BenchSolver = std::function<SolverOutcome(const EnergyGame&)>;

struct BenchConfig {
  std::size_t n = 10;
  std::optional<double> p;  // default 2/n
  std::int64_t weight = 0;  // default n
  std::uint64_t seed = 1;
  std::size_t runs = 10;
  std::vector<std::string> solvers = {"TF", "KLE", "VI", "SI1", "SI0"};
  std::size_t workers = 1;
  std::string dump_dir = ".";
  // Replaces or adds named solvers.
  std::map<std::string, BenchSolver> overrides;
};

struct BenchCell {
  SolverOutcome outcome;
  double seconds = 0;
};

struct BenchInstance {
  std::size_t index = 0;
  std::map<std::string, BenchCell> cells;
  bool agree = true;
  bool within_bound = true;  // SI outer iterations below the strategy count
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchInstance> instances;
  bool all_agree = true;
  bool all_within_bound = true;
  std::optional<std::string> counterexample;  // path of the dumped game
};

// Built-in solvers: TF, KLE, VI, SI0, SI1.
BenchSolver builtin_solver(const std::string& name);
// Per-instance generator used by bench (deterministic in seed and index).
EnergyGame bench_instance(const BenchConfig& cfg, std::size_t index);
BenchReport bench(const BenchConfig& cfg);
// Runs the configured solvers on the given games instead; runs and n are
// ignored.
BenchReport bench(const BenchConfig& cfg, const std::vector<EnergyGame>& games);

std::string render_table(const BenchReport& r, bool timing);
std::string render_csv(const BenchReport& r, bool timing);

}  // namespace gsi
