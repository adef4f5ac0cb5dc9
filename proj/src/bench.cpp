#include "gsi/bench.hpp"

#include "gsi/errors.hpp"
#include "gsi/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace gsi {

EnergyGame random_energy_game(std::size_t n, double p, std::int64_t w, std::mt19937_64& rng) {
  if (n < 2) throw InvariantError("random game needs at least 2 states");
  if (!(p > 0 && p <= 1)) throw InvariantError("edge probability must lie in (0,1]");
  if (w < 1) throw InvariantError("weight bound must be >= 1");
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<std::int64_t> weight(-w, w);
  std::uniform_int_distribution<int> owner_dist(0, 1);
  std::uniform_int_distribution<std::size_t> target(0, n - 1);
  std::vector<std::string> names;
  std::vector<int> owner;
  for (std::size_t v = 0; v < n; ++v) {
    names.push_back("v" + std::to_string(v));
    owner.push_back(owner_dist(rng));
  }
  std::vector<EnergyEdge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    bool any = false;
    for (std::size_t t = 0; t < n; ++t)
      if (coin(rng)) {
        edges.push_back({v, t, weight(rng)});
        any = true;
      }
    if (!any) {
      const auto t = target(rng);
      edges.push_back({v, t, weight(rng)});
    }
  }
  return EnergyGame(std::move(names), std::move(owner), std::move(edges));
}

namespace {

SolverOutcome from_run(EnergyRun r, const Decomposition* dec) {
  SolverOutcome out{std::move(r.solution), r.iterations, 0, {}};
  if (r.si && dec) {
    out.outer = r.si->inner_solves() - 1;
    BigInt total = 1;
    for (std::size_t y = 0; y < dec->size(); ++y) total *= static_cast<unsigned long>(dec->options(y).size());
    out.bound = total.get_str();
  }
  return out;
}

}  // namespace

BenchSolver builtin_solver(const std::string& name) {
  if (name == "TF")
    return [](const EnergyGame& g) {
      FiniteTransform t = transform_finite(g);
      std::size_t removed = 0;
      for (bool b : t.removed) removed += b;
      return SolverOutcome{std::nullopt, removed, 0, {}};
    };
  if (name == "KLE") return [](const EnergyGame& g) { return from_run(solve_energy_kleene(g), nullptr); };
  if (name == "VI") return [](const EnergyGame& g) { return from_run(solve_energy_vi(g), nullptr); };
  if (name == "SI0")
    return [](const EnergyGame& g) {
      EnergyRun r = solve_energy_above(g);
      const Decomposition dec = energy_min_decomposition(r.transform.game, r.transform.k);
      return from_run(std::move(r), &dec);
    };
  if (name == "SI1")
    return [](const EnergyGame& g) {
      EnergyRun r = solve_energy_below(g);
      const Decomposition dec = energy_max_decomposition(r.transform.game, r.transform.k);
      return from_run(std::move(r), &dec);
    };
  throw InvariantError("unknown solver '" + name + "' (expected TF, KLE, VI, SI0 or SI1)");
}

EnergyGame bench_instance(const BenchConfig& cfg, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  const double p = cfg.p ? *cfg.p : 2.0 / static_cast<double>(cfg.n);
  const std::int64_t w = cfg.weight > 0 ? cfg.weight : static_cast<std::int64_t>(cfg.n);
  return random_energy_game(cfg.n, p, w, rng);
}

namespace {

BenchReport run_bench(const BenchConfig& cfg, const std::function<EnergyGame(std::size_t)>& instance) {
  if (cfg.solvers.empty()) throw InvariantError("no solvers selected");
  std::vector<std::pair<std::string, BenchSolver>> solvers;
  for (const auto& name : cfg.solvers) {
    auto it = cfg.overrides.find(name);
    solvers.emplace_back(name, it != cfg.overrides.end() ? it->second : builtin_solver(name));
  }
  BenchReport report{cfg, std::vector<BenchInstance>(cfg.runs), true, true, std::nullopt};
  std::vector<std::optional<EnergyGame>> games(cfg.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < cfg.runs;) {
      try {
        EnergyGame g = instance(i);
        BenchInstance inst;
        inst.index = i;
        const ExtendedSolution* ref = nullptr;
        for (const auto& [name, fn] : solvers) {
          const auto start = std::chrono::steady_clock::now();
          SolverOutcome o = fn(g);
          const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
          BenchCell& cell = inst.cells[name];
          cell = {std::move(o), dt.count()};
          if (cell.outcome.solution) {
            if (!ref)
              ref = &*cell.outcome.solution;
            else if (!(*ref == *cell.outcome.solution))
              inst.agree = false;
          }
          if (!cell.outcome.bound.empty() && BigInt(cell.outcome.outer) >= BigInt(cell.outcome.bound, 10))
            inst.within_bound = false;
        }
        report.instances[i] = std::move(inst);
        games[i] = std::move(g);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.runs));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& inst : report.instances) {
    report.all_within_bound = report.all_within_bound && inst.within_bound;
    if (inst.agree) continue;
    report.all_agree = false;
    if (!report.counterexample) {
      const std::string path =
          cfg.dump_dir + "/counterexample-" + std::to_string(cfg.seed) + "-" + std::to_string(inst.index) + ".eg";
      std::ofstream out(path);
      out << "# bench n=" << cfg.n << " seed=" << cfg.seed << " instance=" << inst.index << "\n";
      for (const auto& [name, cell] : inst.cells)
        if (cell.outcome.solution) out << "# " << name << " " << to_string(*cell.outcome.solution) << "\n";
      out << emit_energy(*games[inst.index]);
      report.counterexample = path;
    }
  }
  return report;
}

}  // namespace

BenchReport bench(const BenchConfig& cfg) {
  return run_bench(cfg, [&](std::size_t i) { return bench_instance(cfg, i); });
}

BenchReport bench(const BenchConfig& cfg, const std::vector<EnergyGame>& games) {
  BenchConfig c = cfg;
  c.runs = games.size();
  c.n = games.empty() ? 0 : games.front().size();
  return run_bench(c, [&](std::size_t i) { return games[i]; });
}

namespace {

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_table(const BenchReport& r, bool timing) {
  std::ostringstream out;
  out << "n=" << r.config.n << " runs=" << r.config.runs << " seed=" << r.config.seed << "\n";
  out << pad("solver", 8) << pad("iterations", 14) << pad("outer", 10);
  if (timing) out << pad("seconds", 14);
  out << "\n";
  for (const auto& name : r.config.solvers) {
    std::size_t iters = 0, outer = 0;
    double secs = 0;
    for (const auto& inst : r.instances) {
      const auto& c = inst.cells.at(name);
      iters += c.outcome.iterations;
      outer += c.outcome.outer;
      secs += c.seconds;
    }
    out << pad(name, 8) << pad(std::to_string(iters), 14) << pad(std::to_string(outer), 10);
    if (timing) out << pad(fixed(secs), 14);
    out << "\n";
  }
  out << "agree: " << (r.all_agree ? "yes" : "no") << "\n";
  out << "outer below strategy bound: " << (r.all_within_bound ? "yes" : "no") << "\n";
  if (r.counterexample) out << "counterexample: " << *r.counterexample << "\n";
  return out.str();
}

std::string render_csv(const BenchReport& r, bool timing) {
  std::ostringstream out;
  out << "instance,solver,iterations,outer,bound,agree";
  if (timing) out << ",seconds";
  out << "\n";
  for (const auto& inst : r.instances)
    for (const auto& name : r.config.solvers) {
      const auto& c = inst.cells.at(name);
      out << inst.index << "," << name << "," << c.outcome.iterations << "," << c.outcome.outer << ","
          << c.outcome.bound << "," << (inst.agree ? 1 : 0);
      if (timing) out << "," << fixed(c.seconds);
      out << "\n";
    }
  return out.str();
}

}  // namespace gsi
