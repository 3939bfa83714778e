#include "commands.hpp"
#include "log.hpp"

#include "ciota/errors.hpp"
#include "ciota/simnet.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace ciota::cli {

namespace {

Topology build_topology(const json& sim, std::size_t n, std::uint64_t seed) {
  const std::string generator = sim.at("generator").get<std::string>();
  if (generator == "complete") return gen_complete(n);
  if (generator == "watts_strogatz") {
    return gen_watts_strogatz(n, sim.at("ws_neighbors").get<std::size_t>(),
                              sim.at("ws_rewire_p").get<double>(), seed);
  }
  if (generator == "barabasi_albert") {
    return gen_barabasi_albert(n, sim.at("ba_attachment").get<std::size_t>(),
                               seed);
  }
  throw ConfigError("unknown generator: " + generator);
}

struct TrialResult {
  std::uint64_t seed = 0;
  SimMetrics metrics;
  DegreeStats degree;
};

} // namespace

int cmd_simulate(const ExperimentConfig& config) {
  const json& sim = config.section("sim");
  const std::string generator = sim.at("generator").get<std::string>();
  const SimConfig base = config.sim_config();
  const std::size_t trials = config.trials();

  std::vector<TrialResult> results(trials);
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(std::max<std::size_t>(
                                 trials, 1))));

  auto run_trials = [&]() {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= trials) return;
      SimConfig cfg = base;
      cfg.seed = base.seed + trial;
      Topology topo = build_topology(sim, cfg.n_agents, cfg.seed);
      results[trial].seed = cfg.seed;
      results[trial].degree = topo.degree_stats();
      results[trial].metrics = run_simulation(cfg, topo);
      log_debug("trial %zu: epochs=%u messages=%llu", trial,
                results[trial].metrics.epochs_run,
                static_cast<unsigned long long>(
                    results[trial].metrics.messages_sent));
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run_trials);
  run_trials();
  for (auto& t : pool) t.join();

  ensure_out_dir(config.out_dir());

  // per-trial rows, in trial order regardless of worker scheduling
  std::ostringstream csv;
  csv << "trial,seed,generator,n,L,epochs,messages,deadlock\n";
  double epoch_sum = 0.0;
  double epoch_sq = 0.0;
  std::size_t closed_trials = 0;
  std::size_t deadlocks = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const TrialResult& r = results[trial];
    const bool closed = !r.metrics.epochs_to_close.empty();
    const std::uint32_t epochs =
        closed ? r.metrics.epochs_to_close.front() : r.metrics.epochs_run;
    csv << trial << ',' << r.seed << ',' << generator << ','
        << base.n_agents << ',' << base.block_size << ',' << epochs << ','
        << r.metrics.messages_sent << ','
        << (r.metrics.deadlock_detected ? 1 : 0) << '\n';
    if (closed) {
      ++closed_trials;
      epoch_sum += epochs;
      epoch_sq += static_cast<double>(epochs) * epochs;
    }
    if (r.metrics.deadlock_detected) ++deadlocks;
  }
  write_text_file(config.out_dir() + "/trials.csv", csv.str());

  // pool per-trial degree moments; every trial has the same node count
  double degree_mean = 0.0;
  double degree_std = 0.0;
  double degree_median = 0.0;
  std::size_t degree_min = SIZE_MAX;
  std::size_t degree_max = 0;
  for (const TrialResult& r : results) {
    degree_mean += r.degree.mean;
    degree_std += r.degree.stddev * r.degree.stddev;
    degree_median += r.degree.median;
    degree_min = std::min(degree_min, r.degree.min);
    degree_max = std::max(degree_max, r.degree.max);
  }
  if (trials > 0) {
    degree_mean /= static_cast<double>(trials);
    degree_std = std::sqrt(degree_std / static_cast<double>(trials));
    degree_median /= static_cast<double>(trials);
  } else {
    degree_min = 0;
  }

  const double epochs_mean =
      closed_trials > 0 ? epoch_sum / static_cast<double>(closed_trials) : 0.0;
  const double epochs_std =
      closed_trials > 0
          ? std::sqrt(std::max(0.0, epoch_sq / static_cast<double>(closed_trials) -
                                        epochs_mean * epochs_mean))
          : 0.0;

  json summary{
      {"config", config.doc()},
      {"results",
       {{"trials", trials},
        {"closed_trials", closed_trials},
        {"deadlocks", deadlocks},
        {"epochs", {{"mean", epochs_mean}, {"std", epochs_std}}},
        {"degree",
         {{"min", degree_min},
          {"max", degree_max},
          {"median", degree_median},
          {"mean", degree_mean},
          {"std", degree_std}}}}},
  };
  write_json_file(config.out_dir() + "/summary.json", summary);
  log_info("simulate: %zu trials (%s, n=%zu, L=%zu), mean epochs %.2f",
           trials, generator.c_str(), base.n_agents, base.block_size,
           epochs_mean);
  return 0;
}

} // namespace ciota::cli
