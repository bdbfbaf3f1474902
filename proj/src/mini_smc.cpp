#include "smcrep/mini_smc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smcrep/parallel.hpp"

namespace smcrep {

std::vector<double> normalized_weights(const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw std::domain_error("no particle carries positive weight");
  std::vector<double> w(log_weights.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) total += w[j] = std::exp(log_weights[j] - top);
  for (double& x : w) x /= total;
  return w;
}

MiniSmcResult run_mini_smc(const std::shared_ptr<const WeightedGraph>& graph,
                           const MiniSmcConfig& config, std::uint64_t seed) {
  const int k = config.districts;
  const int width = config.particles;
  if (!graph || !graph->is_connected()) throw std::domain_error("run_mini_smc: graph must be connected");
  if (k < 2) throw std::domain_error("run_mini_smc: need k >= 2");
  if (width < 1) throw std::domain_error("run_mini_smc: need S >= 1");
  if (config.split_attempts < 1 || config.resample_tries < 1)
    throw std::domain_error("run_mini_smc: attempts must be positive");

  const auto s = static_cast<std::size_t>(width);
  const PartialPlan empty(graph, k);
  std::vector<std::optional<PartialPlan>> current(s);

  // Top generation: independent first districts.
  const int top = k - 1;
  parallel_for(s, config.threads, [&](std::size_t j) {
    Engine rng = make_stream(seed, {stream::particle, static_cast<std::uint64_t>(top), j});
    for (int t = 0; t < config.resample_tries && !current[j]; ++t) {
      current[j] = split_district(empty, config.pop_tol, config.split_attempts, rng);
    }
  });
  if (std::none_of(current.begin(), current.end(), [](const auto& p) { return p.has_value(); }))
    throw BottleneckError(top, "every particle hit a bottleneck drawing the first district");

  CountArray parents(width, k - 2);
  std::vector<std::vector<double>> log_weights(static_cast<std::size_t>(std::max(k - 2, 0)));

  for (int level = k - 2; level >= 1; --level) {
    auto& lw = log_weights[static_cast<std::size_t>(level - 1)];  // weights of level + 1
    lw.assign(s, -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < s; ++j) {
      if (current[j]) lw[j] = partial_plan_weight(*current[j], config.rho, config.cut_mode);
    }
    const std::vector<double> w = normalized_weights(lw);
    std::vector<double> cdf(s);
    std::partial_sum(w.begin(), w.end(), cdf.begin());
    cdf.back() = 1.0;

    std::vector<std::optional<PartialPlan>> next(s);
    parallel_for(s, config.threads, [&](std::size_t j) {
      Engine rng = make_stream(seed, {stream::particle, static_cast<std::uint64_t>(level), j});
      for (int t = 0; t < config.resample_tries; ++t) {
        const double u = uniform01(rng);
        std::size_t parent = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        parent = std::min(parent, s - 1);
        while (w[parent] == 0.0) parent = (parent + s - 1) % s;  // u landed on a zero-width step
        parents(static_cast<Eigen::Index>(j), level - 1) = static_cast<std::int32_t>(parent);
        next[j] = split_district(*current[parent], config.pop_tol, config.split_attempts, rng);
        if (next[j]) break;
      }
    });
    if (std::none_of(next.begin(), next.end(), [](const auto& p) { return p.has_value(); }))
      throw BottleneckError(level, "every particle hit a bottleneck at level " + std::to_string(level));
    current = std::move(next);
  }

  MiniSmcResult result{{}, DescendancyDiagram(width, k, std::move(parents)), std::move(log_weights), {}, 0, {}};
  result.live.resize(s);
  for (std::size_t j = 0; j < s; ++j) {
    result.live[j] = current[j].has_value();
    if (current[j]) {
      result.sample.push_back(to_plan(*current[j]));
    } else {
      ++result.dead_particles;
    }
  }
  result.report = repetition_report(result.sample, &result.diagram);
  return result;
}

}  // namespace smcrep
