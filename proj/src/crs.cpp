#include "smcrep/crs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smcrep/parallel.hpp"

namespace smcrep {

double WeightedSample::total_weight() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

double WeightedSample::expectation(const std::function<double(const Plan&)>& h) const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight * h(e.plan);
  return total;
}

std::size_t repetition_count(std::size_t size, double exponent) {
  const double r = std::pow(static_cast<double>(size), exponent);
  // Guard against pow returning 4.9999... for exact powers.
  const double nearest = std::round(r);
  return static_cast<std::size_t>(std::abs(r - nearest) < 1e-9 ? nearest : std::ceil(r));
}

WeightedSample crs_sample_with_repeats(const BaseSampler& base, const SmcSampler& smc,
                                       std::size_t size, std::size_t repeats, std::uint64_t seed) {
  if (size < 2) throw std::domain_error("crs_sample: need S >= 2");
  if (repeats < 1 || repeats >= size) throw std::domain_error("crs_sample: need 1 <= repeats < S");
  const std::size_t rest = size - repeats;

  WeightedSample out;
  Engine rng = make_stream(seed, {stream::base});
  const Plan x = base(rng);
  out.entries.reserve(size);
  out.entries.assign(repeats, WeightedEntry{x, 1.0 / static_cast<double>(size)});
  out.repeated = repeats;

  const auto smc_entries = smc(rest, mix64(seed ^ stream::particle));
  if (smc_entries.size() != rest) throw std::logic_error("crs_sample: SMC sampler returned the wrong size");
  const double scale = static_cast<double>(rest) / static_cast<double>(size);
  for (const auto& e : smc_entries) out.entries.push_back({e.plan, e.weight * scale});
  return out;
}

WeightedSample crs_sample(const BaseSampler& base, const SmcSampler& smc, std::size_t size,
                          double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("crs_sample: alpha must lie in (0, 1/2)");
  if (size < 2) throw std::domain_error("crs_sample: need S >= 2");
  return crs_sample_with_repeats(base, smc, size, repetition_count(size, alpha), seed);
}

// ---------------------------------------------------------------------------
// Enumerable instance

std::size_t EnumerableInstance::position(const Plan& plan) const {
  const auto it = index.find(canonical(plan));
  if (it == index.end()) throw std::out_of_range("plan is not in the enumerated support");
  return it->second;
}

double EnumerableInstance::expectation(const std::function<double(const Plan&)>& h) const {
  double total = 0.0;
  for (std::size_t i = 0; i < plans.size(); ++i) total += target[i] * h(plans[i]);
  return total;
}

EnumerableInstance make_enumerable_instance(std::shared_ptr<const WeightedGraph> graph,
                                            int districts, double pop_tol) {
  EnumerableInstance inst;
  inst.plans = enumerate_balanced_partitions(*graph, districts, pop_tol);
  if (inst.plans.empty()) throw std::domain_error("instance has no balanced plans");
  inst.graph = std::move(graph);
  inst.districts = districts;
  inst.pop_tol = pop_tol;
  inst.target.assign(inst.plans.size(), 1.0 / static_cast<double>(inst.plans.size()));
  for (std::size_t i = 0; i < inst.plans.size(); ++i) {
    inst.index.emplace(inst.plans[i], i);
    inst.proposal.push_back(sequential_split_probability(inst.graph, inst.plans[i], pop_tol));
  }
  return inst;
}

BaseSampler exact_base_sampler(const EnumerableInstance& instance) {
  std::vector<double> cdf(instance.target.size());
  std::partial_sum(instance.target.begin(), instance.target.end(), cdf.begin());
  cdf.back() = 1.0;
  return [plans = instance.plans, cdf = std::move(cdf)](Engine& rng) {
    const double u = uniform01(rng);
    const auto i = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    return plans[std::min(i, plans.size() - 1)];
  };
}

SmcSampler weighted_smc_sampler(const EnumerableInstance& instance, MiniSmcConfig config) {
  config.districts = instance.districts;
  config.pop_tol = instance.pop_tol;
  return [&instance, config](std::size_t size, std::uint64_t seed) mutable {
    config.particles = static_cast<int>(size);
    const MiniSmcResult run = run_mini_smc(instance.graph, config, seed);
    const auto& parents = run.diagram.parents();

    std::vector<double> log_w;
    std::vector<WeightedEntry> out;
    std::size_t live_index = 0;
    for (std::size_t j = 0; j < size; ++j) {
      if (!run.live[j]) continue;
      const Plan& plan = run.sample[live_index++];
      const std::size_t pos = instance.position(plan);
      double lw = std::log(instance.target[pos]) - std::log(instance.proposal[pos]);
      auto node = static_cast<Eigen::Index>(j);
      for (int level = 2; level <= run.diagram.levels(); ++level) {
        node = parents(node, level - 2);
        lw -= run.log_weights[static_cast<std::size_t>(level - 2)][static_cast<std::size_t>(node)];
      }
      log_w.push_back(lw);
      out.push_back({plan, 0.0});
    }
    if (out.size() != size) throw BottleneckError(1, "weighted SMC sampler lost particles");
    const auto w = normalized_weights(log_w);
    for (std::size_t j = 0; j < out.size(); ++j) out[j].weight = w[j];
    return out;
  };
}

// ---------------------------------------------------------------------------
// CLT harness

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::pair<double, double> anderson_darling_normal(std::vector<double> sample) {
  const std::size_t n = sample.size();
  if (n < 3) return {0.0, 1.0};
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) return {0.0, 1.0};
  for (double& x : sample) x = (x - mean) / sd;
  std::sort(sample.begin(), sample.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(normal_cdf(sample[i]), 1e-300);
    const double hi = std::max(1.0 - normal_cdf(sample[n - 1 - i]), 1e-300);
    acc += (2.0 * (i + 1) - 1.0) * (std::log(lo) + std::log(hi));
  }
  const double a2 = -static_cast<double>(n) - acc / n;
  const double adj = a2 * (1.0 + 0.75 / n + 2.25 / (static_cast<double>(n) * n));
  // D'Agostino & Stephens (1986), case of estimated mean and variance.
  double p;
  if (adj >= 0.6) {
    p = std::exp(1.2937 - 5.709 * adj + 0.0186 * adj * adj);
  } else if (adj >= 0.34) {
    p = std::exp(0.9177 - 4.279 * adj - 1.38 * adj * adj);
  } else if (adj >= 0.2) {
    p = 1.0 - std::exp(-8.318 + 42.796 * adj - 59.938 * adj * adj);
  } else {
    p = 1.0 - std::exp(-13.436 + 101.14 * adj - 223.73 * adj * adj);
  }
  return {adj, std::clamp(p, 0.0, 1.0)};
}

CltReport clt_experiment(const EnumerableInstance& instance,
                         const std::function<double(const Plan&)>& h, const CltConfig& config,
                         std::uint64_t seed) {
  if (!(config.exponent > 0.0 && config.exponent < 1.0))
    throw std::domain_error("clt_experiment: exponent must lie in (0, 1)");
  if (config.replications < 2) throw std::domain_error("clt_experiment: need >= 2 replications");

  CltReport report;
  report.exponent = config.exponent;
  report.target_mean = instance.expectation(h);
  const BaseSampler base = exact_base_sampler(instance);
  MiniSmcConfig smc_config = config.smc;
  smc_config.threads = 1;
  const SmcSampler smc = weighted_smc_sampler(instance, smc_config);

  for (std::size_t size : config.sizes) {
    CltRow row;
    row.size = size;
    row.replications = config.replications;
    row.repeats = repetition_count(size, config.exponent);
    row.repetition_fraction = static_cast<double>(row.repeats) / static_cast<double>(size);
    row.samples.resize(config.replications);
    std::vector<double> repeat_terms(config.replications);
    const double root = std::sqrt(static_cast<double>(size));

    parallel_for(config.replications, config.threads, [&](std::size_t r) {
      const std::uint64_t rep_seed = mix64(seed ^ mix64(size) ^ mix64(stream::replication + r));
      const WeightedSample sample = crs_sample_with_repeats(base, smc, size, row.repeats, rep_seed);
      row.samples[r] = root * (sample.expectation(h) - report.target_mean);
      repeat_terms[r] = root * row.repetition_fraction *
                        std::abs(h(sample.entries.front().plan) - report.target_mean);
    });

    const double n = static_cast<double>(config.replications);
    row.mean = std::accumulate(row.samples.begin(), row.samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double y : row.samples) ss += (y - row.mean) * (y - row.mean);
    row.variance = ss / (n - 1.0);
    row.mean_stderr = std::sqrt(row.variance / n);
    row.repeat_term = std::accumulate(repeat_terms.begin(), repeat_terms.end(), 0.0) / n;
    std::tie(row.anderson_darling, row.anderson_darling_p) = anderson_darling_normal(row.samples);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace smcrep
