#pragma once

// Controlled repetition sampler and an empirical weak-CLT harness on a
// fully enumerable districting instance.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "smcrep/mini_smc.hpp"
#include "smcrep/partition.hpp"

namespace smcrep {

struct WeightedEntry {
  Plan plan;
  double weight = 0.0;
};

struct WeightedSample {
  std::vector<WeightedEntry> entries;
  /// Leading entries that are copies of the single base draw.
  std::size_t repeated = 0;

  double total_weight() const;
  double expectation(const std::function<double(const Plan&)>& h) const;
};

/// Draws one state from the target.
using BaseSampler = std::function<Plan(Engine&)>;
/// Returns `size` weighted entries whose weights sum to 1.
using SmcSampler = std::function<std::vector<WeightedEntry>(std::size_t size, std::uint64_t seed)>;

/// ceil(S^exponent).
std::size_t repetition_count(std::size_t size, double exponent);

/// One base draw repeated ceil(S^alpha) times at weight 1/S, then
/// S' = S - ceil(S^alpha) SMC entries at weight w_j S'/S.
/// Throws std::domain_error unless 0 < alpha < 1/2 and S >= 2.
WeightedSample crs_sample(const BaseSampler& base, const SmcSampler& smc, std::size_t size,
                          double alpha, std::uint64_t seed);

/// Same construction with an explicit repeat count (1 <= repeats < S);
/// used for growth rules outside the alpha < 1/2 regime.
WeightedSample crs_sample_with_repeats(const BaseSampler& base, const SmcSampler& smc,
                                       std::size_t size, std::size_t repeats, std::uint64_t seed);

/// A graph small enough that every balanced plan, the target law over them
/// and the sequential-splitting proposal law are all known exactly.
struct EnumerableInstance {
  std::shared_ptr<const WeightedGraph> graph;
  int districts = 0;
  double pop_tol = 0.0;
  std::vector<Plan> plans;           // canonical, sorted
  std::vector<double> target;        // pi, aligned with plans
  std::vector<double> proposal;      // sequential split probability
  std::map<Plan, std::size_t> index; // canonical plan -> position

  /// Throws std::out_of_range for plans outside the enumeration.
  std::size_t position(const Plan& plan) const;
  double expectation(const std::function<double(const Plan&)>& h) const;
};

/// Uniform target over every balanced plan. Throws std::domain_error when
/// there are none.
EnumerableInstance make_enumerable_instance(std::shared_ptr<const WeightedGraph> graph,
                                            int districts, double pop_tol);

/// Exact inverse-CDF draw from the instance's target.
BaseSampler exact_base_sampler(const EnumerableInstance& instance);

/// Mini-SMC on the instance with final weights
///   pi(plan) / (q(plan) * prod of the lineage's resampling weights),
/// which makes the weighted particles consistent for pi.
SmcSampler weighted_smc_sampler(const EnumerableInstance& instance, MiniSmcConfig config);

struct CltRow {
  std::size_t size = 0;
  std::size_t replications = 0;
  std::size_t repeats = 0;
  double repetition_fraction = 0.0;  // repeats / S
  double mean = 0.0;                 // mean of Y_S
  double variance = 0.0;             // sample variance of Y_S
  double mean_stderr = 0.0;
  /// Mean over replications of sqrt(S) * (repeats/S) * |h(x) - E_pi h|:
  /// the scaled error carried by the repeated block alone.
  double repeat_term = 0.0;
  double anderson_darling = 0.0;     // A*^2 of the standardised Y_S
  double anderson_darling_p = 0.0;
  std::vector<double> samples;       // Y_S per replication
};

struct CltReport {
  double exponent = 0.0;
  double target_mean = 0.0;
  std::vector<CltRow> rows;
};

struct CltConfig {
  std::vector<std::size_t> sizes;
  /// Repeat count is ceil(S^exponent); any value in (0, 1) is accepted so
  /// the harness can run negative controls above 1/2.
  double exponent = 1.0 / 3.0;
  std::size_t replications = 500;
  MiniSmcConfig smc;
  unsigned threads = 0;
};

/// Y_S = sqrt(S) (E_{pi_S} h - E_pi h) over independent replications. Plans
/// reach h with drawing-order labels, so h must not depend on labelling.
CltReport clt_experiment(const EnumerableInstance& instance,
                         const std::function<double(const Plan&)>& h, const CltConfig& config,
                         std::uint64_t seed);

/// Anderson-Darling A*^2 (small-sample adjusted) for normality with mean
/// and variance estimated from the data, plus its approximate p-value.
std::pair<double, double> anderson_darling_normal(std::vector<double> sample);

}  // namespace smcrep
