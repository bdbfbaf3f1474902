#pragma once

// Desk-scale sequential partitioner: S particles mark one district per
// generation, resampling parents in proportion to the partial-plan weight.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "smcrep/diagram.hpp"
#include "smcrep/partition.hpp"
#include "smcrep/repetition.hpp"

namespace smcrep {

struct MiniSmcConfig {
  int districts = 2;
  int particles = 1;
  double rho = 1.0;
  double pop_tol = 0.0;
  /// Trees tried per split_district call.
  int split_attempts = 1000;
  /// Parent draws a child may spend before it is declared dead.
  int resample_tries = 100;
  CutCount cut_mode = CutCount::all_pieces;
  unsigned threads = 0;
};

/// Raised when every particle of a generation hits a bottleneck.
class BottleneckError : public std::runtime_error {
 public:
  BottleneckError(int level, const std::string& what) : std::runtime_error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

struct MiniSmcResult {
  /// Complete plans of the live bottom-level particles, in particle order;
  /// district labels follow drawing order.
  std::vector<Plan> sample;
  /// Realised resampling choices; level 1 is the final generation.
  DescendancyDiagram diagram;
  /// log_weights[L - 2][j]: log weight of particle j at level L (2..k-1),
  /// the weight its children resampled against. -inf for dead particles.
  std::vector<std::vector<double>> log_weights;
  /// Bottom-level particle j is live iff live[j].
  std::vector<bool> live;
  std::size_t dead_particles = 0;
  RepetitionReport report;
};

/// First generation draws independently with no weights; every later child
/// draws a parent from the multinomial law of the normalised weights and
/// extends it, redrawing the parent when the split fails. Child j of
/// generation L uses stream (seed, particle, L, j), so the result does not
/// depend on the thread count.
MiniSmcResult run_mini_smc(const std::shared_ptr<const WeightedGraph>& graph,
                           const MiniSmcConfig& config, std::uint64_t seed);

/// Multinomial resampling probabilities from log weights (max-subtracted).
std::vector<double> normalized_weights(const std::vector<double>& log_weights);

}  // namespace smcrep
