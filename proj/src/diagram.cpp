#include "smcrep/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smcrep/parallel.hpp"

namespace smcrep {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

// Tolerance for comparing integer counts against phi * S.
constexpr double kShareEps = 1e-9;

bool qualifies(std::int32_t d, double share, int width, Threshold threshold) {
  const double bar = share * width;
  return threshold == Threshold::inclusive ? d >= bar - kShareEps * width
                                           : d > bar + kShareEps * width;
}

void require_share(double share) {
  require(share > 0.0 && share <= 1.0, "share phi must lie in (0, 1]");
}

Estimate summarize(double sum, double sum_sq, std::size_t n) {
  Estimate e;
  e.samples = n;
  if (n == 0) return e;
  e.mean = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1));
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightSchedule

WeightSchedule WeightSchedule::uniform() { return {}; }

WeightSchedule WeightSchedule::spike(double ratio) {
  require(ratio > 0.0 && std::isfinite(ratio), "spike ratio must be positive");
  WeightSchedule w;
  w.mode_ = Mode::spike;
  w.ratio_ = ratio;
  return w;
}

WeightSchedule WeightSchedule::per_level(std::vector<ProbabilityVector> levels) {
  require(!levels.empty(), "per-level schedule needs at least one level");
  WeightSchedule w;
  w.mode_ = Mode::per_level;
  for (const auto& p : levels) {
    require(p.size() == levels.front().size(), "per-level vectors must share one width");
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) cdf[j] = (acc += p[j]);
    cdf.back() = 1.0;
    w.cumulative_.push_back(std::move(cdf));
  }
  w.levels_ = std::move(levels);
  return w;
}

std::string WeightSchedule::name() const {
  switch (mode_) {
    case Mode::uniform:
      return "uniform";
    case Mode::spike: {
      std::ostringstream os;
      os << "spike:" << ratio_;
      return os.str();
    }
    case Mode::per_level:
      return "per-level";
  }
  return "unknown";
}

void WeightSchedule::check(int width, int top_level) const {
  if (mode_ != Mode::per_level || top_level < 2) return;
  require(static_cast<int>(levels_.size()) >= top_level - 1,
          "weight schedule has " + std::to_string(levels_.size()) + " levels, diagram needs " +
              std::to_string(top_level - 1));
  require(static_cast<int>(levels_.front().size()) == width,
          "weight schedule width does not match diagram width");
}

ProbabilityVector WeightSchedule::law(int level, int width) const {
  switch (mode_) {
    case Mode::uniform:
      return ProbabilityVector::uniform(static_cast<std::size_t>(width));
    case Mode::spike:
      return ProbabilityVector::spike(static_cast<std::size_t>(width), ratio_);
    case Mode::per_level:
      check(width, level);
      return levels_.at(static_cast<std::size_t>(level - 2));
  }
  throw std::logic_error("unreachable");
}

std::uint32_t WeightSchedule::draw(Engine& rng, int level, int width) const {
  switch (mode_) {
    case Mode::uniform:
      return static_cast<std::uint32_t>(uniform_index(rng, static_cast<std::uint64_t>(width)));
    case Mode::spike: {
      const double u = uniform01(rng) * (ratio_ + (width - 1));
      if (u < ratio_ || width == 1) return 0;
      const auto j = static_cast<std::uint32_t>(1 + std::floor(u - ratio_));
      return std::min<std::uint32_t>(j, static_cast<std::uint32_t>(width - 1));
    }
    case Mode::per_level: {
      const auto& cdf = cumulative_.at(static_cast<std::size_t>(level - 2));
      const double u = uniform01(rng);
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), width - 1));
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// DescendancyDiagram

DescendancyDiagram::DescendancyDiagram(int width, int districts, CountArray parents)
    : width_(width), districts_(districts), parents_(std::move(parents)) {
  require(width >= 1, "diagram width must be >= 1");
  require(districts >= 2, "diagram needs k >= 2");
  require(parents_.rows() == width && parents_.cols() == districts - 2,
          "parents array must be S x (k-2)");
  require(parents_.size() == 0 || (parents_.minCoeff() >= 0 && parents_.maxCoeff() < width),
          "parent index out of range");
}

DescendancyDiagram DescendancyDiagram::identity(int width, int districts) {
  CountArray parents(width, std::max(districts - 2, 0));
  for (int i = 0; i < parents.cols(); ++i) {
    for (int j = 0; j < width; ++j) parents(j, i) = j;
  }
  return {width, districts, std::move(parents)};
}

DescendancyDiagram DescendancyDiagram::chain(int width, int districts) {
  return {width, districts, CountArray::Zero(width, std::max(districts - 2, 0))};
}

bool operator==(const DescendancyDiagram& a, const DescendancyDiagram& b) {
  return a.width_ == b.width_ && a.districts_ == b.districts_ &&
         (a.parents_ == b.parents_).all();
}

DescendancyDiagram sample_diagram(int width, int districts, const WeightSchedule& weights,
                                  Engine& rng) {
  require(width >= 1, "diagram width must be >= 1");
  require(districts >= 2, "diagram needs k >= 2");
  weights.check(width, districts - 1);
  CountArray parents(width, districts - 2);
  for (int level = 1; level <= districts - 2; ++level) {
    for (int j = 0; j < width; ++j) {
      parents(j, level - 1) = static_cast<std::int32_t>(weights.draw(rng, level + 1, width));
    }
  }
  return {width, districts, std::move(parents)};
}

DescendancyDiagram sample_diagram(int width, int districts, const WeightSchedule& weights,
                                  std::uint64_t seed) {
  Engine rng = make_stream(seed, {stream::diagram});
  return sample_diagram(width, districts, weights, rng);
}

Decorated decorate(const DescendancyDiagram& diagram) {
  const int width = diagram.width();
  const int levels = diagram.levels();
  Decorated out;
  CountArray& d = out.decoration.descendants;
  d = CountArray::Zero(width, levels);
  d.col(0).setOnes();
  for (int level = 1; level < levels; ++level) {
    for (int j = 0; j < width; ++j) {
      d(diagram.parent(level, j), level) += d(j, level - 1);
    }
  }
  out.profile.counts.resize(static_cast<std::size_t>(levels));
  out.profile.active.assign(static_cast<std::size_t>(levels), std::vector<bool>(width));
  for (int level = 0; level < levels; ++level) {
    int count = 0;
    for (int j = 0; j < width; ++j) {
      const bool on = d(j, level) > 0;
      out.profile.active[level][j] = on;
      count += on;
    }
    out.profile.counts[level] = count;
  }
  return out;
}

int surviving_ancestors(const DescendancyDiagram& diagram) {
  return decorate(diagram).profile.counts.back();
}

std::optional<int> mega_ancestor_level(const DescendantDecoration& decoration, double share,
                                       Threshold threshold) {
  require_share(share);
  for (int level = 1; level <= decoration.levels(); ++level) {
    if (qualifies(decoration.level_max(level), share, decoration.width(), threshold)) return level;
  }
  return std::nullopt;
}

int common_district_count(const DescendantDecoration& decoration, int shared) {
  const int districts = decoration.levels() + 1;
  require(shared >= 1 && shared <= districts - 1, "G(D, j) needs 1 <= j <= k - 1");
  return decoration.level_max(districts - shared);
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::vector<Estimate> estimate_active_profile(int width, int districts,
                                              const WeightSchedule& weights,
                                              std::size_t trials, std::uint64_t seed,
                                              unsigned threads) {
  require(trials >= 1, "need at least one trial");
  require(width >= 1 && districts >= 2, "need S >= 1 and k >= 2");
  weights.check(width, districts - 1);
  const int levels = districts - 1;
  Eigen::ArrayXXd counts(levels, static_cast<Eigen::Index>(trials));
  parallel_for(trials, threads, [&](std::size_t t) {
    Engine rng = make_stream(seed, {stream::trial, t});
    const auto decorated = decorate(sample_diagram(width, districts, weights, rng));
    for (int i = 0; i < levels; ++i) counts(i, static_cast<Eigen::Index>(t)) = decorated.profile.counts[i];
  });
  std::vector<Estimate> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    const auto row = counts.row(i);
    out.push_back(summarize(row.sum(), row.square().sum(), trials));
  }
  return out;
}

Estimate estimate_expected_ancestors(int width, int districts, const WeightSchedule& weights,
                                     std::size_t trials, std::uint64_t seed, unsigned threads) {
  return estimate_active_profile(width, districts, weights, trials, seed, threads).back();
}

std::vector<SquareDiagramRow> square_diagram_experiment(const std::vector<int>& widths,
                                                        std::size_t trials, std::uint64_t seed,
                                                        unsigned threads) {
  std::vector<SquareDiagramRow> rows;
  for (int s : widths) {
    require(s >= 1, "square diagrams need S >= 1");
    const int k = std::max(s, 2);
    rows.push_back({s, estimate_expected_ancestors(s, k, WeightSchedule::uniform(), trials,
                                                   mix64(seed ^ static_cast<std::uint64_t>(s)),
                                                   threads)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Coalescence-grown diagrams

std::optional<int> CoalescenceTrace::mega_ancestor_level(double share, int width,
                                                         Threshold threshold) const {
  require_share(share);
  for (std::size_t i = 0; i < level_max.size(); ++i) {
    if (qualifies(level_max[i], share, width, threshold)) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

CoalescenceTrace grow_until_coalescence(int width, const WeightSchedule& weights, Engine& rng,
                                        std::optional<int> max_levels) {
  require(width >= 1, "diagram width must be >= 1");
  CoalescenceTrace trace;
  // (node, descendants) for active nodes of the current level.
  std::vector<std::pair<std::uint32_t, std::int32_t>> active(static_cast<std::size_t>(width));
  for (int j = 0; j < width; ++j) active[j] = {static_cast<std::uint32_t>(j), 1};
  std::vector<std::int32_t> slot(static_cast<std::size_t>(width), 0);
  std::vector<std::uint32_t> touched;
  touched.reserve(static_cast<std::size_t>(width));

  for (int level = 1;; ++level) {
    std::int32_t top = 0;
    for (const auto& a : active) top = std::max(top, a.second);
    trace.level_max.push_back(top);
    if (top == width) {
      trace.coalesced = true;
      break;
    }
    if (max_levels && level >= *max_levels) break;
    if (weights.mode() == WeightSchedule::Mode::per_level) weights.check(width, level + 1);

    touched.clear();
    for (const auto& [node, d] : active) {
      const std::uint32_t parent = weights.draw(rng, level + 1, width);
      if (slot[parent] == 0) touched.push_back(parent);
      slot[parent] += d;
    }
    std::sort(touched.begin(), touched.end());
    active.clear();
    for (std::uint32_t p : touched) {
      active.emplace_back(p, slot[p]);
      slot[p] = 0;
    }
  }
  return trace;
}

std::vector<FTableCell> f_table(const std::vector<int>& widths, const std::vector<double>& shares,
                                const WeightSchedule& weights, std::size_t trials,
                                std::uint64_t seed, std::optional<int> max_levels,
                                Threshold threshold, unsigned threads) {
  require(trials >= 1, "need at least one trial");
  for (double phi : shares) require_share(phi);
  std::vector<FTableCell> cells;
  for (int s : widths) {
    require(s >= 1, "diagram width must be >= 1");
    // levels[t][p] = F for share p in trial t (0 when absent).
    std::vector<std::vector<int>> levels(trials, std::vector<int>(shares.size(), 0));
    parallel_for(trials, threads, [&](std::size_t t) {
      Engine rng = make_stream(seed, {static_cast<std::uint64_t>(s), stream::trial, t});
      const CoalescenceTrace trace = grow_until_coalescence(s, weights, rng, max_levels);
      for (std::size_t p = 0; p < shares.size(); ++p) {
        levels[t][p] = trace.mega_ancestor_level(shares[p], s, threshold).value_or(0);
      }
    });
    for (std::size_t p = 0; p < shares.size(); ++p) {
      FTableCell cell;
      cell.width = s;
      cell.share = shares[p];
      cell.vacuous = shares[p] * s <= 1.0 + kShareEps;
      cell.trials = trials;
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        if (levels[t][p] == 0) continue;
        ++cell.found;
        sum += levels[t][p];
        sum_sq += static_cast<double>(levels[t][p]) * levels[t][p];
      }
      const Estimate e = summarize(sum, sum_sq, cell.found);
      cell.mean_level = e.mean;
      cell.stderr_level = e.std_error;
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace smcrep
