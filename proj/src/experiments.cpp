#include "smcrep/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smcrep/analytic.hpp"
#include "smcrep/crs.hpp"
#include "smcrep/csv.hpp"
#include "smcrep/diagram.hpp"
#include "smcrep/graph.hpp"
#include "smcrep/mini_smc.hpp"
#include "smcrep/parallel.hpp"
#include "smcrep/rational.hpp"
#include "smcrep/repetition.hpp"

#ifndef SMCREP_VERSION
#define SMCREP_VERSION "0.0.0"
#endif

namespace smcrep {

namespace {

const std::vector<std::string> kCommonKeys{"seed", "threads"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return value;
}

/// Accepts decimals and simple fractions such as "1/3".
std::optional<double> parse_real(std::string_view s) {
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_number<double>(trim(s.substr(0, slash)));
    const auto den = parse_number<double>(trim(s.substr(slash + 1)));
    if (!num || !den || *den == 0.0) return std::nullopt;
    return *num / *den;
  }
  return parse_number<double>(s);
}

class Params {
 public:
  explicit Params(const ConfigValues& values) : values_(values) {}

  std::optional<std::string> raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) const {
    const auto text = raw(key);
    if (!text) return fallback;
    const auto v = parse_number<std::int64_t>(*text);
    if (!v) fail(key, *text, "an integer");
    if (*v < lo || *v > hi) range(key, *text, lo, hi);
    return *v;
  }

  std::uint64_t seed() const {
    const auto text = raw("seed");
    if (!text) return 1;
    const auto v = parse_number<std::uint64_t>(*text);
    if (!v) fail("seed", *text, "an unsigned 64-bit integer");
    return *v;
  }

  double real(const std::string& key, double fallback, double lo, double hi, bool open_lo = false,
              bool open_hi = false) const {
    const auto text = raw(key);
    if (!text) return fallback;
    const auto v = parse_real(*text);
    if (!v || !std::isfinite(*v)) fail(key, *text, "a number");
    if (*v < lo || *v > hi || (open_lo && *v == lo) || (open_hi && *v == hi)) {
      throw ConfigError(key + " = " + *text + " is outside " + (open_lo ? "(" : "[") + format_double(lo) + ", " +
                        format_double(hi) + (open_hi ? ")" : "]"));
    }
    return *v;
  }

  std::optional<double> optional_real(const std::string& key, double lo, double hi) const {
    if (!raw(key)) return std::nullopt;
    return real(key, 0.0, lo, hi);
  }

  /// Comma list; items may be ranges "a..b".
  std::vector<std::int64_t> integers(const std::string& key, const std::string& fallback, std::int64_t lo,
                                     std::int64_t hi) const {
    const std::string text = raw(key).value_or(fallback);
    std::vector<std::int64_t> out;
    for (const auto& item : split(text, ',')) {
      const auto dots = item.find("..");
      if (dots != std::string::npos) {
        const auto a = parse_number<std::int64_t>(trim(item.substr(0, dots)));
        const auto b = parse_number<std::int64_t>(trim(item.substr(dots + 2)));
        if (!a || !b || *a > *b) fail(key, text, "a list of integers or ranges a..b");
        if (*a < lo || *b > hi) range(key, text, lo, hi);
        for (auto v = *a; v <= *b; ++v) out.push_back(v);
      } else {
        const auto v = parse_number<std::int64_t>(item);
        if (!v) fail(key, text, "a list of integers");
        if (*v < lo || *v > hi) range(key, text, lo, hi);
        out.push_back(*v);
      }
    }
    return out;
  }

  std::vector<double> reals(const std::string& key, const std::string& fallback, double lo, double hi,
                            bool open_lo) const {
    const std::string text = raw(key).value_or(fallback);
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
      const auto v = parse_real(item);
      if (!v || !std::isfinite(*v)) fail(key, text, "a list of numbers");
      if (*v < lo || *v > hi || (open_lo && *v == lo)) {
        throw ConfigError(key + " = " + text + ": every value must lie in " + (open_lo ? "(" : "[") +
                          format_double(lo) + ", " + format_double(hi) + "]");
      }
      out.push_back(*v);
    }
    return out;
  }

  template <class... Choices>
  std::string choice(const std::string& key, const std::string& fallback, const Choices&... choices) const {
    const std::string v = text(key, fallback);
    if (((v == choices) || ...)) return v;
    std::string list;
    ((list += std::string(list.empty() ? "" : ", ") + choices), ...);
    throw ConfigError(key + " = " + v + " is not one of: " + list);
  }

 private:
  [[noreturn]] static void fail(const std::string& key, const std::string& text, const std::string& what) {
    throw ConfigError(key + " = " + text + " is not " + what);
  }
  [[noreturn]] static void range(const std::string& key, const std::string& text, std::int64_t lo,
                                 std::int64_t hi) {
    throw ConfigError(key + " = " + text + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  const ConfigValues& values_;
};

std::vector<int> narrow(const std::vector<std::int64_t>& v) {
  return {v.begin(), v.end()};
}

WeightSchedule parse_weights(const Params& p) {
  const std::string text = p.text("weights", "uniform");
  if (text == "uniform") return WeightSchedule::uniform();
  if (text.rfind("spike:", 0) == 0) {
    const auto r = parse_real(text.substr(6));
    if (r && std::isfinite(*r) && *r > 0.0) return WeightSchedule::spike(*r);
  }
  throw ConfigError("weights = " + text + " is not uniform or spike:<ratio>");
}

Threshold parse_threshold(const Params& p) {
  return p.choice("threshold", "inclusive", "inclusive", "strict") == "strict" ? Threshold::strict
                                                                              : Threshold::inclusive;
}

std::shared_ptr<const WeightedGraph> parse_graph(const Params& p, const std::string& fallback) {
  const std::string source = p.text("graph", fallback);
  const auto weights = p.raw("node_weights");
  try {
    WeightedGraph g;
    if (std::filesystem::exists(source)) {
      g = load_graph(source, weights.value_or(""));
    } else {
      g = builtin_graph(source);
      if (weights) {
        std::ifstream in(*weights);
        if (!in) throw std::runtime_error("cannot open " + *weights);
        g = WeightedGraph(g.node_count(), g.edges(), read_node_weights(in, g.node_count()));
      }
    }
    if (!g.is_connected()) throw std::domain_error("graph is not connected");
    return std::make_shared<const WeightedGraph>(std::move(g));
  } catch (const std::exception& e) {
    throw ConfigError("graph = " + source + ": " + e.what());
  }
}

MiniSmcConfig parse_smc(const Params& p, int districts, unsigned threads) {
  MiniSmcConfig c;
  c.districts = districts;
  c.rho = p.real("rho", 1.0, 0.0, 1e6);
  c.pop_tol = p.real("pop_tol", 0.0, 0.0, 1.0, false, true);
  c.split_attempts = static_cast<int>(p.integer("split_attempts", 1000, 1, 100'000'000));
  c.resample_tries = static_cast<int>(p.integer("resample_tries", 100, 1, 100'000'000));
  c.cut_mode = p.choice("cut_mode", "all", "all", "marked") == "marked" ? CutCount::marked_only : CutCount::all_pieces;
  c.threads = threads;
  return c;
}

Estimate summarize(double sum, double sum_sq, std::size_t n) {
  Estimate e;
  e.samples = n;
  e.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(n - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

std::string label(const std::string& prefix, double x) { return prefix + format_double(x); }

// ---------------------------------------------------------------------------

std::vector<Artifact> run_exact(const Params& p) {
  const auto sizes = narrow(p.integers("sizes", "1..6", 1, 100'000));
  const int k_max = static_cast<int>(p.integer("k_max", 6, 2, 100'000));
  const int matrix_size = static_cast<int>(p.integer("matrix_size", 3, 1, 200));
  const int rational_limit = static_cast<int>(p.integer("rational_limit", 60, 0, 200));

  CsvWriter table({"S", "k", "A_exact", "A_decimal", "lower_bound", "upper_bound"});
  const auto b = b_sequence(static_cast<std::size_t>(k_max - 2));
  for (int S : sizes) {
    std::vector<std::string> exact;
    std::vector<double> decimal;
    if (S <= rational_limit) {
      for (const auto& a : expected_ancestors_curve<Rational>(S, k_max)) {
        exact.push_back(to_fraction_string(a));
        decimal.push_back(to_double(a));
      }
    } else {
      decimal = expected_ancestors_curve<double>(S, k_max);
    }
    std::optional<BoundSequence> a;
    if (S >= 2) a = a_sequence(S, static_cast<std::size_t>(k_max - 2));
    for (int k = 2; k <= k_max; ++k) {
      const auto i = static_cast<std::size_t>(k - 2);
      const std::string value = exact.empty() ? std::string() : exact[i];
      std::optional<double> lo, hi;
      if (a) lo = b[i] * S, hi = (*a)[i] * S;
      table.row(S, k, value, decimal[i], lo, hi);
    }
  }

  CsvWriter matrix({"S", "t", "v", "probability", "decimal"});
  const auto m = transition_matrix<Rational>(matrix_size);
  for (int t = 1; t <= matrix_size; ++t) {
    for (int v = 1; v <= matrix_size; ++v) {
      matrix.row(matrix_size, t, v, to_fraction_string(m(t - 1, v - 1)), to_double(m(t - 1, v - 1)));
    }
  }
  return {{"exact_table.csv", table.str()}, {"transition_matrix.csv", matrix.str()}};
}

std::vector<Artifact> run_recursion(const Params& p) {
  const auto sizes = narrow(p.integers("sizes", "10,100,1000,5000", 2, 1'000'000'000));
  const auto terms = static_cast<std::size_t>(p.integer("terms", 10, 0, 10'000'000));
  const auto tolerance = p.optional_real("tolerance", 1e-15, 1.0);

  CsvWriter table({"sequence", "S", "i", "value"});
  for (int S : sizes) {
    const auto a = a_sequence(S, terms);
    for (std::size_t i = 0; i <= terms; ++i) table.row("a", S, i, a[i]);
  }
  const auto b = b_sequence(terms);
  for (std::size_t i = 0; i <= terms; ++i) table.row("b", "", i, b[i]);
  std::vector<Artifact> out{{"recursion_table.csv", table.str()}};

  if (tolerance) {
    CsvWriter limits({"S", "tolerance", "iterations", "a_value"});
    for (int S : sizes) {
      const auto n = a_limit_iterations(S, *tolerance);
      limits.row(S, *tolerance, n, a_sequence(S, n)[n]);
    }
    out.push_back({"recursion_limits.csv", limits.str()});
  }
  return out;
}

std::vector<Artifact> run_simulate(const Params& p, std::uint64_t seed, unsigned threads) {
  const auto widths = narrow(p.integers("widths", "5,20,50", 1, 1'000'000));
  const int k = static_cast<int>(p.integer("districts", 40, 2, 100'000));
  const auto trials = static_cast<std::size_t>(p.integer("trials", 10'000, 1, 1'000'000'000));
  const auto weights = parse_weights(p);
  const auto shares = p.reals("phis", "0.25,0.5,0.75,1", 0.0, 1.0, true);
  const auto threshold = parse_threshold(p);
  auto shared = narrow(p.integers("shared", "1.." + std::to_string(k - 1), 1, k - 1));
  const auto squares = p.raw("square") ? narrow(p.integers("square", "", 1, 100'000)) : std::vector<int>{};
  const auto square_trials = static_cast<std::size_t>(p.integer("square_trials", static_cast<std::int64_t>(trials), 1, 1'000'000'000));
  for (int S : widths) {
    try {
      weights.check(S, k - 1);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("weights: ") + e.what());
    }
  }

  std::vector<std::string> header{"S", "k", "weight_mode", "trial", "A"};
  for (double phi : shares) header.push_back(label("F_", phi));
  for (int j : shared) header.push_back("G_" + std::to_string(j));
  CsvWriter per_trial(header);
  CsvWriter summary({"S", "k", "weight_mode", "trials", "mc_mean", "mc_stderr", "exact", "lower_bound", "upper_bound"});
  const bool uniform = weights.mode() == WeightSchedule::Mode::uniform;
  const int levels = k - 1;

  for (int S : widths) {
    struct Row {
      std::vector<int> counts;
      std::vector<std::optional<int>> f;
      std::vector<int> g;
    };
    std::vector<Row> rows(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      Engine rng = make_stream(seed, {stream::trial, static_cast<std::uint64_t>(S), t});
      const auto d = decorate(sample_diagram(S, k, weights, rng));
      Row& r = rows[t];
      r.counts = d.profile.counts;
      for (double phi : shares) r.f.push_back(mega_ancestor_level(d.decoration, phi, threshold));
      for (int j : shared) r.g.push_back(common_district_count(d.decoration, j));
    });
    std::vector<double> sum(static_cast<std::size_t>(levels), 0.0), sum_sq(sum);
    for (std::size_t t = 0; t < trials; ++t) {
      const Row& r = rows[t];
      std::vector<std::string> fields{std::to_string(S), std::to_string(k), weights.name(), std::to_string(t),
                                      std::to_string(r.counts.back())};
      for (const auto& f : r.f) fields.push_back(f ? std::to_string(*f) : "");
      for (int g : r.g) fields.push_back(std::to_string(g));
      per_trial.row_fields(fields);
      for (int i = 0; i < levels; ++i) {
        sum[i] += r.counts[i];
        sum_sq[i] += static_cast<double>(r.counts[i]) * r.counts[i];
      }
    }
    std::vector<double> exact;
    std::optional<BoundSequence> a;
    std::vector<double> b;
    if (uniform) {
      exact = expected_ancestors_curve<double>(S, k);
      if (S >= 2) {
        a = a_sequence(S, static_cast<std::size_t>(k - 2));
        b = b_sequence(static_cast<std::size_t>(k - 2)).values;
      }
    }
    for (int kk = 2; kk <= k; ++kk) {
      const auto i = static_cast<std::size_t>(kk - 2);
      const Estimate e = summarize(sum[i], sum_sq[i], trials);
      std::optional<double> ex, lo, hi;
      if (uniform) ex = exact[i];
      if (a) lo = b[i] * S, hi = (*a)[i] * S;
      summary.row(S, kk, weights.name(), trials, e.mean, e.std_error, ex, lo, hi);
    }
  }

  std::vector<Artifact> out{{"diagram_mc.csv", summary.str()}, {"trials.csv", per_trial.str()}};
  if (!squares.empty()) {
    CsvWriter square({"S", "trials", "mean", "stderr"});
    for (const auto& row : square_diagram_experiment(squares, square_trials, seed, threads)) {
      square.row(row.width, row.ancestors.samples, row.ancestors.mean, row.ancestors.std_error);
    }
    out.push_back({"square_diagram.csv", square.str()});
  }
  return out;
}

std::vector<Artifact> run_ftable(const Params& p, std::uint64_t seed, unsigned threads) {
  const auto widths = narrow(p.integers("widths", "10,100,1000", 1, 1'000'000));
  const auto shares = p.reals("phis", "0.01,0.1,0.25,0.5,0.75,1", 0.0, 1.0, true);
  const auto trials = static_cast<std::size_t>(p.integer("trials", 1000, 1, 1'000'000'000));
  const auto weights = parse_weights(p);
  const auto threshold = parse_threshold(p);
  std::optional<int> max_levels;
  if (p.raw("max_levels")) max_levels = static_cast<int>(p.integer("max_levels", 0, 1, 100'000'000));
  for (int S : widths) {
    try {
      weights.check(S, 2);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("weights: ") + e.what());
    }
  }

  CsvWriter table({"S", "phi", "weight_mode", "threshold", "trials", "vacuous", "found", "occurrence_rate",
                   "mean_level", "stderr_level"});
  const std::string thr = threshold == Threshold::strict ? "strict" : "inclusive";
  for (const auto& c : f_table(widths, shares, weights, trials, seed, max_levels, threshold, threads)) {
    std::optional<double> mean, se;
    if (c.found > 0) mean = c.mean_level, se = c.stderr_level;
    table.row(c.width, c.share, weights.name(), thr, c.trials, c.vacuous, c.found, c.occurrence_rate(), mean, se);
  }
  return {{"f_table.csv", table.str()}};
}

std::vector<Artifact> run_minismc(const Params& p, std::uint64_t seed, unsigned threads) {
  const auto graph = parse_graph(p, "grid:6x6");
  const int k = static_cast<int>(p.integer("districts", 6, 1, graph->node_count()));
  const int S = static_cast<int>(p.integer("particles", 100, 1, 10'000'000));
  const auto config = [&] {
    auto c = parse_smc(p, k, threads);
    c.particles = S;
    return c;
  }();
  const int runs = static_cast<int>(p.integer("runs", 1, 1, 1'000'000));

  CsvWriter plans({"run", "plan", "node", "district"});
  CsvWriter weights({"run", "level", "particle", "log_weight", "probability"});
  CsvWriter diagram({"run", "level", "node", "parent"});
  CsvWriter report({"run", "particles", "districts", "distinct_districts", "average_multiplicity",
                    "max_multiplicity", "first_district_repetition", "distinct_first_districts",
                    "surviving_ancestors", "predicted_repetition", "dead_particles"});
  CsvWriter shared({"run", "j", "plans"});
  CsvWriter histogram({"run", "multiplicity", "districts"});
  const double predicted = k >= 2 ? S / expected_ancestors(S, k) : 1.0;

  for (int run = 0; run < runs; ++run) {
    const std::uint64_t run_seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(run) + 1));
    const auto r = run_mini_smc(graph, config, run_seed);
    for (std::size_t j = 0; j < r.sample.size(); ++j) {
      for (std::size_t v = 0; v < r.sample[j].assignment.size(); ++v) plans.row(run, j, v, r.sample[j].assignment[v]);
    }
    for (std::size_t l = 0; l < r.log_weights.size(); ++l) {
      const auto probs = normalized_weights(r.log_weights[l]);
      for (std::size_t j = 0; j < probs.size(); ++j) weights.row(run, l + 2, j, r.log_weights[l][j], probs[j]);
    }
    for (int level = 1; level < r.diagram.levels(); ++level) {
      for (int j = 0; j < r.diagram.width(); ++j) diagram.row(run, level, j, r.diagram.parent(level, j));
    }
    const auto& rep = r.report;
    report.row(run, rep.plans, rep.districts_per_plan, rep.distinct_districts, rep.average_multiplicity,
               rep.max_multiplicity, rep.first_district_repetition, rep.distinct_first_districts,
               rep.surviving_ancestors, predicted, r.dead_particles);
    for (std::size_t j = 0; j < rep.shared_district_counts.size(); ++j) shared.row(run, j + 1, rep.shared_district_counts[j]);
    for (const auto& [multiplicity, count] : rep.multiplicity_histogram) histogram.row(run, multiplicity, count);
  }
  return {{"plans.csv", plans.str()},         {"weights.csv", weights.str()},
          {"diagram.csv", diagram.str()},     {"repetition.csv", report.str()},
          {"shared.csv", shared.str()},       {"multiplicity.csv", histogram.str()}};
}

std::function<double(const Plan&)> parse_statistic(const Params& p, const EnumerableInstance& inst) {
  const std::string text = p.text("statistic", "same:0,4");
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(text.substr(colon + 1), ',');
  const int n = inst.graph->node_count();
  if (kind == "same" && args.size() == 2) {
    const auto u = parse_number<int>(args[0]), v = parse_number<int>(args[1]);
    if (u && v && *u >= 0 && *v >= 0 && *u < n && *v < n) {
      return [u = *u, v = *v](const Plan& plan) { return plan.assignment[u] == plan.assignment[v] ? 1.0 : 0.0; };
    }
  }
  if (kind == "plan" && args.size() == 1) {
    const auto i = parse_number<std::size_t>(args[0]);
    if (i && *i < inst.plans.size()) {
      const Plan target = inst.plans[*i];
      return [target](const Plan& plan) { return canonical(plan) == target ? 1.0 : 0.0; };
    }
  }
  throw ConfigError("statistic = " + text + " is not same:<u>,<v> or plan:<index> within the instance");
}

std::vector<Artifact> run_crs(const Params& p, std::uint64_t seed, unsigned threads) {
  const auto graph = parse_graph(p, "grid:3x3");
  if (graph->node_count() > kEnumerationNodeCap) {
    throw ConfigError("crs needs an enumerable graph (at most " + std::to_string(kEnumerationNodeCap) + " nodes)");
  }
  const int k = static_cast<int>(p.integer("districts", 3, 2, graph->node_count()));
  CltConfig config;
  config.smc = parse_smc(p, k, 1);
  config.threads = threads;
  for (auto s : p.integers("sizes", "100,1000,10000", 2, 100'000'000)) config.sizes.push_back(static_cast<std::size_t>(s));
  config.exponent = p.real("alpha", 1.0 / 3.0, 0.0, 1.0, true, true);
  config.replications = static_cast<std::size_t>(p.integer("replications", 500, 2, 100'000'000));
  EnumerableInstance inst;
  try {
    inst = make_enumerable_instance(graph, k, config.smc.pop_tol);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("crs instance: ") + e.what());
  }
  const auto h = parse_statistic(p, inst);

  const auto report = clt_experiment(inst, h, config, seed);
  CsvWriter raw({"S", "replication", "Y_S"});
  CsvWriter summary({"S", "exponent", "replications", "repeats", "repetition_fraction", "mean", "mean_stderr",
                     "variance", "repeat_term", "anderson_darling", "anderson_darling_p", "target_mean"});
  for (const auto& row : report.rows) {
    for (std::size_t r = 0; r < row.samples.size(); ++r) raw.row(row.size, r, row.samples[r]);
    summary.row(row.size, report.exponent, row.replications, row.repeats, row.repetition_fraction, row.mean,
                row.mean_stderr, row.variance, row.repeat_term, row.anderson_darling, row.anderson_darling_p,
                report.target_mean);
  }
  return {{"clt_raw.csv", raw.str()}, {"clt_summary.csv", summary.str()}};
}

std::string hex64(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

std::string manifest(const ExperimentConfig& config, std::uint64_t seed, const std::vector<Artifact>& artifacts) {
  // threads never changes the output, so it stays out of the hash.
  std::string canonical_config = "experiment=" + config.experiment + "\n";
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config.values) {
    if (key == "threads") continue;
    canonical_config += key + "=" + value + "\n";
    values[key] = value;
  }
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    files.push_back({{"name", a.name}, {"bytes", a.content.size()}, {"fnv1a64", hex64(fnv1a64(a.content))}});
  }
  const nlohmann::ordered_json doc{{"tool", "smcrep"},
                                   {"version", SMCREP_VERSION},
                                   {"experiment", config.experiment},
                                   {"seed", seed},
                                   {"config_hash", "fnv1a64:" + hex64(fnv1a64(canonical_config))},
                                   {"config", values},
                                   {"artifacts", files}};
  return doc.dump(2) + "\n";
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ConfigValues parse_config_text(std::string_view text) {
  ConfigValues values;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!values.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": repeated key " + key);
    }
  }
  return values;
}

ConfigValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"exact", "recursion", "simulate", "ftable", "minismc", "crs"};
  return names;
}

const std::vector<std::string>& experiment_keys(const std::string& experiment) {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"exact", {"sizes", "k_max", "matrix_size", "rational_limit"}},
      {"recursion", {"sizes", "terms", "tolerance"}},
      {"simulate", {"widths", "districts", "trials", "weights", "phis", "threshold", "shared", "square", "square_trials"}},
      {"ftable", {"widths", "phis", "trials", "weights", "threshold", "max_levels"}},
      {"minismc", {"graph", "node_weights", "districts", "particles", "rho", "pop_tol", "split_attempts",
                   "resample_tries", "cut_mode", "runs"}},
      {"crs", {"graph", "node_weights", "districts", "sizes", "alpha", "replications", "statistic", "rho", "pop_tol",
               "split_attempts", "resample_tries", "cut_mode"}},
  };
  const auto it = keys.find(experiment);
  if (it == keys.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  return it->second;
}

std::vector<Artifact> build_artifacts(const ExperimentConfig& config) {
  const auto& allowed = experiment_keys(config.experiment);
  for (const auto& [key, value] : config.values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end() &&
        std::find(kCommonKeys.begin(), kCommonKeys.end(), key) == kCommonKeys.end()) {
      throw ConfigError("unknown key '" + key + "' for experiment " + config.experiment);
    }
  }
  const Params p(config.values);
  const std::uint64_t seed = p.seed();
  const auto threads = static_cast<unsigned>(p.integer("threads", 0, 0, 4096));

  std::vector<Artifact> artifacts;
  if (config.experiment == "exact") artifacts = run_exact(p);
  else if (config.experiment == "recursion") artifacts = run_recursion(p);
  else if (config.experiment == "simulate") artifacts = run_simulate(p, seed, threads);
  else if (config.experiment == "ftable") artifacts = run_ftable(p, seed, threads);
  else if (config.experiment == "minismc") artifacts = run_minismc(p, seed, threads);
  else artifacts = run_crs(p, seed, threads);

  artifacts.push_back({"manifest.json", manifest(config, seed, artifacts)});
  return artifacts;
}

int run_experiment(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& diagnostics) {
  std::vector<Artifact> artifacts;
  try {
    artifacts = build_artifacts(config);
  } catch (const ConfigError& e) {
    diagnostics << "invalid config: " << e.what() << '\n';
    return exit_code::invalid_config;
  } catch (const BottleneckError& e) {
    diagnostics << "bottleneck at level " << e.level() << ": " << e.what() << '\n';
    return exit_code::bottleneck;
  } catch (const std::domain_error& e) {
    diagnostics << "invalid config: " << e.what() << '\n';
    return exit_code::invalid_config;
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  try {
    std::filesystem::create_directories(out);
    for (const auto& a : artifacts) {
      std::ofstream file(out / a.name, std::ios::binary | std::ios::trunc);
      file << a.content;
      if (!file) throw std::runtime_error("cannot write " + (out / a.name).string());
    }
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  return exit_code::ok;
}

}  // namespace smcrep
