#include "smcrep/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smcrep {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

Rational rational_pow(const Rational& base, int e) {
  Rational r(1);
  Rational b = base;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  BigInt c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

// Neumaier-compensated sum for doubles; plain sum for exact scalars.
template <class Scalar>
struct Accumulator {
  Scalar sum{0};
  void add(const Scalar& x) { sum += x; }
  Scalar value() const { return sum; }
};

template <>
struct Accumulator<double> {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

ProbabilityVector::ProbabilityVector(Eigen::VectorXd p) : p_(std::move(p)) {
  require(p_.size() > 0, "probability vector is empty");
  require((p_.array() >= 0.0).all() && p_.allFinite(), "probability vector has a negative entry");
  Accumulator<double> total;
  for (double x : p_) total.add(x);
  require(std::abs(total.value() - 1.0) <= 1e-12, "probability vector does not sum to 1");
}

ProbabilityVector ProbabilityVector::uniform(std::size_t size) {
  require(size > 0, "probability vector is empty");
  return ProbabilityVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(size), 1.0 / size));
}

ProbabilityVector ProbabilityVector::spike(std::size_t size, double ratio) {
  require(size > 0, "probability vector is empty");
  require(ratio > 0.0 && std::isfinite(ratio), "spike ratio must be positive");
  Eigen::VectorXd p = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(size));
  p[0] = ratio;
  p /= ratio + static_cast<double>(size - 1);
  return ProbabilityVector(std::move(p));
}

Rational one_step_expectation(int t, int S) {
  require(S >= 1 && t >= 1 && t <= S, "one_step_expectation: need 1 <= t <= S");
  const Rational miss = rational_pow(Rational(S - 1, S), t);
  return Rational(S) - Rational(S) * miss;
}

Rational one_step_pmf(int v, int t, int S) {
  require(S >= 1 && t >= 1 && t <= S && v >= 1 && v <= S,
          "one_step_pmf: need 1 <= v <= S and 1 <= t <= S");
  if (v > t) return Rational(0);
  Rational sum(0);
  for (int i = 0; i <= v; ++i) {
    Rational term = Rational(binomial(v, i)) * rational_pow(Rational(i, S), t);
    if ((v - i) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return Rational(binomial(S, v)) * sum;
}

template <class Scalar>
TransitionMatrix<Scalar> transition_matrix(int S) {
  require(S >= 1, "transition_matrix: need S >= 1");
  TransitionMatrix<Scalar> m = TransitionMatrix<Scalar>::Zero(S, S);
  // Row t-1 is the occupancy law of t balls in S bins, counted by
  // non-empty bins: adding a ball either lands in one of v occupied bins
  // or opens a new one.
  const Scalar inv_s = Scalar(1) / Scalar(S);
  m(0, 0) = Scalar(1);
  for (int t = 1; t < S; ++t) {
    for (int v = 1; v <= t + 1; ++v) {
      Scalar p(0);
      if (v <= t) p += m(t - 1, v - 1) * Scalar(v) * inv_s;
      if (v >= 2) p += m(t - 1, v - 2) * Scalar(S - v + 1) * inv_s;
      m(t, v - 1) = p;
    }
  }
  return m;
}

template TransitionMatrix<Rational> transition_matrix<Rational>(int);
template TransitionMatrix<double> transition_matrix<double>(int);

template <class Scalar>
std::vector<Scalar> expected_ancestors_curve(int S, int k_max) {
  require(S >= 1, "expected_ancestors: need S >= 1");
  require(k_max >= 2, "expected_ancestors: need k >= 2");
  const TransitionMatrix<Scalar> m = transition_matrix<Scalar>(S);

  // state(t-1) = P(X = t) at the current level; the bottom level has X = S.
  RowVector<Scalar> state = RowVector<Scalar>::Zero(S);
  state(S - 1) = Scalar(1);

  std::vector<Scalar> curve;
  curve.reserve(static_cast<std::size_t>(k_max - 1));
  for (int k = 2; k <= k_max; ++k) {
    Accumulator<Scalar> mean;
    for (int t = 1; t <= S; ++t) mean.add(state(t - 1) * Scalar(t));
    curve.push_back(mean.value());
    if (k == k_max) break;

    RowVector<Scalar> next = RowVector<Scalar>::Zero(S);
    for (int v = 1; v <= S; ++v) {
      Accumulator<Scalar> acc;
      for (int t = v; t <= S; ++t) {
        if (state(t - 1) != Scalar(0)) acc.add(state(t - 1) * m(t - 1, v - 1));
      }
      next(v - 1) = acc.value();
    }
    state = std::move(next);
  }
  return curve;
}

template std::vector<Rational> expected_ancestors_curve<Rational>(int, int);
template std::vector<double> expected_ancestors_curve<double>(int, int);

Rational expected_ancestors_exact(int S, int k) {
  require(k >= 2, "expected_ancestors: need k >= 2");
  return expected_ancestors_curve<Rational>(S, k).back();
}

double expected_ancestors(int S, int k) {
  require(k >= 2, "expected_ancestors: need k >= 2");
  return expected_ancestors_curve<double>(S, k).back();
}

BoundSequence a_sequence(int S, std::size_t n) {
  require(S >= 2, "a_sequence: need S >= 2");
  // With q = 1 - 1/S and g = a - 1/S:  g' = q (1 - q^{gS}).
  const double inv_s = 1.0 / S;
  const double log_q = std::log1p(-inv_s);
  const double q = 1.0 - inv_s;
  BoundSequence seq{S, {}, {}};
  seq.values.reserve(n + 1);
  seq.excess.reserve(n + 1);
  double gap = q;
  for (std::size_t i = 0; i <= n; ++i) {
    seq.excess.push_back(gap);
    seq.values.push_back(i == 0 ? 1.0 : inv_s + gap);
    gap = -q * std::expm1(gap * S * log_q);
  }
  return seq;
}

BoundSequence b_sequence(std::size_t n) {
  BoundSequence seq{std::nullopt, {}, {}};
  seq.values.reserve(n + 1);
  double b = 1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    seq.values.push_back(b);
    b = -std::expm1(-b);
  }
  seq.excess = seq.values;
  return seq;
}

std::size_t a_limit_iterations(int S, double tol, std::size_t cap) {
  require(S >= 2, "a_limit_iterations: need S >= 2");
  require(tol > 0.0, "a_limit_iterations: need tol > 0");
  const double log_q = std::log1p(-1.0 / S);
  const double q = 1.0 - 1.0 / S;
  double gap = q;
  for (std::size_t i = 0; i <= cap; ++i) {
    if (gap < tol) return i;
    gap = -q * std::expm1(gap * S * log_q);
  }
  throw std::runtime_error("a_limit_iterations: no convergence within " + std::to_string(cap) +
                           " iterations");
}

double unchosen_parent_mass(const ProbabilityVector& p, int a) {
  require(a >= 1, "need a >= 1 active children");
  Accumulator<double> acc;
  for (double pj : p.values()) acc.add(std::exp(a * std::log1p(-pj)));
  return acc.value();
}

double nonuniform_one_step_expectation(const ProbabilityVector& p, int a) {
  require(a >= 1, "need a >= 1 active children");
  Accumulator<double> acc;
  for (double pj : p.values()) acc.add(-std::expm1(a * std::log1p(-pj)));
  return acc.value();
}

}  // namespace smcrep
