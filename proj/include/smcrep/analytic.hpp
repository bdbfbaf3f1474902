#pragma once

// Surviving-ancestor expectations for uniform descendancy diagrams: the
// one-step occupancy law, the absorbing chain on active counts, and the two
// recursive bounding sequences.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "smcrep/rational.hpp"

namespace smcrep {

/// Row t-1 holds the law of the next level's active count given t active
/// nodes; entry (t-1, v-1) = P(v, t, S). Lower triangular, rows sum to 1.
template <class Scalar>
using TransitionMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Parent-selection probabilities for one level (one entry per node).
class ProbabilityVector {
 public:
  /// Throws std::domain_error unless entries are >= 0 and sum to 1 (1e-12).
  explicit ProbabilityVector(Eigen::VectorXd p);

  static ProbabilityVector uniform(std::size_t size);
  /// Probabilities proportional to (ratio, 1, 1, ..., 1).
  static ProbabilityVector spike(std::size_t size, double ratio);

  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
  double operator[](std::size_t j) const { return p_[static_cast<Eigen::Index>(j)]; }
  const Eigen::VectorXd& values() const noexcept { return p_; }

 private:
  Eigen::VectorXd p_;
};

/// Values of a_{S,i} (size given) or b_i (size absent), indexed from 0.
///
/// `excess` holds value - limit (1/S for the a-sequence, 0 for b) computed
/// directly, so it stays strictly decreasing long after `values` has
/// rounded onto the limit.
struct BoundSequence {
  std::optional<int> size;
  std::vector<double> values;
  std::vector<double> excess;

  double operator[](std::size_t i) const { return values.at(i); }
  std::size_t length() const noexcept { return values.size(); }
};

/// E[active parents | t active children] = S - S(1-1/S)^t, exactly.
Rational one_step_expectation(int t, int S);

/// P(v, t, S) by the inclusion-exclusion formula, exactly. Zero when v > t.
Rational one_step_pmf(int v, int t, int S);

/// Absorbing chain on active counts. Built with the all-positive occupancy
/// recurrence, so the double instantiation carries no cancellation error.
template <class Scalar>
TransitionMatrix<Scalar> transition_matrix(int S);

/// A(S, k) for every k in [2, k_max]; element 0 is A(S, 2) = S.
/// Iterates the row vector through the chain (k - 2 products).
template <class Scalar>
std::vector<Scalar> expected_ancestors_curve(int S, int k_max);

/// Exact A(S, k). Practical up to roughly S = k = 60.
Rational expected_ancestors_exact(int S, int k);

/// Double-precision A(S, k) with compensated summation, for any size.
double expected_ancestors(int S, int k);

/// a_{S,0..n}: a_0 = 1, a_{i+1} = 1 - (1 - 1/S)^{a_i S}.
BoundSequence a_sequence(int S, std::size_t n);

/// b_0..b_n: b_0 = 1, b_{i+1} = 1 - e^{-b_i}.
BoundSequence b_sequence(std::size_t n);

/// Smallest i with a_{S,i} - 1/S < tol.
/// Throws std::runtime_error if `cap` iterations are exceeded.
std::size_t a_limit_iterations(int S, double tol, std::size_t cap = 10'000'000);

/// sum_j (1 - (1 - p_j)^a): expected number of distinct parents chosen by
/// `a` children drawing i.i.d. from p.
double nonuniform_one_step_expectation(const ProbabilityVector& p, int a);

/// sum_j (1 - p_j)^a, the expected number of unchosen parents.
double unchosen_parent_mass(const ProbabilityVector& p, int a);

}  // namespace smcrep
