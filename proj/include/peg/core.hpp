#pragma once

#include <array>

#include "peg/common.hpp"

namespace peg {

// Probability vector on the simplex: entries in [0, 1] summing to 1 within
// kNormTol. Construction validates; instances are immutable values.
class ProbVector {
 public:
  explicit ProbVector(Vector entries);
  ProbVector(std::initializer_list<double> entries)
      : ProbVector(Vector(Eigen::Map<const Vector>(entries.begin(),
                                                   static_cast<Eigen::Index>(entries.size())))) {}

  static ProbVector uniform(Eigen::Index n);
  static ProbVector vertex(Eigen::Index n, Eigen::Index index);

  const Vector& vec() const { return v_; }
  double operator[](Eigen::Index i) const { return v_(i); }
  Eigen::Index size() const { return v_.size(); }

  bool operator==(const ProbVector& other) const { return v_ == other.v_; }

 private:
  Vector v_;
};

// Free-function form of the checked construction.
ProbVector validate_prob_vector(const Vector& v);

// Sum_i p_i ln(p_i / q_i) with 0 ln(0/q) = 0. Throws SupportViolation when
// p puts mass where q has none.
double kl_divergence(const ProbVector& p, const ProbVector& q);

// L1 distance between two probability vectors of equal length.
double l1_distance(const ProbVector& p, const ProbVector& q);

// Row-stochastic 2x2 report-given-signal matrix. Row s is the distribution
// over reports conditioned on private signal s.
class Strategy {
 public:
  explicit Strategy(const Matrix2& m);

  static Strategy truthful() { return Strategy(Matrix2::Identity()); }
  static Strategy flip();
  static Strategy constant(Label report);

  const Matrix2& matrix() const { return m_; }
  ProbVector row(Label signal) const;

  // Right-composition with a garbling channel: reports pass through g.
  Strategy composed_with(const Strategy& g) const;

 private:
  Matrix2 m_;
};

// Conditional policy: one probability vector per binary condition label
// (signal for discriminators, target label for the generator).
class PolicyPoint {
 public:
  PolicyPoint(ProbVector given_zero, ProbVector given_one);

  static PolicyPoint uniform_binary();
  static PolicyPoint from_strategy(const Strategy& s);

  const ProbVector& given(Label condition) const;
  void set(Label condition, ProbVector p);

  // Requires both conditionals to be binary.
  Strategy to_strategy() const;

  Eigen::Index outputs() const { return cond_[0].size(); }

 private:
  std::array<ProbVector, 2> cond_;
};

// 2x2 count matrix of co-reports by an agent pair over a task subset.
// Entry (c, c') counts tasks where the pair reported (c, c').
class CoReportCounts {
 public:
  explicit CoReportCounts(const CountMatrix2& counts);

  const CountMatrix2& counts() const { return c_; }
  std::int64_t total() const { return c_.sum(); }

 private:
  CountMatrix2 c_;
};

// 2x2 joint distribution over a report/signal pair: nonnegative entries
// summing to 1 within kNormTol.
class JointDist {
 public:
  explicit JointDist(const Matrix2& probs);

  const Matrix2& matrix() const { return p_; }
  double operator()(Label a, Label b) const { return p_(a, b); }

 private:
  Matrix2 p_;
};

}  // namespace peg
