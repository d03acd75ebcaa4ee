#include "peg/core.hpp"

#include <cmath>

namespace peg {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::BatchTooSmall: return "BatchTooSmall";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooFewAgents: return "TooFewAgents";
    case ErrorCode::SubsetTooSmall: return "SubsetTooSmall";
    case ErrorCode::SubsetTooLarge: return "SubsetTooLarge";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SameAgent: return "SameAgent";
    case ErrorCode::ZeroSupport: return "ZeroSupport";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UninformativePeer: return "UninformativePeer";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

ProbVector::ProbVector(Vector entries) : v_(std::move(entries)) {
  require(v_.size() >= 2, ErrorCode::LengthMismatch,
          "probability vector needs at least 2 entries");
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    require(v_(i) >= 0.0, ErrorCode::NegativeEntry,
            "entry " + std::to_string(i) + " is negative");
  }
  require(std::abs(v_.sum() - 1.0) <= kNormTol, ErrorCode::NotNormalized,
          "entries sum to " + std::to_string(v_.sum()));
}

ProbVector ProbVector::uniform(Eigen::Index n) {
  return ProbVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::vertex(Eigen::Index n, Eigen::Index index) {
  Vector v = Vector::Zero(n);
  v(index) = 1.0;
  return ProbVector(std::move(v));
}

ProbVector validate_prob_vector(const Vector& v) { return ProbVector(v); }

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  require(p.size() == q.size(), ErrorCode::LengthMismatch,
          "kl_divergence arguments differ in length");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    require(q[i] > 0.0, ErrorCode::SupportViolation,
            "p has mass at index " + std::to_string(i) + " where q is zero");
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double l1_distance(const ProbVector& p, const ProbVector& q) {
  require(p.size() == q.size(), ErrorCode::LengthMismatch,
          "l1_distance arguments differ in length");
  return (p.vec() - q.vec()).lpNorm<1>();
}

Strategy::Strategy(const Matrix2& m) : m_(m) {
  for (int r = 0; r < 2; ++r) {
    validate_prob_vector(m_.row(r).transpose());
  }
}

Strategy Strategy::flip() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return Strategy(m);
}

Strategy Strategy::constant(Label report) {
  require(report <= 1, ErrorCode::InvalidLabel, "report label must be 0 or 1");
  Matrix2 m = Matrix2::Zero();
  m(0, report) = 1.0;
  m(1, report) = 1.0;
  return Strategy(m);
}

ProbVector Strategy::row(Label signal) const {
  require(signal <= 1, ErrorCode::InvalidLabel, "signal label must be 0 or 1");
  return ProbVector(m_.row(signal).transpose());
}

Strategy Strategy::composed_with(const Strategy& g) const {
  return Strategy(m_ * g.matrix());
}

PolicyPoint::PolicyPoint(ProbVector given_zero, ProbVector given_one)
    : cond_{std::move(given_zero), std::move(given_one)} {
  require(cond_[0].size() == cond_[1].size(), ErrorCode::LengthMismatch,
          "conditionals differ in length");
}

PolicyPoint PolicyPoint::uniform_binary() {
  return PolicyPoint(ProbVector::uniform(2), ProbVector::uniform(2));
}

PolicyPoint PolicyPoint::from_strategy(const Strategy& s) {
  return PolicyPoint(s.row(0), s.row(1));
}

const ProbVector& PolicyPoint::given(Label condition) const {
  require(condition <= 1, ErrorCode::InvalidLabel,
          "condition label must be 0 or 1");
  return cond_[condition];
}

void PolicyPoint::set(Label condition, ProbVector p) {
  require(condition <= 1, ErrorCode::InvalidLabel,
          "condition label must be 0 or 1");
  require(p.size() == cond_[condition].size(), ErrorCode::LengthMismatch,
          "conditional length changed");
  cond_[condition] = std::move(p);
}

Strategy PolicyPoint::to_strategy() const {
  require(outputs() == 2, ErrorCode::LengthMismatch,
          "only binary conditionals convert to a Strategy");
  Matrix2 m;
  m << cond_[0][0], cond_[0][1], cond_[1][0], cond_[1][1];
  return Strategy(m);
}

CoReportCounts::CoReportCounts(const CountMatrix2& counts) : c_(counts) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      require(c_(a, b) >= 0, ErrorCode::NegativeEntry,
              "co-report count is negative");
}

JointDist::JointDist(const Matrix2& probs) : p_(probs) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      require(p_(a, b) >= 0.0, ErrorCode::NegativeEntry,
              "joint probability is negative");
  require(std::abs(p_.sum() - 1.0) <= kNormTol, ErrorCode::NotNormalized,
          "joint probabilities sum to " + std::to_string(p_.sum()));
}

}  // namespace peg
