#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace peg {

// Binary report/signal/vote symbol; only 0 and 1 are meaningful.
using Label = std::uint8_t;

using Matrix2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using CountMatrix2 = Eigen::Matrix<std::int64_t, 2, 2>;
// Rows = agents, columns = tasks.
using LabelMatrix = Eigen::Matrix<Label, Eigen::Dynamic, Eigen::Dynamic>;
using LabelVector = Eigen::Matrix<Label, Eigen::Dynamic, 1>;

// Single normalization tolerance shared by every simplex/distribution check.
inline constexpr double kNormTol = 1e-12;
// Multiplicative-weights policies are kept strictly interior at this floor.
inline constexpr double kPolicyFloor = 1e-9;

enum class ErrorCode {
  NotNormalized,
  NegativeEntry,
  InvalidLabel,
  SupportViolation,
  BatchTooSmall,
  IndexOutOfRange,
  TooFewAgents,
  SubsetTooSmall,
  SubsetTooLarge,
  ArityMismatch,
  SameAgent,
  ZeroSupport,
  InvalidSchedule,
  EmptyBatch,
  EmptySequence,
  LengthMismatch,
  UninformativePeer,
  InvalidSplit,
  ParseError,
  ValidationError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace peg
