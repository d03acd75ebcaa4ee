#pragma once

#include <vector>

#include "peg/core.hpp"
#include "peg/rng.hpp"

namespace peg {

enum class SplitPolicy { Half, Random };

// Disjoint partition of task indices {0..K-1} into two subsets, each with at
// least 2 elements.
class TaskSplit {
 public:
  TaskSplit(std::vector<int> subset_one, std::vector<int> subset_two);

  const std::vector<int>& one() const { return one_; }
  const std::vector<int>& two() const { return two_; }
  int task_count() const { return static_cast<int>(one_.size() + two_.size()); }

 private:
  std::vector<int> one_;
  std::vector<int> two_;
};

using PaymentVector = std::vector<double>;

// Half policy: first ceil(K/2) indices vs the rest. Random policy: uniformly
// random balanced partition drawn from rng (required for Random).
TaskSplit split_tasks(int task_count, SplitPolicy policy = SplitPolicy::Half,
                      Rng* rng = nullptr);

// Count matrix over `subset`: entry (c, c') = tasks where i reported c and
// j reported c'.
CoReportCounts co_report_matrix(const LabelVector& reports_i,
                                const LabelVector& reports_j,
                                const std::vector<int>& subset);

std::int64_t det2(const CoReportCounts& m);
double det2(const JointDist& u);
inline double det2(const Matrix2& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Determinant mutual information |det U|, in [0, 0.25] for a joint
// distribution.
double dmi(const JointDist& u);

// Payment to agent i: sum over peers j of det(M1^ij) * det(M2^ij).
// Realizations may be negative; only the expectation is sign-controlled.
double payment(const LabelMatrix& reports, const TaskSplit& split, int agent);

PaymentVector payments_all(const LabelMatrix& reports, const TaskSplit& split);

// a_l = C(subset_size, 2) * 2! = subset_size * (subset_size - 1), the
// pair-count constant scaling E[det M] = a_l * det(U).
std::int64_t pair_count_constant(int subset_size);

// Raw payments scale with K^2; this rescales to a per-pair-averaged det(U)^2
// estimate comparable across batch sizes.
double normalized_payment(double raw_payment, const TaskSplit& split,
                          int agent_count);

}  // namespace peg
