#include "peg/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace peg {

TaskSplit::TaskSplit(std::vector<int> subset_one, std::vector<int> subset_two)
    : one_(std::move(subset_one)), two_(std::move(subset_two)) {
  require(one_.size() >= 2 && two_.size() >= 2, ErrorCode::SubsetTooSmall,
          "each subset needs at least 2 tasks");
  const int k = task_count();
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (const auto* subset : {&one_, &two_}) {
    for (int idx : *subset) {
      require(idx >= 0 && idx < k, ErrorCode::InvalidSplit,
              "task index " + std::to_string(idx) + " outside 0.." +
                  std::to_string(k - 1));
      require(!seen[static_cast<std::size_t>(idx)], ErrorCode::InvalidSplit,
              "task index " + std::to_string(idx) + " appears twice");
      seen[static_cast<std::size_t>(idx)] = true;
    }
  }
}

TaskSplit split_tasks(int task_count, SplitPolicy policy, Rng* rng) {
  require(task_count >= 4, ErrorCode::BatchTooSmall,
          "need at least 4 tasks, got " + std::to_string(task_count));
  const int first = (task_count + 1) / 2;
  if (policy == SplitPolicy::Half) {
    std::vector<int> one(static_cast<std::size_t>(first));
    std::vector<int> two(static_cast<std::size_t>(task_count - first));
    std::iota(one.begin(), one.end(), 0);
    std::iota(two.begin(), two.end(), first);
    return TaskSplit(std::move(one), std::move(two));
  }
  require(rng != nullptr, ErrorCode::InvalidSplit,
          "random split needs a seeded stream");
  std::vector<int> perm(static_cast<std::size_t>(task_count));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = task_count - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng->below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<int> one(perm.begin(), perm.begin() + first);
  std::vector<int> two(perm.begin() + first, perm.end());
  std::sort(one.begin(), one.end());
  std::sort(two.begin(), two.end());
  return TaskSplit(std::move(one), std::move(two));
}

CoReportCounts co_report_matrix(const LabelVector& reports_i,
                                const LabelVector& reports_j,
                                const std::vector<int>& subset) {
  require(reports_i.size() == reports_j.size(), ErrorCode::LengthMismatch,
          "report vectors differ in length");
  CountMatrix2 counts = CountMatrix2::Zero();
  for (int k : subset) {
    require(k >= 0 && k < reports_i.size(), ErrorCode::IndexOutOfRange,
            "task index " + std::to_string(k) + " outside the report vectors");
    const Label a = reports_i(k);
    const Label b = reports_j(k);
    require(a <= 1 && b <= 1, ErrorCode::InvalidLabel,
            "reports must be 0 or 1");
    counts(a, b) += 1;
  }
  return CoReportCounts(counts);
}

std::int64_t det2(const CoReportCounts& m) {
  const auto& c = m.counts();
  return c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
}

double det2(const JointDist& u) { return det2(u.matrix()); }

double dmi(const JointDist& u) { return std::abs(det2(u)); }

double payment(const LabelMatrix& reports, const TaskSplit& split, int agent) {
  const int n = static_cast<int>(reports.rows());
  require(n >= 2, ErrorCode::TooFewAgents, "payments need at least 2 agents");
  require(agent >= 0 && agent < n, ErrorCode::IndexOutOfRange,
          "agent index out of range");
  require(reports.cols() >= split.task_count(), ErrorCode::IndexOutOfRange,
          "reports cover fewer tasks than the split");
  const LabelVector own = reports.row(agent).transpose();
  std::int64_t total = 0;
  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    const LabelVector other = reports.row(j).transpose();
    const std::int64_t d1 = det2(co_report_matrix(own, other, split.one()));
    const std::int64_t d2 = det2(co_report_matrix(own, other, split.two()));
    total += d1 * d2;
  }
  return static_cast<double>(total);
}

PaymentVector payments_all(const LabelMatrix& reports, const TaskSplit& split) {
  PaymentVector out(static_cast<std::size_t>(reports.rows()));
  for (int i = 0; i < reports.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = payment(reports, split, i);
  }
  return out;
}

std::int64_t pair_count_constant(int subset_size) {
  require(subset_size >= 2, ErrorCode::SubsetTooSmall,
          "pair count needs subset size >= 2");
  return static_cast<std::int64_t>(subset_size) * (subset_size - 1);
}

double normalized_payment(double raw_payment, const TaskSplit& split,
                          int agent_count) {
  require(agent_count >= 2, ErrorCode::TooFewAgents,
          "normalization needs at least 2 agents");
  const double a1 =
      static_cast<double>(pair_count_constant(static_cast<int>(split.one().size())));
  const double a2 =
      static_cast<double>(pair_count_constant(static_cast<int>(split.two().size())));
  return raw_payment / (a1 * a2 * static_cast<double>(agent_count - 1));
}

}  // namespace peg
