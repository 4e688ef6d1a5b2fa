// Copyright 2026 The Embodied Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embodied/eval.h"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace embodied {

double MaskIou(const PointMask& a, const PointMask& b) {
  const std::size_t inter = IntersectionSize(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

bool SatisfiesConstraint(const TripletPrediction& p,
                         const GroundTruthTriplet& g,
                         MotionConstraint constraint) {
  switch (constraint) {
    case MotionConstraint::kNone:
      return true;
    case MotionConstraint::kType:
      return p.motion_type == g.motion_type;
    case MotionConstraint::kTypeAndDirection:
      return p.motion_type == g.motion_type &&
             p.axis_primitive == g.axis_primitive;
  }
  return false;
}

}  // namespace

MatchResult MatchPredictions(const std::vector<TripletPrediction>& preds,
                             const std::vector<GroundTruthTriplet>& gts,
                             double iou_threshold,
                             MotionConstraint constraint) {
  MatchResult result;
  result.matched_gt.assign(preds.size(), -1);
  result.gt_matched.assign(gts.size(), false);

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (preds[a].confidence != preds[b].confidence) {
      return preds[a].confidence > preds[b].confidence;
    }
    return preds[a].element_id < preds[b].element_id;
  });

  for (const std::size_t p : order) {
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (result.gt_matched[g]) continue;
      const double iou = MaskIou(preds[p].mask, gts[g].mask);
      if (iou >= iou_threshold && iou > best_iou) {
        best = static_cast<int>(g);
        best_iou = iou;
      }
    }
    if (best < 0) {
      ++result.false_positives;
      continue;
    }
    // The ground truth is consumed either way; a motion mismatch only
    // demotes the pair.
    result.gt_matched[static_cast<std::size_t>(best)] = true;
    if (SatisfiesConstraint(preds[p], gts[static_cast<std::size_t>(best)],
                            constraint)) {
      result.matched_gt[p] = best;
      ++result.true_positives;
    } else {
      ++result.false_positives;
    }
  }
  result.gt_matched.assign(gts.size(), false);
  for (const int g : result.matched_gt) {
    if (g >= 0) result.gt_matched[static_cast<std::size_t>(g)] = true;
  }
  result.false_negatives =
      static_cast<int>(gts.size()) - result.true_positives;
  return result;
}

ApResult AreaUnderPrCurve(const std::vector<ScoredPrediction>& scored,
                          std::size_t num_ground_truth) {
  if (num_ground_truth == 0) return {0.0, true};
  std::vector<double> precision(scored.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    if (scored[k].true_positive) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  // Precision envelope: best precision at any deeper rank.
  for (std::size_t k = scored.size(); k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  // Each true positive adds 1/num_gt of recall at the interpolated precision.
  double area = 0.0;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    if (scored[k].true_positive) area += precision[k];
  }
  return {area / static_cast<double>(num_ground_truth), false};
}

ApResult AveragePrecision(const std::vector<TaskEvaluation>& tasks,
                          double iou_threshold, MotionConstraint constraint) {
  struct Ranked {
    double confidence;
    const std::string* task_id;
    int element_id;
    bool tp;
  };
  std::vector<Ranked> ranked;
  std::size_t num_gt = 0;
  for (const TaskEvaluation& task : tasks) {
    const MatchResult match = MatchPredictions(
        task.predictions, task.ground_truth, iou_threshold, constraint);
    for (std::size_t p = 0; p < task.predictions.size(); ++p) {
      ranked.push_back({task.predictions[p].confidence, &task.task_id,
                        task.predictions[p].element_id,
                        match.matched_gt[p] >= 0});
    }
    num_gt += task.ground_truth.size();
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::make_tuple(-a.confidence, *a.task_id, a.element_id, !a.tp) <
           std::make_tuple(-b.confidence, *b.task_id, b.element_id, !b.tp);
  });
  std::vector<ScoredPrediction> scored;
  scored.reserve(ranked.size());
  for (const Ranked& r : ranked) scored.push_back({r.confidence, r.tp});
  return AreaUnderPrCurve(scored, num_gt);
}

std::vector<double> ApThresholds() {
  std::vector<double> thresholds;
  for (int k = 50; k <= 95; k += 5) thresholds.push_back(k / 100.0);
  return thresholds;
}

MetricRow ComputeMetrics(const std::vector<TaskEvaluation>& tasks,
                         std::vector<std::string>* warnings) {
  MetricRow row;
  row.num_tasks = tasks.size();
  if (tasks.empty()) return row;

  double iou_sum = 0.0;
  for (const TaskEvaluation& task : tasks) {
    PointMask predicted, truth;
    for (const auto& p : task.predictions) predicted = MaskUnion(predicted, p.mask);
    for (const auto& g : task.ground_truth) truth = MaskUnion(truth, g.mask);
    iou_sum += MaskIou(predicted, truth);
  }
  row.miou = iou_sum / static_cast<double>(tasks.size());

  bool undefined = false;
  auto ap_at = [&](double threshold, MotionConstraint constraint) {
    const ApResult r = AveragePrecision(tasks, threshold, constraint);
    undefined = undefined || r.undefined;
    return r.ap;
  };
  double ap_sum = 0.0;
  const std::vector<double> thresholds = ApThresholds();
  for (const double t : thresholds) ap_sum += ap_at(t, MotionConstraint::kNone);
  row.ap = ap_sum / static_cast<double>(thresholds.size());
  row.ap50 = ap_at(0.50, MotionConstraint::kNone);
  row.ap25 = ap_at(0.25, MotionConstraint::kNone);
  row.ap25_t = ap_at(0.25, MotionConstraint::kType);
  row.ap25_td = ap_at(0.25, MotionConstraint::kTypeAndDirection);
  if (undefined && warnings != nullptr) {
    warnings->push_back(fmt::format(
        "AP undefined over {} task(s) without ground truth; reported as 0",
        tasks.size()));
  }
  return row;
}

EvalReport Evaluate(const std::vector<TaskEvaluation>& tasks) {
  EvalReport report;
  report.overall = ComputeMetrics(tasks, &report.warnings);

  std::map<AffordanceType, std::vector<TaskEvaluation>> by_type;
  std::vector<TaskEvaluation> unique, multiple;
  for (const TaskEvaluation& task : tasks) {
    std::vector<AffordanceType> types;
    for (const auto& g : task.ground_truth) {
      if (std::find(types.begin(), types.end(), g.affordance_type) ==
          types.end()) {
        types.push_back(g.affordance_type);
      }
    }
    for (const AffordanceType t : types) by_type[t].push_back(task);
    if (task.ground_truth.size() == 1) unique.push_back(task);
    if (task.ground_truth.size() > 1) multiple.push_back(task);
  }
  for (const auto& [type, subset] : by_type) {
    report.per_type_ap50[type] =
        AveragePrecision(subset, 0.50, MotionConstraint::kNone).ap;
  }
  report.unique = ComputeMetrics(unique);
  report.multiple = ComputeMetrics(multiple);
  return report;
}

std::string FormatReportTable(const EvalReport& report) {
  std::string out = fmt::format("{:<10}{:>7}{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}\n",
                                "subset", "tasks", "mIoU", "AP", "AP50",
                                "AP25", "+T", "+TD");
  auto row = [&](const char* name, const MetricRow& m) {
    out += fmt::format(
        "{:<10}{:>7}{:>8.1f}{:>8.1f}{:>8.1f}{:>8.1f}{:>8.1f}{:>8.1f}\n", name,
        m.num_tasks, 100 * m.miou, 100 * m.ap, 100 * m.ap50, 100 * m.ap25,
        100 * m.ap25_t, 100 * m.ap25_td);
  };
  row("overall", report.overall);
  row("unique", report.unique);
  row("multiple", report.multiple);
  if (!report.per_type_ap50.empty()) {
    out += fmt::format("\n{:<14}{:>8}\n", "type", "AP50");
    for (const auto& [type, ap50] : report.per_type_ap50) {
      out += fmt::format("{:<14}{:>8.1f}\n", ToString(type), 100 * ap50);
    }
  }
  for (const std::string& w : report.warnings) {
    out += fmt::format("warning: {}\n", w);
  }
  return out;
}

}  // namespace embodied
