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

#ifndef EMBODIED_EVAL_H_
#define EMBODIED_EVAL_H_

#include <map>
#include <string>
#include <vector>

#include "embodied/descriptors.h"
#include "embodied/motion.h"
#include "embodied/pointcloud.h"
#include "embodied/reasoning.h"

namespace embodied {

struct GroundTruthTriplet {
  PointMask mask;
  MotionType motion_type = MotionType::kTranslation;
  AxisPrimitive axis_primitive = AxisPrimitive::kHorizontalOutwards;
  AffordanceType affordance_type = AffordanceType::kRotate;
};

// Predictions and ground truth for one task instruction.
struct TaskEvaluation {
  std::string task_id;
  std::vector<TripletPrediction> predictions;
  std::vector<GroundTruthTriplet> ground_truth;
};

enum class MotionConstraint { kNone, kType, kTypeAndDirection };

// |a n b| / |a u b|; two empty masks score 0.
double MaskIou(const PointMask& a, const PointMask& b);

struct MatchResult {
  // Indexed like the input predictions / ground truth.
  std::vector<int> matched_gt;        // -1 for false positives
  std::vector<bool> gt_matched;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

// Greedy one-to-one mask matching. Predictions claim ground truth in
// descending confidence (ties: ascending element id); each takes the
// unclaimed triplet with the highest IoU >= threshold (IoU ties: lowest
// ground-truth index). Under a motion constraint a claimed pair whose motion
// type (and, for kTypeAndDirection, axis primitive) disagrees is a false
// positive and its ground truth a false negative, so constraints can only
// remove true positives.
MatchResult MatchPredictions(const std::vector<TripletPrediction>& preds,
                             const std::vector<GroundTruthTriplet>& gts,
                             double iou_threshold,
                             MotionConstraint constraint);

struct ScoredPrediction {
  double confidence = 0.0;
  bool true_positive = false;
};

struct ApResult {
  double ap = 0.0;
  bool undefined = false;  // no ground truth in the pool
};

// All-point interpolated area under the precision-recall curve. `scored`
// must already be in ranking order.
ApResult AreaUnderPrCurve(const std::vector<ScoredPrediction>& scored,
                          std::size_t num_ground_truth);

// Pools predictions from every task, ranks them by confidence (ties: task id,
// then element id) and integrates the interpolated PR curve.
ApResult AveragePrecision(const std::vector<TaskEvaluation>& tasks,
                          double iou_threshold, MotionConstraint constraint);

// 0.50, 0.55, ..., 0.95.
std::vector<double> ApThresholds();

struct MetricRow {
  double miou = 0.0;
  double ap = 0.0;
  double ap50 = 0.0;
  double ap25 = 0.0;
  double ap25_t = 0.0;
  double ap25_td = 0.0;
  std::size_t num_tasks = 0;
};

struct EvalReport {
  MetricRow overall;
  // AP50 over tasks whose ground truth contains the type.
  std::map<AffordanceType, double> per_type_ap50;
  MetricRow unique;    // tasks with exactly one ground-truth element
  MetricRow multiple;  // tasks with more than one
  std::vector<std::string> warnings;
};

// Task-level mIoU is the IoU of the union of predicted masks against the
// union of ground-truth masks, averaged over tasks.
MetricRow ComputeMetrics(const std::vector<TaskEvaluation>& tasks,
                         std::vector<std::string>* warnings = nullptr);

EvalReport Evaluate(const std::vector<TaskEvaluation>& tasks);

// Fixed-width text rendering of the report.
std::string FormatReportTable(const EvalReport& report);

}  // namespace embodied

#endif  // EMBODIED_EVAL_H_
