#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "retina/cascade.hpp"
#include "retina/image.hpp"
#include "retina/synthgen.hpp"

namespace retina {

/// Square count matrix with the prediction on rows and the truth on columns.
struct ConfusionMatrix {
    int n = 0;
    std::vector<long> cells;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int classes);

    /// 1-based access: at(pred, truth).
    long& at(int pred, int truth) {
        return cells[static_cast<std::size_t>(pred - 1) * n + (truth - 1)];
    }
    long at(int pred, int truth) const {
        return cells[static_cast<std::size_t>(pred - 1) * n + (truth - 1)];
    }
    long total() const;
    long trace() const;
};

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& truths,
                          int n);

struct Rates {
    double se = 0.0;
    double sp = 0.0;
    double acc = 0.0;
};

/// One-vs-rest rates for target_class: SE = target recall, SP = non-target
/// recall, ACC = (correct target + correct non-target) / total.
Rates se_sp_acc(const ConfusionMatrix& cm, int target_class);

/// Plain multiclass accuracy, trace / total.
double accuracy(const ConfusionMatrix& cm);

/// Chance-corrected agreement (p_o - p_e) / (1 - p_e).
double kappa(const ConfusionMatrix& cm);

struct RocCurve {
    std::vector<std::pair<double, double>> points; // (FPR, TPR), (0,0) .. (1,1)
    double auc = 0.0;
};

/// Threshold sweep over descending scores, ties grouped, trapezoidal AUC.
/// labels are 0/1 with 1 the positive class.
RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels);

struct GroupMetrics {
    std::string group;              // "1".."k" or "total"
    std::array<Rates, 4> per_class; // one-vs-rest per grade
    double accuracy = 0.0;          // multiclass accuracy of the group
};

struct CvReport {
    std::vector<GroupMetrics> groups; // one per fold, then the pooled "total"
    ConfusionMatrix pooled;           // all test predictions, 4 classes
    double kappa_value = 0.0;
    Rates two_class;                  // grades {2,3,4} merged, target = merged class
    std::vector<int> fold_of;         // fold index per dataset position
    std::vector<int> predictions;     // predicted grade per dataset position
};

/// Deterministic stratified fold assignment; every class is dealt round-robin
/// after a seeded shuffle.
std::vector<int> assign_folds(const std::vector<LabeledImage>& dataset, int folds,
                              std::uint64_t master_seed);

/// Group cross-validation: per fold, trains a cascade on the other folds and
/// grades the held-out fold. Every image is tested exactly once.
CvReport threefold_cv(const std::vector<LabeledImage>& dataset, const PipelineConfig& cfg);

struct NoiseRow {
    std::string name;           // "none" or the noise kind
    std::array<double, 4> se{}; // pooled per-class sensitivity
};

struct NoiseReport {
    std::vector<NoiseRow> rows;    // noise-free row first
    std::vector<CvReport> reports; // parallel to rows
};

/// Corrupts every image (training and testing alike) with each spec and
/// reruns the cross-validation. Per-image noise seeds derive from
/// cfg.master_seed, so the harness is reproducible end to end.
NoiseReport noise_robustness(const std::vector<LabeledImage>& dataset, const PipelineConfig& cfg,
                             const std::vector<NoiseSpec>& specs);

struct RocProtocolResult {
    std::array<RocCurve, 3> curves;       // one per stage
    std::array<int, 3> optimal_threshold; // the classifier each curve scores with
};

/// 2:1 stratified split; per stage, scores the held-out images that reach the
/// stage with the positive-class activation of its optimal-threshold
/// classifier.
RocProtocolResult roc_protocol(const std::vector<LabeledImage>& dataset,
                               const PipelineConfig& cfg);

/// CSV "group,class,se,sp,acc" (acc repeats the group's multiclass accuracy).
void write_cv_csv(const std::string& path, const CvReport& report);
/// CSV "fpr,tpr".
void write_roc_csv(const std::string& path, const RocCurve& curve);
/// CSV "noise,class,se".
void write_noise_csv(const std::string& path, const NoiseReport& report);

} // namespace retina
