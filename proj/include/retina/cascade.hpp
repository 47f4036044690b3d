#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "retina/features.hpp"
#include "retina/image.hpp"
#include "retina/nnet.hpp"
#include "retina/synthgen.hpp"
#include "retina/wavelet.hpp"

namespace retina {

/// Severity label: 1 clear, 2 mild, 3 moderate, 4 severe.
using Grade = int;

/// Where classifier inputs come from: the generalized kernel's single-level
/// combined detail map, or the layer-3 combined detail of a classic 3-level
/// Haar decomposition (side/8 grid).
enum class FeatureMode { improved, haar3 };

struct SweepPoint {
    int threshold = 0;
    double mse = 0.0;
};

/// MSE-per-threshold curve, thresholds strictly increasing.
using SweepResult = std::vector<SweepPoint>;

/// Everything the pipeline needs to go from a square image to a decision.
struct PipelineConfig {
    int kernel_half_width = 3;
    FeatureMode mode = FeatureMode::improved;
    int rings = kRingCount;
    int threshold_lo = 1;
    int threshold_hi = 40;
    int min_component = 10;
    int median_window = 3; // applied before decomposition; 0 or 1 disables
    int hidden = 10;
    int sweep_per_class = 100; // sweep samples at most this many images per class
    int folds = 3;
    TrainConfig train;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// Per-image lazy store: the detail map is computed once, scaled feature
/// vectors are memoized per threshold.
class ImageFeatures {
public:
    ImageFeatures(const GrayImage& img, const PipelineConfig& cfg);

    /// Ring densities (counts / ring pixel areas) at the given threshold.
    const std::vector<double>& at(int threshold);
    /// Raw ring counts at the given threshold (not memoized).
    FeatureVector counts(int threshold) const;

    const DetailMap& detail() const { return map_; }
    const std::vector<double>& areas() const { return areas_; }

private:
    DetailMap map_;
    std::vector<double> areas_;
    int rings_ = kRingCount;
    int min_component_ = 10;
    std::map<int, std::vector<double>> memo_;
};

/// Dataset-wide feature store shared by sweeps, stage training, and
/// cross-validation folds so each detail map is computed exactly once.
class FeatureCache {
public:
    FeatureCache(const std::vector<LabeledImage>& data, const PipelineConfig& cfg);

    std::size_t size() const { return slots_.size(); }
    Grade label(std::size_t index) const;
    ImageFeatures& image(std::size_t index);
    const std::vector<double>& features(std::size_t index, int threshold);

private:
    const std::vector<LabeledImage>* data_;
    PipelineConfig cfg_;
    std::vector<std::unique_ptr<ImageFeatures>> slots_;
};

struct StageClassifier {
    int threshold = 0;
    MLP mlp;
};

/// One cascade stage: three 2-output classifiers voting at their own
/// binarization thresholds. Output index 0 is the stage's positive class.
struct StageModel {
    int stage_index = 0;
    std::vector<StageClassifier> classifiers;
};

struct CascadeModel {
    int format_version = 1;
    int kernel_half_width = 3;
    FeatureMode mode = FeatureMode::improved;
    std::vector<double> feature_scaling; // ring pixel areas of the training grid
    std::vector<StageModel> stages;      // ordered stage 1..3
};

struct TrainReport {
    std::array<SweepResult, 3> sweeps;          // per stage, adjacent-pair sweep
    std::array<std::array<int, 3>, 3> selected; // per stage, thresholds ascending
    std::array<int, 3> best_threshold{};        // per stage, smallest-MSE threshold
};

struct TrainedCascade {
    CascadeModel model;
    TrainReport report;
};

/// Trains one fresh 2-output classifier per integer threshold on the
/// class_a-vs-class_b subset (at most cfg.sweep_per_class images per class,
/// sampled deterministically) and records each final training MSE.
SweepResult sweep_thresholds(FeatureCache& cache, const std::vector<std::size_t>& indices,
                             Grade class_a, Grade class_b, const PipelineConfig& cfg,
                             std::uint64_t seed_tag);
SweepResult sweep_thresholds(const std::vector<LabeledImage>& pair_dataset, Grade class_a,
                             Grade class_b, const PipelineConfig& cfg);

/// Thresholds of the three smallest MSEs, returned in ascending threshold
/// order; MSE ties break toward the smaller threshold.
std::array<int, 3> select_top3(const SweepResult& sweep);

/// Trains stage stage_index (1..3): keeps images of grade >= stage_index,
/// relabels grade == stage_index as positive, and fits one classifier per
/// given threshold on its own features.
StageModel train_stage(FeatureCache& cache, const std::vector<std::size_t>& indices,
                       int stage_index, const std::array<int, 3>& thresholds,
                       const PipelineConfig& cfg);
StageModel train_stage(const std::vector<LabeledImage>& dataset, int stage_index,
                       const std::array<int, 3>& thresholds, const PipelineConfig& cfg);

/// Individual positive/negative decisions of the stage's three classifiers.
std::array<bool, 3> classifier_votes(const StageModel& stage, ImageFeatures& features);
/// Majority of the three classifier votes.
bool vote(const StageModel& stage, ImageFeatures& features);

/// Walks the stages in order; the first positive vote decides the grade,
/// and three negatives mean grade 4.
Grade grade(const CascadeModel& model, ImageFeatures& features);
Grade grade(const CascadeModel& model, const GrayImage& img);

struct StageDecision {
    int stage_index = 0;
    std::array<bool, 3> votes{};
    bool positive = false;
};

/// Grade plus the per-stage votes of every consulted stage.
struct GradeTrace {
    Grade value = 0;
    std::vector<StageDecision> stages;
};
GradeTrace grade_trace(const CascadeModel& model, ImageFeatures& features);
GradeTrace grade_trace(const CascadeModel& model, const GrayImage& img);

/// Full training: per stage, sweep the adjacent class pair, select the top-3
/// thresholds, then train the stage on its one-vs-rest split.
TrainedCascade train_cascade(FeatureCache& cache, const std::vector<std::size_t>& indices,
                             const PipelineConfig& cfg);
TrainedCascade train_cascade(const std::vector<LabeledImage>& dataset,
                             const PipelineConfig& cfg);

/// The pipeline config a saved or trained model implies for inference.
/// Fields outside the model file (median window, training knobs) keep their
/// defaults.
PipelineConfig config_for(const CascadeModel& model);

/// Flat four-class voting baseline: one sweep with 4-output classifiers,
/// top-3 thresholds, majority vote with ties broken toward the most severe
/// grade among the tied winners.
struct FourClassModel {
    int kernel_half_width = 3;
    FeatureMode mode = FeatureMode::improved;
    std::vector<double> feature_scaling;
    std::array<int, 3> thresholds{};
    std::vector<MLP> classifiers; // one 4-output net per threshold
};

struct TrainedFourClass {
    FourClassModel model;
    SweepResult sweep;
    std::array<int, 3> selected{};
};

TrainedFourClass baseline_fourclass(FeatureCache& cache, const std::vector<std::size_t>& indices,
                                    const PipelineConfig& cfg);
TrainedFourClass baseline_fourclass(const std::vector<LabeledImage>& dataset,
                                    const PipelineConfig& cfg);

/// Majority of three 4-class votes; any tie resolves to the most severe
/// grade among the tied winners.
Grade fourclass_vote(const std::array<Grade, 3>& votes);
Grade fourclass_grade(const FourClassModel& model, ImageFeatures& features);

/// Same cascade trained on classic 3-level Haar layer-3 features. The result
/// stays in memory; the model file format does not carry this variant.
TrainedCascade baseline_original_haar(const std::vector<LabeledImage>& dataset,
                                      const PipelineConfig& cfg);

/// Versioned JSON serialization, bit-stable round-trip.
std::string model_to_json(const CascadeModel& model);
CascadeModel model_from_json(const std::string& text);
void save_model(const std::string& path, const CascadeModel& model);
CascadeModel load_model(const std::string& path);

/// CSV "threshold,mse".
void write_sweep_csv(const std::string& path, const SweepResult& sweep);

} // namespace retina
