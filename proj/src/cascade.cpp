#include "retina/cascade.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "retina/errors.hpp"
#include "retina/parallel.hpp"
#include "retina/rng.hpp"

#include "json.hpp"

namespace retina {

namespace {

// seed-stream tags, one per independent consumer of the master seed
constexpr std::uint64_t kSweepSampleSalt = 0xA1;
constexpr std::uint64_t kSweepInitSalt = 0xA2;
constexpr std::uint64_t kStageInitSalt = 0xA3;
constexpr std::uint64_t kFourSampleSalt = 0xB1;
constexpr std::uint64_t kFourSweepInitSalt = 0xB2;
constexpr std::uint64_t kFourFinalInitSalt = 0xB3;

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

void require_grades_present(const FeatureCache& cache, const std::vector<std::size_t>& indices,
                            const char* op) {
    std::array<int, 5> counts{};
    for (std::size_t i : indices) {
        const Grade g = cache.label(i);
        if (g < 1 || g > 4) throw ContractError(std::string(op) + ": grade out of range 1..4");
        ++counts[static_cast<std::size_t>(g)];
    }
    for (int g = 1; g <= 4; ++g)
        if (counts[static_cast<std::size_t>(g)] == 0)
            throw ContractError(std::string(op) + ": dataset is missing grade " +
                                std::to_string(g));
}

// keeps at most `limit` indices, chosen by a seeded shuffle, in ascending order
void sample_indices(std::vector<std::size_t>& v, int limit, std::uint64_t seed) {
    if (static_cast<int>(v.size()) <= limit) return;
    Rng rng(seed);
    rng.shuffle(v);
    v.resize(static_cast<std::size_t>(limit));
    std::sort(v.begin(), v.end());
}

std::vector<double> one_hot(int size, int index) {
    std::vector<double> t(static_cast<std::size_t>(size), 0.0);
    t[static_cast<std::size_t>(index)] = 1.0;
    return t;
}

} // namespace

void PipelineConfig::validate() const {
    if (kernel_half_width < 1) throw ParameterError("PipelineConfig: kernel_half_width must be >= 1");
    if (rings < 1) throw ParameterError("PipelineConfig: rings must be >= 1");
    if (threshold_lo < 1 || threshold_hi < threshold_lo)
        throw ParameterError("PipelineConfig: threshold range must satisfy 1 <= lo <= hi");
    if (threshold_hi - threshold_lo + 1 < 3)
        throw ParameterError("PipelineConfig: threshold range must contain at least 3 values");
    if (min_component < 0) throw ParameterError("PipelineConfig: min_component must be >= 0");
    if (median_window < 0 || (median_window > 1 && median_window % 2 == 0))
        throw ParameterError("PipelineConfig: median_window must be 0, 1, or odd");
    if (hidden < 1) throw ParameterError("PipelineConfig: hidden must be >= 1");
    if (sweep_per_class < 1) throw ParameterError("PipelineConfig: sweep_per_class must be >= 1");
    if (folds < 2) throw ParameterError("PipelineConfig: folds must be >= 2");
    if (train.learning_rate <= 0.0) throw ParameterError("PipelineConfig: learning_rate must be > 0");
    if (train.epochs < 1) throw ParameterError("PipelineConfig: epochs must be >= 1");
}

ImageFeatures::ImageFeatures(const GrayImage& img, const PipelineConfig& cfg)
    : rings_(cfg.rings), min_component_(cfg.min_component) {
    GrayImage filtered;
    const GrayImage* src = &img;
    if (cfg.median_window >= 3) {
        filtered = median_filter(img, cfg.median_window);
        src = &filtered;
    }
    if (cfg.mode == FeatureMode::improved) {
        map_ = combined_detail(*src, make_kernel(cfg.kernel_half_width));
    } else {
        if (src->width % 8 != 0 || src->height % 8 != 0)
            throw ParameterError("haar3 features require image sides divisible by 8");
        std::vector<DetailTriple> layers = multilayer_haar(*src, 3);
        map_ = combine_triple(layers[2]);
    }
    areas_ = ring_areas(map_.width, map_.height, rings_);
}

const std::vector<double>& ImageFeatures::at(int threshold) {
    auto it = memo_.find(threshold);
    if (it != memo_.end()) return it->second;
    const FeatureVector raw =
        features_from_detail(map_, threshold, rings_, min_component_);
    return memo_.emplace(threshold, scale_features(raw, areas_)).first->second;
}

FeatureVector ImageFeatures::counts(int threshold) const {
    return features_from_detail(map_, threshold, rings_, min_component_);
}

FeatureCache::FeatureCache(const std::vector<LabeledImage>& data, const PipelineConfig& cfg)
    : data_(&data), cfg_(cfg), slots_(data.size()) {
    cfg_.validate();
}

Grade FeatureCache::label(std::size_t index) const {
    return (*data_)[index].grade;
}

ImageFeatures& FeatureCache::image(std::size_t index) {
    auto& slot = slots_[index];
    if (!slot) slot = std::make_unique<ImageFeatures>((*data_)[index].image, cfg_);
    return *slot;
}

const std::vector<double>& FeatureCache::features(std::size_t index, int threshold) {
    return image(index).at(threshold);
}

SweepResult sweep_thresholds(FeatureCache& cache, const std::vector<std::size_t>& indices,
                             Grade class_a, Grade class_b, const PipelineConfig& cfg,
                             std::uint64_t seed_tag) {
    cfg.validate();
    if (class_a == class_b) throw ParameterError("sweep_thresholds: classes must differ");
    std::vector<std::size_t> va, vb;
    for (std::size_t i : indices) {
        if (cache.label(i) == class_a) va.push_back(i);
        else if (cache.label(i) == class_b) vb.push_back(i);
    }
    if (va.empty() || vb.empty())
        throw ContractError("sweep_thresholds: both classes must be present");
    sample_indices(va, cfg.sweep_per_class,
                   derive_seed(cfg.master_seed, kSweepSampleSalt, seed_tag,
                               static_cast<std::uint64_t>(class_a)));
    sample_indices(vb, cfg.sweep_per_class,
                   derive_seed(cfg.master_seed, kSweepSampleSalt, seed_tag,
                               static_cast<std::uint64_t>(class_b)));
    std::vector<std::size_t> picked = va;
    picked.insert(picked.end(), vb.begin(), vb.end());

    // fill the feature memo sequentially so the training loop only reads
    for (int t = cfg.threshold_lo; t <= cfg.threshold_hi; ++t)
        for (std::size_t i : picked) cache.features(i, t);

    const int count = cfg.threshold_hi - cfg.threshold_lo + 1;
    SweepResult result(static_cast<std::size_t>(count));
    parallel_for(0, static_cast<std::size_t>(count), [&](std::size_t k) {
        const int t = cfg.threshold_lo + static_cast<int>(k);
        Dataset ds;
        ds.reserve(picked.size());
        for (std::size_t i : picked)
            ds.push_back({cache.features(i, t), one_hot(2, cache.label(i) == class_a ? 0 : 1)});
        const MLP start = init_mlp(cfg.rings, cfg.hidden, 2,
                                   derive_seed(cfg.master_seed, kSweepInitSalt, seed_tag,
                                               static_cast<std::uint64_t>(t)),
                                   cfg.train.init_scale);
        result[k] = {t, train(start, ds, cfg.train).final_mse};
    });
    return result;
}

SweepResult sweep_thresholds(const std::vector<LabeledImage>& pair_dataset, Grade class_a,
                             Grade class_b, const PipelineConfig& cfg) {
    FeatureCache cache(pair_dataset, cfg);
    return sweep_thresholds(cache, all_indices(pair_dataset.size()), class_a, class_b, cfg, 0);
}

std::array<int, 3> select_top3(const SweepResult& sweep) {
    if (sweep.size() < 3) throw ContractError("select_top3: need at least 3 sweep entries");
    std::vector<std::size_t> order(sweep.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sweep[a].mse != sweep[b].mse) return sweep[a].mse < sweep[b].mse;
        return sweep[a].threshold < sweep[b].threshold;
    });
    std::array<int, 3> out{sweep[order[0]].threshold, sweep[order[1]].threshold,
                           sweep[order[2]].threshold};
    std::sort(out.begin(), out.end());
    return out;
}

StageModel train_stage(FeatureCache& cache, const std::vector<std::size_t>& indices,
                       int stage_index, const std::array<int, 3>& thresholds,
                       const PipelineConfig& cfg) {
    cfg.validate();
    if (stage_index < 1 || stage_index > 3)
        throw ParameterError("train_stage: stage_index must be 1..3");
    if (thresholds[0] == thresholds[1] || thresholds[1] == thresholds[2] ||
        thresholds[0] == thresholds[2])
        throw ParameterError("train_stage: thresholds must be distinct");

    std::vector<std::size_t> eligible;
    std::size_t positives = 0;
    for (std::size_t i : indices) {
        if (cache.label(i) < stage_index) continue;
        eligible.push_back(i);
        if (cache.label(i) == stage_index) ++positives;
    }
    if (positives == 0 || positives == eligible.size())
        throw ContractError("train_stage: stage " + std::to_string(stage_index) +
                            " has an empty class side");

    StageModel out;
    out.stage_index = stage_index;
    for (int t : thresholds) {
        Dataset ds;
        ds.reserve(eligible.size());
        for (std::size_t i : eligible)
            ds.push_back(
                {cache.features(i, t), one_hot(2, cache.label(i) == stage_index ? 0 : 1)});
        const MLP start = init_mlp(cfg.rings, cfg.hidden, 2,
                                   derive_seed(cfg.master_seed, kStageInitSalt,
                                               static_cast<std::uint64_t>(stage_index),
                                               static_cast<std::uint64_t>(t)),
                                   cfg.train.init_scale);
        out.classifiers.push_back({t, train(start, ds, cfg.train).mlp});
    }
    return out;
}

StageModel train_stage(const std::vector<LabeledImage>& dataset, int stage_index,
                       const std::array<int, 3>& thresholds, const PipelineConfig& cfg) {
    FeatureCache cache(dataset, cfg);
    return train_stage(cache, all_indices(dataset.size()), stage_index, thresholds, cfg);
}

std::array<bool, 3> classifier_votes(const StageModel& stage, ImageFeatures& features) {
    if (stage.classifiers.size() != 3)
        throw ContractError("classifier_votes: stage must hold exactly 3 classifiers");
    std::array<bool, 3> votes{};
    for (std::size_t k = 0; k < 3; ++k) {
        const StageClassifier& c = stage.classifiers[k];
        votes[k] = predict_class(c.mlp, features.at(c.threshold)) == 0;
    }
    return votes;
}

bool vote(const StageModel& stage, ImageFeatures& features) {
    const std::array<bool, 3> votes = classifier_votes(stage, features);
    return (votes[0] ? 1 : 0) + (votes[1] ? 1 : 0) + (votes[2] ? 1 : 0) >= 2;
}

Grade grade(const CascadeModel& model, ImageFeatures& features) {
    if (model.stages.size() != 3) throw ContractError("grade: model must hold 3 stages");
    for (const StageModel& stage : model.stages)
        if (vote(stage, features)) return stage.stage_index;
    return 4;
}

Grade grade(const CascadeModel& model, const GrayImage& img) {
    ImageFeatures features(img, config_for(model));
    return grade(model, features);
}

GradeTrace grade_trace(const CascadeModel& model, ImageFeatures& features) {
    if (model.stages.size() != 3) throw ContractError("grade_trace: model must hold 3 stages");
    GradeTrace trace;
    for (const StageModel& stage : model.stages) {
        StageDecision d;
        d.stage_index = stage.stage_index;
        d.votes = classifier_votes(stage, features);
        d.positive = (d.votes[0] ? 1 : 0) + (d.votes[1] ? 1 : 0) + (d.votes[2] ? 1 : 0) >= 2;
        trace.stages.push_back(d);
        if (d.positive) {
            trace.value = stage.stage_index;
            return trace;
        }
    }
    trace.value = 4;
    return trace;
}

GradeTrace grade_trace(const CascadeModel& model, const GrayImage& img) {
    ImageFeatures features(img, config_for(model));
    return grade_trace(model, features);
}

TrainedCascade train_cascade(FeatureCache& cache, const std::vector<std::size_t>& indices,
                             const PipelineConfig& cfg) {
    cfg.validate();
    if (indices.empty()) throw ContractError("train_cascade: empty dataset");
    require_grades_present(cache, indices, "train_cascade");

    TrainedCascade out;
    out.model.format_version = 1;
    out.model.mode = cfg.mode;
    out.model.kernel_half_width = cfg.mode == FeatureMode::haar3 ? 1 : cfg.kernel_half_width;
    out.model.feature_scaling = cache.image(indices.front()).areas();

    for (int s = 1; s <= 3; ++s) {
        SweepResult sweep = sweep_thresholds(cache, indices, s, s + 1, cfg,
                                             static_cast<std::uint64_t>(s));
        const std::array<int, 3> top3 = select_top3(sweep);
        std::size_t best = 0;
        for (std::size_t k = 1; k < sweep.size(); ++k)
            if (sweep[k].mse < sweep[best].mse) best = k;
        out.report.best_threshold[static_cast<std::size_t>(s - 1)] = sweep[best].threshold;
        out.report.selected[static_cast<std::size_t>(s - 1)] = top3;
        out.report.sweeps[static_cast<std::size_t>(s - 1)] = std::move(sweep);
        out.model.stages.push_back(train_stage(cache, indices, s, top3, cfg));
    }
    return out;
}

TrainedCascade train_cascade(const std::vector<LabeledImage>& dataset,
                             const PipelineConfig& cfg) {
    FeatureCache cache(dataset, cfg);
    return train_cascade(cache, all_indices(dataset.size()), cfg);
}

PipelineConfig config_for(const CascadeModel& model) {
    if (model.feature_scaling.empty())
        throw ContractError("config_for: model carries no feature scaling");
    PipelineConfig cfg;
    cfg.kernel_half_width = model.kernel_half_width;
    cfg.mode = model.mode;
    cfg.rings = static_cast<int>(model.feature_scaling.size());
    return cfg;
}

TrainedFourClass baseline_fourclass(FeatureCache& cache, const std::vector<std::size_t>& indices,
                                    const PipelineConfig& cfg) {
    cfg.validate();
    if (indices.empty()) throw ContractError("baseline_fourclass: empty dataset");
    require_grades_present(cache, indices, "baseline_fourclass");

    std::vector<std::size_t> picked;
    for (Grade g = 1; g <= 4; ++g) {
        std::vector<std::size_t> of_class;
        for (std::size_t i : indices)
            if (cache.label(i) == g) of_class.push_back(i);
        sample_indices(of_class, cfg.sweep_per_class,
                       derive_seed(cfg.master_seed, kFourSampleSalt, 0,
                                   static_cast<std::uint64_t>(g)));
        picked.insert(picked.end(), of_class.begin(), of_class.end());
    }

    for (int t = cfg.threshold_lo; t <= cfg.threshold_hi; ++t)
        for (std::size_t i : picked) cache.features(i, t);

    const int count = cfg.threshold_hi - cfg.threshold_lo + 1;
    SweepResult sweep(static_cast<std::size_t>(count));
    parallel_for(0, static_cast<std::size_t>(count), [&](std::size_t k) {
        const int t = cfg.threshold_lo + static_cast<int>(k);
        Dataset ds;
        ds.reserve(picked.size());
        for (std::size_t i : picked)
            ds.push_back({cache.features(i, t), one_hot(4, cache.label(i) - 1)});
        const MLP start = init_mlp(cfg.rings, cfg.hidden, 4,
                                   derive_seed(cfg.master_seed, kFourSweepInitSalt,
                                               static_cast<std::uint64_t>(t)),
                                   cfg.train.init_scale);
        sweep[k] = {t, train(start, ds, cfg.train).final_mse};
    });

    TrainedFourClass out;
    out.sweep = sweep;
    out.selected = select_top3(sweep);
    out.model.kernel_half_width = cfg.mode == FeatureMode::haar3 ? 1 : cfg.kernel_half_width;
    out.model.mode = cfg.mode;
    out.model.feature_scaling = cache.image(indices.front()).areas();
    out.model.thresholds = out.selected;
    for (int t : out.selected) {
        Dataset ds;
        ds.reserve(indices.size());
        for (std::size_t i : indices)
            ds.push_back({cache.features(i, t), one_hot(4, cache.label(i) - 1)});
        const MLP start = init_mlp(cfg.rings, cfg.hidden, 4,
                                   derive_seed(cfg.master_seed, kFourFinalInitSalt,
                                               static_cast<std::uint64_t>(t)),
                                   cfg.train.init_scale);
        out.model.classifiers.push_back(train(start, ds, cfg.train).mlp);
    }
    return out;
}

TrainedFourClass baseline_fourclass(const std::vector<LabeledImage>& dataset,
                                    const PipelineConfig& cfg) {
    FeatureCache cache(dataset, cfg);
    return baseline_fourclass(cache, all_indices(dataset.size()), cfg);
}

Grade fourclass_vote(const std::array<Grade, 3>& votes) {
    std::array<int, 5> counts{};
    for (Grade v : votes) {
        if (v < 1 || v > 4) throw ParameterError("fourclass_vote: grade out of range");
        ++counts[static_cast<std::size_t>(v)];
    }
    int best = 0;
    int best_count = 0;
    for (int g = 1; g <= 4; ++g) {
        // >= so that ties resolve toward the most severe grade
        if (counts[static_cast<std::size_t>(g)] >= best_count &&
            counts[static_cast<std::size_t>(g)] > 0) {
            best_count = counts[static_cast<std::size_t>(g)];
            best = g;
        }
    }
    return best;
}

Grade fourclass_grade(const FourClassModel& model, ImageFeatures& features) {
    if (model.classifiers.size() != 3)
        throw ContractError("fourclass_grade: model must hold 3 classifiers");
    std::array<Grade, 3> votes{};
    for (std::size_t k = 0; k < 3; ++k)
        votes[k] = predict_class(model.classifiers[k], features.at(model.thresholds[k])) + 1;
    return fourclass_vote(votes);
}

TrainedCascade baseline_original_haar(const std::vector<LabeledImage>& dataset,
                                      const PipelineConfig& cfg) {
    for (const LabeledImage& item : dataset)
        if (item.image.width % 8 != 0 || item.image.height % 8 != 0)
            throw ParameterError("baseline_original_haar: image sides must be divisible by 8");
    PipelineConfig haar_cfg = cfg;
    haar_cfg.mode = FeatureMode::haar3;
    return train_cascade(dataset, haar_cfg);
}

namespace {

void append_number(std::string& s, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    s += buf;
}

void append_array(std::string& s, const std::vector<double>& values) {
    s += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) s += ',';
        append_number(s, values[i]);
    }
    s += ']';
}

} // namespace

std::string model_to_json(const CascadeModel& model) {
    if (model.mode != FeatureMode::improved)
        throw ContractError("model_to_json: the file format carries improved-kernel models only");
    if (model.stages.size() != 3)
        throw ContractError("model_to_json: model must hold 3 stages");
    std::string s;
    s += "{\n";
    s += "  \"format_version\": " + std::to_string(model.format_version) + ",\n";
    s += "  \"kernel_half_width\": " + std::to_string(model.kernel_half_width) + ",\n";
    s += "  \"feature_scaling\": ";
    append_array(s, model.feature_scaling);
    s += ",\n  \"stages\": [\n";
    for (std::size_t si = 0; si < model.stages.size(); ++si) {
        const StageModel& stage = model.stages[si];
        if (stage.classifiers.size() != 3)
            throw ContractError("model_to_json: every stage must hold 3 classifiers");
        s += "    {\n      \"stage_index\": " + std::to_string(stage.stage_index) + ",\n";
        s += "      \"classifiers\": [\n";
        for (std::size_t ci = 0; ci < stage.classifiers.size(); ++ci) {
            const StageClassifier& c = stage.classifiers[ci];
            s += "        {\n";
            s += "          \"threshold\": " + std::to_string(c.threshold) + ",\n";
            s += "          \"hidden_weights\": ";
            append_array(s, c.mlp.hidden_weights);
            s += ",\n          \"hidden_biases\": ";
            append_array(s, c.mlp.hidden_biases);
            s += ",\n          \"output_weights\": ";
            append_array(s, c.mlp.output_weights);
            s += ",\n          \"output_biases\": ";
            append_array(s, c.mlp.output_biases);
            s += "\n        }";
            s += ci + 1 < stage.classifiers.size() ? ",\n" : "\n";
        }
        s += "      ]\n    }";
        s += si + 1 < model.stages.size() ? ",\n" : "\n";
    }
    s += "  ]\n}\n";
    return s;
}

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw InputFormatError(std::string("model file: missing field \"") + key + "\"");
    return *it;
}

int require_int(const json& j, const char* key) {
    const json& f = require_field(j, key);
    if (!f.is_number_integer())
        throw InputFormatError(std::string("model file: field \"") + key +
                               "\" must be an integer");
    return f.get<int>();
}

std::vector<double> require_doubles(const json& j, const char* key) {
    const json& f = require_field(j, key);
    if (!f.is_array() || f.empty())
        throw InputFormatError(std::string("model file: field \"") + key +
                               "\" must be a non-empty array");
    std::vector<double> out;
    out.reserve(f.size());
    for (const json& v : f) {
        if (!v.is_number())
            throw InputFormatError(std::string("model file: field \"") + key +
                                   "\" must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

CascadeModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputFormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputFormatError("model file: top level must be an object");

    CascadeModel model;
    model.format_version = require_int(j, "format_version");
    if (model.format_version != 1)
        throw InputFormatError("model file: unsupported format version " +
                               std::to_string(model.format_version));
    model.kernel_half_width = require_int(j, "kernel_half_width");
    if (model.kernel_half_width < 1)
        throw InputFormatError("model file: kernel_half_width must be >= 1");
    model.feature_scaling = require_doubles(j, "feature_scaling");
    model.mode = FeatureMode::improved;

    const json& stages = require_field(j, "stages");
    if (!stages.is_array() || stages.size() != 3)
        throw InputFormatError("model file: \"stages\" must be an array of 3 stages");
    const std::size_t input_dim = model.feature_scaling.size();
    int expected_index = 1;
    for (const json& sj : stages) {
        StageModel stage;
        stage.stage_index = require_int(sj, "stage_index");
        if (stage.stage_index != expected_index++)
            throw InputFormatError("model file: stages must be ordered 1..3");
        const json& classifiers = require_field(sj, "classifiers");
        if (!classifiers.is_array() || classifiers.size() != 3)
            throw InputFormatError("model file: every stage needs exactly 3 classifiers");
        for (const json& cj : classifiers) {
            StageClassifier c;
            c.threshold = require_int(cj, "threshold");
            if (c.threshold < 1) throw InputFormatError("model file: threshold must be >= 1");
            c.mlp.hidden_weights = require_doubles(cj, "hidden_weights");
            c.mlp.hidden_biases = require_doubles(cj, "hidden_biases");
            c.mlp.output_weights = require_doubles(cj, "output_weights");
            c.mlp.output_biases = require_doubles(cj, "output_biases");
            const std::size_t hidden = c.mlp.hidden_biases.size();
            const std::size_t outputs = c.mlp.output_biases.size();
            if (c.mlp.hidden_weights.size() != hidden * input_dim ||
                c.mlp.output_weights.size() != outputs * hidden)
                throw InputFormatError("model file: weight array sizes are inconsistent");
            c.mlp.input_dim = static_cast<int>(input_dim);
            c.mlp.hidden_dim = static_cast<int>(hidden);
            c.mlp.output_dim = static_cast<int>(outputs);
            stage.classifiers.push_back(std::move(c));
        }
        model.stages.push_back(std::move(stage));
    }
    return model;
}

void save_model(const std::string& path, const CascadeModel& model) {
    const std::string text = model_to_json(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_model: cannot open " + path);
    out << text;
    if (!out) throw IoError("save_model: write failed for " + path);
}

CascadeModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_model: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ofstream out(path);
    if (!out) throw IoError("write_sweep_csv: cannot open " + path);
    out << "threshold,mse\n";
    char buf[64];
    for (const SweepPoint& p : sweep) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.mse);
        out << p.threshold << ',' << buf << '\n';
    }
    if (!out) throw IoError("write_sweep_csv: write failed for " + path);
}

} // namespace retina
