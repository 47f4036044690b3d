#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "retina/cascade.hpp"
#include "retina/errors.hpp"
#include "retina/features.hpp"
#include "retina/rng.hpp"
#include "retina/synthgen.hpp"

using namespace retina;

namespace {

PipelineConfig fast_config() {
    PipelineConfig cfg;
    cfg.train.epochs = 400;
    cfg.master_seed = 505;
    return cfg;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

} // namespace

TEST_CASE("pipeline config validation") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    PipelineConfig bad = cfg;
    bad.kernel_half_width = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.threshold_lo = 5;
    bad.threshold_hi = 4;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.threshold_lo = 10;
    bad.threshold_hi = 11; // only two sweep points, top-3 needs three
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.median_window = 4;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.folds = 1;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.train.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("top-3 selection orders by threshold after picking smallest losses") {
    SweepResult sweep;
    for (int t = 1; t <= 4; ++t) sweep.push_back({t, 0.0});
    sweep[0].mse = 0.5;
    sweep[1].mse = 0.2;
    sweep[2].mse = 0.3;
    sweep[3].mse = 0.4;
    CHECK(select_top3(sweep) == std::array<int, 3>{2, 3, 4});

    for (auto& p : sweep) p.mse = 0.25; // ties resolve toward smaller thresholds
    CHECK(select_top3(sweep) == std::array<int, 3>{1, 2, 3});

    sweep[0].mse = 0.4;
    sweep[1].mse = 0.3;
    sweep[2].mse = 0.2;
    sweep[3].mse = 0.1;
    CHECK(select_top3(sweep) == std::array<int, 3>{2, 3, 4});

    SweepResult tiny(2);
    CHECK_THROWS_AS(select_top3(tiny), ContractError);
}

TEST_CASE("four-class vote majority and severity tie-breaking") {
    CHECK(fourclass_vote({2, 2, 3}) == 2);
    CHECK(fourclass_vote({1, 2, 3}) == 3);
    CHECK(fourclass_vote({4, 4, 1}) == 4);
    CHECK(fourclass_vote({1, 1, 1}) == 1);
    CHECK(fourclass_vote({3, 2, 2}) == 2);
    CHECK(fourclass_vote({1, 4, 2}) == 4);
    CHECK_THROWS_AS(fourclass_vote({0, 1, 2}), ParameterError);
    CHECK_THROWS_AS(fourclass_vote({1, 2, 5}), ParameterError);
}

TEST_CASE("per-image features expose the scaled-count relationship") {
    PipelineConfig cfg;
    Rng rng(6001);
    GrayImage img(64, 64);
    for (double& v : img.pixels) v = rng.uniform(0.0, 255.0);

    ImageFeatures feats(img, cfg);
    CHECK(feats.detail().width == 32); // one analysis level halves the side
    CHECK(feats.detail().height == 32);

    const FeatureVector counts = feats.counts(12);
    const std::vector<double> scaled = feats.at(12);
    const std::vector<double> areas = feats.areas();
    REQUIRE(scaled.size() == counts.size());
    REQUIRE(areas.size() == counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        CHECK(scaled[k] == doctest::Approx(double(counts[k]) / areas[k]).epsilon(1e-12));

    PipelineConfig h3 = cfg;
    h3.mode = FeatureMode::haar3;
    ImageFeatures deep(img, h3);
    CHECK(deep.detail().width == 8); // three layers shrink the side by 8

    GrayImage odd(20, 20, 1.0);
    CHECK_THROWS_AS(ImageFeatures(odd, h3), ParameterError);
}

TEST_CASE("threshold sweep covers the whole range in order") {
    auto data = generate_dataset(6, 64, 901);
    std::vector<LabeledImage> pair;
    for (const auto& li : data)
        if (li.grade == 1 || li.grade == 2) pair.push_back(li);

    PipelineConfig cfg = fast_config();
    cfg.train.epochs = 200;
    cfg.threshold_lo = 10;
    cfg.threshold_hi = 14;
    SweepResult sweep = sweep_thresholds(pair, 1, 2, cfg);
    REQUIRE(sweep.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(sweep[static_cast<std::size_t>(i)].threshold == 10 + i);
        CHECK(sweep[static_cast<std::size_t>(i)].mse >= 0.0);
        CHECK(sweep[static_cast<std::size_t>(i)].mse == sweep[static_cast<std::size_t>(i)].mse);
    }

    CHECK_THROWS_AS(sweep_thresholds(pair, 2, 2, cfg), ParameterError);
    CHECK_THROWS_AS(sweep_thresholds(pair, 3, 4, cfg), ContractError);
}

TEST_CASE("stage training rejects malformed requests") {
    auto data = generate_dataset(3, 64, 902);
    PipelineConfig cfg = fast_config();
    cfg.train.epochs = 50;
    CHECK_THROWS_AS(train_stage(data, 0, {1, 2, 3}, cfg), ParameterError);
    CHECK_THROWS_AS(train_stage(data, 4, {1, 2, 3}, cfg), ParameterError);
    CHECK_THROWS_AS(train_stage(data, 1, {5, 5, 7}, cfg), ParameterError);
}

TEST_CASE("cascade training, voting, and serialization hold together") {
    auto data = generate_dataset(8, 64, 903);
    PipelineConfig cfg = fast_config();

    FeatureCache cache(data, cfg);
    REQUIRE(cache.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(cache.label(i) == data[i].grade);

    TrainedCascade trained = train_cascade(cache, all_indices(data.size()), cfg);
    const CascadeModel& model = trained.model;
    REQUIRE(model.stages.size() == 3);
    CHECK(model.kernel_half_width == cfg.kernel_half_width);
    CHECK(model.feature_scaling == ring_areas(32, 32, cfg.rings));

    for (int s = 0; s < 3; ++s) {
        const StageModel& stage = model.stages[static_cast<std::size_t>(s)];
        CHECK(stage.stage_index == s + 1);
        REQUIRE(stage.classifiers.size() == 3);
        const auto& sel = trained.report.selected[static_cast<std::size_t>(s)];
        CHECK(sel[0] < sel[1]);
        CHECK(sel[1] < sel[2]);
        for (int c = 0; c < 3; ++c)
            CHECK(stage.classifiers[static_cast<std::size_t>(c)].threshold == sel[static_cast<std::size_t>(c)]);

        // the reported best threshold carries the smallest sweep loss
        const SweepResult& sweep = trained.report.sweeps[static_cast<std::size_t>(s)];
        REQUIRE(sweep.size() == static_cast<std::size_t>(cfg.threshold_hi - cfg.threshold_lo + 1));
        double best_mse = sweep[0].mse;
        for (const auto& p : sweep) best_mse = std::min(best_mse, p.mse);
        bool matches = false;
        for (const auto& p : sweep)
            if (p.threshold == trained.report.best_threshold[static_cast<std::size_t>(s)] && p.mse == best_mse)
                matches = true;
        CHECK(matches);
    }

    // vote is the majority of the individual classifier votes, and the trace
    // walks stages until the first positive
    for (std::size_t i = 0; i < data.size(); ++i) {
        ImageFeatures& f = cache.image(i);
        GradeTrace trace = grade_trace(model, f);
        CHECK(trace.value == grade(model, f));
        CHECK(trace.value >= 1);
        CHECK(trace.value <= 4);
        REQUIRE(!trace.stages.empty());
        for (std::size_t s = 0; s < trace.stages.size(); ++s) {
            const StageDecision& d = trace.stages[s];
            CHECK(d.stage_index == static_cast<int>(s) + 1);
            const int yes = int(d.votes[0]) + int(d.votes[1]) + int(d.votes[2]);
            CHECK(d.positive == (yes >= 2));
            const auto direct = classifier_votes(model.stages[s], f);
            CHECK(direct == d.votes);
            CHECK(vote(model.stages[s], f) == d.positive);
            if (s + 1 < trace.stages.size()) CHECK_FALSE(d.positive);
        }
        if (trace.stages.back().positive)
            CHECK(trace.value == trace.stages.back().stage_index);
        else
            CHECK(trace.value == 4);
    }

    // training is a pure function of data and config
    FeatureCache cache2(data, cfg);
    TrainedCascade again = train_cascade(cache2, all_indices(data.size()), cfg);
    CHECK(model_to_json(model) == model_to_json(again.model));

    // byte-stable serialization round trip
    const std::string text = model_to_json(model);
    CascadeModel back = model_from_json(text);
    CHECK(model_to_json(back) == text);

    const std::string path = "test_cascade_model_tmp.json";
    save_model(path, model);
    CascadeModel loaded = load_model(path);
    CHECK(model_to_json(loaded) == text);
    std::remove(path.c_str());

    // inference config mirrors the model header
    PipelineConfig inferred = config_for(model);
    CHECK(inferred.kernel_half_width == model.kernel_half_width);
    CHECK(inferred.rings == static_cast<int>(model.feature_scaling.size()));
}

TEST_CASE("model files reject malformed content") {
    CHECK_THROWS_AS(model_from_json("not json at all"), InputFormatError);
    CHECK_THROWS_AS(model_from_json("[1,2,3]"), InputFormatError);
    CHECK_THROWS_AS(model_from_json("{\"format_version\": 2}"), InputFormatError);
    CHECK_THROWS_AS(model_from_json("{\"format_version\": 1}"), InputFormatError);
    CHECK_THROWS_AS(load_model("/nonexistent_dir/model.json"), IoError);

    CascadeModel haar_model;
    haar_model.mode = FeatureMode::haar3;
    haar_model.stages.resize(3);
    CHECK_THROWS_AS(model_to_json(haar_model), ContractError);
}

TEST_CASE("grading demands a complete model") {
    CascadeModel empty;
    GrayImage img(64, 64, 10.0);
    CHECK_THROWS_AS(grade(empty, img), ContractError);
    CHECK_THROWS_AS(grade_trace(empty, img), ContractError);

    CascadeModel partial;
    partial.stages.resize(3);
    partial.stages[0].stage_index = 1;
    PipelineConfig cfg;
    ImageFeatures f(img, cfg);
    CHECK_THROWS_AS(classifier_votes(partial.stages[0], f), ContractError);
}

TEST_CASE("sweep csv lists threshold and loss per row") {
    SweepResult sweep{{1, 0.25}, {2, 0.125}};
    const std::string path = "test_sweep_tmp.csv";
    write_sweep_csv(path, sweep);
    std::FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    char buf[256] = {};
    const std::size_t n = std::fread(buf, 1, sizeof(buf) - 1, f);
    std::fclose(f);
    std::remove(path.c_str());
    const std::string text(buf, n);
    CHECK(text.find("threshold,mse") == 0);
    CHECK(text.find("\n1,") != std::string::npos);
    CHECK(text.find("\n2,") != std::string::npos);
}
