#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "retina/cascade.hpp"
#include "retina/errors.hpp"
#include "retina/eval.hpp"
#include "retina/image.hpp"
#include "retina/image_io.hpp"
#include "retina/preprocess.hpp"
#include "retina/rng.hpp"
#include "retina/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace retina;

namespace {

struct ConfigFlags {
    int n = 0;
    int rings = 0;
    int hidden = 0;
    int epochs = 0;
    int folds = 0;
    double lr = 0.0;
    std::string thresholds;
    std::uint64_t seed = 0;
    std::string config_file;

    CLI::Option* opt_n = nullptr;
    CLI::Option* opt_rings = nullptr;
    CLI::Option* opt_hidden = nullptr;
    CLI::Option* opt_epochs = nullptr;
    CLI::Option* opt_folds = nullptr;
    CLI::Option* opt_lr = nullptr;
    CLI::Option* opt_thresholds = nullptr;
    CLI::Option* opt_seed = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    f.opt_n = cmd->add_option("--n", f.n, "Wavelet kernel half-width (default 3)");
    f.opt_rings = cmd->add_option("--rings", f.rings, "Annular mask count (default 20)");
    f.opt_thresholds =
        cmd->add_option("--thresholds", f.thresholds, "Sweep range LO:HI (default 1:40)");
    f.opt_hidden = cmd->add_option("--hidden", f.hidden, "Hidden units (default 10)");
    f.opt_lr = cmd->add_option("--lr", f.lr, "Learning rate (default 0.5)");
    f.opt_epochs = cmd->add_option("--epochs", f.epochs, "Training epochs (default 2000)");
    f.opt_folds = cmd->add_option("--folds", f.folds, "Cross-validation folds (default 3)");
    f.opt_seed = cmd->add_option("--seed", f.seed,
                                 "Master seed (fallback: RETINA_GRADE_SEED env, then 0)");
    cmd->add_option("--config", f.config_file,
                    "JSON config file; explicit flags override its values");
}

void parse_threshold_range(const std::string& text, PipelineConfig& cfg) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParameterError("thresholds must be LO:HI, got \"" + text + "\"");
    try {
        cfg.threshold_lo = std::stoi(text.substr(0, colon));
        cfg.threshold_hi = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ParameterError("thresholds must be LO:HI integers, got \"" + text + "\"");
    }
}

PipelineConfig resolve_config(const ConfigFlags& f) {
    PipelineConfig cfg;
    bool seed_set = false;

    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw IoError("config: cannot open " + f.config_file);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw InputFormatError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (j.contains("n")) cfg.kernel_half_width = j["n"].get<int>();
        if (j.contains("rings")) cfg.rings = j["rings"].get<int>();
        if (j.contains("thresholds"))
            parse_threshold_range(j["thresholds"].get<std::string>(), cfg);
        if (j.contains("hidden")) cfg.hidden = j["hidden"].get<int>();
        if (j.contains("lr")) cfg.train.learning_rate = j["lr"].get<double>();
        if (j.contains("epochs")) cfg.train.epochs = j["epochs"].get<int>();
        if (j.contains("folds")) cfg.folds = j["folds"].get<int>();
        if (j.contains("seed")) {
            cfg.master_seed = j["seed"].get<std::uint64_t>();
            seed_set = true;
        }
    }

    if (f.opt_n->count()) cfg.kernel_half_width = f.n;
    if (f.opt_rings->count()) cfg.rings = f.rings;
    if (f.opt_thresholds->count()) parse_threshold_range(f.thresholds, cfg);
    if (f.opt_hidden->count()) cfg.hidden = f.hidden;
    if (f.opt_lr->count()) cfg.train.learning_rate = f.lr;
    if (f.opt_epochs->count()) cfg.train.epochs = f.epochs;
    if (f.opt_folds->count()) cfg.folds = f.folds;
    if (f.opt_seed->count()) {
        cfg.master_seed = f.seed;
        seed_set = true;
    }
    if (!seed_set) {
        if (const char* env = std::getenv("RETINA_GRADE_SEED")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0')
                throw ParameterError("RETINA_GRADE_SEED must be an unsigned integer");
            cfg.master_seed = v;
        }
    }
    cfg.validate();
    return cfg;
}

json config_json(const PipelineConfig& cfg) {
    return json{
        {"n", cfg.kernel_half_width},
        {"rings", cfg.rings},
        {"thresholds",
         std::to_string(cfg.threshold_lo) + ":" + std::to_string(cfg.threshold_hi)},
        {"hidden", cfg.hidden},
        {"lr", cfg.train.learning_rate},
        {"epochs", cfg.train.epochs},
        {"folds", cfg.folds},
        {"median_window", cfg.median_window},
        {"min_component", cfg.min_component},
        {"sweep_per_class", cfg.sweep_per_class},
        {"mode", cfg.mode == FeatureMode::improved ? "improved" : "haar3"},
        {"seed", cfg.master_seed},
    };
}

void emit(const json& summary) { std::cout << summary.dump(2) << "\n"; }

constexpr double kScrubThreshold = 200.0;
constexpr std::uint64_t kScrubSalt = 0x5C7B;

int cmd_synth(int per_class, int side, const std::string& out_dir, const std::string& format,
              bool scrub, const PipelineConfig& cfg) {
    std::vector<LabeledImage> dataset = generate_dataset(per_class, side, cfg.master_seed);
    if (scrub)
        for (LabeledImage& item : dataset)
            item.image =
                remove_personal_info(item.image, kScrubThreshold, derive_seed(item.seed, kScrubSalt));
    const std::string manifest = write_dataset(out_dir, dataset, format);
    emit({{"command", "synth"},
          {"config", config_json(cfg)},
          {"per_class", per_class},
          {"side", side},
          {"format", format},
          {"scrub", scrub},
          {"outputs", {{"manifest", manifest}, {"images", dataset.size()}}}});
    return 0;
}

std::pair<Grade, Grade> parse_pair(const std::string& text) {
    if (text == "1v2") return {1, 2};
    if (text == "2v3") return {2, 3};
    if (text == "3v4") return {3, 4};
    throw ParameterError("pair must be one of 1v2, 2v3, 3v4; got \"" + text + "\"");
}

int cmd_sweep(const std::string& manifest, const std::string& pair_text,
              const std::string& out_csv, const PipelineConfig& cfg) {
    const std::vector<LabeledImage> dataset = read_manifest(manifest);
    const auto [a, b] = parse_pair(pair_text);
    FeatureCache cache(dataset, cfg);
    std::vector<std::size_t> idx(dataset.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const SweepResult sweep =
        sweep_thresholds(cache, idx, a, b, cfg, static_cast<std::uint64_t>(a));
    write_sweep_csv(out_csv, sweep);
    const std::array<int, 3> top3 = select_top3(sweep);
    std::size_t best = 0;
    for (std::size_t k = 1; k < sweep.size(); ++k)
        if (sweep[k].mse < sweep[best].mse) best = k;
    emit({{"command", "sweep"},
          {"config", config_json(cfg)},
          {"pair", pair_text},
          {"top3", top3},
          {"best", {{"threshold", sweep[best].threshold}, {"mse", sweep[best].mse}}},
          {"outputs", {{"csv", out_csv}}}});
    return 0;
}

int cmd_train(const std::string& manifest, const std::string& model_out,
              const std::string& sweep_dir, const PipelineConfig& cfg) {
    const std::vector<LabeledImage> dataset = read_manifest(manifest);
    const TrainedCascade trained = train_cascade(dataset, cfg);
    save_model(model_out, trained.model);

    json stages = json::array();
    json outputs = {{"model", model_out}};
    for (int s = 1; s <= 3; ++s) {
        stages.push_back({{"stage", s},
                          {"selected", trained.report.selected[s - 1]},
                          {"best_threshold", trained.report.best_threshold[s - 1]}});
        if (!sweep_dir.empty()) {
            fs::create_directories(sweep_dir);
            const std::string path =
                (fs::path(sweep_dir) / ("sweep_stage" + std::to_string(s) + ".csv")).string();
            write_sweep_csv(path, trained.report.sweeps[s - 1]);
            outputs["sweep_stage" + std::to_string(s)] = path;
        }
    }
    emit({{"command", "train"},
          {"config", config_json(cfg)},
          {"stages", stages},
          {"outputs", outputs}});
    return 0;
}

int cmd_grade(const std::string& model_path, const std::vector<std::string>& images,
              const std::string& out_json, bool preprocess, bool scrub, double roi_threshold) {
    const CascadeModel model = load_model(model_path);
    const PipelineConfig mcfg = config_for(model);

    json results = json::array();
    for (const std::string& path : images) {
        GrayImage img = load_gray(path);
        if (scrub) img = remove_personal_info(img, kScrubThreshold, kScrubSalt);
        if (preprocess) {
            const RetinaROI roi = segment_roi(img, roi_threshold);
            img = square_normalize(img, roi);
        }
        const GradeTrace trace = grade_trace(model, img);
        json stages = json::array();
        for (const StageDecision& d : trace.stages)
            stages.push_back({{"stage", d.stage_index},
                              {"votes", {d.votes[0], d.votes[1], d.votes[2]}},
                              {"positive", d.positive}});
        results.push_back({{"path", path}, {"grade", trace.value}, {"stages", stages}});
    }
    const json summary = {{"command", "grade"},
                          {"config", config_json(mcfg)},
                          {"model", model_path},
                          {"results", results}};
    emit(summary);
    if (!out_json.empty()) {
        std::ofstream out(out_json, std::ios::binary);
        if (!out) throw IoError("grade: cannot open " + out_json);
        out << summary.dump(2) << "\n";
        if (!out) throw IoError("grade: write failed for " + out_json);
    }
    return 0;
}

std::vector<NoiseSpec> parse_noise(const std::string& text, std::uint64_t master_seed) {
    std::vector<NoiseSpec> specs;
    if (text == "standard") {
        NoiseSpec g;
        g.kind = NoiseKind::gaussian;
        g.mean = 0.0;
        g.sigma = 1e-3;
        NoiseSpec sp;
        sp.kind = NoiseKind::salt_pepper;
        sp.density = 0.05;
        NoiseSpec sk;
        sk.kind = NoiseKind::speckle;
        sk.sigma = 1e-3;
        specs = {g, sp, sk};
    } else {
        std::stringstream ss(text);
        std::string token;
        while (std::getline(ss, token, ',')) {
            std::vector<std::string> parts;
            std::stringstream ts(token);
            std::string p;
            while (std::getline(ts, p, ':')) parts.push_back(p);
            NoiseSpec spec;
            try {
                if (parts.size() == 3 && parts[0] == "gaussian") {
                    spec.kind = NoiseKind::gaussian;
                    spec.mean = std::stod(parts[1]);
                    spec.sigma = std::stod(parts[2]);
                } else if (parts.size() == 2 && parts[0] == "salt_pepper") {
                    spec.kind = NoiseKind::salt_pepper;
                    spec.density = std::stod(parts[1]);
                } else if (parts.size() == 2 && parts[0] == "speckle") {
                    spec.kind = NoiseKind::speckle;
                    spec.sigma = std::stod(parts[1]);
                } else {
                    throw ParameterError(
                        "noise token must be gaussian:MEAN:SIGMA, salt_pepper:DENSITY, or "
                        "speckle:SIGMA; got \"" + token + "\"");
                }
            } catch (const ParameterError&) {
                throw;
            } catch (const std::exception&) {
                throw ParameterError("cannot parse noise token \"" + token + "\"");
            }
            specs.push_back(spec);
        }
        if (specs.empty()) throw ParameterError("empty custom noise specification");
    }
    for (NoiseSpec& s : specs) s.seed = master_seed;
    return specs;
}

int cmd_eval(const std::string& manifest, const std::string& out_dir, const std::string& baseline,
             const std::string& noise, bool roc_mode, const PipelineConfig& cfg) {
    const std::vector<LabeledImage> dataset = read_manifest(manifest);
    fs::create_directories(out_dir);
    const fs::path root(out_dir);

    json outputs;
    json metrics;

    const CvReport cv = threefold_cv(dataset, cfg);
    const std::string cv_path = (root / "cv.csv").string();
    write_cv_csv(cv_path, cv);
    outputs["cv"] = cv_path;
    metrics["kappa"] = cv.kappa_value;
    metrics["accuracy"] = cv.groups.back().accuracy;
    metrics["two_class"] = {{"se", cv.two_class.se},
                            {"sp", cv.two_class.sp},
                            {"acc", cv.two_class.acc}};

    if (roc_mode) {
        const RocProtocolResult rr = roc_protocol(dataset, cfg);
        json aucs = json::array();
        for (int s = 1; s <= 3; ++s) {
            const std::string path =
                (root / ("roc_stage" + std::to_string(s) + ".csv")).string();
            write_roc_csv(path, rr.curves[s - 1]);
            outputs["roc_stage" + std::to_string(s)] = path;
            aucs.push_back(rr.curves[s - 1].auc);
        }
        metrics["auc"] = aucs;
        metrics["roc_thresholds"] = rr.optimal_threshold;
    }

    if (baseline == "fourclass") {
        FeatureCache cache(dataset, cfg);
        std::vector<std::size_t> idx(dataset.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        const TrainedCascade casc = train_cascade(cache, idx, cfg);
        const TrainedFourClass four = baseline_fourclass(cache, idx, cfg);
        std::vector<int> cp, fp, truths;
        for (std::size_t i : idx) {
            cp.push_back(grade(casc.model, cache.image(i)));
            fp.push_back(fourclass_grade(four.model, cache.image(i)));
            truths.push_back(cache.label(i));
        }
        const double acc_cascade = accuracy(confusion(cp, truths, 4));
        const double acc_four = accuracy(confusion(fp, truths, 4));
        const std::string path = (root / "baseline_fourclass.csv").string();
        std::ofstream out(path);
        if (!out) throw IoError("eval: cannot open " + path);
        out << "model,accuracy\n"
            << "cascade," << acc_cascade << "\n"
            << "fourclass," << acc_four << "\n";
        if (!out) throw IoError("eval: write failed for " + path);
        outputs["baseline_fourclass"] = path;
        metrics["baseline_fourclass"] = {{"cascade_accuracy", acc_cascade},
                                         {"fourclass_accuracy", acc_four},
                                         {"fourclass_thresholds", four.selected},
                                         {"cascade_ge_baseline", acc_cascade >= acc_four}};
    } else if (baseline == "haar3") {
        const TrainedCascade improved = train_cascade(dataset, cfg);
        const TrainedCascade haar = baseline_original_haar(dataset, cfg);
        json mins_improved = json::array(), mins_haar = json::array(), flags = json::array();
        int wins = 0;
        for (int s = 1; s <= 3; ++s) {
            const SweepResult& a = improved.report.sweeps[s - 1];
            const SweepResult& b = haar.report.sweeps[s - 1];
            const std::string path =
                (root / ("haar3_stage" + std::to_string(s) + ".csv")).string();
            std::ofstream out(path);
            if (!out) throw IoError("eval: cannot open " + path);
            out << "threshold,mse_improved,mse_haar3\n";
            for (std::size_t k = 0; k < a.size(); ++k)
                out << a[k].threshold << ',' << a[k].mse << ',' << b[k].mse << '\n';
            if (!out) throw IoError("eval: write failed for " + path);
            outputs["haar3_stage" + std::to_string(s)] = path;
            double ma = a[0].mse, mb = b[0].mse;
            for (const SweepPoint& p : a) ma = std::min(ma, p.mse);
            for (const SweepPoint& p : b) mb = std::min(mb, p.mse);
            mins_improved.push_back(ma);
            mins_haar.push_back(mb);
            flags.push_back(ma <= mb);
            if (ma <= mb) ++wins;
        }
        metrics["baseline_haar3"] = {{"min_mse_improved", mins_improved},
                                     {"min_mse_haar3", mins_haar},
                                     {"improved_le_haar3", flags},
                                     {"stages_improved_le", wins}};
    } else if (!baseline.empty()) {
        throw ParameterError("baseline must be fourclass or haar3; got \"" + baseline + "\"");
    }

    if (noise != "none") {
        const std::vector<NoiseSpec> specs = parse_noise(noise, cfg.master_seed);
        const NoiseReport nr = noise_robustness(dataset, cfg, specs);
        const std::string path = (root / "noise.csv").string();
        write_noise_csv(path, nr);
        outputs["noise"] = path;
        json rows = json::array();
        for (const NoiseRow& row : nr.rows)
            rows.push_back({{"noise", row.name}, {"se", row.se}});
        metrics["noise"] = rows;
    }

    emit({{"command", "eval"},
          {"config", config_json(cfg)},
          {"outputs", outputs},
          {"metrics", metrics}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cataract-style blur grading: wavelet detail features, threshold sweeps, "
                 "and a voting cascade of small classifiers"};
    app.require_subcommand(1);

    // synth
    CLI::App* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
    int per_class = 10, side = 256;
    std::string synth_out, synth_format = "pgm";
    bool synth_scrub = false;
    synth->add_option("--per-class", per_class, "Images per grade (default 10)");
    synth->add_option("--side", side, "Image side in pixels (default 256)");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--format", synth_format, "pgm or png (default pgm)")
        ->check(CLI::IsMember({"pgm", "png"}));
    synth->add_flag("--scrub", synth_scrub, "Run the personal-info scrubber on each image");
    ConfigFlags synth_cfg;
    add_config_flags(synth, synth_cfg);

    // sweep
    CLI::App* sweep = app.add_subcommand("sweep", "Train one classifier per threshold and "
                                                  "emit the MSE curve");
    std::string sweep_manifest, sweep_pair, sweep_out;
    sweep->add_option("--manifest", sweep_manifest, "Dataset manifest CSV")->required();
    sweep->add_option("--pair", sweep_pair, "Class pair: 1v2, 2v3, or 3v4")->required();
    sweep->add_option("--out", sweep_out, "Output CSV path")->required();
    ConfigFlags sweep_cfg;
    add_config_flags(sweep, sweep_cfg);

    // train
    CLI::App* train = app.add_subcommand("train", "Train the full cascade and save the model");
    std::string train_manifest, train_model, train_sweep_dir;
    train->add_option("--manifest", train_manifest, "Dataset manifest CSV")->required();
    train->add_option("--model", train_model, "Model file to write")->required();
    train->add_option("--out", train_sweep_dir, "Directory for per-stage sweep CSVs (optional)");
    ConfigFlags train_cfg;
    add_config_flags(train, train_cfg);

    // grade
    CLI::App* grade_cmd = app.add_subcommand("grade", "Grade images with a saved model");
    std::string grade_model, grade_out;
    std::vector<std::string> grade_images;
    bool grade_preprocess = false, grade_scrub = false;
    double grade_roi_threshold = 10.0;
    grade_cmd->add_option("--model", grade_model, "Model file")->required();
    grade_cmd->add_option("images", grade_images, "Image paths (PGM or PNG)")->required();
    grade_cmd->add_option("--out", grade_out, "Also write the JSON report here");
    grade_cmd->add_flag("--preprocess", grade_preprocess,
                        "Segment the retinal disc and square-normalize before grading");
    grade_cmd->add_flag("--scrub", grade_scrub, "Run the personal-info scrubber first");
    grade_cmd->add_option("--roi-threshold", grade_roi_threshold,
                          "Background threshold for --preprocess (default 10)");

    // eval
    CLI::App* eval_cmd = app.add_subcommand("eval", "Cross-validation, ROC, baselines, and "
                                                    "noise robustness");
    std::string eval_manifest, eval_out, eval_baseline, eval_noise = "none";
    bool eval_roc = false;
    eval_cmd->add_option("--manifest", eval_manifest, "Dataset manifest CSV")->required();
    eval_cmd->add_option("--out", eval_out, "Output directory")->required();
    eval_cmd->add_option("--baseline", eval_baseline, "Also run a baseline: fourclass or haar3")
        ->check(CLI::IsMember({"fourclass", "haar3"}));
    eval_cmd->add_option("--noise", eval_noise,
                         "none, standard, or custom tokens like "
                         "gaussian:0:0.001,salt_pepper:0.05,speckle:0.001 (default none)");
    eval_cmd->add_flag("--roc", eval_roc, "Run the 2:1-split ROC protocol per stage");
    ConfigFlags eval_cfg;
    add_config_flags(eval_cmd, eval_cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(per_class, side, synth_out, synth_format, synth_scrub,
                             resolve_config(synth_cfg));
        if (sweep->parsed())
            return cmd_sweep(sweep_manifest, sweep_pair, sweep_out, resolve_config(sweep_cfg));
        if (train->parsed())
            return cmd_train(train_manifest, train_model, train_sweep_dir,
                             resolve_config(train_cfg));
        if (grade_cmd->parsed())
            return cmd_grade(grade_model, grade_images, grade_out, grade_preprocess,
                             grade_scrub, grade_roi_threshold);
        if (eval_cmd->parsed())
            return cmd_eval(eval_manifest, eval_out, eval_baseline, eval_noise, eval_roc,
                            resolve_config(eval_cfg));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
