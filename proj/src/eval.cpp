#include "retina/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "retina/errors.hpp"
#include "retina/rng.hpp"

namespace retina {

namespace {

constexpr std::uint64_t kFoldSalt = 0xC1;
constexpr std::uint64_t kFoldTrainSalt = 0xC2;
constexpr std::uint64_t kNoiseSalt = 0xC3;
constexpr std::uint64_t kSplitSalt = 0xC4;

} // namespace

ConfusionMatrix::ConfusionMatrix(int classes) : n(classes) {
    if (classes < 1) throw ParameterError("ConfusionMatrix: class count must be >= 1");
    cells.assign(static_cast<std::size_t>(classes) * classes, 0);
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (long c : cells) t += c;
    return t;
}

long ConfusionMatrix::trace() const {
    long t = 0;
    for (int k = 1; k <= n; ++k) t += at(k, k);
    return t;
}

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& truths,
                          int n) {
    if (predictions.size() != truths.size() || predictions.empty())
        throw ContractError("confusion: predictions and truths must align and be non-empty");
    ConfusionMatrix cm(n);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int p = predictions[i];
        const int t = truths[i];
        if (p < 1 || p > n || t < 1 || t > n)
            throw ContractError("confusion: label out of range 1.." + std::to_string(n));
        ++cm.at(p, t);
    }
    return cm;
}

Rates se_sp_acc(const ConfusionMatrix& cm, int target_class) {
    if (target_class < 1 || target_class > cm.n)
        throw ParameterError("se_sp_acc: target class out of range");
    const long total = cm.total();
    long target_total = 0;
    for (int p = 1; p <= cm.n; ++p) target_total += cm.at(p, target_class);
    const long nontarget_total = total - target_total;
    if (target_total == 0 || nontarget_total == 0)
        throw MetricError("se_sp_acc: empty target or non-target population");

    const long tp = cm.at(target_class, target_class);
    long tn = 0;
    for (int p = 1; p <= cm.n; ++p) {
        if (p == target_class) continue;
        for (int t = 1; t <= cm.n; ++t) {
            if (t == target_class) continue;
            tn += cm.at(p, t);
        }
    }
    Rates r;
    r.se = static_cast<double>(tp) / static_cast<double>(target_total);
    r.sp = static_cast<double>(tn) / static_cast<double>(nontarget_total);
    r.acc = static_cast<double>(tp + tn) / static_cast<double>(total);
    return r;
}

double accuracy(const ConfusionMatrix& cm) {
    const long total = cm.total();
    if (total == 0) throw MetricError("accuracy: empty matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double kappa(const ConfusionMatrix& cm) {
    const long total = cm.total();
    if (total == 0) throw MetricError("kappa: empty matrix");
    const double p_o = static_cast<double>(cm.trace()) / static_cast<double>(total);
    double p_e = 0.0;
    for (int k = 1; k <= cm.n; ++k) {
        long row = 0, col = 0;
        for (int j = 1; j <= cm.n; ++j) {
            row += cm.at(k, j);
            col += cm.at(j, k);
        }
        p_e += static_cast<double>(row) * static_cast<double>(col);
    }
    p_e /= static_cast<double>(total) * static_cast<double>(total);
    if (p_e == 1.0) throw MetricError("kappa: degenerate matrix, p_e = 1");
    return (p_o - p_e) / (1.0 - p_e);
}

RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw ContractError("roc: scores and labels must align and be non-empty");
    long positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw ContractError("roc: scores must be finite");
        if (labels[i] != 0 && labels[i] != 1) throw ContractError("roc: labels must be 0 or 1");
        positives += labels[i];
    }
    const long negatives = static_cast<long>(scores.size()) - positives;
    if (positives == 0 || negatives == 0)
        throw ContractError("roc: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // all samples sharing one score move together
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] == 1) ++tp;
            else ++fp;
            ++j;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
        const auto& prev = curve.points.back();
        curve.auc += (fpr - prev.first) * (tpr + prev.second) / 2.0;
        curve.points.emplace_back(fpr, tpr);
        i = j;
    }
    return curve;
}

std::vector<int> assign_folds(const std::vector<LabeledImage>& dataset, int folds,
                              std::uint64_t master_seed) {
    if (folds < 2) throw ParameterError("assign_folds: folds must be >= 2");
    std::vector<int> fold_of(dataset.size(), -1);
    for (Grade g = 1; g <= 4; ++g) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].grade == g) idx.push_back(i);
        if (idx.empty()) continue;
        if (static_cast<int>(idx.size()) < folds)
            throw ProtocolError("assign_folds: grade " + std::to_string(g) + " has " +
                                std::to_string(idx.size()) + " samples, fewer than " +
                                std::to_string(folds) + " folds");
        Rng rng(derive_seed(master_seed, kFoldSalt, static_cast<std::uint64_t>(g)));
        rng.shuffle(idx);
        for (std::size_t k = 0; k < idx.size(); ++k)
            fold_of[idx[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (fold_of[i] < 0)
            throw ContractError("assign_folds: grade out of range at index " +
                                std::to_string(i));
    }
    return fold_of;
}

CvReport threefold_cv(const std::vector<LabeledImage>& dataset, const PipelineConfig& cfg) {
    cfg.validate();
    const std::vector<int> fold_of = assign_folds(dataset, cfg.folds, cfg.master_seed);

    CvReport report;
    report.fold_of = fold_of;
    report.predictions.assign(dataset.size(), 0);

    FeatureCache cache(dataset, cfg);
    std::vector<char> tested(dataset.size(), 0);
    for (int f = 0; f < cfg.folds; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            (fold_of[i] == f ? test_idx : train_idx).push_back(i);
        for (std::size_t i : test_idx)
            if (std::find(train_idx.begin(), train_idx.end(), i) != train_idx.end())
                throw ContractError("threefold_cv: fold leakage detected");
        if (train_idx.empty() || test_idx.empty())
            throw ProtocolError("threefold_cv: empty train or test fold");

        PipelineConfig fold_cfg = cfg;
        fold_cfg.master_seed = derive_seed(cfg.master_seed, kFoldTrainSalt,
                                           static_cast<std::uint64_t>(f));
        const TrainedCascade trained = train_cascade(cache, train_idx, fold_cfg);

        std::vector<int> preds, truths;
        for (std::size_t i : test_idx) {
            if (tested[i]) throw ContractError("threefold_cv: sample tested twice");
            tested[i] = 1;
            const Grade p = grade(trained.model, cache.image(i));
            report.predictions[i] = p;
            preds.push_back(p);
            truths.push_back(cache.label(i));
        }
        const ConfusionMatrix cm = confusion(preds, truths, 4);
        GroupMetrics gm;
        gm.group = std::to_string(f + 1);
        for (Grade c = 1; c <= 4; ++c) gm.per_class[static_cast<std::size_t>(c - 1)] = se_sp_acc(cm, c);
        gm.accuracy = accuracy(cm);
        report.groups.push_back(std::move(gm));
    }
    for (char t : tested)
        if (!t) throw ContractError("threefold_cv: sample never tested");

    std::vector<int> truths(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) truths[i] = dataset[i].grade;
    report.pooled = confusion(report.predictions, truths, 4);

    GroupMetrics total;
    total.group = "total";
    for (Grade c = 1; c <= 4; ++c)
        total.per_class[static_cast<std::size_t>(c - 1)] = se_sp_acc(report.pooled, c);
    total.accuracy = accuracy(report.pooled);
    report.groups.push_back(std::move(total));

    report.kappa_value = kappa(report.pooled);

    std::vector<int> p2(dataset.size()), t2(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        p2[i] = report.predictions[i] == 1 ? 1 : 2;
        t2[i] = truths[i] == 1 ? 1 : 2;
    }
    report.two_class = se_sp_acc(confusion(p2, t2, 2), 2);
    return report;
}

NoiseReport noise_robustness(const std::vector<LabeledImage>& dataset,
                             const PipelineConfig& cfg, const std::vector<NoiseSpec>& specs) {
    NoiseReport out;

    auto add_condition = [&out](const std::string& name, CvReport&& report) {
        NoiseRow row;
        row.name = name;
        for (Grade c = 1; c <= 4; ++c)
            row.se[static_cast<std::size_t>(c - 1)] = se_sp_acc(report.pooled, c).se;
        out.rows.push_back(std::move(row));
        out.reports.push_back(std::move(report));
    };

    add_condition("none", threefold_cv(dataset, cfg));

    for (std::size_t ci = 0; ci < specs.size(); ++ci) {
        NoiseSpec spec = specs[ci];
        spec.validate();
        std::vector<LabeledImage> corrupted;
        corrupted.reserve(dataset.size());
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            LabeledImage item = dataset[i];
            NoiseSpec per_image = spec;
            per_image.seed = derive_seed(cfg.master_seed, kNoiseSalt, ci + 1, i);
            item.image = add_noise(item.image, per_image);
            corrupted.push_back(std::move(item));
        }
        add_condition(spec.kind_name(), threefold_cv(corrupted, cfg));
    }
    return out;
}

RocProtocolResult roc_protocol(const std::vector<LabeledImage>& dataset,
                               const PipelineConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> train_idx, test_idx;
    for (Grade g = 1; g <= 4; ++g) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].grade == g) idx.push_back(i);
        if (idx.size() < 3)
            throw ProtocolError("roc_protocol: grade " + std::to_string(g) +
                                " needs at least 3 samples");
        Rng rng(derive_seed(cfg.master_seed, kSplitSalt, static_cast<std::uint64_t>(g)));
        rng.shuffle(idx);
        const std::size_t test_count = idx.size() / 3;
        for (std::size_t k = 0; k < idx.size(); ++k)
            (k < test_count ? test_idx : train_idx).push_back(idx[k]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    FeatureCache cache(dataset, cfg);
    const TrainedCascade trained = train_cascade(cache, train_idx, cfg);

    RocProtocolResult result;
    for (int s = 1; s <= 3; ++s) {
        const int t_opt = trained.report.best_threshold[static_cast<std::size_t>(s - 1)];
        result.optimal_threshold[static_cast<std::size_t>(s - 1)] = t_opt;
        const StageModel& stage = trained.model.stages[static_cast<std::size_t>(s - 1)];
        const MLP* mlp = nullptr;
        for (const StageClassifier& c : stage.classifiers)
            if (c.threshold == t_opt) mlp = &c.mlp;
        if (!mlp) throw ContractError("roc_protocol: optimal threshold missing from stage");

        std::vector<double> scores;
        std::vector<int> labels;
        for (std::size_t i : test_idx) {
            if (cache.label(i) < s) continue; // the cascade would have stopped earlier
            scores.push_back(forward(*mlp, cache.features(i, t_opt))[0]);
            labels.push_back(cache.label(i) == s ? 1 : 0);
        }
        result.curves[static_cast<std::size_t>(s - 1)] = roc(scores, labels);
    }
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_cv_csv(const std::string& path, const CvReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("write_cv_csv: cannot open " + path);
    out << "group,class,se,sp,acc\n";
    for (const GroupMetrics& gm : report.groups)
        for (int c = 1; c <= 4; ++c)
            out << gm.group << ',' << c << ','
                << fmt(gm.per_class[static_cast<std::size_t>(c - 1)].se) << ','
                << fmt(gm.per_class[static_cast<std::size_t>(c - 1)].sp) << ','
                << fmt(gm.accuracy) << '\n';
    if (!out) throw IoError("write_cv_csv: write failed for " + path);
}

void write_roc_csv(const std::string& path, const RocCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("write_roc_csv: cannot open " + path);
    out << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points) out << fmt(fpr) << ',' << fmt(tpr) << '\n';
    if (!out) throw IoError("write_roc_csv: write failed for " + path);
}

void write_noise_csv(const std::string& path, const NoiseReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("write_noise_csv: cannot open " + path);
    out << "noise,class,se\n";
    for (const NoiseRow& row : report.rows)
        for (int c = 1; c <= 4; ++c)
            out << row.name << ',' << c << ',' << fmt(row.se[static_cast<std::size_t>(c - 1)])
                << '\n';
    if (!out) throw IoError("write_noise_csv: write failed for " + path);
}

} // namespace retina
