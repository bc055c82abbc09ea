#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cel/errors.hpp"
#include "cel/rng.hpp"
#include "cel/svm.hpp"

namespace cel {

inline constexpr double kSlopeMin = -100.0;
inline constexpr double kSlopeMax = -1e-4;

// Per-user model: SVM decision function plus a single calibration slope A,
// p(y|x) = 1 / (1 + exp(y * A * f(x))). A < 0, so larger f means larger
// p(+1|x) and the decision boundary f(x) = 0 is preserved.
struct PreferenceModel {
    SvmModel svm;
    double slope = kSlopeMin;
    std::string user_id;
    std::size_t trained_on = 0;
};

inline double sigmoid_prob(double slope, double f, int y) {
    const double z = y * slope * f;
    return 1.0 / (1.0 + std::exp(z));
}

inline double predict_prob(const PreferenceModel& model, const FeatureVector& x, int y) {
    return sigmoid_prob(model.slope, decision_value(model.svm, x), y);
}

namespace detail {

// log(1 + exp(z)) without overflow
inline double softplus(double z) {
    if (z > 35.0) return z;
    if (z < -35.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

// Negative log-likelihood of labels under slope A on (f, y) pairs.
inline double slope_nll(double slope, std::span<const std::pair<double, int>> pairs) {
    double nll = 0.0;
    for (const auto& [f, y] : pairs)
        nll += softplus(y * slope * f);
    return nll;
}

// Minimize the (convex) held-out NLL over the clamp interval: golden-section
// search, then a dense scan around the bracket.
inline double fit_slope_1d(std::span<const std::pair<double, int>> pairs) {
    constexpr double phi = 0.6180339887498949;
    double lo = kSlopeMin, hi = kSlopeMax;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = slope_nll(x1, pairs);
    double f2 = slope_nll(x2, pairs);
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = slope_nll(x1, pairs);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = slope_nll(x2, pairs);
        }
    }
    double best = std::clamp(0.5 * (lo + hi), kSlopeMin, kSlopeMax);
    double best_nll = slope_nll(best, pairs);
    // local refinement around the bracket, plus the clamp endpoints
    const double width = std::max(hi - lo, 1e-9);
    for (int k = -50; k <= 50; ++k) {
        const double a = std::clamp(best + k * width / 50.0, kSlopeMin, kSlopeMax);
        const double v = slope_nll(a, pairs);
        if (v < best_nll) { best_nll = v; best = a; }
    }
    for (double a : {kSlopeMin, kSlopeMax}) {
        const double v = slope_nll(a, pairs);
        if (v < best_nll) { best_nll = v; best = a; }
    }
    return best;
}

} // namespace detail

// Fit the calibration slope by three-fold stratified cross-validation: train
// an SVM per fold-out split, pool the held-out decision values, and maximize
// the pooled likelihood in A. The returned model's SVM is trained on all
// data. If any class has fewer than 3 examples the folds cannot all be
// stratified, and A is fit on the full-data training outputs instead.
inline PreferenceModel fit_slope(const std::string& user_id,
                                 std::span<const TrainingExample> data,
                                 const SvmParams& params,
                                 const KernelConfig& kernel_cfg,
                                 std::uint64_t seed) {
    SvmModel full = train_svm(data, params, kernel_cfg);

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < data.size(); ++i)
        (data[i].y == 1 ? pos_idx : neg_idx).push_back(i);

    std::vector<std::pair<double, int>> pairs;
    if (pos_idx.size() >= 3 && neg_idx.size() >= 3) {
        Rng rng(Rng::derive(seed, fnv1a64(user_id)));
        rng.shuffle(pos_idx);
        rng.shuffle(neg_idx);
        std::vector<int> fold(data.size(), 0);
        for (std::size_t k = 0; k < pos_idx.size(); ++k) fold[pos_idx[k]] = static_cast<int>(k % 3);
        for (std::size_t k = 0; k < neg_idx.size(); ++k) fold[neg_idx[k]] = static_cast<int>(k % 3);
        for (int held = 0; held < 3; ++held) {
            std::vector<TrainingExample> train_part;
            for (std::size_t i = 0; i < data.size(); ++i)
                if (fold[i] != held) train_part.push_back(data[i]);
            SvmModel m = train_svm(train_part, params, kernel_cfg);
            for (std::size_t i = 0; i < data.size(); ++i)
                if (fold[i] == held)
                    pairs.emplace_back(decision_value(m, data[i].x), data[i].y);
        }
    } else {
        for (const auto& ex : data)
            pairs.emplace_back(decision_value(full, ex.x), ex.y);
    }

    PreferenceModel model;
    model.svm = std::move(full);
    model.slope = detail::fit_slope_1d(pairs);
    model.user_id = user_id;
    model.trained_on = data.size();
    return model;
}

} // namespace cel
