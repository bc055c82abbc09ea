#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cel/errors.hpp"
#include "cel/features.hpp"

namespace cel {

struct SvmParams {
    double C = 1.0;
    double kkt_tolerance = 1e-3;
    std::size_t max_passes = 0; // 0 means 1000 * n pair updates

    std::size_t update_cap(std::size_t n) const {
        return max_passes > 0 ? max_passes : 1000 * n;
    }
};

struct TrainingExample {
    std::string item_id;
    FeatureVector x;
    int y = 0; // +1 or -1
};

struct SvmModel {
    struct SupportItem {
        std::string item_id;
        FeatureVector x;
        int y = 0;
        double alpha = 0.0;
    };
    std::vector<SupportItem> support;
    double bias = 0.0;
    double C = 1.0;
    KernelConfig kernel;
    bool converged = true;
};

inline double decision_value(const SvmModel& model, const FeatureVector& x) {
    double f = model.bias;
    for (const auto& sv : model.support)
        f += sv.y * sv.alpha * kernel(model.kernel, sv.x, x);
    return f;
}

// Value of the standard dual W(alpha) = sum alpha - 1/2 sum y y' a a' K.
inline double dual_objective(const SvmModel& model) {
    const std::size_t n = model.support.size();
    double sum_alpha = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_alpha += model.support[i].alpha;
        for (std::size_t j = 0; j < n; ++j) {
            quad += model.support[i].y * model.support[j].y *
                    model.support[i].alpha * model.support[j].alpha *
                    kernel(model.kernel, model.support[i].x, model.support[j].x);
        }
    }
    return sum_alpha - 0.5 * quad;
}

// Soft-margin C-SVM trained by SMO. Working pair is the maximal violating
// pair with lowest-index tie-break, so training is fully deterministic.
inline SvmModel train_svm(std::span<const TrainingExample> data,
                          const SvmParams& params,
                          const KernelConfig& kernel_cfg) {
    const std::size_t n = data.size();
    if (n < 2)
        throw InputError("train_svm: need at least 2 examples");

    std::set<std::string> ids;
    bool has_pos = false, has_neg = false;
    for (const auto& ex : data) {
        if (ex.y != 1 && ex.y != -1)
            throw InputError("train_svm: labels must be +1 or -1");
        if (!ids.insert(ex.item_id).second)
            throw InputError("train_svm: duplicate item id: " + ex.item_id);
        (ex.y == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw SingleClassError("train_svm: both classes required");

    std::vector<FeatureVector> xs;
    xs.reserve(n);
    for (const auto& ex : data) xs.push_back(ex.x);
    const GramMatrix gram = gram_matrix(kernel_cfg, xs);

    const double C = params.C;
    const double tol = params.kkt_tolerance;
    std::vector<double> alpha(n, 0.0);
    // grad_i = d/d alpha_i of (1/2 a'Qa - e'a) with Q_ij = y_i y_j K_ij
    std::vector<double> grad(n, -1.0);

    bool converged = false;
    const std::size_t cap = params.update_cap(n);
    for (std::size_t iter = 0; iter < cap; ++iter) {
        // maximal violating pair:
        //   i = argmax over I_up of -y_i grad_i,  j = argmin over I_low
        std::size_t i = n, j = n;
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const int y = data[t].y;
            const double v = -y * grad[t];
            const bool in_up = (y == 1 && alpha[t] < C) || (y == -1 && alpha[t] > 0);
            const bool in_low = (y == 1 && alpha[t] > 0) || (y == -1 && alpha[t] < C);
            if (in_up && v > g_max) { g_max = v; i = t; }
            if (in_low && v < g_min) { g_min = v; j = t; }
        }
        if (i == n || j == n || g_max - g_min < tol) {
            converged = true;
            break;
        }

        // step along direction d_i = y_i, d_j = -y_j (preserves sum y alpha)
        const int yi = data[i].y, yj = data[j].y;
        double eta = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
        if (eta <= 1e-12) eta = 1e-12; // flat direction: step to the box edge

        const double t_i = yi == 1 ? C - alpha[i] : alpha[i];
        const double t_j = yj == 1 ? alpha[j] : C - alpha[j];
        const double step = std::min({(g_max - g_min) / eta, t_i, t_j});
        if (step < 1e-15) {
            // numerical stall: the most violating pair cannot move
            converged = false;
            break;
        }
        const double dai = yi * step;
        const double daj = -yj * step;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += data[t].y * (yi * dai * gram(i, t) + yj * daj * gram(j, t));
        alpha[i] = std::clamp(alpha[i] + dai, 0.0, C);
        alpha[j] = std::clamp(alpha[j] + daj, 0.0, C);
        // a box-limited step must land exactly on the bound, or the variable
        // stays a rounding error inside the box and stalls the working pair
        for (std::size_t t : {i, j}) {
            if (alpha[t] < 1e-12 * C) alpha[t] = 0.0;
            else if (alpha[t] > (1.0 - 1e-12) * C) alpha[t] = C;
        }
    }

    // bias: mean of y_k - f0(x_k) over free SVs, else midpoint of the
    // KKT-feasible interval. f0 is the decision value without bias;
    // note y_k - f0(x_k) = -y_k grad_k.
    double bias = 0.0;
    std::size_t n_free = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double r = -data[t].y * grad[t];
        if (alpha[t] > 0.0 && alpha[t] < C) {
            bias += r;
            ++n_free;
        } else {
            const bool bounds_below = (data[t].y == 1 && alpha[t] == 0.0) ||
                                      (data[t].y == -1 && alpha[t] == C);
            if (bounds_below) lower = std::max(lower, r);
            else upper = std::min(upper, r);
        }
    }
    if (n_free > 0) {
        bias /= static_cast<double>(n_free);
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
        bias = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
        bias = lower;
    } else if (std::isfinite(upper)) {
        bias = upper;
    }

    SvmModel model;
    model.bias = bias;
    model.C = C;
    model.kernel = kernel_cfg;
    model.converged = converged;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0)
            model.support.push_back({data[t].item_id, data[t].x, data[t].y, alpha[t]});
    }
    return model;
}

} // namespace cel
