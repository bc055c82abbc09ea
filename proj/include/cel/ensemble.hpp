#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cel/calibration.hpp"
#include "cel/errors.hpp"
#include "cel/features.hpp"

namespace cel {

// Per-rating probability clamp before taking logs: one confident-wrong
// member rating must not drive a weight to exactly zero (or NaN).
inline constexpr double kProbClamp = 1e-12;

struct UserRatings {
    std::string user_id;
    std::map<std::string, int> ratings; // item id -> +1 / -1

    bool has_both_classes() const {
        bool pos = false, neg = false;
        for (const auto& [id, y] : ratings) (y == 1 ? pos : neg) = true;
        return pos && neg;
    }
};

// Immutable value; add_user / retrain_user return updated copies. The member
// list realizes the empirical prior: one trained model per known user.
struct EnsembleModel {
    std::vector<PreferenceModel> members;
    std::vector<std::string> pending; // users without trainable data yet
    KernelConfig kernel;
    SvmParams params;
    std::string catalog_id;

    std::size_t size() const { return members.size(); }
};

struct WeightResult {
    std::vector<double> weights; // simplex over members
    double log_evidence = 0.0;   // log of the ensemble-mean query likelihood
};

struct PredictionResult {
    double prob_like = 0.5;
    std::vector<double> weights;
    double log_evidence = 0.0;
};

// log p(D_q | member) = sum over rated items of log p(y | x, member),
// probabilities clamped to [kProbClamp, 1 - kProbClamp].
inline double log_likelihood(const PreferenceModel& member,
                             const UserRatings& query,
                             const ItemCatalog& catalog) {
    double ll = 0.0;
    for (const auto& [item_id, y] : query.ratings) {
        const double p = predict_prob(member, catalog.at(item_id), y);
        ll += std::log(std::clamp(p, kProbClamp, 1.0 - kProbClamp));
    }
    return ll;
}

inline double logsumexp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// Mixture weights w_i proportional to p(D_q | member_i), computed entirely
// in log space. log_evidence reports the mean likelihood (the 1/L of the
// empirical prior is kept here; it cancels in the weights).
inline WeightResult ensemble_weights(const EnsembleModel& ensemble,
                                     const UserRatings& query,
                                     const ItemCatalog& catalog) {
    if (ensemble.members.empty())
        throw StateError("ensemble_weights: empty ensemble");
    std::vector<double> ll(ensemble.members.size());
    for (std::size_t i = 0; i < ensemble.members.size(); ++i)
        ll[i] = log_likelihood(ensemble.members[i], query, catalog);
    const double lse = logsumexp(ll);
    WeightResult out;
    out.weights.resize(ll.size());
    for (std::size_t i = 0; i < ll.size(); ++i)
        out.weights[i] = std::exp(ll[i] - lse);
    out.log_evidence = lse - std::log(static_cast<double>(ll.size()));
    return out;
}

inline double mixture_prob(const EnsembleModel& ensemble,
                           const std::vector<double>& weights,
                           const FeatureVector& x) {
    double p = 0.0;
    for (std::size_t i = 0; i < ensemble.members.size(); ++i)
        p += weights[i] * predict_prob(ensemble.members[i], x, +1);
    return p;
}

inline PredictionResult predict(const EnsembleModel& ensemble,
                                const UserRatings& query,
                                const FeatureVector& x,
                                const ItemCatalog& catalog) {
    WeightResult w = ensemble_weights(ensemble, query, catalog);
    PredictionResult out;
    out.prob_like = mixture_prob(ensemble, w.weights, x);
    out.weights = std::move(w.weights);
    out.log_evidence = w.log_evidence;
    return out;
}

inline PredictionResult predict(const EnsembleModel& ensemble,
                                const UserRatings& query,
                                const std::string& item_id,
                                const ItemCatalog& catalog) {
    return predict(ensemble, query, catalog.at(item_id), catalog);
}

// Descending by score, ties broken by ascending item id. Candidates must
// not overlap the query's rated items.
inline std::vector<std::pair<std::string, double>> rank_items(
    const EnsembleModel& ensemble,
    const UserRatings& query,
    const std::vector<std::string>& candidates,
    const ItemCatalog& catalog) {
    for (const auto& id : candidates)
        if (query.ratings.count(id))
            throw InputError("rank_items: candidate " + id + " already rated in query");
    WeightResult w = ensemble_weights(ensemble, query, catalog);
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(candidates.size());
    for (const auto& id : candidates)
        scored.emplace_back(id, mixture_prob(ensemble, w.weights, catalog.at(id)));
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return scored;
}

namespace detail {

inline std::vector<TrainingExample> resolve_examples(const UserRatings& data,
                                                     const ItemCatalog& catalog) {
    std::vector<TrainingExample> out;
    out.reserve(data.ratings.size());
    for (const auto& [item_id, y] : data.ratings)
        out.push_back({item_id, catalog.at(item_id), y});
    return out;
}

} // namespace detail

struct AddResult {
    EnsembleModel ensemble;
    bool trained = false; // false: recorded as pending
};

// Append a newly trained member; single-class or undersized data parks the
// user as pending. Existing members are untouched (no global retraining).
inline AddResult add_user(const EnsembleModel& ensemble,
                          const UserRatings& data,
                          const ItemCatalog& catalog,
                          std::uint64_t seed) {
    for (const auto& m : ensemble.members)
        if (m.user_id == data.user_id)
            throw InputError("add_user: duplicate user id: " + data.user_id);
    for (const auto& p : ensemble.pending)
        if (p == data.user_id)
            throw InputError("add_user: user already pending: " + data.user_id);

    AddResult out{ensemble, false};
    if (data.ratings.size() >= 2 && data.has_both_classes()) {
        auto examples = detail::resolve_examples(data, catalog);
        out.ensemble.members.push_back(
            fit_slope(data.user_id, examples, ensemble.params, ensemble.kernel, seed));
        out.trained = true;
    } else {
        out.ensemble.pending.push_back(data.user_id);
    }
    return out;
}

// Replace (or promote from pending) one user's model, trained on the full
// updated data. All other members are left bit-identical.
inline AddResult retrain_user(const EnsembleModel& ensemble,
                              const std::string& user_id,
                              const UserRatings& data,
                              const ItemCatalog& catalog,
                              std::uint64_t seed) {
    auto member_it = std::find_if(ensemble.members.begin(), ensemble.members.end(),
                                  [&](const PreferenceModel& m) { return m.user_id == user_id; });
    auto pending_it = std::find(ensemble.pending.begin(), ensemble.pending.end(), user_id);
    if (member_it == ensemble.members.end() && pending_it == ensemble.pending.end())
        throw InputError("retrain_user: unknown user: " + user_id);

    AddResult out{ensemble, false};
    const bool trainable = data.ratings.size() >= 2 && data.has_both_classes();
    if (member_it != ensemble.members.end()) {
        const std::size_t idx = static_cast<std::size_t>(member_it - ensemble.members.begin());
        if (trainable) {
            auto examples = detail::resolve_examples(data, catalog);
            out.ensemble.members[idx] =
                fit_slope(user_id, examples, ensemble.params, ensemble.kernel, seed);
            out.trained = true;
        }
        // untrainable data keeps the existing model
    } else {
        out.ensemble.pending.erase(
            std::find(out.ensemble.pending.begin(), out.ensemble.pending.end(), user_id));
        return add_user(out.ensemble, data, catalog, seed);
    }
    return out;
}

} // namespace cel
