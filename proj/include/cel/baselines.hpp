#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cel/ensemble.hpp"

namespace cel {

struct RatingsMatrix {
    std::vector<UserRatings> users;
    std::set<std::string> item_universe;

    static RatingsMatrix from_users(std::vector<UserRatings> users) {
        RatingsMatrix m;
        std::set<std::string> seen;
        for (const auto& u : users) {
            if (!seen.insert(u.user_id).second)
                throw InputError("RatingsMatrix: duplicate user id: " + u.user_id);
            for (const auto& [item, y] : u.ratings)
                m.item_universe.insert(item);
        }
        m.users = std::move(users);
        return m;
    }
};

namespace detail {

inline double mean_rating(const UserRatings& u) {
    if (u.ratings.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [item, y] : u.ratings) s += y;
    return s / static_cast<double>(u.ratings.size());
}

} // namespace detail

// Pearson correlation over co-rated items, each user centered by their mean
// over the co-rated set. Degenerate cases (fewer than 2 co-rated items, zero
// variance) return 0.
inline double pearson_weight(const UserRatings& a, const UserRatings& i) {
    std::vector<std::pair<int, int>> shared;
    for (const auto& [item, ya] : a.ratings) {
        auto it = i.ratings.find(item);
        if (it != i.ratings.end()) shared.emplace_back(ya, it->second);
    }
    if (shared.size() < 2) return 0.0;
    const double n = static_cast<double>(shared.size());
    double ma = 0.0, mi = 0.0;
    for (const auto& [ya, yi] : shared) { ma += ya; mi += yi; }
    ma /= n;
    mi /= n;
    double num = 0.0, va = 0.0, vi = 0.0;
    for (const auto& [ya, yi] : shared) {
        num += (ya - ma) * (yi - mi);
        va += (ya - ma) * (ya - ma);
        vi += (yi - mi) * (yi - mi);
    }
    if (va == 0.0 || vi == 0.0) return 0.0;
    return num / std::sqrt(va * vi);
}

// Memory-based CF score for the active user on one item:
//   vbar_a + sum_i w(a,i) (v_ij - vbar_i) / sum_i |w(a,i)|
// over users i who rated the item with nonzero weight. No such user (the
// non-rated-item failure mode) falls back to the active user's mean. The
// raw formula can leave the rating range when vbar_a and the weighted
// deviation push the same way, so the score is clamped to [-1, 1].
inline double cf_predict(const RatingsMatrix& matrix,
                         const UserRatings& active,
                         const std::string& item_id) {
    if (!matrix.item_universe.count(item_id))
        throw InputError("cf_predict: unknown item: " + item_id);
    const double vbar_a = detail::mean_rating(active);
    double num = 0.0, denom = 0.0;
    for (const auto& u : matrix.users) {
        if (u.user_id == active.user_id) continue;
        auto it = u.ratings.find(item_id);
        if (it == u.ratings.end()) continue;
        const double w = pearson_weight(active, u);
        if (w == 0.0) continue;
        num += w * (it->second - detail::mean_rating(u));
        denom += std::abs(w);
    }
    if (denom == 0.0) return vbar_a;
    return std::clamp(vbar_a + num / denom, -1.0, 1.0);
}

// Pure content-based model: a single PreferenceModel trained on the query
// user's own ratings. Equivalent to an L=1 ensemble.
inline PreferenceModel cbf_train(const UserRatings& query,
                                 const ItemCatalog& catalog,
                                 const SvmParams& params,
                                 const KernelConfig& kernel_cfg,
                                 std::uint64_t seed) {
    auto examples = detail::resolve_examples(query, catalog);
    return fit_slope(query.user_id, examples, params, kernel_cfg, seed);
}

inline double cbf_predict(const UserRatings& query,
                          const ItemCatalog& catalog,
                          const SvmParams& params,
                          const KernelConfig& kernel_cfg,
                          const std::string& item_id,
                          std::uint64_t seed) {
    PreferenceModel model = cbf_train(query, catalog, params, kernel_cfg, seed);
    return predict_prob(model, catalog.at(item_id), +1);
}

// Shared ranking helper so every method uses the identical tie-break.
template <typename ScoreFn>
std::vector<std::pair<std::string, double>> rank_by_score(
    const std::vector<std::string>& candidates, ScoreFn&& score) {
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(candidates.size());
    for (const auto& id : candidates) scored.emplace_back(id, score(id));
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return scored;
}

} // namespace cel
