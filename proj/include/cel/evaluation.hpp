#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cel/baselines.hpp"
#include "cel/ensemble.hpp"
#include "cel/rng.hpp"

namespace cel {

enum class Method { ensemble, cf, cbf };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::ensemble: return "ensemble";
    case Method::cf: return "cf";
    case Method::cbf: return "cbf";
    }
    return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
    if (s == "ensemble") return Method::ensemble;
    if (s == "cf") return Method::cf;
    if (s == "cbf") return Method::cbf;
    return std::nullopt;
}

// |top-n of ranked ∩ relevant| / n. An empty ranking scores 0; if fewer than
// n items are ranked the shortfall still divides by n.
inline double precision_at_n(const std::vector<std::string>& ranked,
                             const std::set<std::string>& relevant,
                             std::size_t n) {
    if (n < 1) throw InputError("precision_at_n: n must be >= 1");
    if (ranked.empty()) return 0.0;
    const std::size_t take = std::min(n, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < take; ++i)
        if (relevant.count(ranked[i])) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n);
}

struct SynthConfig {
    std::size_t n_train_users = 0;
    std::size_t n_test_users = 0;
    std::size_t examples_per_train_user = 5; // E
    std::map<std::string, std::set<std::string>> categories; // category -> item ids
    std::uint64_t seed = 0;
};

// A query user together with their full relevance ground truth. For the
// synthetic text protocol `full` labels every catalog item by category
// membership; for the leave-one-out protocol it holds the user's actual
// ratings and unrated items count as non-relevant.
struct TestUser {
    UserRatings full;
    std::set<std::string> relevant;
};

struct SynthUsers {
    std::vector<UserRatings> train;
    std::vector<std::string> train_categories; // parallel to train
    std::vector<TestUser> test;
    std::vector<std::string> test_categories;  // parallel to test
};

// Each user is assigned one category uniformly; training users rate E items
// drawn uniformly without replacement, labelled +1 iff the item belongs to
// the user's category, resampling until both labels are present. Test users
// carry the full catalog labelling for their category.
inline SynthUsers generate_synthetic_users(const SynthConfig& cfg, const ItemCatalog& catalog) {
    if (cfg.categories.size() < 2)
        throw InputError("generate_synthetic_users: need at least 2 categories");
    if (cfg.examples_per_train_user < 2)
        throw InputError("generate_synthetic_users: E must be >= 2");

    std::vector<std::string> item_ids;
    item_ids.reserve(catalog.items.size());
    for (const auto& [id, v] : catalog.items) item_ids.push_back(id);
    if (cfg.examples_per_train_user > item_ids.size())
        throw InputError("generate_synthetic_users: E exceeds catalog size");

    std::vector<std::string> category_names;
    for (const auto& [name, items] : cfg.categories) {
        if (items.empty())
            throw InputError("generate_synthetic_users: empty category " + name);
        category_names.push_back(name);
    }

    Rng rng(cfg.seed);
    SynthUsers out;

    auto draw_category = [&]() {
        return category_names[rng.next_below(category_names.size())];
    };

    constexpr int kMaxRetries = 50;
    for (std::size_t u = 0; u < cfg.n_train_users; ++u) {
        const std::string category = draw_category();
        const auto& members = cfg.categories.at(category);
        UserRatings ratings;
        ratings.user_id = "train_" + std::to_string(u);
        bool ok = false;
        for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
            ratings.ratings.clear();
            std::vector<std::string> pool = item_ids;
            rng.shuffle(pool);
            for (std::size_t k = 0; k < cfg.examples_per_train_user; ++k)
                ratings.ratings[pool[k]] = members.count(pool[k]) ? +1 : -1;
            ok = ratings.has_both_classes();
        }
        if (!ok)
            throw InputError("generate_synthetic_users: cannot draw mixed labels for category " +
                             category);
        out.train.push_back(std::move(ratings));
        out.train_categories.push_back(category);
    }

    for (std::size_t u = 0; u < cfg.n_test_users; ++u) {
        const std::string category = draw_category();
        const auto& members = cfg.categories.at(category);
        TestUser t;
        t.full.user_id = "test_" + std::to_string(u);
        for (const auto& id : item_ids) {
            const bool rel = members.count(id) > 0;
            t.full.ratings[id] = rel ? +1 : -1;
            if (rel) t.relevant.insert(id);
        }
        out.test.push_back(std::move(t));
        out.test_categories.push_back(category);
    }
    return out;
}

struct EvalConfig {
    std::vector<std::size_t> budgets{2, 5, 10, 20, 50, 100};
    std::size_t top_n = 20;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
    // require every sampled query to contain both classes regardless of
    // method, as in the synthetic-user protocol; content-based filtering
    // requires this anyway
    bool force_both_class_queries = false;

    void validate() const {
        if (budgets.empty()) throw InputError("EvalConfig: budgets empty");
        for (std::size_t i = 1; i < budgets.size(); ++i)
            if (budgets[i] <= budgets[i - 1])
                throw InputError("EvalConfig: budgets must be strictly increasing");
        if (top_n < 1) throw InputError("EvalConfig: top_n must be >= 1");
        if (repetitions < 1) throw InputError("EvalConfig: repetitions must be >= 1");
    }
};

struct LearningCurveReport {
    struct Row {
        std::size_t budget = 0;
        double mean_precision = 0.0;
        double std_err = 0.0;
        std::size_t n_evaluated = 0;
        std::size_t n_skipped = 0;
    };
    std::vector<Row> rows;
};

namespace detail {

// Raw precision values for one budget, before aggregation.
struct BudgetCells {
    std::vector<double> values;
    std::size_t skipped = 0;

    double mean() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
    // sample standard deviation / sqrt(n)
    double std_err() const {
        if (values.size() < 2) return 0.0;
        const double m = mean();
        double ss = 0.0;
        for (double v : values) ss += (v - m) * (v - m);
        return std::sqrt(ss / static_cast<double>(values.size() - 1)) /
               std::sqrt(static_cast<double>(values.size()));
    }
};

// Draw `budget` items from the user's rated set; when both classes are
// required, resample up to the retry bound.
inline std::optional<UserRatings> sample_query(const TestUser& user, std::size_t budget,
                                               bool need_both_classes, Rng& rng) {
    std::vector<std::string> rated;
    rated.reserve(user.full.ratings.size());
    for (const auto& [id, y] : user.full.ratings) rated.push_back(id);
    constexpr int kMaxRetries = 50;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        rng.shuffle(rated);
        UserRatings q;
        q.user_id = user.full.user_id;
        for (std::size_t k = 0; k < budget; ++k)
            q.ratings[rated[k]] = user.full.ratings.at(rated[k]);
        if (!need_both_classes || q.has_both_classes()) return q;
    }
    return std::nullopt;
}

} // namespace detail

// Train one PreferenceModel per trainable train user; the base ensemble for
// the learning-curve and leave-one-out protocols.
inline EnsembleModel build_ensemble(const std::vector<UserRatings>& train_users,
                                    const ItemCatalog& catalog,
                                    const SvmParams& params,
                                    const KernelConfig& kernel_cfg,
                                    std::uint64_t seed,
                                    const std::string& catalog_id = "") {
    EnsembleModel ensemble;
    ensemble.kernel = kernel_cfg;
    ensemble.params = params;
    ensemble.catalog_id = catalog_id;
    for (const auto& u : train_users) {
        AddResult r = add_user(ensemble, u, catalog, seed);
        ensemble = std::move(r.ensemble);
    }
    return ensemble;
}

namespace detail {

// Core learning-curve loop: for each budget and each (test user, repetition)
// cell, draw a query subset, rank all catalog items outside the query, and
// score precision@top_n. Cells whose budget exceeds the user's rating count,
// or where required both-class sampling fails, are skipped and counted.
// `user_offset` keeps cell seeds distinct across leave-one-out folds.
inline std::vector<BudgetCells> learning_curve_cells(
    Method method,
    const std::vector<UserRatings>& train_users,
    const std::vector<TestUser>& test_users,
    const ItemCatalog& catalog,
    const EvalConfig& cfg,
    const SvmParams& params,
    const KernelConfig& kernel_cfg,
    std::size_t user_offset = 0) {
    cfg.validate();
    EnsembleModel base;
    RatingsMatrix base_matrix;
    if (method == Method::ensemble) {
        base = build_ensemble(train_users, catalog, params, kernel_cfg, cfg.seed);
        if (base.members.empty())
            throw StateError("learning curve: no trainable train users");
    } else if (method == Method::cf) {
        base_matrix = RatingsMatrix::from_users(train_users);
        for (const auto& [id, v] : catalog.items) base_matrix.item_universe.insert(id);
    }

    std::vector<std::string> all_items;
    all_items.reserve(catalog.items.size());
    for (const auto& [id, v] : catalog.items) all_items.push_back(id);

    const bool need_both = cfg.force_both_class_queries || method == Method::cbf;
    std::vector<BudgetCells> out(cfg.budgets.size());
    for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
        const std::size_t budget = cfg.budgets[bi];
        for (std::size_t ui = 0; ui < test_users.size(); ++ui) {
            const TestUser& user = test_users[ui];
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                if (budget > user.full.ratings.size()) {
                    ++out[bi].skipped;
                    continue;
                }
                const std::uint64_t cell =
                    (bi * 0x100000ULL + user_offset + ui) * cfg.repetitions + rep;
                Rng rng(Rng::derive(cfg.seed, cell));
                auto query = sample_query(user, budget, need_both, rng);
                if (!query) {
                    ++out[bi].skipped;
                    continue;
                }
                std::vector<std::string> candidates;
                candidates.reserve(all_items.size());
                for (const auto& id : all_items)
                    if (!query->ratings.count(id)) candidates.push_back(id);

                std::vector<std::pair<std::string, double>> ranked;
                if (method == Method::ensemble) {
                    // query users are disjoint from the member users; their
                    // ratings only steer the mixture weights
                    ranked = rank_items(base, *query, candidates, catalog);
                } else if (method == Method::cf) {
                    RatingsMatrix m = base_matrix;
                    m.users.push_back(*query);
                    ranked = rank_by_score(candidates, [&](const std::string& id) {
                        return cf_predict(m, *query, id);
                    });
                } else {
                    PreferenceModel model =
                        cbf_train(*query, catalog, params, kernel_cfg, cfg.seed);
                    ranked = rank_by_score(candidates, [&](const std::string& id) {
                        return predict_prob(model, catalog.at(id), +1);
                    });
                }
                std::vector<std::string> ranked_ids;
                ranked_ids.reserve(ranked.size());
                for (const auto& [id, score] : ranked) ranked_ids.push_back(id);
                out[bi].values.push_back(precision_at_n(ranked_ids, user.relevant, cfg.top_n));
            }
        }
    }
    return out;
}

inline LearningCurveReport aggregate(const std::vector<std::size_t>& budgets,
                                     const std::vector<BudgetCells>& cells) {
    LearningCurveReport report;
    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        LearningCurveReport::Row row;
        row.budget = budgets[bi];
        row.n_evaluated = cells[bi].values.size();
        row.n_skipped = cells[bi].skipped;
        if (!cells[bi].values.empty()) {
            row.mean_precision = cells[bi].mean();
            row.std_err = cells[bi].std_err();
        } else {
            row.mean_precision = std::numeric_limits<double>::quiet_NaN();
            row.std_err = std::numeric_limits<double>::quiet_NaN();
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace detail

inline LearningCurveReport run_learning_curve(Method method,
                                              const std::vector<UserRatings>& train_users,
                                              const std::vector<TestUser>& test_users,
                                              const ItemCatalog& catalog,
                                              const EvalConfig& cfg,
                                              const SvmParams& params,
                                              const KernelConfig& kernel_cfg) {
    return detail::aggregate(
        cfg.budgets,
        detail::learning_curve_cells(method, train_users, test_users, catalog, cfg, params,
                                     kernel_cfg));
}

// Leave-one-out protocol: each user becomes the query user once, all others
// form the data base. Relevance is the held-out user's +1-rated items;
// unrated items count as non-relevant, so measured precision is a lower
// bound on the true value.
inline LearningCurveReport run_loo_protocol(const RatingsMatrix& all_users,
                                            const ItemCatalog& catalog,
                                            const EvalConfig& cfg,
                                            Method method,
                                            const SvmParams& params,
                                            const KernelConfig& kernel_cfg) {
    if (all_users.users.size() < 2)
        throw InputError("run_loo_protocol: need at least 2 users");
    cfg.validate();

    std::vector<detail::BudgetCells> pooled(cfg.budgets.size());
    for (std::size_t fold = 0; fold < all_users.users.size(); ++fold) {
        std::vector<UserRatings> train;
        for (std::size_t i = 0; i < all_users.users.size(); ++i)
            if (i != fold) train.push_back(all_users.users[i]);
        TestUser held;
        held.full = all_users.users[fold];
        for (const auto& [id, y] : held.full.ratings)
            if (y == 1) held.relevant.insert(id);

        auto cells = detail::learning_curve_cells(method, train, {held}, catalog, cfg, params,
                                                  kernel_cfg, fold);
        for (std::size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
            pooled[bi].skipped += cells[bi].skipped;
            pooled[bi].values.insert(pooled[bi].values.end(), cells[bi].values.begin(),
                                     cells[bi].values.end());
        }
    }
    return detail::aggregate(cfg.budgets, pooled);
}

struct TuneResult {
    double C = 1.0;
    KernelConfig kernel;
    // parallel to the grid: mean LOO error per grid point
    std::vector<double> errors;
};

// Shared-hyperparameter tuning: exact leave-one-out classification error per
// user model (retraining per left-out rating), averaged over users. When a
// fold leaves a single class, its prediction defaults to the majority label
// of the remaining points. Ties go to smaller C, then smaller gamma.
inline TuneResult tune_shared_hyperparams(
    const std::vector<UserRatings>& train_users,
    const ItemCatalog& catalog,
    const std::vector<std::pair<double, KernelConfig>>& grid) {
    if (grid.empty())
        throw InputError("tune_shared_hyperparams: empty grid");
    if (train_users.empty())
        throw InputError("tune_shared_hyperparams: no train users");

    TuneResult result;
    result.errors.reserve(grid.size());
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& [C, kcfg] = grid[g];
        SvmParams params;
        params.C = C;
        double total_error = 0.0;
        for (const auto& user : train_users) {
            auto examples = detail::resolve_examples(user, catalog);
            std::size_t wrong = 0;
            for (std::size_t leave = 0; leave < examples.size(); ++leave) {
                std::vector<TrainingExample> rest;
                int pos = 0, neg = 0;
                for (std::size_t i = 0; i < examples.size(); ++i) {
                    if (i == leave) continue;
                    rest.push_back(examples[i]);
                    (examples[i].y == 1 ? pos : neg)++;
                }
                int predicted;
                if (pos == 0 || neg == 0 || rest.size() < 2) {
                    predicted = pos >= neg ? +1 : -1;
                } else {
                    SvmModel m = train_svm(rest, params, kcfg);
                    predicted = decision_value(m, examples[leave].x) > 0.0 ? +1 : -1;
                }
                if (predicted != examples[leave].y) ++wrong;
            }
            total_error += static_cast<double>(wrong) / static_cast<double>(examples.size());
        }
        result.errors.push_back(total_error / static_cast<double>(train_users.size()));

        const auto better = [&](std::size_t a, std::size_t b) {
            if (result.errors[a] != result.errors[b]) return result.errors[a] < result.errors[b];
            if (grid[a].first != grid[b].first) return grid[a].first < grid[b].first;
            return grid[a].second.gamma < grid[b].second.gamma;
        };
        if (g > 0 && better(g, best)) best = g;
    }
    result.C = grid[best].first;
    result.kernel = grid[best].second;
    return result;
}

} // namespace cel
