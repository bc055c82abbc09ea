// cel: collaborative ensemble learning CLI.
//
// Subcommands: ingest, train, recommend, simulate, evaluate, tune.
// Every command is deterministic given identical inputs and --seed.
// Exit codes: 0 success, 2 input error, 3 state error, 1 internal error.

#include <cstdint>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cel/cel.hpp"

namespace {

using namespace cel;

std::set<std::string> load_stopwords(const std::string& path) {
    std::set<std::string> out;
    if (path.empty()) return out;
    for (const auto& line : to_lines(read_file(path)))
        if (!line.empty()) out.insert(line);
    return out;
}

std::vector<std::size_t> parse_budgets(const std::string& spec) {
    std::vector<std::size_t> out;
    for (const auto& tok : split(spec, ',')) {
        if (tok.empty()) continue;
        const long v = std::stol(tok);
        if (v < 1) throw InputError("--budgets: values must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw InputError("--budgets: empty list");
    return out;
}

// Grid spec: semicolon-separated points, each `C:linear` or `C:rbf:gamma`.
std::vector<std::pair<double, KernelConfig>> parse_grid(const std::string& spec) {
    std::vector<std::pair<double, KernelConfig>> grid;
    for (const auto& point : split(spec, ';')) {
        if (point.empty()) continue;
        const auto f = split(point, ':');
        if (f.size() < 2) throw InputError("--grid: expected C:kernel[:gamma], got '" + point + "'");
        const double C = parse_double(f[0], "--grid C");
        if (C <= 0.0) throw InputError("--grid: C must be positive");
        if (f[1] == "linear" && f.size() == 2)
            grid.emplace_back(C, KernelConfig::linear());
        else if (f[1] == "rbf" && f.size() == 3)
            grid.emplace_back(C, KernelConfig::rbf(parse_double(f[2], "--grid gamma")));
        else
            throw InputError("--grid: bad point '" + point + "'");
    }
    if (grid.empty()) throw InputError("--grid: empty grid");
    return grid;
}

KernelConfig make_kernel(const std::string& kind, double gamma) {
    if (kind == "linear") return KernelConfig::linear();
    if (kind == "rbf") return KernelConfig::rbf(gamma);
    throw InputError("--kernel must be linear or rbf");
}

struct CommonOpts {
    std::string kernel_kind = "linear";
    double gamma = 1.0;
    double c = 1.0;
    std::uint64_t seed = 0;

    void add_to(CLI::App* app) {
        app->add_option("--kernel", kernel_kind, "kernel: linear or rbf")
            ->check(CLI::IsMember({"linear", "rbf"}));
        app->add_option("--gamma", gamma, "rbf kernel width");
        app->add_option("--c", c, "SVM error-weight constant C");
        app->add_option("--seed", seed, "64-bit seed for all randomness");
    }
    SvmParams params() const {
        SvmParams p;
        p.C = c;
        return p;
    }
    KernelConfig kernel() const { return make_kernel(kernel_kind, gamma); }
};

// item id -> comma separated category list, one line per item
std::string serialize_categories(const std::vector<CorpusDoc>& docs) {
    std::string out;
    for (const auto& d : docs) {
        out += d.doc_id + "\t";
        for (std::size_t i = 0; i < d.categories.size(); ++i) {
            if (i) out += ',';
            out += d.categories[i];
        }
        out += '\n';
    }
    return out;
}

std::map<std::string, std::set<std::string>> parse_categories(const std::string& content) {
    std::map<std::string, std::set<std::string>> by_category;
    for (const auto& line : to_lines(content)) {
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        if (f.size() != 2)
            throw InputError("categories file: expected item<TAB>cat,cat");
        for (const auto& c : split(f[1], ','))
            if (!c.empty()) by_category[c].insert(f[0]);
    }
    if (by_category.empty())
        throw InputError("categories file: no category assignments");
    return by_category;
}

int cmd_ingest(const std::string& corpus_path, const std::string& features_path,
               const std::string& out_path, const std::string& stopwords_path,
               const std::string& categories_out) {
    ItemCatalog catalog;
    if (!corpus_path.empty()) {
        const auto docs = parse_corpus(read_file(corpus_path));
        std::vector<std::pair<std::string, std::string>> texts;
        for (const auto& d : docs) texts.emplace_back(d.doc_id, d.text);
        const auto built = build_tfidf(texts, load_stopwords(stopwords_path));
        catalog = built.catalog;
        if (catalog.items.empty())
            throw InputError("ingest: no documents survived preprocessing");
        for (const auto& id : built.empty_docs)
            std::cout << "excluded_empty\t" << id << "\n";
        if (!categories_out.empty())
            write_file_atomic(categories_out, serialize_categories(docs));
        std::cout << "documents\t" << catalog.items.size() << "\n";
        std::cout << "features\t" << catalog.dim << "\n";
    } else {
        catalog = parse_catalog(read_file(features_path));
        std::cout << "items\t" << catalog.items.size() << "\n";
        std::cout << "features\t" << catalog.dim << "\n";
    }
    write_file_atomic(out_path, serialize_catalog(catalog));
    return 0;
}

int cmd_train(const std::string& ratings_path, const std::string& catalog_path,
              const std::string& store_path, const std::string& retrain_user_id,
              const CommonOpts& opts) {
    const auto catalog = parse_catalog(read_file(catalog_path));
    const auto users = parse_ratings(read_file(ratings_path));

    EnsembleModel ensemble;
    if (retrain_user_id.empty()) {
        ensemble.kernel = opts.kernel();
        ensemble.params = opts.params();
        ensemble.catalog_id = catalog_path;
        for (const auto& u : users)
            ensemble = add_user(ensemble, u, catalog, opts.seed).ensemble;
        if (ensemble.members.empty())
            throw InputError("train: no trainable users (every user single-class or undersized)");
    } else {
        auto loaded = load_ensemble(store_path);
        ensemble = loaded.ensemble;
        const UserRatings* target = nullptr;
        for (const auto& u : users)
            if (u.user_id == retrain_user_id) target = &u;
        if (!target)
            throw InputError("train: user " + retrain_user_id + " not present in ratings file");
        bool known = false;
        for (const auto& m : ensemble.members) known = known || m.user_id == retrain_user_id;
        for (const auto& p : ensemble.pending) known = known || p == retrain_user_id;
        ensemble = known ? retrain_user(ensemble, retrain_user_id, *target, catalog, opts.seed).ensemble
                         : add_user(ensemble, *target, catalog, opts.seed).ensemble;
    }
    save_ensemble(store_path, ensemble, catalog.dim);
    std::cout << "members\t" << ensemble.members.size() << "\n";
    std::cout << "pending\t" << ensemble.pending.size() << "\n";
    for (const auto& p : ensemble.pending)
        std::cout << "pending_user\t" << p << "\n";
    return 0;
}

int cmd_recommend(const std::string& store_path, const std::string& catalog_path,
                  const std::string& query_path, std::size_t top_n) {
    const auto loaded = load_ensemble(store_path);
    const auto catalog = parse_catalog(read_file(catalog_path));
    if (catalog.dim != loaded.dim)
        throw InputError("recommend: catalog dimensionality " + std::to_string(catalog.dim) +
                         " does not match store dimensionality " + std::to_string(loaded.dim));

    UserRatings query{"query", {}};
    if (!query_path.empty()) {
        const auto content = read_file(query_path);
        bool blank = true;
        for (char ch : content)
            if (ch != '\n' && ch != '\r' && ch != ' ' && ch != '\t') blank = false;
        if (!blank) {
            const auto users = parse_ratings(content);
            if (users.size() != 1)
                throw InputError("recommend: query file must contain exactly one user");
            query = users[0];
        }
    }
    for (const auto& [item, y] : query.ratings)
        catalog.at(item); // validates, names unknown items

    std::vector<std::string> candidates;
    for (const auto& [id, v] : catalog.items)
        if (!query.ratings.count(id)) candidates.push_back(id);
    const auto ranked = rank_items(loaded.ensemble, query, candidates, catalog);
    const std::size_t n = std::min(top_n, ranked.size());
    for (std::size_t i = 0; i < n; ++i)
        std::cout << (i + 1) << "\t" << ranked[i].first << "\t" << format_double(ranked[i].second)
                  << "\n";
    return 0;
}

std::vector<Method> parse_methods(const std::string& spec) {
    std::vector<Method> methods;
    for (const auto& tok : split(spec, ',')) {
        if (tok.empty()) continue;
        const auto m = parse_method(tok);
        if (!m) throw InputError("--method: unknown method '" + tok + "'");
        methods.push_back(*m);
    }
    if (methods.empty()) throw InputError("--method: empty list");
    return methods;
}

int cmd_simulate(const std::string& catalog_path, const std::string& categories_path,
                 std::size_t n_train, std::size_t n_test, std::size_t examples,
                 const std::string& budgets_spec, std::size_t top_n, std::size_t reps,
                 const std::string& methods_spec, const std::string& out_prefix,
                 const CommonOpts& opts) {
    const auto catalog = parse_catalog(read_file(catalog_path));
    SynthConfig synth;
    synth.categories = parse_categories(read_file(categories_path));
    synth.n_train_users = n_train;
    synth.n_test_users = n_test;
    synth.examples_per_train_user = examples;
    synth.seed = opts.seed;
    const auto users = generate_synthetic_users(synth, catalog);

    EvalConfig cfg;
    cfg.budgets = parse_budgets(budgets_spec);
    cfg.top_n = top_n;
    cfg.repetitions = reps;
    cfg.seed = opts.seed;
    cfg.force_both_class_queries = true; // protocol samples mixed-label queries

    for (const Method method : parse_methods(methods_spec)) {
        const auto report = run_learning_curve(method, users.train, users.test, catalog, cfg,
                                               opts.params(), opts.kernel());
        const std::string path = out_prefix + "." + method_name(method) + ".tsv";
        write_file_atomic(path, serialize_report(report, {
            {"protocol", "simulate"},
            {"method", method_name(method)},
            {"seed", std::to_string(opts.seed)},
            {"kernel", opts.kernel_kind},
            {"C", format_double(opts.c)},
            {"train_users", std::to_string(n_train)},
            {"test_users", std::to_string(n_test)},
            {"examples_per_train_user", std::to_string(examples)},
            {"top_n", std::to_string(top_n)},
            {"repetitions", std::to_string(reps)},
        }));
        std::cout << "report\t" << path << "\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& ratings_path, const std::string& catalog_path,
                 const std::string& budgets_spec, std::size_t top_n, std::size_t reps,
                 const std::string& methods_spec, const std::string& out_prefix,
                 const CommonOpts& opts) {
    const auto catalog = parse_catalog(read_file(catalog_path));
    const auto matrix = RatingsMatrix::from_users(parse_ratings(read_file(ratings_path)));

    EvalConfig cfg;
    cfg.budgets = parse_budgets(budgets_spec);
    cfg.top_n = top_n;
    cfg.repetitions = reps;
    cfg.seed = opts.seed;

    for (const Method method : parse_methods(methods_spec)) {
        const auto report =
            run_loo_protocol(matrix, catalog, cfg, method, opts.params(), opts.kernel());
        const std::string path = out_prefix + "." + method_name(method) + ".tsv";
        write_file_atomic(path, serialize_report(report, {
            {"protocol", "leave-one-out"},
            {"precision_note", "lower bound; unrated items count as non-relevant"},
            {"method", method_name(method)},
            {"seed", std::to_string(opts.seed)},
            {"kernel", opts.kernel_kind},
            {"C", format_double(opts.c)},
            {"top_n", std::to_string(top_n)},
            {"repetitions", std::to_string(reps)},
        }));
        std::cout << "report\t" << path << "\n";
    }
    return 0;
}

int cmd_tune(const std::string& ratings_path, const std::string& catalog_path,
             const std::string& grid_spec) {
    const auto catalog = parse_catalog(read_file(catalog_path));
    const auto users = parse_ratings(read_file(ratings_path));
    const auto grid = parse_grid(grid_spec);
    const auto result = tune_shared_hyperparams(users, catalog, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::cout << "grid\t" << format_double(grid[g].first) << "\t"
                  << (grid[g].second.kind == KernelConfig::Kind::rbf ? "rbf" : "linear");
        if (grid[g].second.kind == KernelConfig::Kind::rbf)
            std::cout << "\t" << format_double(grid[g].second.gamma);
        std::cout << "\tloo_error\t" << format_double(result.errors[g]) << "\n";
    }
    std::cout << "chosen_C\t" << format_double(result.C) << "\n";
    std::cout << "chosen_kernel\t"
              << (result.kernel.kind == KernelConfig::Kind::rbf ? "rbf" : "linear") << "\n";
    if (result.kernel.kind == KernelConfig::Kind::rbf)
        std::cout << "chosen_gamma\t" << format_double(result.kernel.gamma) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collaborative ensemble learning toolkit"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "build an item catalog from a corpus or feature file");
    std::string corpus_path, features_path, out_path, stopwords_path, categories_out;
    ingest->add_option("--corpus", corpus_path, "corpus file: doc<TAB>categories<TAB>text");
    ingest->add_option("--features", features_path, "precomputed feature file (#dim header)");
    ingest->add_option("--out", out_path, "output catalog path")->required();
    ingest->add_option("--stopwords", stopwords_path, "stopword list, one word per line");
    ingest->add_option("--categories-out", categories_out, "write item->category map here");

    // train
    auto* train = app.add_subcommand("train", "train per-user preference models into a store");
    std::string ratings_path, catalog_path, store_path, retrain_id;
    CommonOpts train_opts;
    train->add_option("--ratings", ratings_path, "ratings file: user<TAB>item<TAB>+1|-1")->required();
    train->add_option("--catalog", catalog_path, "item catalog")->required();
    train->add_option("--store", store_path, "model store path")->required();
    train->add_option("--user", retrain_id, "retrain only this user into an existing store");
    train_opts.add_to(train);

    // recommend
    auto* recommend = app.add_subcommand("recommend", "rank items for a query user");
    std::string r_store, r_catalog, r_query;
    std::size_t r_top_n = 10;
    recommend->add_option("--store", r_store, "model store path")->required();
    recommend->add_option("--catalog", r_catalog, "item catalog")->required();
    recommend->add_option("--query", r_query, "query ratings file (may be empty)");
    recommend->add_option("--top-n", r_top_n, "number of items to emit");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "synthetic-user learning-curve protocol");
    std::string s_catalog, s_categories, s_budgets = "2,5,10,20,50,100", s_methods = "ensemble,cf,cbf",
                s_prefix = "report";
    std::size_t s_train = 20, s_test = 10, s_examples = 5, s_top_n = 20, s_reps = 1;
    CommonOpts sim_opts;
    simulate->add_option("--catalog", s_catalog, "item catalog")->required();
    simulate->add_option("--categories", s_categories, "item->category map")->required();
    simulate->add_option("--train-users", s_train, "number of generated training users");
    simulate->add_option("--test-users", s_test, "number of generated query users");
    simulate->add_option("--examples", s_examples, "rated examples per training user (E)");
    simulate->add_option("--budgets", s_budgets, "comma-separated query rating budgets");
    simulate->add_option("--top-n", s_top_n, "precision cutoff N");
    simulate->add_option("--reps", s_reps, "repetitions per test user and budget");
    simulate->add_option("--method", s_methods, "comma-separated: ensemble,cf,cbf");
    simulate->add_option("--out-prefix", s_prefix, "report path prefix");
    sim_opts.add_to(simulate);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "leave-one-out protocol over real ratings");
    std::string e_ratings, e_catalog, e_budgets = "2,5,10,20,50,100", e_methods = "ensemble,cf,cbf",
                e_prefix = "loo";
    std::size_t e_top_n = 20, e_reps = 10;
    CommonOpts eval_opts;
    evaluate->add_option("--ratings", e_ratings, "ratings file")->required();
    evaluate->add_option("--catalog", e_catalog, "item catalog")->required();
    evaluate->add_option("--budgets", e_budgets, "comma-separated query rating budgets");
    evaluate->add_option("--top-n", e_top_n, "precision cutoff N");
    evaluate->add_option("--reps", e_reps, "random query draws per user and budget");
    evaluate->add_option("--method", e_methods, "comma-separated: ensemble,cf,cbf");
    evaluate->add_option("--out-prefix", e_prefix, "report path prefix");
    eval_opts.add_to(evaluate);

    // tune
    auto* tune = app.add_subcommand("tune", "shared-hyperparameter leave-one-out tuning");
    std::string t_ratings, t_catalog, t_grid;
    tune->add_option("--ratings", t_ratings, "ratings file")->required();
    tune->add_option("--catalog", t_catalog, "item catalog")->required();
    tune->add_option("--grid", t_grid, "semicolon list of C:linear or C:rbf:gamma")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            if (corpus_path.empty() == features_path.empty())
                throw cel::InputError("ingest: exactly one of --corpus or --features required");
            return cmd_ingest(corpus_path, features_path, out_path, stopwords_path, categories_out);
        }
        if (*train)
            return cmd_train(ratings_path, catalog_path, store_path, retrain_id, train_opts);
        if (*recommend)
            return cmd_recommend(r_store, r_catalog, r_query, r_top_n);
        if (*simulate)
            return cmd_simulate(s_catalog, s_categories, s_train, s_test, s_examples, s_budgets,
                                s_top_n, s_reps, s_methods, s_prefix, sim_opts);
        if (*evaluate)
            return cmd_evaluate(e_ratings, e_catalog, e_budgets, e_top_n, e_reps, e_methods,
                                e_prefix, eval_opts);
        if (*tune)
            return cmd_tune(t_ratings, t_catalog, t_grid);
    } catch (const cel::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const cel::StateError& e) {
        std::cerr << "state error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
