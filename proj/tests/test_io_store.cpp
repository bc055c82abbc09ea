#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "cel/io.hpp"
#include "cel/rng.hpp"
#include "cel/store.hpp"

using namespace cel;

TEST_CASE("format_double round-trips exactly") {
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.next_double() - 0.5) * std::pow(10.0, double(rng.next_below(40)) - 20.0);
        const double back = parse_double(format_double(v), "test");
        CHECK(back == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(parse_double("-1.5", "t") == -1.5);
    CHECK_THROWS_AS(parse_double("abc", "t"), InputError);
    CHECK_THROWS_AS(parse_double("1.5x", "t"), InputError);
}

TEST_CASE("catalog file format") {
    ItemCatalog cat;
    cat.dim = 5;
    FeatureVector v1;
    v1.dim = 5;
    v1.entries = {{0, 1.25}, {3, -0.5}};
    cat.items.emplace("doc_a", v1);
    FeatureVector v2;
    v2.dim = 5;
    v2.entries = {{1, 0.1234567890123456}};
    cat.items.emplace("doc_b", v2);

    SUBCASE("round trip") {
        const auto parsed = parse_catalog(serialize_catalog(cat));
        CHECK(parsed.dim == 5);
        REQUIRE(parsed.items.size() == 2);
        CHECK(parsed.at("doc_a").entries == cat.at("doc_a").entries);
        CHECK(parsed.at("doc_b").entries == cat.at("doc_b").entries);
    }
    SUBCASE("missing header rejected") {
        CHECK_THROWS_AS(parse_catalog("doc_a 0:1\n"), InputError);
    }
    SUBCASE("bad index ordering rejected with line number") {
        try {
            parse_catalog("#dim 4\nok 0:1\nbad 2:1 1:2\n");
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("out-of-range index rejected") {
        CHECK_THROWS_AS(parse_catalog("#dim 2\nx 5:1\n"), InputError);
    }
    SUBCASE("duplicate item rejected") {
        CHECK_THROWS_AS(parse_catalog("#dim 2\nx 0:1\nx 1:1\n"), InputError);
    }
}

TEST_CASE("corpus format") {
    const auto docs = parse_corpus("d1\tacq,grain\tSoybeans rallied today\nd2\t\tNo categories here\n");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "d1");
    REQUIRE(docs[0].categories.size() == 2);
    CHECK(docs[0].categories[1] == "grain");
    CHECK(docs[1].categories.empty());
    CHECK_THROWS_AS(parse_corpus("only_one_field\n"), InputError);
    CHECK_THROWS_AS(parse_corpus(""), InputError);
}

TEST_CASE("ratings format") {
    const auto users = parse_ratings("alice\ti1\t+1\nalice\ti2\t-1\nbob\ti1\t1\n");
    REQUIRE(users.size() == 2);
    CHECK(users[0].user_id == "alice");
    CHECK(users[0].ratings.at("i2") == -1);
    CHECK(users[1].ratings.at("i1") == +1);
    CHECK_THROWS_AS(parse_ratings("a\ti\t2\n"), InputError);
    CHECK_THROWS_AS(parse_ratings("a\ti\t+1\na\ti\t-1\n"), InputError);
    CHECK_THROWS_AS(parse_ratings("a\ti\n"), InputError);

    // round trip
    const auto again = parse_ratings(serialize_ratings(users));
    REQUIRE(again.size() == users.size());
    CHECK(again[0].ratings == users[0].ratings);
}

TEST_CASE("report serialization") {
    LearningCurveReport report;
    report.rows.push_back({2, 0.75, 0.0125, 40, 2});
    report.rows.push_back({5, std::nan(""), std::nan(""), 0, 42});
    const auto text = serialize_report(report, {{"seed", "7"}, {"method", "ensemble"}});
    CHECK(text.find("# seed\t7\n") != std::string::npos);
    CHECK(text.find("budget\tmean_precision\tstd_err\tn_evaluated\tn_skipped\n") !=
          std::string::npos);
    CHECK(text.find("2\t0.75\t0.0125\t40\t2\n") != std::string::npos);
    CHECK(text.find("5\tnan\tnan\t0\t42\n") != std::string::npos);
}

namespace {

EnsembleModel trained_fixture(ItemCatalog& cat) {
    cat.dim = 2;
    for (int i = 0; i < 8; ++i) {
        const double x = i < 4 ? 1.0 : -1.0;
        cat.items.emplace("d" + std::to_string(i), FeatureVector::dense({x, 0.3 * i - 1.0}));
    }
    EnsembleModel base;
    base.kernel = KernelConfig::rbf(0.6);
    base.params.C = 2.0;
    base.catalog_id = "fixture";
    UserRatings u1{"u1", {{"d0", +1}, {"d1", +1}, {"d4", -1}, {"d5", -1}}};
    UserRatings u2{"u2", {{"d2", -1}, {"d3", -1}, {"d6", +1}, {"d7", +1}}};
    UserRatings u3{"u3", {{"d0", +1}, {"d1", +1}}}; // pending
    auto e = add_user(base, u1, cat, 11).ensemble;
    e = add_user(e, u2, cat, 11).ensemble;
    e = add_user(e, u3, cat, 11).ensemble;
    return e;
}

} // namespace

TEST_CASE("ensemble store round trip") {
    ItemCatalog cat;
    const auto e = trained_fixture(cat);
    const auto text = serialize_ensemble(e, cat.dim);
    const auto loaded = parse_ensemble(text);

    CHECK(loaded.dim == cat.dim);
    CHECK(loaded.ensemble.catalog_id == "fixture");
    CHECK(loaded.ensemble.kernel.kind == KernelConfig::Kind::rbf);
    CHECK(loaded.ensemble.kernel.gamma == 0.6);
    CHECK(loaded.ensemble.params.C == 2.0);
    REQUIRE(loaded.ensemble.members.size() == e.members.size());
    REQUIRE(loaded.ensemble.pending == e.pending);

    // decision values reproduce exactly on a probe set
    for (std::size_t m = 0; m < e.members.size(); ++m) {
        CHECK(loaded.ensemble.members[m].slope == e.members[m].slope);
        for (const auto& [id, x] : cat.items) {
            const double a = decision_value(e.members[m].svm, x);
            const double b = decision_value(loaded.ensemble.members[m].svm, x);
            CHECK(std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)));
        }
    }
    // serialization is stable
    CHECK(serialize_ensemble(loaded.ensemble, loaded.dim) == text);
}

TEST_CASE("store rejects version and checksum mismatches") {
    ItemCatalog cat;
    const auto e = trained_fixture(cat);
    auto text = serialize_ensemble(e, cat.dim);

    SUBCASE("version mismatch named in the error") {
        auto bad = text;
        bad.replace(0, 6, "CEL v9");
        try {
            parse_ensemble(bad);
            FAIL("expected InputError");
        } catch (const InputError& err) {
            CHECK(std::string(err.what()).find("version") != std::string::npos);
        }
    }
    SUBCASE("corrupted payload fails the checksum") {
        auto bad = text;
        const auto pos = bad.find("slope ");
        REQUIRE(pos != std::string::npos);
        bad[pos + 6] = bad[pos + 6] == '-' ? '0' : '-';
        CHECK_THROWS_AS(parse_ensemble(bad), InputError);
    }
    SUBCASE("truncated file rejected") {
        CHECK_THROWS_AS(parse_ensemble(text.substr(0, text.size() / 2)), InputError);
    }
}

TEST_CASE("atomic file write round trip") {
    const std::string path = "cel_test_tmp_file.txt";
    write_file_atomic(path, "hello\nworld\n");
    CHECK(read_file(path) == "hello\nworld\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file(path), InputError);
}
