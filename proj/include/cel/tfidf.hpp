#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cel/errors.hpp"
#include "cel/features.hpp"
#include "cel/porter.hpp"

namespace cel {

// Lowercase and split on anything that is not an ASCII letter.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalpha(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::vector<std::string> preprocess_terms(const std::string& text,
                                                 const std::set<std::string>& stopwords) {
    std::vector<std::string> terms;
    for (const auto& tok : tokenize(text)) {
        if (stopwords.count(tok)) continue;
        terms.push_back(porter_stem(tok));
    }
    return terms;
}

struct TfidfVocabulary {
    std::map<std::string, std::uint32_t> term_to_index;
    std::vector<double> idf; // indexed by term index
};

struct TfidfBuildResult {
    TfidfVocabulary vocabulary;
    ItemCatalog catalog;
    std::vector<std::string> empty_docs; // docs with no surviving terms
};

// Term weight is tf * ln(N/df); document vectors are L2-normalized. Terms
// present in every document carry zero weight and are dropped from the
// vocabulary. Documents that end up with no surviving terms are excluded
// from the catalog and reported.
inline TfidfBuildResult build_tfidf(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const std::set<std::string>& stopwords) {
    if (corpus.empty())
        throw InputError("build_tfidf: empty corpus");

    const double n_docs = static_cast<double>(corpus.size());
    std::vector<std::map<std::string, std::size_t>> term_counts(corpus.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (const auto& term : preprocess_terms(corpus[d].second, stopwords))
            ++term_counts[d][term];
        for (const auto& [term, count] : term_counts[d])
            ++df[term];
    }

    TfidfBuildResult out;
    for (const auto& [term, doc_freq] : df) {
        if (doc_freq == corpus.size()) continue; // idf = 0
        const std::uint32_t idx = static_cast<std::uint32_t>(out.vocabulary.idf.size());
        out.vocabulary.term_to_index.emplace(term, idx);
        out.vocabulary.idf.push_back(std::log(n_docs / static_cast<double>(doc_freq)));
    }

    out.catalog.dim = static_cast<std::uint32_t>(out.vocabulary.idf.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        FeatureVector v;
        v.dim = out.catalog.dim;
        for (const auto& [term, count] : term_counts[d]) {
            auto it = out.vocabulary.term_to_index.find(term);
            if (it == out.vocabulary.term_to_index.end()) continue;
            const double w = static_cast<double>(count) * out.vocabulary.idf[it->second];
            if (w != 0.0) v.entries.emplace_back(it->second, w);
        }
        // term_to_index is ordered by term, not index; restore index order
        std::sort(v.entries.begin(), v.entries.end());
        const double norm = std::sqrt(v.norm2());
        if (norm == 0.0) {
            out.empty_docs.push_back(corpus[d].first);
            continue;
        }
        for (auto& [idx, val] : v.entries) val /= norm;
        out.catalog.insert(corpus[d].first, std::move(v));
    }
    return out;
}

struct TfidfTransformResult {
    FeatureVector vector;
    bool all_oov = false;
};

// Same tokenize/stem/weight/normalize pipeline applied to unseen text.
// Out-of-vocabulary terms are ignored; if nothing survives, a zero vector
// is returned with the warning flag set.
inline TfidfTransformResult transform_tfidf(const TfidfVocabulary& vocabulary,
                                            const std::string& text,
                                            const std::set<std::string>& stopwords) {
    if (vocabulary.term_to_index.empty())
        throw InputError("transform_tfidf: empty vocabulary");
    std::map<std::string, std::size_t> counts;
    for (const auto& term : preprocess_terms(text, stopwords))
        ++counts[term];

    TfidfTransformResult out;
    out.vector.dim = static_cast<std::uint32_t>(vocabulary.idf.size());
    for (const auto& [term, count] : counts) {
        auto it = vocabulary.term_to_index.find(term);
        if (it == vocabulary.term_to_index.end()) continue;
        const double w = static_cast<double>(count) * vocabulary.idf[it->second];
        if (w != 0.0) out.vector.entries.emplace_back(it->second, w);
    }
    std::sort(out.vector.entries.begin(), out.vector.entries.end());
    const double norm = std::sqrt(out.vector.norm2());
    if (norm == 0.0) {
        out.all_oov = true;
        return out;
    }
    for (auto& [idx, val] : out.vector.entries) val /= norm;
    return out;
}

} // namespace cel
