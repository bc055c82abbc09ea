#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cel/errors.hpp"

namespace cel {

// Sparse item descriptor. Entries are (index, value) pairs with strictly
// increasing indices below `dim`. Dense vectors are the special case where
// every index is present.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::uint32_t dim = 0;

    static FeatureVector dense(const std::vector<double>& values) {
        FeatureVector v;
        v.dim = static_cast<std::uint32_t>(values.size());
        v.entries.reserve(values.size());
        for (std::uint32_t i = 0; i < v.dim; ++i)
            v.entries.emplace_back(i, values[i]);
        return v;
    }

    void validate() const {
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& [idx, val] : entries) {
            if (!first && idx <= prev)
                throw InputError("feature indices must be strictly increasing");
            if (idx >= dim)
                throw InputError("feature index " + std::to_string(idx) +
                                 " out of range for dim " + std::to_string(dim));
            if (!std::isfinite(val))
                throw InputError("non-finite feature value at index " + std::to_string(idx));
            prev = idx;
            first = false;
        }
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& [idx, val] : entries) s += val * val;
        return s;
    }
};

inline double dot(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else { s += ia->second * ib->second; ++ia; ++ib; }
    }
    return s;
}

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) { s += ia->second * ia->second; ++ia; }
        else if (ib->first < ia->first) { s += ib->second * ib->second; ++ib; }
        else {
            const double d = ia->second - ib->second;
            s += d * d;
            ++ia; ++ib;
        }
    }
    for (; ia != a.entries.end(); ++ia) s += ia->second * ia->second;
    for (; ib != b.entries.end(); ++ib) s += ib->second * ib->second;
    return s;
}

// Items keyed by id; std::map keeps iteration order deterministic.
struct ItemCatalog {
    std::uint32_t dim = 0;
    std::map<std::string, FeatureVector> items;

    const FeatureVector& at(const std::string& item_id) const {
        auto it = items.find(item_id);
        if (it == items.end())
            throw InputError("unknown item id: " + item_id);
        return it->second;
    }

    void insert(const std::string& item_id, FeatureVector v) {
        if (v.dim != dim)
            throw InputError("item " + item_id + " dimensionality " +
                             std::to_string(v.dim) + " != catalog dim " + std::to_string(dim));
        v.validate();
        auto [it, inserted] = items.emplace(item_id, std::move(v));
        if (!inserted)
            throw InputError("duplicate item id: " + item_id);
    }
};

struct KernelConfig {
    enum class Kind { linear, rbf };
    Kind kind = Kind::linear;
    double gamma = 0.0; // rbf only, > 0

    static KernelConfig linear() { return KernelConfig{Kind::linear, 0.0}; }
    static KernelConfig rbf(double gamma) {
        if (!(gamma > 0.0))
            throw InputError("rbf gamma must be positive");
        return KernelConfig{Kind::rbf, gamma};
    }
};

inline double kernel(const KernelConfig& cfg, const FeatureVector& a, const FeatureVector& b) {
    if (a.dim != b.dim)
        throw InputError("kernel: dimensionality mismatch (" +
                         std::to_string(a.dim) + " vs " + std::to_string(b.dim) + ")");
    switch (cfg.kind) {
    case KernelConfig::Kind::linear:
        return dot(a, b);
    case KernelConfig::Kind::rbf:
        return std::exp(-cfg.gamma * squared_distance(a, b));
    }
    return 0.0;
}

// Row-major symmetric matrix of pairwise kernel values.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline GramMatrix gram_matrix(const KernelConfig& cfg, std::span<const FeatureVector> items) {
    if (items.empty())
        throw InputError("gram_matrix: empty item list");
    GramMatrix g(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double k = kernel(cfg, items[i], items[j]);
            g(i, j) = k;
            g(j, i) = k;
        }
    }
    return g;
}

} // namespace cel
