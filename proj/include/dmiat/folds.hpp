#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "dmiat/dataset.hpp"

namespace dmiat {

struct FoldPair {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
};

namespace detail {

/// Fisher-Yates with mt19937_64 and modulo draws: the standard pins the
/// engine's output exactly, so folds are bitwise reproducible everywhere.
inline void seeded_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}   // namespace detail

/// Stratified k-fold split. Rows are grouped per class (class-domain order),
/// each group is shuffled, and the concatenated sequence is dealt round-robin
/// to test folds with a cursor that rolls across class boundaries. Per-class
/// and total test-fold sizes each differ by at most 1.
inline std::vector<FoldPair> stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    if (k > ds.n_rows()) throw std::invalid_argument("stratified_kfold: k exceeds row count");

    std::vector<std::vector<std::size_t>> by_class(ds.class_domain.size());
    for (std::size_t i = 0; i < ds.n_rows(); ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> test_folds(k);
    std::size_t cursor = 0;
    for (auto& group : by_class) {
        detail::seeded_shuffle(group, rng);
        for (auto r : group) test_folds[cursor++ % k].push_back(r);
    }

    std::vector<char> in_test(ds.n_rows());
    std::vector<FoldPair> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (auto r : test_folds[f]) in_test[r] = 1;
        for (std::size_t i = 0; i < ds.n_rows(); ++i)
            (in_test[i] ? folds[f].test_idx : folds[f].train_idx).push_back(i);
    }
    return folds;
}

}   // namespace dmiat
