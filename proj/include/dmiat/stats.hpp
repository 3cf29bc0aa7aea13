#pragma once

#include <cmath>
#include <stdexcept>

#include "dmiat/dataset.hpp"

namespace dmiat {

/// Shannon entropy of a class distribution, in bits. Zero-count classes
/// contribute nothing; a pure distribution has entropy exactly 0.
inline double entropy(const ClassDistribution& dist) {
    if (dist.total < 1) throw std::domain_error("entropy: empty distribution");
    double e = 0.0;
    for (auto c : dist.counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(dist.total);
        e -= p * std::log2(p);
    }
    return e;
}

/// Lift of a target class inside a subset relative to the whole:
/// (subset fraction of target) / (whole fraction of target). 1 means no
/// enrichment; equals p(x|c)/p(x) by Bayes' rule.
inline double lift(const ClassDistribution& subset, const ClassDistribution& whole, int target) {
    if (subset.total < 1) throw std::domain_error("lift: empty subset");
    const auto t = static_cast<std::size_t>(target);
    if (t >= whole.counts.size() || whole.counts[t] < 1)
        throw std::domain_error("lift: target class absent from the whole distribution");
    const double p_subset = static_cast<double>(subset.counts[t]) / static_cast<double>(subset.total);
    const double p_whole = static_cast<double>(whole.counts[t]) / static_cast<double>(whole.total);
    return p_subset / p_whole;
}

}   // namespace dmiat
