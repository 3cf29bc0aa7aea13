#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dmiat/dataset.hpp"
#include "dmiat/stats.hpp"

namespace dmiat {

/// Per-attribute ordered cut points from a fit on training rows. An empty
/// cut list collapses the attribute to a single "All" interval. k cut points
/// define k+1 intervals [-inf,d1], (d1,d2], ..., (dk,+inf).
struct DiscretizationScheme {
    std::size_t attr = 0;
    std::vector<double> cut_points;
    std::string method;   // "ew" | "ef" | "iem" | imported label
};

/// Equal-width cut points over [min, max]; empty when all values coincide.
inline std::vector<double> equal_width(std::span<const double> values, std::size_t k) {
    std::vector<double> cuts;
    if (values.empty()) return cuts;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (lo == hi) return cuts;
    for (std::size_t i = 1; i < k; ++i) {
        const double c = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(k);
        if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
    }
    return cuts;
}

/// Equal-frequency cut points: intervals close at the legal boundary between
/// distinct sorted values (ties are never split) nearest the running quantile
/// rank, re-targeting the remaining quota after each cut so tie runs do not
/// skew later intervals. Duplicate cut points collapse.
inline std::vector<double> equal_frequency(std::span<const double> values, std::size_t k) {
    std::vector<double> cuts;
    if (values.size() < 2) return cuts;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> legal;   // positions p: boundary between sorted[p-1] and sorted[p]
    for (std::size_t p = 1; p < sorted.size(); ++p)
        if (sorted[p - 1] != sorted[p]) legal.push_back(p);
    if (legal.empty()) return cuts;

    const std::size_t n = sorted.size();
    std::size_t pos = 0;   // start of the interval being closed
    std::size_t next_legal = 0;
    for (std::size_t i = 0; i + 1 < k && pos < n; ++i) {
        const double target =
            static_cast<double>(pos) + static_cast<double>(n - pos) / static_cast<double>(k - i);
        while (next_legal < legal.size() && legal[next_legal] <= pos) ++next_legal;
        if (next_legal == legal.size()) break;
        std::size_t best = legal[next_legal];
        for (std::size_t j = next_legal; j < legal.size(); ++j) {
            if (std::abs(static_cast<double>(legal[j]) - target) <
                std::abs(static_cast<double>(best) - target))
                best = legal[j];
            if (static_cast<double>(legal[j]) > target) break;   // distances only grow past the target
        }
        cuts.push_back((sorted[best - 1] + sorted[best]) / 2.0);
        pos = best;
    }
    return cuts;
}

namespace detail {

inline double counts_entropy(std::span<const std::int64_t> counts, std::int64_t total) {
    double e = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        e -= p * std::log2(p);
    }
    return e;
}

inline int distinct_classes(std::span<const std::int64_t> counts) {
    int k = 0;
    for (auto c : counts) k += c > 0;
    return k;
}

/// Recursive entropy-minimizing split with the MDL stopping rule. Candidate
/// boundaries sit between adjacent distinct values whose surrounding value
/// runs together hold more than one class. Ties in weighted entropy break
/// toward the smaller cut value.
inline void iem_divide(std::span<const double> values, std::span<const int> labels, std::size_t n_classes,
                       std::size_t lo, std::size_t hi, std::vector<double>& cuts) {
    const std::size_t n = hi - lo;
    if (n < 2) return;

    std::vector<std::int64_t> total_counts(n_classes, 0);
    for (std::size_t i = lo; i < hi; ++i) ++total_counts[static_cast<std::size_t>(labels[i])];
    const double e_total = counts_entropy(total_counts, static_cast<std::int64_t>(n));
    if (e_total == 0.0) return;   // single-class segment

    // For the boundary-point rule, track whether a value run is pure and of which class.
    auto run_classes = [&](std::size_t start) {
        std::size_t end = start;
        int cls = labels[start];
        bool pure = true;
        while (end < hi && values[end] == values[start]) {
            if (labels[end] != cls) pure = false;
            ++end;
        }
        return std::pair<bool, int>(pure, cls);
    };

    std::vector<std::int64_t> left(n_classes, 0);
    std::vector<std::int64_t> best_left;
    double best_weighted = 0.0;
    std::size_t best_p = 0;
    bool have_best = false;

    auto [left_pure, left_cls] = run_classes(lo);
    for (std::size_t p = lo + 1; p < hi; ++p) {
        ++left[static_cast<std::size_t>(labels[p - 1])];
        if (values[p - 1] == values[p]) continue;
        // Boundary between two runs: candidate unless both runs are pure with the same class.
        auto [right_pure, right_cls] = run_classes(p);
        const bool skip = left_pure && right_pure && left_cls == right_cls;
        left_pure = right_pure;
        left_cls = right_cls;
        if (skip) continue;

        const std::int64_t n1 = static_cast<std::int64_t>(p - lo);
        const std::int64_t n2 = static_cast<std::int64_t>(hi - p);
        std::vector<std::int64_t> right(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) right[c] = total_counts[c] - left[c];
        const double weighted = (static_cast<double>(n1) * counts_entropy(left, n1) +
                                 static_cast<double>(n2) * counts_entropy(right, n2)) /
                                static_cast<double>(n);
        if (!have_best || weighted < best_weighted) {
            have_best = true;
            best_weighted = weighted;
            best_p = p;
            best_left = left;
        }
    }
    if (!have_best) return;

    std::vector<std::int64_t> right(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) right[c] = total_counts[c] - best_left[c];
    const std::int64_t n1 = static_cast<std::int64_t>(best_p - lo);
    const std::int64_t n2 = static_cast<std::int64_t>(hi - best_p);
    const double e1 = counts_entropy(best_left, n1);
    const double e2 = counts_entropy(right, n2);
    const double gain = e_total - best_weighted;

    const int k = distinct_classes(total_counts);
    const int k1 = distinct_classes(best_left);
    const int k2 = distinct_classes(right);
    const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                         (static_cast<double>(k) * e_total - static_cast<double>(k1) * e1 -
                          static_cast<double>(k2) * e2);
    const double bound = (std::log2(static_cast<double>(n) - 1.0) + delta) / static_cast<double>(n);
    if (gain <= bound) return;

    cuts.push_back((values[best_p - 1] + values[best_p]) / 2.0);
    iem_divide(values, labels, n_classes, lo, best_p, cuts);
    iem_divide(values, labels, n_classes, best_p, hi, cuts);
}

}   // namespace detail

/// Fayyad-Irani entropy minimization with MDL stopping, on one column.
/// `values` and `labels` are aligned and need not be pre-sorted. An empty
/// result means the attribute collapses to a single interval.
inline std::vector<double> iem_mdl(std::span<const double> values, std::span<const int> labels,
                                   std::size_t n_classes) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    std::vector<double> v(values.size());
    std::vector<int> l(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = values[order[i]];
        l[i] = labels[order[i]];
    }
    std::vector<double> cuts;
    if (!v.empty()) detail::iem_divide(v, l, n_classes, 0, v.size(), cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

/// Fits one scheme on the training rows of `attr`. Method tokens: "ew", "ef"
/// (both take the interval count) and "iem". Missing values are excluded
/// from the fit.
inline DiscretizationScheme fit_scheme(const Dataset& ds, std::span<const std::size_t> rows, std::size_t attr,
                                       const std::string& method, std::size_t k_intervals = 10) {
    if (ds.attributes[attr].kind != AttrKind::Continuous)
        throw std::invalid_argument("fit_scheme: attribute '" + ds.attributes[attr].name + "' is nominal");
    std::vector<double> values;
    std::vector<int> labels;
    for (auto r : rows) {
        const double v = ds.columns[attr][r];
        if (is_missing(v)) continue;
        values.push_back(v);
        labels.push_back(ds.labels[r]);
    }
    DiscretizationScheme s;
    s.attr = attr;
    s.method = method;
    if (method == "ew") s.cut_points = equal_width(values, k_intervals);
    else if (method == "ef") s.cut_points = equal_frequency(values, k_intervals);
    else if (method == "iem") s.cut_points = iem_mdl(values, labels, ds.class_domain.size());
    else throw std::invalid_argument("fit_scheme: unknown method '" + method + "'");
    return s;
}

/// Interval id of each row: the number of cut points strictly below the
/// value (first interval is closed on both sides, the rest are left-open).
/// Missing values take the reserved id cut_points.size() + 1.
inline std::vector<int> apply_scheme(const DiscretizationScheme& scheme, const Dataset& ds,
                                     std::span<const std::size_t> rows) {
    if (scheme.attr >= ds.n_attributes() || ds.attributes[scheme.attr].kind != AttrKind::Continuous)
        throw std::invalid_argument("apply_scheme: scheme attribute " + std::to_string(scheme.attr) +
                                    " is absent or nominal");
    const int missing_id = static_cast<int>(scheme.cut_points.size()) + 1;
    std::vector<int> ids(rows.size());
    const auto& col = ds.columns[scheme.attr];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = col[rows[i]];
        if (is_missing(v)) { ids[i] = missing_id; continue; }
        const auto it = std::lower_bound(scheme.cut_points.begin(), scheme.cut_points.end(), v);
        ids[i] = static_cast<int>(it - scheme.cut_points.begin());
    }
    return ids;
}

/// Line format: attr_index, method, comma-joined cut points ("All" when the
/// list is empty) — tab separated. Importing files in this format is how
/// externally discretized columns enter the harness.
inline void write_schemes(std::span<const DiscretizationScheme> schemes, std::ostream& out) {
    for (const auto& s : schemes) {
        out << s.attr << '\t' << s.method << '\t';
        if (s.cut_points.empty()) out << "All";
        else
            for (std::size_t i = 0; i < s.cut_points.size(); ++i)
                out << (i ? "," : "") << detail::format_real(s.cut_points[i]);
        out << '\n';
    }
}

inline std::vector<DiscretizationScheme> read_schemes(std::istream& in) {
    std::vector<DiscretizationScheme> schemes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line, '\t');
        if (f.size() != 3) throw ParseError("scheme line " + std::to_string(line_no) + ": expected 3 fields");
        DiscretizationScheme s;
        double idx;
        if (!detail::parse_real(f[0], idx)) throw ParseError("scheme line " + std::to_string(line_no) + ": bad attribute index");
        s.attr = static_cast<std::size_t>(idx);
        s.method = f[1];
        if (f[2] != "All") {
            for (const auto& tok : detail::split(f[2], ',')) {
                double c;
                if (!detail::parse_real(tok, c)) throw ParseError("scheme line " + std::to_string(line_no) + ": bad cut point '" + tok + "'");
                s.cut_points.push_back(c);
            }
            if (!std::is_sorted(s.cut_points.begin(), s.cut_points.end()))
                throw ParseError("scheme line " + std::to_string(line_no) + ": cut points not increasing");
        }
        schemes.push_back(std::move(s));
    }
    return schemes;
}

}   // namespace dmiat
