#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dmiat/dataset.hpp"
#include "dmiat/stats.hpp"

namespace dmiat {

enum class CriterionKind { EntropyZero, Lift };

/// Cut acceptance rule. For Lift the threshold is the minimum lift (> 1);
/// for EntropyZero the threshold is the maximum subset entropy, 0 in every
/// configuration the experiments use.
struct Criterion {
    CriterionKind kind = CriterionKind::Lift;
    double threshold = 1.5;

    static Criterion entropy_zero() { return {CriterionKind::EntropyZero, 0.0}; }
    static Criterion lift(double min_lift) { return {CriterionKind::Lift, min_lift}; }

    bool operator==(const Criterion&) const = default;

    std::string token() const {
        return (kind == CriterionKind::EntropyZero ? "entropy" : "lift") + detail::format_real(threshold);
    }
    static std::optional<Criterion> from_token(std::string_view t) {
        double x;
        if (t.starts_with("entropy") && detail::parse_real(t.substr(7), x)) return Criterion{CriterionKind::EntropyZero, x};
        if (t.starts_with("lift") && detail::parse_real(t.substr(4), x)) return Criterion{CriterionKind::Lift, x};
        return std::nullopt;
    }
};

struct DmiatConfig {
    double supp_fraction = 0.1;
    std::vector<Criterion> criteria = {Criterion::entropy_zero(), Criterion::lift(1.5), Criterion::lift(2.0)};
};

enum class CutDirection { Low, High };

inline const char* direction_token(CutDirection d) { return d == CutDirection::Low ? "low" : "high"; }

struct CutEvidence {
    std::size_t subset_size = 0;
    std::size_t subset_class_count = 0;   // rows of target_class inside the subset
    double score = 0.0;                   // achieved lift, or subset entropy for entropy cuts
};

/// One binary indicator feature: rows with a known value on `attr` lying at
/// or beyond `threshold` (<= for Low, >= for High) map to 1, everything else
/// (including missing) to 0. Thresholds are midpoints between two distinct
/// consecutive training values and are never re-fit at application time.
struct CutFeature {
    std::size_t attr = 0;
    CutDirection direction = CutDirection::Low;
    double threshold = 0.0;
    Criterion criterion;
    int target_class = 0;
    CutEvidence evidence;
};

struct BoundaryHit {
    std::size_t boundary = 0;   // subset is [0..boundary] for Low, [boundary..n-1] for High, inclusive
    CutEvidence evidence;
};

/// Widest extreme-anchored subset that satisfies the criterion and carries at
/// least `min_support` rows of the target class. The boundary never splits a
/// run of equal values and the full range never qualifies. `values`/`labels`
/// must be sorted ascending by value; `whole` is the training-fold class
/// distribution used by lift.
inline std::optional<BoundaryHit> find_boundary(std::span<const double> values, std::span<const int> labels,
                                                std::size_t n_classes, int target, CutDirection direction,
                                                const Criterion& criterion, std::size_t min_support,
                                                const ClassDistribution& whole) {
    const std::size_t n = values.size();
    if (n < 2) return std::nullopt;
    const auto t = static_cast<std::size_t>(target);
    if (whole.counts[t] == 0) return std::nullopt;
    const double p_whole = static_cast<double>(whole.counts[t]) / static_cast<double>(whole.total);

    ClassDistribution subset;
    subset.counts.assign(n_classes, 0);
    std::optional<BoundaryHit> best;

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = direction == CutDirection::Low ? i : n - 1 - i;
        ++subset.counts[static_cast<std::size_t>(labels[idx])];
        ++subset.total;
        const std::size_t size = i + 1;
        if (size == n) break;   // full-range cut carries no information

        const std::size_t count_t = static_cast<std::size_t>(subset.counts[t]);
        if (criterion.kind == CriterionKind::EntropyZero && criterion.threshold == 0.0 && count_t != size)
            break;   // purity is lost for good; no larger subset can qualify
        if (count_t < min_support) continue;

        const std::size_t outward = direction == CutDirection::Low ? idx + 1 : idx - 1;
        if (values[idx] == values[outward]) continue;   // would split a tie run

        if (criterion.kind == CriterionKind::EntropyZero) {
            const double e = entropy(subset);
            const bool target_majority =
                subset.counts[t] == *std::max_element(subset.counts.begin(), subset.counts.end());
            if (e <= criterion.threshold && target_majority)
                best = BoundaryHit{idx, {size, count_t, e}};
        } else {
            const double score = (static_cast<double>(count_t) / static_cast<double>(size)) / p_whole;
            if (score >= criterion.threshold)
                best = BoundaryHit{idx, {size, count_t, score}};
        }
    }
    return best;
}

/// Runs the full search: every continuous attribute, every class in domain
/// order, low before high, criteria in configuration order. Cuts that land on
/// an identical (attr, direction, threshold) are emitted once, first hit wins.
inline std::vector<CutFeature> generate_cuts(const Dataset& ds, std::span<const std::size_t> train_rows,
                                             const DmiatConfig& config) {
    std::vector<CutFeature> cuts;
    if (train_rows.empty()) return cuts;
    const auto min_support =
        static_cast<std::size_t>(std::ceil(config.supp_fraction * static_cast<double>(train_rows.size())));
    const ClassDistribution whole = class_counts(ds, train_rows);
    const std::size_t n_classes = ds.class_domain.size();

    std::set<std::tuple<std::size_t, CutDirection, double>> seen;

    for (std::size_t attr = 0; attr < ds.n_attributes(); ++attr) {
        if (ds.attributes[attr].kind != AttrKind::Continuous) continue;
        const SortedColumn sc = sorted_order(ds, attr, train_rows);
        if (sc.order.size() < 2) continue;

        std::vector<double> values(sc.order.size());
        std::vector<int> labels(sc.order.size());
        for (std::size_t i = 0; i < sc.order.size(); ++i) {
            values[i] = ds.columns[attr][sc.order[i]];
            labels[i] = ds.labels[sc.order[i]];
        }

        for (std::size_t cls = 0; cls < n_classes; ++cls) {
            for (CutDirection dir : {CutDirection::Low, CutDirection::High}) {
                for (const Criterion& criterion : config.criteria) {
                    auto hit = find_boundary(values, labels, n_classes, static_cast<int>(cls), dir, criterion,
                                             min_support, whole);
                    if (!hit) continue;
                    const std::size_t b = hit->boundary;
                    const double threshold = dir == CutDirection::Low ? (values[b] + values[b + 1]) / 2.0
                                                                      : (values[b - 1] + values[b]) / 2.0;
                    if (!seen.emplace(attr, dir, threshold).second) continue;
                    cuts.push_back({attr, dir, threshold, criterion, static_cast<int>(cls), hit->evidence});
                }
            }
        }
    }
    return cuts;
}

/// Applies frozen cuts to arbitrary rows; returns one 0/1 column per cut,
/// each of length rows.size(). Missing values map to 0.
inline std::vector<std::vector<std::uint8_t>> apply_cuts(std::span<const CutFeature> cuts, const Dataset& ds,
                                                         std::span<const std::size_t> rows) {
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(cuts.size());
    for (const auto& cut : cuts) {
        if (cut.attr >= ds.n_attributes() || ds.attributes[cut.attr].kind != AttrKind::Continuous)
            throw std::invalid_argument("apply_cuts: cut references attribute " + std::to_string(cut.attr) +
                                        " which is absent or nominal");
        std::vector<std::uint8_t> col(rows.size(), 0);
        const auto& values = ds.columns[cut.attr];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double v = values[rows[i]];
            if (is_missing(v)) continue;
            col[i] = (cut.direction == CutDirection::Low ? v <= cut.threshold : v >= cut.threshold) ? 1 : 0;
        }
        out.push_back(std::move(col));
    }
    return out;
}

/// Line format: attr_index, direction, threshold, criterion, target class
/// symbol, subset size, subset class count — tab separated.
inline void write_cuts(std::span<const CutFeature> cuts, const Dataset& ds, std::ostream& out) {
    for (const auto& c : cuts) {
        out << c.attr << '\t' << direction_token(c.direction) << '\t' << detail::format_real(c.threshold) << '\t'
            << c.criterion.token() << '\t' << ds.class_domain[static_cast<std::size_t>(c.target_class)] << '\t'
            << c.evidence.subset_size << '\t' << c.evidence.subset_class_count << '\n';
    }
}

inline std::vector<CutFeature> read_cuts(std::istream& in, const Dataset& ds) {
    std::vector<CutFeature> cuts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line, '\t');
        if (f.size() != 7) throw ParseError("cut line " + std::to_string(line_no) + ": expected 7 fields");
        CutFeature c;
        double attr_idx;
        if (!detail::parse_real(f[0], attr_idx)) throw ParseError("cut line " + std::to_string(line_no) + ": bad attribute index");
        c.attr = static_cast<std::size_t>(attr_idx);
        if (f[1] == "low") c.direction = CutDirection::Low;
        else if (f[1] == "high") c.direction = CutDirection::High;
        else throw ParseError("cut line " + std::to_string(line_no) + ": bad direction '" + f[1] + "'");
        if (!detail::parse_real(f[2], c.threshold)) throw ParseError("cut line " + std::to_string(line_no) + ": bad threshold");
        const auto crit = Criterion::from_token(f[3]);
        if (!crit) throw ParseError("cut line " + std::to_string(line_no) + ": bad criterion '" + f[3] + "'");
        c.criterion = *crit;
        const int code = ds.class_code(f[4]);
        if (code < 0) throw ParseError("cut line " + std::to_string(line_no) + ": unknown class '" + f[4] + "'");
        c.target_class = code;
        double size, count;
        if (!detail::parse_real(f[5], size) || !detail::parse_real(f[6], count))
            throw ParseError("cut line " + std::to_string(line_no) + ": bad evidence counts");
        c.evidence.subset_size = static_cast<std::size_t>(size);
        c.evidence.subset_class_count = static_cast<std::size_t>(count);
        cuts.push_back(c);
    }
    return cuts;
}

/// Provenance-tagged column name used when cuts become dataset attributes.
inline std::string cut_feature_name(const Dataset& ds, const CutFeature& c) {
    return ds.attributes[c.attr].name + "__dmiat_" + direction_token(c.direction) + "_" + c.criterion.token() + "_" +
           ds.class_domain[static_cast<std::size_t>(c.target_class)];
}

}   // namespace dmiat
