#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmiat/cuts.hpp"
#include "dmiat/dataset.hpp"
#include "dmiat/discretize.hpp"
#include "dmiat/folds.hpp"

namespace dmiat {

struct DiscretizerBlock {
    std::string method;           // "ew" | "ef" | "iem" | imported scheme label
    std::size_t k_intervals = 10;
};

struct VariantSpec {
    std::string name;
    bool include_original = false;
    std::vector<DiscretizerBlock> discretizer_blocks;
    std::optional<DmiatConfig> dmiat_block;
};

/// Raised when a variant spec produces zero columns. Callers record the
/// variant as "no result" instead of treating it as a crash.
class EmptyVariantError : public std::runtime_error {
public:
    explicit EmptyVariantError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ComposedVariant {
    Dataset train;
    Dataset test;
    std::vector<CutFeature> cuts;                                 // fitted on the train fold
    std::vector<std::vector<DiscretizationScheme>> block_schemes; // [block][continuous attr]
};

namespace detail {

inline void append_original_columns(const Dataset& ds, const VariantSpec& spec, std::span<const std::size_t> rows,
                                    Dataset& out) {
    for (std::size_t j = 0; j < ds.n_attributes(); ++j) {
        // D-only variants keep the original nominal columns; everything else is generated.
        if (!spec.include_original && ds.attributes[j].kind != AttrKind::Nominal) continue;
        out.attributes.push_back(ds.attributes[j]);
        std::vector<double> col(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) col[i] = ds.columns[j][rows[i]];
        out.columns.push_back(std::move(col));
    }
}

inline void append_scheme_column(const Dataset& ds, const DiscretizationScheme& scheme, const std::string& method,
                                 std::span<const std::size_t> rows, Dataset& out) {
    Attribute attr;
    attr.name = ds.attributes[scheme.attr].name + "__" + method;
    attr.kind = AttrKind::Nominal;
    const std::size_t n_intervals = scheme.cut_points.size() + 1;
    if (scheme.cut_points.empty()) attr.symbols = {"All"};
    else
        for (std::size_t i = 0; i < n_intervals; ++i) attr.symbols.push_back(std::to_string(i));

    const auto ids = apply_scheme(scheme, ds, rows);
    const int missing_id = static_cast<int>(scheme.cut_points.size()) + 1;
    std::vector<double> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        col[i] = ids[i] == missing_id ? missing_value() : static_cast<double>(ids[i]);
    out.attributes.push_back(std::move(attr));
    out.columns.push_back(std::move(col));
}

inline void append_cut_columns(const Dataset& ds, std::span<const CutFeature> cuts,
                               std::span<const std::size_t> rows, Dataset& out) {
    const auto bits = apply_cuts(cuts, ds, rows);
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        Attribute attr;
        attr.name = cut_feature_name(ds, cuts[c]);
        attr.kind = AttrKind::Nominal;
        attr.symbols = {"0", "1"};
        std::vector<double> col(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) col[i] = static_cast<double>(bits[c][i]);
        out.attributes.push_back(std::move(attr));
        out.columns.push_back(std::move(col));
    }
}

}   // namespace detail

/// Assembles one side (train or test) of a composed variant from prefitted
/// artifacts. Column order: original attributes, then discretizer blocks in
/// block order (attribute order inside each), then D-MIAT cut columns.
inline Dataset compose_side(const Dataset& ds, const VariantSpec& spec,
                            std::span<const std::vector<DiscretizationScheme>> block_schemes,
                            std::span<const CutFeature> cuts, std::span<const std::size_t> rows) {
    Dataset out;
    out.name = ds.name;
    out.class_name = ds.class_name;
    out.class_domain = ds.class_domain;
    out.labels.reserve(rows.size());
    for (auto r : rows) out.labels.push_back(ds.labels[r]);

    detail::append_original_columns(ds, spec, rows, out);
    for (std::size_t b = 0; b < spec.discretizer_blocks.size(); ++b)
        for (const auto& scheme : block_schemes[b])
            detail::append_scheme_column(ds, scheme, spec.discretizer_blocks[b].method, rows, out);
    if (spec.dmiat_block) detail::append_cut_columns(ds, cuts, rows, out);

    if (out.attributes.empty())
        throw EmptyVariantError("variant '" + spec.name + "' yields zero columns on " + ds.name);
    return out;
}

/// Fits every block on the training rows only, then assembles both sides.
/// Train and test always share an identical schema.
inline ComposedVariant compose(const Dataset& ds, const FoldPair& fold, const VariantSpec& spec) {
    ComposedVariant out;
    for (const auto& block : spec.discretizer_blocks) {
        std::vector<DiscretizationScheme> schemes;
        for (std::size_t j = 0; j < ds.n_attributes(); ++j) {
            if (ds.attributes[j].kind != AttrKind::Continuous) continue;
            schemes.push_back(fit_scheme(ds, fold.train_idx, j, block.method, block.k_intervals));
        }
        out.block_schemes.push_back(std::move(schemes));
    }
    if (spec.dmiat_block) out.cuts = generate_cuts(ds, fold.train_idx, *spec.dmiat_block);
    out.train = compose_side(ds, spec, out.block_schemes, out.cuts, fold.train_idx);
    out.test = compose_side(ds, spec, out.block_schemes, out.cuts, fold.test_idx);
    return out;
}

}   // namespace dmiat
