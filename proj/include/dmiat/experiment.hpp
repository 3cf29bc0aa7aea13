#pragma once

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmiat/augment.hpp"
#include "dmiat/classify.hpp"
#include "dmiat/cuts.hpp"
#include "dmiat/dataset.hpp"
#include "dmiat/discretize.hpp"
#include "dmiat/folds.hpp"

namespace dmiat {

struct ExperimentConfig {
    std::vector<std::filesystem::path> data_paths;
    std::size_t folds = 10;
    std::uint64_t seed = 7;
    double supp_fraction = 0.1;
    std::vector<Criterion> criteria = {Criterion::entropy_zero(), Criterion::lift(1.5), Criterion::lift(2.0)};
    std::vector<DiscretizerBlock> discretizers = {{"ew", 10}, {"ef", 10}, {"iem", 10}};
    std::vector<std::string> variants = {"A", "A+DMIAT", "D", "A+D", "A+D+DMIAT"};
    std::vector<ClassifierKind> classifiers = {ClassifierKind::NaiveBayes, ClassifierKind::Knn,
                                               ClassifierKind::Logistic};
    std::filesystem::path out_dir;
    bool export_cuts = false;
    std::optional<std::filesystem::path> import_schemes;
};

struct VariantSummary {
    std::string dataset;
    std::string variant;
    std::string classifier;
    std::size_t folds = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct FeatureCountRecord {
    std::string dataset;
    std::size_t n_continuous = 0;
    std::vector<std::size_t> per_fold;
};

struct ResultsTable {
    std::vector<AccuracyRecord> records;
    std::vector<VariantSummary> summaries;
    std::vector<FeatureCountRecord> feature_counts;
    std::vector<std::string> skipped;    // per (dataset, variant, fold) empty-variant notes
    std::vector<std::string> failures;   // dataset-level failures; any entry means nonzero exit
};

/// Expands a variant token like "A+D+DMIAT" or "A+IEM" against the configured
/// discretizers. Parts: A (original columns), D (every configured block),
/// DMIAT, a known method token (that block only), or an imported scheme label.
inline VariantSpec parse_variant(const std::string& token, const ExperimentConfig& config) {
    VariantSpec spec;
    spec.name = token;
    for (const auto& raw : detail::split(token, '+')) {
        std::string part = raw;
        std::string upper = part;
        std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
        std::string lower = part;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (upper == "A") {
            spec.include_original = true;
        } else if (upper == "D") {
            for (const auto& b : config.discretizers) spec.discretizer_blocks.push_back(b);
        } else if (upper == "DMIAT") {
            spec.dmiat_block = DmiatConfig{config.supp_fraction, config.criteria};
        } else if (lower == "ew" || lower == "ef" || lower == "iem") {
            std::size_t k = 10;
            for (const auto& b : config.discretizers)
                if (b.method == lower) k = b.k_intervals;
            spec.discretizer_blocks.push_back({lower, k});
        } else if (config.import_schemes) {
            spec.discretizer_blocks.push_back({part, 0});   // imported label, resolved per fold
        } else {
            throw std::invalid_argument("unknown variant part '" + part + "' in '" + token + "'");
        }
    }
    if (!spec.include_original && spec.discretizer_blocks.empty() && !spec.dmiat_block)
        throw std::invalid_argument("variant '" + token + "' selects nothing");
    return spec;
}

namespace detail {

inline std::vector<DiscretizationScheme> fit_block_schemes(const Dataset& ds, const FoldPair& fold,
                                                           const DiscretizerBlock& block,
                                                           const ExperimentConfig& config, std::size_t fold_idx) {
    if (block.method == "ew" || block.method == "ef" || block.method == "iem") {
        std::vector<DiscretizationScheme> schemes;
        for (std::size_t j = 0; j < ds.n_attributes(); ++j) {
            if (ds.attributes[j].kind != AttrKind::Continuous) continue;
            schemes.push_back(fit_scheme(ds, fold.train_idx, j, block.method, block.k_intervals));
        }
        return schemes;
    }
    // Imported label: <stem>_fold<F>_<label>.tsv under --import-schemes.
    const auto path = *config.import_schemes /
                      (ds.name + "_fold" + std::to_string(fold_idx) + "_" + block.method + ".tsv");
    std::ifstream in(path);
    if (!in) throw ParseError("missing imported scheme file " + path.string());
    auto schemes = read_schemes(in);
    for (auto& s : schemes) s.method = block.method;
    return schemes;
}

inline double fold_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double fold_stddev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}   // namespace detail

/// Full batch run: parse, fold, fit on train folds, compose variants,
/// train/evaluate classifiers. Per-dataset failures are recorded and skipped;
/// everything downstream of the config is deterministic.
inline ResultsTable run_experiment(const ExperimentConfig& config) {
    ResultsTable table;
    auto paths = config.data_paths;
    std::sort(paths.begin(), paths.end());

    for (const auto& path : paths) {
        Dataset ds;
        try {
            ds = load_table(path);
        } catch (const std::exception& e) {
            table.failures.push_back(path.string() + ": " + e.what());
            continue;
        }
        try {
            const auto folds = stratified_kfold(ds, config.folds, config.seed);

            std::vector<VariantSpec> specs;
            for (const auto& token : config.variants) specs.push_back(parse_variant(token, config));
            const bool need_cuts =
                std::any_of(specs.begin(), specs.end(), [](const VariantSpec& s) { return s.dmiat_block.has_value(); });

            // Fit once per fold and share across variants.
            std::vector<std::vector<CutFeature>> fold_cuts(folds.size());
            if (need_cuts) {
                const DmiatConfig dc{config.supp_fraction, config.criteria};
                for (std::size_t f = 0; f < folds.size(); ++f)
                    fold_cuts[f] = generate_cuts(ds, folds[f].train_idx, dc);
            }
            std::map<std::string, std::vector<std::vector<DiscretizationScheme>>> scheme_cache;
            for (const auto& spec : specs)
                for (const auto& block : spec.discretizer_blocks)
                    if (!scheme_cache.count(block.method)) {
                        auto& per_fold = scheme_cache[block.method];
                        per_fold.resize(folds.size());
                        for (std::size_t f = 0; f < folds.size(); ++f)
                            per_fold[f] = detail::fit_block_schemes(ds, folds[f], block, config, f);
                    }

            for (const auto& spec : specs) {
                for (std::size_t f = 0; f < folds.size(); ++f) {
                    std::vector<std::vector<DiscretizationScheme>> blocks;
                    for (const auto& block : spec.discretizer_blocks)
                        blocks.push_back(scheme_cache.at(block.method)[f]);
                    static const std::vector<CutFeature> no_cuts;
                    const auto& cuts = spec.dmiat_block ? fold_cuts[f] : no_cuts;
                    Dataset train, test;
                    try {
                        train = compose_side(ds, spec, blocks, cuts, folds[f].train_idx);
                        test = compose_side(ds, spec, blocks, cuts, folds[f].test_idx);
                    } catch (const EmptyVariantError& e) {
                        table.skipped.push_back(ds.name + "/" + spec.name + "/fold" + std::to_string(f) + ": " +
                                                e.what());
                        continue;
                    }
                    for (auto kind : config.classifiers) {
                        AccuracyRecord rec;
                        rec.dataset = ds.name;
                        rec.variant = spec.name;
                        rec.classifier = classifier_token(kind);
                        rec.fold = f;
                        rec.accuracy = evaluate_accuracy(kind, train, test);
                        table.records.push_back(std::move(rec));
                    }
                }
            }

            if (need_cuts) {
                FeatureCountRecord fc;
                fc.dataset = ds.name;
                for (const auto& a : ds.attributes) fc.n_continuous += a.kind == AttrKind::Continuous;
                for (std::size_t f = 0; f < folds.size(); ++f) fc.per_fold.push_back(fold_cuts[f].size());
                table.feature_counts.push_back(std::move(fc));
            }
            if (config.export_cuts && need_cuts) {
                std::filesystem::create_directories(config.out_dir);
                for (std::size_t f = 0; f < folds.size(); ++f) {
                    std::ofstream out(config.out_dir / ("cuts_" + ds.name + "_fold" + std::to_string(f) + ".tsv"));
                    write_cuts(fold_cuts[f], ds, out);
                }
            }
        } catch (const std::exception& e) {
            table.failures.push_back(ds.name + ": " + e.what());
            continue;
        }
    }

    // Records come out of ordered loops; sort anyway so emission never depends
    // on evaluation order. Variant/classifier rank follows the config lists.
    auto variant_rank = [&](const std::string& v) {
        for (std::size_t i = 0; i < config.variants.size(); ++i)
            if (config.variants[i] == v) return i;
        return config.variants.size();
    };
    auto classifier_rank = [&](const std::string& c) {
        for (std::size_t i = 0; i < config.classifiers.size(); ++i)
            if (classifier_token(config.classifiers[i]) == c) return i;
        return config.classifiers.size();
    };
    std::sort(table.records.begin(), table.records.end(), [&](const AccuracyRecord& a, const AccuracyRecord& b) {
        if (a.dataset != b.dataset) return a.dataset < b.dataset;
        if (a.variant != b.variant) return variant_rank(a.variant) < variant_rank(b.variant);
        if (a.classifier != b.classifier) return classifier_rank(a.classifier) < classifier_rank(b.classifier);
        return a.fold < b.fold;
    });

    // Per-(dataset, variant, classifier) mean and sample stddev over the folds present.
    std::size_t i = 0;
    while (i < table.records.size()) {
        std::size_t j = i;
        std::vector<double> accs;
        while (j < table.records.size() && table.records[j].dataset == table.records[i].dataset &&
               table.records[j].variant == table.records[i].variant &&
               table.records[j].classifier == table.records[i].classifier) {
            accs.push_back(table.records[j].accuracy);
            ++j;
        }
        VariantSummary s;
        s.dataset = table.records[i].dataset;
        s.variant = table.records[i].variant;
        s.classifier = table.records[i].classifier;
        s.folds = accs.size();
        s.mean = detail::fold_mean(accs);
        s.stddev = detail::fold_stddev(accs, s.mean);
        table.summaries.push_back(std::move(s));
        i = j;
    }
    return table;
}

/// Writes results.csv, summary.csv and feature_counts.csv under out_dir.
/// Output is byte-identical across runs with the same config.
inline void emit_results(const ResultsTable& table, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "results.csv");
        if (!out) throw std::runtime_error("cannot write " + (out_dir / "results.csv").string());
        out << "dataset,variant,classifier,fold,accuracy\n";
        for (const auto& r : table.records)
            out << r.dataset << ',' << r.variant << ',' << r.classifier << ',' << r.fold << ','
                << detail::format_real(r.accuracy) << '\n';
    }
    {
        std::ofstream out(out_dir / "summary.csv");
        out << "dataset,variant,classifier,folds,mean_accuracy,stddev\n";
        for (const auto& s : table.summaries)
            out << s.dataset << ',' << s.variant << ',' << s.classifier << ',' << s.folds << ','
                << detail::format_real(s.mean) << ',' << detail::format_real(s.stddev) << '\n';
    }
    {
        std::ofstream out(out_dir / "feature_counts.csv");
        out << "dataset,n_continuous,mean_dmiat_features\n";
        for (const auto& fc : table.feature_counts) {
            double mean = 0.0;
            for (auto c : fc.per_fold) mean += static_cast<double>(c);
            if (!fc.per_fold.empty()) mean /= static_cast<double>(fc.per_fold.size());
            out << fc.dataset << ',' << fc.n_continuous << ',' << detail::format_real(mean) << '\n';
        }
    }
}

}   // namespace dmiat
