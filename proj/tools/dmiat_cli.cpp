// Batch experiment runner: parse tables, build stratified folds, fit
// discretizers and D-MIAT cuts on training folds, compose feature-set
// variants, evaluate the built-in classifiers and emit accuracy tables.

#include <fnmatch.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmiat/experiment.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> expand_data_arg(const std::string& arg) {
    if (arg.find('*') == std::string::npos && arg.find('?') == std::string::npos) return {fs::path(arg)};
    const fs::path pattern(arg);
    const fs::path dir = pattern.parent_path().empty() ? fs::path(".") : pattern.parent_path();
    const std::string name_pattern = pattern.filename().string();
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (fnmatch(name_pattern.c_str(), entry.path().filename().string().c_str(), 0) == 0)
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}   // namespace

int main(int argc, char** argv) {
    CLI::App app{"discretization toolkit: D-MIAT cut generation, baseline discretizers and a feature-augmentation experiment harness"};

    std::vector<std::string> data_args;
    std::string conf_arg = "entropy0,lift1.5,lift2.0";
    std::string disc_arg = "ew:10,ef:10,iem";
    std::string variants_arg = "A,A+DMIAT,D,A+D,A+D+DMIAT";
    std::string classifiers_arg = "nb,knn3,logistic";
    std::string out_arg = "results";
    std::string import_arg;
    dmiat::ExperimentConfig config;

    app.add_option("--data", data_args, "dataset file(s); csv or KEEL .dat, globs allowed")->required();
    app.add_option("--folds", config.folds, "number of cross-validation folds")->default_val(10);
    app.add_option("--seed", config.seed, "fold shuffle seed")->default_val(7);
    app.add_option("--supp", config.supp_fraction, "D-MIAT support fraction of the training fold")->default_val(0.1);
    app.add_option("--conf", conf_arg, "D-MIAT confidence criteria, e.g. entropy0,lift1.5,lift2.0");
    app.add_option("--disc", disc_arg, "discretizer blocks with interval counts, e.g. ew:10,ef:10,iem");
    app.add_option("--variants", variants_arg, "feature-set variants to evaluate");
    app.add_option("--classifiers", classifiers_arg, "classifiers: nb, knn3, logistic");
    app.add_option("--out", out_arg, "output directory for results/summary/feature-count CSVs");
    app.add_flag("--export-cuts", config.export_cuts, "write per-fold D-MIAT cut files into the output directory");
    app.add_option("--import-schemes", import_arg,
                   "directory of externally fitted scheme files named <dataset>_fold<F>_<label>.tsv");

    CLI11_PARSE(app, argc, argv);

    for (const auto& arg : data_args) {
        const auto expanded = expand_data_arg(arg);
        if (expanded.empty()) {
            std::cerr << "error: --data '" << arg << "' matches no files\n";
            return 2;
        }
        config.data_paths.insert(config.data_paths.end(), expanded.begin(), expanded.end());
    }

    config.criteria.clear();
    for (const auto& tok : dmiat::detail::split(conf_arg, ',')) {
        const auto c = dmiat::Criterion::from_token(tok);
        if (!c || (c->kind == dmiat::CriterionKind::Lift && c->threshold <= 1.0)) {
            std::cerr << "error: bad --conf token '" << tok << "' (expected entropy0 or lift<t> with t > 1)\n";
            return 2;
        }
        if (std::find(config.criteria.begin(), config.criteria.end(), *c) == config.criteria.end())
            config.criteria.push_back(*c);
    }

    config.discretizers.clear();
    for (const auto& tok : dmiat::detail::split(disc_arg, ',')) {
        if (tok.empty()) continue;
        const auto colon = tok.find(':');
        dmiat::DiscretizerBlock block;
        block.method = tok.substr(0, colon);
        if (colon != std::string::npos) block.k_intervals = std::stoul(tok.substr(colon + 1));
        config.discretizers.push_back(block);
    }

    config.variants = dmiat::detail::split(variants_arg, ',');
    config.classifiers.clear();
    for (const auto& tok : dmiat::detail::split(classifiers_arg, ',')) {
        if (tok == "nb") config.classifiers.push_back(dmiat::ClassifierKind::NaiveBayes);
        else if (tok == "knn3") config.classifiers.push_back(dmiat::ClassifierKind::Knn);
        else if (tok == "logistic") config.classifiers.push_back(dmiat::ClassifierKind::Logistic);
        else {
            std::cerr << "error: unknown classifier '" << tok << "'\n";
            return 2;
        }
    }

    config.out_dir = out_arg;
    if (!import_arg.empty()) config.import_schemes = fs::path(import_arg);

    try {
        const auto table = dmiat::run_experiment(config);
        dmiat::emit_results(table, config.out_dir);

        std::cout << table.records.size() << " accuracy records over " << config.data_paths.size()
                  << " dataset file(s) -> " << config.out_dir.string() << "\n";
        for (const auto& fc : table.feature_counts) {
            std::cout << fc.dataset << ": D-MIAT features per fold";
            for (auto c : fc.per_fold) std::cout << ' ' << c;
            std::cout << '\n';
        }
        for (const auto& s : table.skipped) std::cout << "skipped " << s << '\n';
        for (const auto& f : table.failures) std::cerr << "failed " << f << '\n';
        return table.failures.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
