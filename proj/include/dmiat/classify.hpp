#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmiat/dataset.hpp"

namespace dmiat {

enum class ClassifierKind { NaiveBayes, Knn, Logistic };

inline const char* classifier_token(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::NaiveBayes: return "nb";
        case ClassifierKind::Knn: return "knn3";
        default: return "logistic";
    }
}

/// Min-max scaling for continuous attributes plus one-hot coding for nominal
/// ones, fitted on training rows. Zero-range continuous features scale to 0
/// for every input, so constant columns never affect distances or scores.
/// Missing continuous values encode as 0.5, missing/unknown nominals as an
/// all-zero one-hot block.
struct FeatureEncoder {
    struct Slot {
        std::size_t attr = 0;
        bool continuous = true;
        double min = 0.0;
        double range = 0.0;        // 0 when constant
        std::size_t offset = 0;    // first output dimension
        std::size_t width = 1;     // 1 for continuous, |symbols| for nominal
    };
    std::vector<Slot> slots;
    std::size_t dim = 0;

    static FeatureEncoder fit(const Dataset& train) {
        FeatureEncoder enc;
        for (std::size_t j = 0; j < train.n_attributes(); ++j) {
            Slot s;
            s.attr = j;
            s.offset = enc.dim;
            if (train.attributes[j].kind == AttrKind::Continuous) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (double v : train.columns[j]) {
                    if (is_missing(v)) continue;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (!std::isfinite(lo)) { lo = 0.0; hi = 0.0; }   // all-missing column
                s.min = lo;
                s.range = hi - lo;
            } else {
                s.continuous = false;
                s.width = train.attributes[j].symbols.size();
            }
            enc.dim += s.width;
            enc.slots.push_back(s);
        }
        return enc;
    }

    /// `codes` remaps nominal codes of the source dataset into training
    /// coding (-1 = unseen/missing); pass nullptr when codings already agree.
    void encode(const Dataset& ds, std::size_t row, const std::vector<std::vector<int>>* remap,
                std::vector<double>& out) const {
        out.assign(dim, 0.0);
        for (const auto& s : slots) {
            const double v = ds.columns[s.attr][row];
            if (s.continuous) {
                if (is_missing(v)) out[s.offset] = 0.5;
                else if (s.range == 0.0) out[s.offset] = 0.0;
                else out[s.offset] = (v - s.min) / s.range;
            } else {
                if (is_missing(v)) continue;
                int code = static_cast<int>(v);
                if (remap) code = (*remap)[s.attr].empty() ? -1 : (*remap)[s.attr][static_cast<std::size_t>(code)];
                if (code >= 0 && static_cast<std::size_t>(code) < s.width)
                    out[s.offset + static_cast<std::size_t>(code)] = 1.0;
            }
        }
    }
};

struct GaussianStat {
    double mean = 0.0;
    double var = 0.0;
    std::int64_t count = 0;   // 0 means no data: the factor is skipped at predict time
};

struct NaiveBayesModel {
    std::vector<double> priors;                                      // [class], MLE
    std::vector<std::vector<GaussianStat>> gauss;                    // [attr][class], continuous attrs
    std::vector<std::vector<std::vector<std::int64_t>>> nominal;     // [attr][class][symbol]
};

struct KnnModel {
    std::size_t k = 3;
    FeatureEncoder encoder;
    std::vector<std::vector<double>> points;   // encoded training rows, original order
    std::vector<int> labels;
};

struct LogisticModel {
    FeatureEncoder encoder;
    std::vector<int> present;                  // class codes seen in training, domain order
    std::vector<std::vector<double>> weights;  // [present class][dim + 1], last entry is the bias
    std::vector<double> loss_history;          // loss before each update plus the final loss
};

struct Model {
    ClassifierKind kind = ClassifierKind::NaiveBayes;
    std::vector<Attribute> schema;
    std::vector<std::string> class_domain;
    NaiveBayesModel nb;
    KnnModel knn;
    LogisticModel logistic;
};

namespace detail {

constexpr double kVarianceFloor = 1e-9;
constexpr int kLogisticIterations = 500;
constexpr double kLogisticStep = 0.1;
constexpr double kLogisticL2 = 1e-4;

inline NaiveBayesModel train_nb(const Dataset& train) {
    NaiveBayesModel m;
    const std::size_t n_classes = train.class_domain.size();
    const std::size_t n = train.n_rows();
    std::vector<std::int64_t> class_n(n_classes, 0);
    for (int l : train.labels) ++class_n[static_cast<std::size_t>(l)];
    m.priors.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c)
        m.priors[c] = static_cast<double>(class_n[c]) / static_cast<double>(n);

    m.gauss.resize(train.n_attributes());
    m.nominal.resize(train.n_attributes());
    for (std::size_t j = 0; j < train.n_attributes(); ++j) {
        if (train.attributes[j].kind == AttrKind::Continuous) {
            m.gauss[j].assign(n_classes, {});
            std::vector<double> sum(n_classes, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = train.columns[j][i];
                if (is_missing(v)) continue;
                auto& g = m.gauss[j][static_cast<std::size_t>(train.labels[i])];
                sum[static_cast<std::size_t>(train.labels[i])] += v;
                ++g.count;
            }
            for (std::size_t c = 0; c < n_classes; ++c)
                if (m.gauss[j][c].count > 0) m.gauss[j][c].mean = sum[c] / static_cast<double>(m.gauss[j][c].count);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = train.columns[j][i];
                if (is_missing(v)) continue;
                auto& g = m.gauss[j][static_cast<std::size_t>(train.labels[i])];
                const double d = v - g.mean;
                g.var += d * d;
            }
            for (std::size_t c = 0; c < n_classes; ++c) {
                auto& g = m.gauss[j][c];
                if (g.count > 0) g.var = std::max(g.var / static_cast<double>(g.count), kVarianceFloor);
            }
        } else {
            m.nominal[j].assign(n_classes, std::vector<std::int64_t>(train.attributes[j].symbols.size(), 0));
            for (std::size_t i = 0; i < n; ++i) {
                const double v = train.columns[j][i];
                if (is_missing(v)) continue;
                ++m.nominal[j][static_cast<std::size_t>(train.labels[i])][static_cast<std::size_t>(v)];
            }
        }
    }
    return m;
}

/// Per-class log scores: log prior plus Gaussian log densities and
/// Laplace-smoothed (alpha = 1) nominal log frequencies. Missing values and
/// unseen symbols contribute nothing. Classes absent from training get -inf.
inline void nb_log_scores(const Model& model, const Dataset& ds, std::size_t row,
                          const std::vector<std::vector<int>>* remap, std::vector<double>& scores) {
    const auto& m = model.nb;
    const std::size_t n_classes = m.priors.size();
    scores.assign(n_classes, -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (m.priors[c] == 0.0) continue;
        double s = std::log(m.priors[c]);
        for (std::size_t j = 0; j < model.schema.size(); ++j) {
            const double v = ds.columns[j][row];
            if (is_missing(v)) continue;
            if (model.schema[j].kind == AttrKind::Continuous) {
                const auto& g = m.gauss[j][c];
                if (g.count == 0) continue;
                const double d = v - g.mean;
                s += -0.5 * std::log(2.0 * M_PI * g.var) - d * d / (2.0 * g.var);
            } else {
                int code = static_cast<int>(v);
                if (remap) code = (*remap)[j].empty() ? -1 : (*remap)[j][static_cast<std::size_t>(code)];
                if (code < 0) continue;   // unseen symbol behaves as missing
                const auto& counts = m.nominal[j][c];
                const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
                s += std::log(static_cast<double>(counts[static_cast<std::size_t>(code)] + 1) /
                              static_cast<double>(total + static_cast<std::int64_t>(counts.size())));
            }
        }
        scores[c] = s;
    }
}

inline LogisticModel train_logistic(const Dataset& train) {
    LogisticModel m;
    m.encoder = FeatureEncoder::fit(train);
    std::vector<char> seen(train.class_domain.size(), 0);
    for (int l : train.labels) seen[static_cast<std::size_t>(l)] = 1;
    for (std::size_t c = 0; c < seen.size(); ++c)
        if (seen[c]) m.present.push_back(static_cast<int>(c));

    const std::size_t n = train.n_rows();
    const std::size_t d = m.encoder.dim;
    const std::size_t nc = m.present.size();
    std::vector<std::vector<double>> x(n);
    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.encoder.encode(train, i, nullptr, x[i]);
        y[i] = static_cast<std::size_t>(
            std::find(m.present.begin(), m.present.end(), train.labels[i]) - m.present.begin());
    }

    m.weights.assign(nc, std::vector<double>(d + 1, 0.0));
    std::vector<double> logits(nc);
    std::vector<std::vector<double>> grad(nc, std::vector<double>(d + 1, 0.0));

    for (int iter = 0; iter <= kLogisticIterations; ++iter) {
        double loss = 0.0;
        for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double max_logit = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < nc; ++c) {
                double z = m.weights[c][d];
                for (std::size_t j = 0; j < d; ++j) z += m.weights[c][j] * x[i][j];
                logits[c] = z;
                max_logit = std::max(max_logit, z);
            }
            double denom = 0.0;
            for (std::size_t c = 0; c < nc; ++c) denom += std::exp(logits[c] - max_logit);
            loss -= (logits[y[i]] - max_logit - std::log(denom));
            for (std::size_t c = 0; c < nc; ++c) {
                const double p = std::exp(logits[c] - max_logit) / denom;
                const double err = p - (c == y[i] ? 1.0 : 0.0);
                for (std::size_t j = 0; j < d; ++j) grad[c][j] += err * x[i][j];
                grad[c][d] += err;
            }
        }
        loss /= static_cast<double>(n);
        double reg = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t j = 0; j < d; ++j) reg += m.weights[c][j] * m.weights[c][j];
        loss += 0.5 * kLogisticL2 * reg;
        m.loss_history.push_back(loss);
        if (iter == kLogisticIterations) break;
        for (std::size_t c = 0; c < nc; ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                const double g = grad[c][j] / static_cast<double>(n) + kLogisticL2 * m.weights[c][j];
                m.weights[c][j] -= kLogisticStep * g;
            }
            m.weights[c][d] -= kLogisticStep * grad[c][d] / static_cast<double>(n);
        }
    }
    return m;
}

}   // namespace detail

inline Model train_model(ClassifierKind kind, const Dataset& train) {
    if (train.n_rows() == 0) throw std::invalid_argument("train_model: empty training set");
    Model m;
    m.kind = kind;
    m.schema = train.attributes;
    m.class_domain = train.class_domain;
    switch (kind) {
        case ClassifierKind::NaiveBayes: m.nb = detail::train_nb(train); break;
        case ClassifierKind::Knn: {
            m.knn.k = std::min<std::size_t>(3, train.n_rows());
            m.knn.encoder = FeatureEncoder::fit(train);
            m.knn.points.resize(train.n_rows());
            for (std::size_t i = 0; i < train.n_rows(); ++i)
                m.knn.encoder.encode(train, i, nullptr, m.knn.points[i]);
            m.knn.labels = train.labels;
            break;
        }
        case ClassifierKind::Logistic: m.logistic = detail::train_logistic(train); break;
    }
    return m;
}

/// Builds the nominal-code translation from `ds` coding into model coding.
/// Empty when the schemas are incompatible (names or kinds differ).
inline std::vector<std::vector<int>> schema_remap(const Model& model, const Dataset& ds) {
    if (ds.n_attributes() != model.schema.size())
        throw std::invalid_argument("predict: schema mismatch (attribute count)");
    std::vector<std::vector<int>> remap(model.schema.size());
    for (std::size_t j = 0; j < model.schema.size(); ++j) {
        if (ds.attributes[j].name != model.schema[j].name || ds.attributes[j].kind != model.schema[j].kind)
            throw std::invalid_argument("predict: schema mismatch at attribute '" + ds.attributes[j].name + "'");
        if (model.schema[j].kind == AttrKind::Nominal) {
            remap[j].resize(ds.attributes[j].symbols.size());
            for (std::size_t s = 0; s < ds.attributes[j].symbols.size(); ++s)
                remap[j][s] = model.schema[j].symbol_code(ds.attributes[j].symbols[s]);
        }
    }
    return remap;
}

/// Predicted class code (into the model's class domain). Argmax ties break
/// toward the earlier class in domain order; k-NN distance ties break toward
/// the lower training-row index.
inline int predict_code(const Model& model, const Dataset& ds, std::size_t row,
                        const std::vector<std::vector<int>>& remap) {
    switch (model.kind) {
        case ClassifierKind::NaiveBayes: {
            std::vector<double> scores;
            detail::nb_log_scores(model, ds, row, &remap, scores);
            int best = 0;
            for (std::size_t c = 1; c < scores.size(); ++c)
                if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
            return best;
        }
        case ClassifierKind::Knn: {
            std::vector<double> x;
            model.knn.encoder.encode(ds, row, &remap, x);
            std::vector<std::pair<double, std::size_t>> dist(model.knn.points.size());
            for (std::size_t i = 0; i < model.knn.points.size(); ++i) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j) {
                    const double d = x[j] - model.knn.points[i][j];
                    d2 += d * d;
                }
                dist[i] = {d2, i};
            }
            std::sort(dist.begin(), dist.end());
            std::vector<int> votes(model.class_domain.size(), 0);
            for (std::size_t i = 0; i < model.knn.k; ++i)
                ++votes[static_cast<std::size_t>(model.knn.labels[dist[i].second])];
            int best = 0;
            for (std::size_t c = 1; c < votes.size(); ++c)
                if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
            return best;
        }
        default: {
            std::vector<double> x;
            model.logistic.encoder.encode(ds, row, &remap, x);
            const std::size_t d = model.logistic.encoder.dim;
            std::size_t best = 0;
            double best_z = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < model.logistic.present.size(); ++c) {
                double z = model.logistic.weights[c][d];
                for (std::size_t j = 0; j < d; ++j) z += model.logistic.weights[c][j] * x[j];
                if (z > best_z) { best_z = z; best = c; }
            }
            return model.logistic.present[best];
        }
    }
}

inline std::string predict(const Model& model, const Dataset& ds, std::size_t row) {
    const auto remap = schema_remap(model, ds);
    return model.class_domain[static_cast<std::size_t>(predict_code(model, ds, row, remap))];
}

/// Normalized per-class posteriors for Naive Bayes (used by the
/// normalization property); classes unseen in training get weight 0.
inline std::vector<double> nb_posteriors(const Model& model, const Dataset& ds, std::size_t row) {
    const auto remap = schema_remap(model, ds);
    std::vector<double> scores;
    detail::nb_log_scores(model, ds, row, &remap, scores);
    const double mx = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double& s : scores) {
        s = std::isinf(s) ? 0.0 : std::exp(s - mx);
        denom += s;
    }
    for (double& s : scores) s /= denom;
    return scores;
}

struct AccuracyRecord {
    std::string dataset;
    std::string variant;
    std::string classifier;
    std::size_t fold = 0;
    double accuracy = 0.0;
};

/// Exact-match accuracy of a freshly trained model on the test table.
inline double evaluate_accuracy(ClassifierKind kind, const Dataset& train, const Dataset& test) {
    if (test.n_rows() == 0) throw std::invalid_argument("evaluate: empty test fold");
    const Model model = train_model(kind, train);
    const auto remap = schema_remap(model, test);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.n_rows(); ++i) {
        const int code = predict_code(model, test, i, remap);
        if (model.class_domain[static_cast<std::size_t>(code)] == test.label_symbol(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.n_rows());
}

}   // namespace dmiat
