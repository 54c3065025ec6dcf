#include "pmsearch/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

#include "pmsearch/error.hpp"

namespace pmsearch {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

void check_finite(FeatureArray const& x)
{
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw Error("feature value is not finite");
        }
    }
}

double max_abs(ParamVector const& g)
{
    double m = 0.0;
    for (double v : g) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace

double sigmoid(double z)
{
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double const e = std::exp(z);
    return e / (1.0 + e);
}

LogisticObjective::LogisticObjective(std::vector<FeatureArray> rows, std::vector<int> labels, double lambda)
    : m_rows(std::move(rows)), m_lambda(lambda)
{
    if (m_rows.size() != labels.size()) {
        throw Error("row and label counts differ");
    }
    m_signs.reserve(labels.size());
    for (int y : labels) {
        m_signs.push_back(y == 1 ? 1.0 : -1.0);
    }
}

double LogisticObjective::margin(std::size_t i, ParamVector const& theta) const
{
    double z = theta[kFeatureCount];
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        z += theta[j] * m_rows[i][j];
    }
    return m_signs[i] * z;
}

double LogisticObjective::value(ParamVector const& theta) const
{
    double loss = 0.0;
    for (std::size_t i = 0; i < m_rows.size(); ++i) {
        loss += softplus(-margin(i, theta));
    }
    double norm2 = 0.0;
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        norm2 += theta[j] * theta[j];
    }
    return loss + 0.5 * m_lambda * norm2;
}

ParamVector LogisticObjective::gradient(ParamVector const& theta) const
{
    ParamVector g{};
    for (std::size_t i = 0; i < m_rows.size(); ++i) {
        double const coef = -m_signs[i] * sigmoid(-margin(i, theta));
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            g[j] += coef * m_rows[i][j];
        }
        g[kFeatureCount] += coef;
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        g[j] += m_lambda * theta[j];
    }
    return g;
}

std::array<double, kParamCount * kParamCount> LogisticObjective::hessian(ParamVector const& theta) const
{
    std::array<double, kParamCount * kParamCount> h{};
    std::array<double, kParamCount> x{};
    for (std::size_t i = 0; i < m_rows.size(); ++i) {
        double const p = sigmoid(margin(i, theta));
        double const w = p * (1.0 - p);
        std::copy(m_rows[i].begin(), m_rows[i].end(), x.begin());
        x[kFeatureCount] = 1.0;
        for (std::size_t r = 0; r < kParamCount; ++r) {
            for (std::size_t c = 0; c < kParamCount; ++c) {
                h[r * kParamCount + c] += w * x[r] * x[c];
            }
        }
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        h[j * kParamCount + j] += m_lambda;
    }
    return h;
}

FeatureArray LogisticModel::transform(FeatureArray const& x) const
{
    if (!standardize) {
        return x;
    }
    FeatureArray z{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        z[j] = (x[j] - mean[j]) / scale[j];
    }
    return z;
}

double LogisticModel::predict_prob(FeatureVector const& features) const
{
    auto const x = features.values();
    check_finite(x);
    auto const z = transform(x);
    double logit = bias;
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        logit += weights[j] * z[j];
    }
    double const p = sigmoid(logit);
    return std::clamp(p, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

std::string LogisticModel::to_json() const
{
    nlohmann::ordered_json obj;
    obj["features"] = feature_names();
    obj["weights"] = weights;
    obj["bias"] = bias;
    obj["lambda"] = lambda;
    obj["standardize"] = standardize;
    obj["mean"] = mean;
    obj["std"] = scale;
    obj["iterations"] = iterations;
    obj["final_loss"] = final_loss;
    obj["converged"] = converged;
    obj["keywords"] = nlohmann::ordered_json::parse(keywords.to_json());
    return obj.dump(2) + "\n";
}

LogisticModel LogisticModel::from_json(std::string const& text)
{
    LogisticModel m;
    try {
        auto obj = nlohmann::json::parse(text);
        m.weights = obj.at("weights").get<FeatureArray>();
        m.bias = obj.at("bias").get<double>();
        m.lambda = obj.at("lambda").get<double>();
        m.standardize = obj.value("standardize", true);
        m.mean = obj.at("mean").get<FeatureArray>();
        m.scale = obj.at("std").get<FeatureArray>();
        m.iterations = obj.value("iterations", std::size_t{0});
        m.final_loss = obj.value("final_loss", 0.0);
        m.converged = obj.value("converged", false);
        if (obj.contains("keywords")) {
            m.keywords = KeywordLists::from_json(obj["keywords"].dump());
        }
    } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("bad model file: ") + e.what());
    }
    for (double v : m.weights) {
        if (!std::isfinite(v)) {
            throw ParseError("model weights must be finite");
        }
    }
    for (double v : m.scale) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ParseError("model std entries must be positive");
        }
    }
    if (!std::isfinite(m.bias)) {
        throw ParseError("model bias must be finite");
    }
    return m;
}

TrainingResult train_logistic(std::span<LabeledExample const> examples, TrainOptions const& options)
{
    if (!(options.lambda >= 0.0) || !std::isfinite(options.lambda)) {
        throw Error("regularization strength must be a finite non-negative number");
    }
    std::size_t positives = 0;
    std::vector<FeatureArray> raw;
    std::vector<int> labels;
    raw.reserve(examples.size());
    for (auto const& ex : examples) {
        if (ex.label != 0 && ex.label != 1) {
            throw Error("labels must be 0 or 1");
        }
        auto x = ex.features.values();
        check_finite(x);
        raw.push_back(x);
        labels.push_back(ex.label);
        positives += static_cast<std::size_t>(ex.label);
    }
    if (positives == 0 || positives == examples.size()) {
        throw Error("training data must contain both relevant and non-relevant examples");
    }

    TrainingResult result;
    auto& model = result.model;
    model.lambda = options.lambda;
    model.standardize = options.standardize;
    if (options.standardize) {
        auto const n = static_cast<double>(raw.size());
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            double sum = 0.0;
            for (auto const& x : raw) {
                sum += x[j];
            }
            double const mu = sum / n;
            double var = 0.0;
            for (auto const& x : raw) {
                var += (x[j] - mu) * (x[j] - mu);
            }
            double const sd = std::sqrt(var / n);
            model.mean[j] = mu;
            model.scale[j] = sd > 0.0 ? sd : 1.0;
        }
    }
    std::vector<FeatureArray> rows;
    rows.reserve(raw.size());
    for (auto const& x : raw) {
        rows.push_back(model.transform(x));
    }
    LogisticObjective objective(std::move(rows), std::move(labels), options.lambda);

    using Vec = Eigen::Matrix<double, kParamCount, 1>;
    using Mat = Eigen::Matrix<double, kParamCount, kParamCount, Eigen::RowMajor>;

    ParamVector theta{};
    double loss = objective.value(theta);
    result.loss_history.push_back(loss);
    std::size_t iter = 0;
    bool converged = false;
    for (; iter < options.max_iterations; ++iter) {
        auto const g = objective.gradient(theta);
        if (max_abs(g) <= options.tolerance) {
            converged = true;
            break;
        }
        auto const h_arr = objective.hessian(theta);
        Mat h = Eigen::Map<Mat const>(h_arr.data());
        Vec const gv = Eigen::Map<Vec const>(g.data());

        // Newton step, damped until the system is positive definite.
        Vec dir = Vec::Zero();
        double damping = 0.0;
        for (int attempt = 0; attempt < 20; ++attempt) {
            Eigen::LLT<Mat> llt(h + damping * Mat::Identity());
            if (llt.info() == Eigen::Success) {
                dir = -llt.solve(gv);
                if (dir.allFinite() && dir.dot(gv) < 0.0) {
                    break;
                }
            }
            damping = damping == 0.0 ? 1e-8 : damping * 10.0;
            dir = -gv;
        }

        double const slope = dir.dot(gv);
        double step = 1.0;
        bool accepted = false;
        ParamVector candidate{};
        double candidate_loss = loss;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t j = 0; j < kParamCount; ++j) {
                candidate[j] = theta[j] + step * dir[static_cast<Eigen::Index>(j)];
            }
            candidate_loss = objective.value(candidate);
            if (candidate_loss <= loss + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No representable decrease left along the search direction.
            break;
        }
        theta = candidate;
        loss = candidate_loss;
        result.loss_history.push_back(loss);
    }

    std::copy_n(theta.begin(), kFeatureCount, model.weights.begin());
    model.bias = theta[kFeatureCount];
    model.iterations = iter;
    model.final_loss = loss;
    model.converged = converged;
    return result;
}

}  // namespace pmsearch
