#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pmsearch/features.hpp"

namespace pmsearch {

inline constexpr std::size_t kParamCount = kFeatureCount + 1;  // weights then bias
using ParamVector = std::array<double, kParamCount>;
using FeatureArray = std::array<double, kFeatureCount>;

struct LabeledExample {
    FeatureVector features;
    int label = 0;  // 0 or 1
};

/// L2-regularized logistic loss over (already standardized) rows:
///   sum_i log(1 + exp(-y_i (w.x_i + b))) + lambda/2 |w|^2,   y_i in {-1, +1}.
/// The bias is not regularized.
class LogisticObjective {
  public:
    LogisticObjective(std::vector<FeatureArray> rows, std::vector<int> labels, double lambda);

    [[nodiscard]] double value(ParamVector const& theta) const;
    [[nodiscard]] ParamVector gradient(ParamVector const& theta) const;
    /// Row-major kParamCount x kParamCount Hessian.
    [[nodiscard]] std::array<double, kParamCount * kParamCount> hessian(ParamVector const& theta) const;

    [[nodiscard]] std::size_t size() const { return m_rows.size(); }

  private:
    [[nodiscard]] double margin(std::size_t i, ParamVector const& theta) const;

    std::vector<FeatureArray> m_rows;
    std::vector<double> m_signs;
    double m_lambda;
};

struct TrainOptions {
    double lambda = 1.0;
    double tolerance = 1e-6;  // on the max-norm of the gradient
    std::size_t max_iterations = 1000;
    bool standardize = true;
};

class LogisticModel {
  public:
    FeatureArray weights{};
    double bias = 0.0;
    double lambda = 0.0;
    bool standardize = false;
    FeatureArray mean{};
    FeatureArray scale{1, 1, 1, 1, 1, 1, 1};
    std::size_t iterations = 0;
    double final_loss = 0.0;
    bool converged = false;
    KeywordLists keywords = KeywordLists::defaults();

    /// sigmoid(w . standardize(x) + b), kept strictly inside (0, 1).
    /// Throws Error on a non-finite feature.
    [[nodiscard]] double predict_prob(FeatureVector const& features) const;
    [[nodiscard]] FeatureArray transform(FeatureArray const& x) const;

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] static LogisticModel from_json(std::string const& text);
};

struct TrainingResult {
    LogisticModel model;
    std::vector<double> loss_history;  // objective before the first step and after every step
};

/// Damped Newton iterations with a backtracking line search; the objective
/// never increases between iterations. Throws Error on single-class input or
/// non-finite features.
[[nodiscard]] TrainingResult train_logistic(std::span<LabeledExample const> examples, TrainOptions const& options = {});

[[nodiscard]] double sigmoid(double z);

}  // namespace pmsearch
