#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "estlab/core_model.hpp"

namespace estlab {

[[nodiscard]] double dual_transform(double xbar, double popMeanX, double g);

/// 100 * mseBaseline / mse.
[[nodiscard]] double pre(double mseBaseline, double mse);

enum class ClassicalEstimator {
    mean,                    // ybar
    ratio,                   // ybar_R
    product,                 // ybar_P (uses z)
    ratio_cum_product,       // ybar_S
    dual_ratio,              // ybar_R*
    dual_product,            // ybar_P*
    dual_ratio_cum_product,  // ybar_SE
    ratio_cum_dual,          // ybar_ST
};

[[nodiscard]] std::string_view to_string(ClassicalEstimator e) noexcept;
[[nodiscard]] const std::array<ClassicalEstimator, 8>& all_classical_estimators() noexcept;

struct SampleMeans {
    double ybar = 0;
    double xbar = 0;
    double zbar = 0;
};

struct ClassicalRow {
    ClassicalEstimator estimator{};
    double mse1 = 0;
    double pre = 0;
    std::optional<double> point;
};

/// First-order MSEs in the lambda-scaled closed forms. `g` is explicit so the
/// dual forms can be compared against their classical counterparts at g = 1.
[[nodiscard]] double classical_mse(ClassicalEstimator e, const SummaryStats& s, double lambda, double g);

[[nodiscard]] std::vector<ClassicalRow> classical_report(const SummaryStats& s, const DesignCoefficients& c,
                                                         const std::optional<SampleMeans>& sample = std::nullopt);

/// Point value; ybar_ST uses its MSE-optimal mixing weight.
[[nodiscard]] double classical_point(ClassicalEstimator e, const SummaryStats& s, const DesignCoefficients& c,
                                     const SampleMeans& sample);

struct DualPRParams {
    double theta = 0.5;
    [[nodiscard]] double A() const { return 1 - 2 * theta; }
};

struct QuadraticSummary {
    double C = 0, D = 0;
    double Cstar = 0, Dstar = 0;
    double E = 0, F = 0;
    double theta0 = 0;
    double minMse = 0;
};

[[nodiscard]] QuadraticSummary quadratic_summary(const SummaryStats& s, double g);

struct PRReport {
    std::optional<double> point;
    double bias1 = 0;
    double mse1 = 0;
};

/// bias1 = (lambda / Ybar)[gDA + g^2(R1^2 Sx^2 - R1 R2 Szx - theta(R1^2 Sx^2 - R2^2 Sz^2))].
[[nodiscard]] PRReport pr_report(const SummaryStats& s, const DesignCoefficients& c, const DualPRParams& params,
                                 const std::optional<SampleMeans>& sample = std::nullopt);

[[nodiscard]] QuadraticSummary pr_optimum(const SummaryStats& s, const DesignCoefficients& c);

struct EfficiencyCondition {
    char label = 'a';
    ClassicalEstimator versus{};
    double lhs = 0;
    double rhs = 0;
    std::optional<bool> proviso;  // printed side condition, when there is one
    bool printed_holds = false;   // inequality and proviso evaluated as printed
    double mse_difference = 0;    // MSE(ybar_PR) - MSE(versus)
    bool holds = false;           // mse_difference < 0
};

/// Conditions (a) through (h), comparing ybar_PR with ybar, R, P, S, R*, P*, SE, ST.
[[nodiscard]] std::array<EfficiencyCondition, 8> efficiency_conditions(const SummaryStats& s,
                                                                       const DesignCoefficients& c, double theta);

}  // namespace estlab
