#pragma once

#include <optional>
#include <string_view>

#include "estlab/core_model.hpp"
#include "estlab/moments.hpp"
#include "estlab/power_series.hpp"

namespace estlab {

/// t1 Chakrabarty, t2 Khoshnevisan, t3 Sahai-Ray, t4 Ismail, t5 Solanki.
enum class MeanEstimator { t1, t2, t3, t4, t5 };

[[nodiscard]] std::string_view to_string(MeanEstimator e) noexcept;
[[nodiscard]] MeanEstimator mean_estimator_from_string(std::string_view s);

struct MeanFamilyParams {
    MeanEstimator estimator = MeanEstimator::t1;
    double alpha = 1.0;               // t1
    double beta = 1.0, gExp = 1.0;    // t2
    double w = 1.0;                   // t3
    double a = 0.0, b = 1.0, p = 1.0; // t4
    std::optional<double> D3input;    // t4, undefined in the source; see D3()
    double lambdaExp = 1.0, delta = 0.0;  // t5

    [[nodiscard]] double D() const { return p * (b - a); }
    [[nodiscard]] double D1() const { return D() * (b - a) * (p - 1) / 2; }
    [[nodiscard]] double D2() const { return D1() * (b - a) * (p - 2) / 3; }
    /// Conjectured continuation D2 (b-a)(p-3)/4 unless D3input is set.
    [[nodiscard]] double D3() const { return D3input ? *D3input : D2() * (b - a) * (p - 3) / 4; }
    [[nodiscard]] double k() const { return (delta + 2 * lambdaExp) / 2; }
    [[nodiscard]] double M() const;
    [[nodiscard]] double NConst() const;
};

/// printed: the closed forms as tabulated (t3/t4 sign conventions included).
/// derived: exact fourth-degree Taylor expansion of each point estimator.
enum class ExpansionForm { printed, derived };

/// Expectations of products of relative errors e0 = ybar/Ybar - 1 and
/// e1 = xbar/Xbar - 1. Third and fourth order fields are NaN for order 1.
struct ErrorMoments {
    double yy = 0, xy = 0, xx = 0;
    double yyx = 0, yxx = 0, xxx = 0;
    double yyxx = 0, yxxx = 0, xxxx = 0;
};

/// From C_pq and L1..L4; throws incomplete_input naming the first missing C_pq.
[[nodiscard]] ErrorMoments srs_error_moments(const MomentTable& m, const DesignCoefficients& c, int order);
[[nodiscard]] ErrorMoments stratified_error_moments(const StratifiedPopulation& s, int order,
                                                    VrsMode mode = VrsMode::exact);

struct BiasMse {
    double bias = 0;
    double mse = 0;
};

[[nodiscard]] double mean_point_estimates(double sampleMeanY, double sampleMeanX, double popMeanX,
                                          const MeanFamilyParams& params);

/// Multiplier h(e1) with t = Ybar (1 + e0) h(e1), to fourth degree.
[[nodiscard]] Series4 linearization(const MeanFamilyParams& params);

[[nodiscard]] BiasMse first_order_report(const ErrorMoments& e, double meanY, const MeanFamilyParams& params,
                                         ExpansionForm form = ExpansionForm::printed);
[[nodiscard]] BiasMse second_order_report(const ErrorMoments& e, double meanY, const MeanFamilyParams& params,
                                          ExpansionForm form = ExpansionForm::printed);

[[nodiscard]] BiasMse first_order_report(const MomentTable& m, const DesignCoefficients& c, double meanY,
                                         const MeanFamilyParams& params,
                                         ExpansionForm form = ExpansionForm::printed);
[[nodiscard]] BiasMse second_order_report(const MomentTable& m, const DesignCoefficients& c, double meanY,
                                          const MeanFamilyParams& params,
                                          ExpansionForm form = ExpansionForm::printed);

[[nodiscard]] BiasMse stratified_report(const StratifiedPopulation& s, double meanY, const MeanFamilyParams& params,
                                        int order, ExpansionForm form = ExpansionForm::printed,
                                        VrsMode mode = VrsMode::exact);

struct FamilyOptimum {
    MeanFamilyParams params;  // input params with the free parameter replaced
    double parameter = 0;     // alpha, beta, w, b or lambdaExp
    double mse1 = 0;
};

/// Minimizes mse1 over the family's free parameter. The other parameters
/// (g for t2, a and p for t4, delta for t5) are taken from `fixed`.
[[nodiscard]] FamilyOptimum family_optimum(const ErrorMoments& e, double meanY, const MeanFamilyParams& fixed,
                                           ExpansionForm form = ExpansionForm::printed);
[[nodiscard]] FamilyOptimum family_optimum(const MomentTable& m, const DesignCoefficients& c, double meanY,
                                           const MeanFamilyParams& fixed,
                                           ExpansionForm form = ExpansionForm::printed);

}  // namespace estlab
