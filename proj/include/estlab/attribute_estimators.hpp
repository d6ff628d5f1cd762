#pragma once

#include <array>
#include <string_view>

#include "estlab/core_model.hpp"

namespace estlab {

/// Constants of t5 (w1, w2 = 1 - w1), t6 (K61, K62) and t7 (K71, K72).
class AttributeParams {
public:
    AttributeParams() = default;
    AttributeParams(double w1, double K61, double K62, double K71, double K72);

    /// Validates w1 + w2 = 1 to 1e-12.
    [[nodiscard]] static AttributeParams from_weights(double w1, double w2, double K61, double K62, double K71,
                                                      double K72);

    [[nodiscard]] double w1() const noexcept { return w1_; }
    [[nodiscard]] double w2() const noexcept { return 1.0 - w1_; }
    double K61 = 1.0, K62 = 0.0;
    double K71 = 0.0, K72 = 0.0;

private:
    double w1_ = 0.5;
};

enum class AttrEstimator { t1, t2, t3, t4, t5, t6, t7 };

[[nodiscard]] std::string_view to_string(AttrEstimator e) noexcept;
inline constexpr std::array<AttrEstimator, 7> kAllAttrEstimators{AttrEstimator::t1, AttrEstimator::t2,
                                                                  AttrEstimator::t3, AttrEstimator::t4,
                                                                  AttrEstimator::t5, AttrEstimator::t6,
                                                                  AttrEstimator::t7};

[[nodiscard]] std::array<double, 7> attr_points(double sampleMeanY, double p1, double p2, double P1, double P2,
                                                const AttributeParams& params);

/// as_printed keeps C_p1^2 in the t2 MSE; corrected uses C_p2^2.
enum class T2Form { as_printed, corrected };

struct AttrRow {
    AttrEstimator estimator{};
    double bias1 = 0;
    double mse1 = 0;
    double pre = 0;
};

[[nodiscard]] std::array<AttrRow, 7> attr_report(const AttributeSummary& s, double f1, double meanY,
                                                 const AttributeParams& params, T2Form t2 = T2Form::as_printed);

enum class OptimaMode { as_printed, minimizing };

struct AttrOptima {
    AttributeParams params;
    double mse_t5 = 0;
    double mse_t6 = 0;
    double mse_t7 = 0;
};

[[nodiscard]] AttrOptima attr_optima(const AttributeSummary& s, double f1, double meanY, OptimaMode mode);

}  // namespace estlab
