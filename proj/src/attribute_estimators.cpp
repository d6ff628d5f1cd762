#include "estlab/attribute_estimators.hpp"

#include <cmath>
#include <string>

#include "estlab/dual_ratio_product.hpp"
#include "estlab/errors.hpp"

namespace estlab {

AttributeParams::AttributeParams(double w1, double K61_, double K62_, double K71_, double K72_)
    : K61(K61_), K62(K62_), K71(K71_), K72(K72_), w1_(w1) {}

AttributeParams AttributeParams::from_weights(double w1, double w2, double K61, double K62, double K71, double K72) {
    if (std::abs(w1 + w2 - 1.0) > 1e-12) {
        fail(ErrorKind::validation, "t5 weights must sum to 1, got " + std::to_string(w1 + w2));
    }
    return {w1, K61, K62, K71, K72};
}

std::string_view to_string(AttrEstimator e) noexcept {
    static constexpr std::array<std::string_view, 7> names{"t1", "t2", "t3", "t4", "t5", "t6", "t7"};
    return names[static_cast<std::size_t>(e)];
}

std::array<double, 7> attr_points(double ybar, double p1, double p2, double P1, double P2,
                                  const AttributeParams& q) {
    if (!(P1 > 0 && P1 < 1) || !(P2 > 0 && P2 < 1)) {
        fail(ErrorKind::degenerate_proportion, "population proportions must lie in (0, 1)");
    }
    if (p1 == 0 || p2 == 0) fail(ErrorKind::singular_input, "sample proportion is zero in a ratio form");
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) fail(ErrorKind::validation, "sample proportions must lie in (0, 1]");
    const double e6 = std::exp((P2 - p2) / (P2 + p2));
    return {ybar * P1 / p1,
            ybar * P2 / p2,
            ybar * std::exp((P1 - p1) / (P1 + p1)),
            ybar * std::exp((p2 - P2) / (p2 + P2)),
            ybar * (q.w1() * P1 / p1 + q.w2() * P2 / p2),
            (q.K61 * ybar + q.K62 * (P1 - p1)) * e6,
            ybar + q.K71 * (P1 - p1) + q.K72 * (P2 - p2)};
}

namespace {

struct Consts {
    double Cy2, C12, C22, K1, K2, Kp;
};

Consts consts_of(const AttributeSummary& s) {
    return {s.cvY * s.cvY, s.cvP1 * s.cvP1, s.cvP2 * s.cvP2, s.kPb1, s.kPb2, s.kPhi};
}

double mse_t5(const Consts& c, double f1, double Y, double w1) {
    const double w2 = 1 - w1;
    return Y * Y * f1 *
           (c.Cy2 + w1 * w1 * c.C12 + w2 * w2 * c.C22 - 2 * w1 * c.K1 * c.C12 - 2 * w2 * c.K2 * c.C22 +
            2 * w1 * w2 * c.Kp * c.C22);
}

struct T6Terms {
    double A1, A2, A3;
};

T6Terms t6_terms(const Consts& c, double f1) {
    // the bare "C_p^2" is read as C_p2^2, matching E(e1 e2) = f1 K_phi C_p2^2
    return {1 + f1 * (c.Cy2 + c.C22 * (0.25 - c.K2)), f1 * c.C12, f1 * (c.K1 * c.C12 - 0.5 * c.Kp * c.C22)};
}

double mse_t6(const Consts& c, double f1, double Y, double P1, double K61, double K62) {
    const auto t = t6_terms(c, f1);
    return K61 * K61 * Y * Y * t.A1 + K62 * K62 * P1 * P1 * t.A2 - 2 * K61 * K62 * P1 * Y * t.A3 + (1 - 2 * K61) * Y * Y;
}

double mse_t7(const Consts& c, double f1, double Y, double P1, double P2, double K71, double K72) {
    return Y * Y * f1 * c.Cy2 + K71 * K71 * P1 * P1 * f1 * c.C12 + K72 * K72 * P2 * P2 * f1 * c.C22 -
           2 * K71 * P1 * Y * f1 * c.K1 * c.C12 - 2 * K72 * P2 * Y * f1 * c.K2 * c.C22 +
           2 * K71 * K72 * P1 * P2 * f1 * c.Kp * c.C22;
}

// Minimizer of u' H u / 2 - b' u for symmetric H; requires H positive definite.
std::array<double, 2> solve_pd(double h11, double h12, double h22, double b1, double b2, const char* who) {
    const double det = h11 * h22 - h12 * h12;
    if (!(h11 > 0) || !(det > 0)) fail(ErrorKind::degenerate_optimum, std::string(who) + " quadratic is not positive definite");
    return {(b1 * h22 - h12 * b2) / det, (h11 * b2 - h12 * b1) / det};
}

}  // namespace

std::array<AttrRow, 7> attr_report(const AttributeSummary& s, double f1, double Y, const AttributeParams& q,
                                   T2Form t2) {
    if (!(f1 > 0)) fail(ErrorKind::validation, "f1 must be positive");
    const Consts c = consts_of(s);
    const double P1 = s.P1, P2 = s.P2;
    const double base = Y * Y * f1 * c.Cy2;
    const double t2c = t2 == T2Form::as_printed ? c.C12 : c.C22;

    std::array<AttrRow, 7> rows{};
    const double w1 = q.w1(), w2 = q.w2();
    rows[0] = {AttrEstimator::t1, Y * f1 * c.C12 * (1 - c.K1), Y * Y * f1 * (c.Cy2 + c.C12 * (1 - 2 * c.K1)), 0};
    rows[1] = {AttrEstimator::t2, Y * f1 * c.K2 * c.C22, Y * Y * f1 * (c.Cy2 + t2c * (1 + 2 * c.K2)), 0};
    rows[2] = {AttrEstimator::t3, Y * f1 * c.C12 / 2 * (0.25 - c.K1), Y * Y * f1 * (c.Cy2 + c.C12 * (0.25 - c.K1)), 0};
    rows[3] = {AttrEstimator::t4, Y * f1 * c.C22 / 2 * (0.25 + c.K2), Y * Y * f1 * (c.Cy2 + c.C22 * (0.25 + c.K2)), 0};
    rows[4] = {AttrEstimator::t5, Y * f1 * (w1 * c.C12 * (1 - c.K1) + w2 * c.C22 * (1 - c.K2)), mse_t5(c, f1, Y, w1), 0};
    // expectation of t6 to first order, minus Ybar
    const double et6 = q.K61 * Y * (1 + f1 * c.C22 * (0.375 - 0.5 * c.K2)) + 0.5 * q.K62 * P1 * f1 * c.Kp * c.C22;
    rows[5] = {AttrEstimator::t6, et6 - Y, mse_t6(c, f1, Y, P1, q.K61, q.K62), 0};
    rows[6] = {AttrEstimator::t7, 0.0, mse_t7(c, f1, Y, P1, P2, q.K71, q.K72), 0};
    for (auto& r : rows) r.pre = pre(base, r.mse1);
    return rows;
}

AttrOptima attr_optima(const AttributeSummary& s, double f1, double Y, OptimaMode mode) {
    if (!(f1 > 0)) fail(ErrorKind::validation, "f1 must be positive");
    const Consts c = consts_of(s);
    const double P1 = s.P1, P2 = s.P2;
    AttrOptima out;
    double w1 = 0, K61 = 0, K62 = 0, K71 = 0, K72 = 0;
    if (mode == OptimaMode::as_printed) {
        const double den5 = c.C12 - c.Kp * c.C22;
        const auto t = t6_terms(c, f1);
        const double den6 = t.A1 * t.A2 - t.A3 * t.A3;
        const double den7 = c.C12 - c.Kp * c.Kp * c.C22;
        if (den5 == 0 || den6 == 0 || den7 == 0) fail(ErrorKind::degenerate_optimum, "printed optimum denominator is zero");
        w1 = (c.K1 * c.C12 - c.Kp * c.C22) / den5;
        K61 = t.A2 / den6;
        K62 = Y * t.A3 / (P1 * den6);
        K71 = Y / P1 * (c.K1 * c.C12 - c.K2 * c.Kp * c.C22) / den7;
        K72 = Y / P2 * (c.K2 * c.C12 - c.K1 * c.Kp * c.C12) / den7;
    } else {
        // t5: derivative of the quadratic in w1 with w2 = 1 - w1
        const double a = c.C12 + c.C22 - 2 * c.Kp * c.C22;
        if (!(a > 0)) fail(ErrorKind::degenerate_optimum, "t5 objective is not convex in w1");
        w1 = (c.C22 + c.K1 * c.C12 - c.K2 * c.C22 - c.Kp * c.C22) / a;
        const auto t = t6_terms(c, f1);
        const auto k6 = solve_pd(2 * Y * Y * t.A1, -2 * P1 * Y * t.A3, 2 * P1 * P1 * t.A2, 2 * Y * Y, 0.0, "t6");
        K61 = k6[0];
        K62 = k6[1];
        const auto k7 = solve_pd(2 * P1 * P1 * f1 * c.C12, 2 * P1 * P2 * f1 * c.Kp * c.C22, 2 * P2 * P2 * f1 * c.C22,
                                 2 * P1 * Y * f1 * c.K1 * c.C12, 2 * P2 * Y * f1 * c.K2 * c.C22, "t7");
        K71 = k7[0];
        K72 = k7[1];
    }
    out.params = AttributeParams(w1, K61, K62, K71, K72);
    out.mse_t5 = mse_t5(c, f1, Y, w1);
    out.mse_t6 = mse_t6(c, f1, Y, P1, K61, K62);
    out.mse_t7 = mse_t7(c, f1, Y, P1, P2, K71, K72);
    return out;
}

}  // namespace estlab
