#include "estlab/second_order_family.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "estlab/errors.hpp"

namespace estlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_integer(double v) {
    return std::floor(v) == v;
}

double checked_pow(double base, double e, const char* who) {
    if (base < 0 && !is_integer(e)) {
        fail(ErrorKind::domain, std::string(who) + ": negative base raised to a fractional power");
    }
    if (base == 0 && e < 0) fail(ErrorKind::singular_input, std::string(who) + ": zero base with negative power");
    return std::pow(base, e);
}

}  // namespace

std::string_view to_string(MeanEstimator e) noexcept {
    switch (e) {
        case MeanEstimator::t1: return "t1";
        case MeanEstimator::t2: return "t2";
        case MeanEstimator::t3: return "t3";
        case MeanEstimator::t4: return "t4";
        case MeanEstimator::t5: return "t5";
    }
    return "?";
}

MeanEstimator mean_estimator_from_string(std::string_view s) {
    for (auto e : {MeanEstimator::t1, MeanEstimator::t2, MeanEstimator::t3, MeanEstimator::t4, MeanEstimator::t5}) {
        if (to_string(e) == s) return e;
    }
    fail(ErrorKind::unknown_id, "unknown mean estimator '" + std::string(s) + "'");
}

// The tabulated M and N write an undefined "alpha"; read as lambda.
double MeanFamilyParams::M() const {
    const double d = delta, l = lambdaExp;
    return 0.5 * ((d * d * d - 6 * d * d) / 24 + l * (d * d - 2 * d) / 4 + l * (l - 1) / 2 * d +
                  l * (l - 1) * (l - 2) / 3);
}

double MeanFamilyParams::NConst() const {
    const double d = delta, l = lambdaExp;
    return 0.125 * ((d * d * d * d - 12 * d * d * d + 12 * d * d) / 48 + l * (d * d * d - 6 * d) / 6 +
                    l * (l - 1) / 2 * (d * d - 2 * d) + l * (l - 1) * (l - 2) * (l - 3) / 3);
}

ErrorMoments srs_error_moments(const MomentTable& m, const DesignCoefficients& c, int order) {
    ErrorMoments e;
    e.yy = c.L1 * m.at(0, 2);
    e.xy = c.L1 * m.at(1, 1);
    e.xx = c.L1 * m.at(2, 0);
    if (order < 2) {
        e.yyx = e.yxx = e.xxx = e.yyxx = e.yxxx = e.xxxx = kNaN;
        return e;
    }
    const double C20 = m.at(2, 0), C02 = m.at(0, 2), C11 = m.at(1, 1);
    e.yyx = c.L2 * m.at(1, 2);
    e.yxx = c.L2 * m.at(2, 1);
    e.xxx = c.L2 * m.at(3, 0);
    e.xxxx = c.L3 * m.at(4, 0) + 3 * c.L4 * C20 * C20;
    e.yxxx = c.L3 * m.at(3, 1) + 3 * c.L4 * C20 * C11;
    e.yyxx = c.L3 * m.at(2, 2) + c.L4 * (C20 * C02 + 2 * C11 * C11);
    return e;
}

ErrorMoments stratified_error_moments(const StratifiedPopulation& s, int order, VrsMode mode) {
    ErrorMoments e;
    e.yy = stratified_vrs(s, 2, 0, mode);
    e.xy = stratified_vrs(s, 1, 1, mode);
    e.xx = stratified_vrs(s, 0, 2, mode);
    if (order < 2) {
        e.yyx = e.yxx = e.xxx = e.yyxx = e.yxxx = e.xxxx = kNaN;
        return e;
    }
    e.yyx = stratified_vrs(s, 2, 1, mode);
    e.yxx = stratified_vrs(s, 1, 2, mode);
    e.xxx = stratified_vrs(s, 0, 3, mode);
    e.yyxx = stratified_vrs(s, 2, 2, mode);
    e.yxxx = stratified_vrs(s, 1, 3, mode);
    e.xxxx = stratified_vrs(s, 0, 4, mode);
    return e;
}

double mean_point_estimates(double ybar, double xbar, double Xbar, const MeanFamilyParams& q) {
    if (!(xbar > 0) || !(Xbar > 0)) fail(ErrorKind::domain, "sample and population x means must be positive");
    switch (q.estimator) {
        case MeanEstimator::t1: return (1 - q.alpha) * ybar + q.alpha * ybar * Xbar / xbar;
        case MeanEstimator::t2: {
            const double den = q.beta * xbar + (1 - q.beta) * Xbar;
            if (den == 0) fail(ErrorKind::singular_input, "t2 denominator is zero");
            return ybar * checked_pow(Xbar / den, q.gExp, "t2");
        }
        case MeanEstimator::t3: return ybar * (2 - std::pow(Xbar / xbar, q.w));
        case MeanEstimator::t4: {
            const double den = xbar + q.b * (Xbar - xbar);
            if (den == 0) fail(ErrorKind::singular_input, "t4 denominator is zero");
            return ybar * checked_pow((xbar + q.a * (Xbar - xbar)) / den, q.p, "t4");
        }
        case MeanEstimator::t5:
            return ybar * (2 - std::pow(xbar / Xbar, q.lambdaExp) * std::exp(q.delta * (xbar - Xbar) / (xbar + Xbar)));
    }
    return ybar;
}

Series4 linearization(const MeanFamilyParams& q) {
    const Series4 one = Series4::constant(1.0);
    const Series4 e = Series4::variable();
    switch (q.estimator) {
        case MeanEstimator::t1: return Series4::constant(1 - q.alpha) + q.alpha * binomial_power(1.0, -1.0);
        case MeanEstimator::t2: return binomial_power(q.beta, -q.gExp);
        case MeanEstimator::t3: return Series4::constant(2.0) - binomial_power(1.0, -q.w);
        case MeanEstimator::t4: return binomial_power(1 - q.a, q.p) * binomial_power(1 - q.b, -q.p);
        case MeanEstimator::t5: {
            const Series4 u = (0.5 * e) * binomial_power(0.5, -1.0);  // e / (2 + e)
            return Series4::constant(2.0) - binomial_power(1.0, q.lambdaExp) * exp(q.delta * u);
        }
    }
    return one;
}

namespace {

// Printed first-order bias and MSE, as multiples of Ybar and Ybar^2.
BiasMse printed_first(const ErrorMoments& e, const MeanFamilyParams& q) {
    const auto mse_in = [&](double theta) { return e.yy + theta * theta * e.xx - 2 * theta * e.xy; };
    switch (q.estimator) {
        case MeanEstimator::t1: return {q.alpha / 2 * e.xx - q.alpha * e.xy, mse_in(q.alpha)};
        case MeanEstimator::t2: {
            // the beta^2 factor on the first term is restored (it is present in the second-order form)
            const double g = q.gExp, b = q.beta;
            return {g * (g + 1) / 2 * b * b * e.xx - g * b * e.xy, mse_in(g * b)};
        }
        case MeanEstimator::t3: return {-q.w * (q.w - 1) / 2 * e.xx - q.w * e.xy, mse_in(q.w)};
        case MeanEstimator::t4: {
            const double D = q.D();
            return {(q.b * D + q.D1()) * e.xx - D * e.xy, mse_in(D)};
        }
        case MeanEstimator::t5: {
            const double k = q.k();
            return {-k * (k - 1) / 2 * e.xx - k * e.xy, mse_in(k)};
        }
    }
    return {};
}

// Printed fourth-degree increments over the first-order terms.
BiasMse printed_second_increment(const ErrorMoments& e, const MeanFamilyParams& q) {
    switch (q.estimator) {
        case MeanEstimator::t1: {
            const double a = q.alpha;
            return {-a / 6 * e.xxx + a * e.yxx - a / 6 * e.yxxx + a / 24 * e.xxxx,
                    -a * a * e.xxx + (2 * a * a + a) * e.yxx - 2 * a * a * e.yxxx + a * (a + 1) * e.yyxx +
                        5.0 / 24 * a * a * e.xxxx};
        }
        case MeanEstimator::t2: {
            const double g = q.gExp, b = q.beta;
            const double b2 = b * b, b3 = b2 * b, b4 = b3 * b;
            const double c3 = g * (g + 1) * (g + 2) / 6;
            return {-g * (g + 1) / 2 * b2 * e.yxx - c3 * b3 * e.xxx - c3 * b3 * e.yxxx +
                        g * (g + 1) * (g + 2) * (g + 3) / 24 * b4 * e.xxxx,
                    -b3 * g * g * (g + 1) * e.xxx + g * (3 * g + 1) * b2 * e.yxx - 2 * b * g * e.yyx -
                        (7 * g * g * g + 9 * g * g + 2 * g) / 3 * b3 * e.yxxx + g * (2 * g + 1) * b2 * e.yyxx +
                        (2 * g * g * g + 9 * g * g + 10 * g + 3) / 6 * b4 * e.xxxx};
        }
        case MeanEstimator::t3: {
            const double w = q.w;
            const double c3 = w * (w - 1) * (w - 2) / 6;
            return {-w * (w - 1) / 2 * e.yxx - c3 * e.xxx - c3 * e.yxxx - w * (w - 1) * (w - 2) * (w - 3) / 24 * e.xxxx,
                    -w * w * (w - 1) * e.xxx + w * (w + 1) * e.yxx - 2 * w * e.yyx +
                        (5 * w * w * w - 3 * w * w - 2 * w) / 3 * e.yxxx + w * e.yyxx +
                        (7 * w * w * w * w - 18 * w * w * w + 11 * w * w) / 24 * e.xxxx};
        }
        case MeanEstimator::t4: {
            const double b = q.b, D = q.D(), D1 = q.D1(), D2 = q.D2(), D3 = q.D3();
            return {(b * D + D1) / 2 * e.yxx - (b * b * D + 2 * b * D1 + D2) / 2 * e.xxx -
                        (b * b * D + 2 * b * D1) * e.yxxx +
                        (b * b * b * D + 3 * b * b * D1 + 3 * b * D2 + D3) / 2 * e.xxxx,
                    -4 * D * D1 * e.xxx + (2 * b * D + 2 * D1 + 2 * D * D) * e.yxx - 2 * D * e.yyx +
                        (2 * D * D + 2 * b * b * D + 2 * D * D1 + 4 * b * D1 + 4 * b * D * D) * e.yxxx +
                        (D * D + 2 * D1 + 2 * b * D) * e.yyxx +
                        (3 * b * b * D * D + D1 * D1 + 2 * D * D2 + 12 * b * D * D1) * e.xxxx};
        }
        case MeanEstimator::t5: {
            const double k = q.k(), M = q.M(), Nc = q.NConst();
            return {-k * (k - 1) / 2 * e.yxx - M * e.xxx - M * e.yxxx - Nc * e.xxxx,
                    k * e.yxx - 2 * k * e.yyx + k * k * (k - 1) * e.xxx + 2 * k * k * (k - 1) * e.yxxx + k * e.yyxx +
                        (k * k - k) * (k * k - k) / 4 * e.xxxx};
        }
    }
    return {};
}

BiasMse derived_first(const ErrorMoments& e, const Series4& h) {
    return {h[2] * e.xx + h[1] * e.xy, e.yy + 2 * h[1] * e.xy + h[1] * h[1] * e.xx};
}

// Terms of degree three and four in (t - Ybar)/Ybar and its square.
BiasMse derived_second_increment(const ErrorMoments& e, const Series4& h) {
    const double h1 = h[1], h2 = h[2], h3 = h[3], h4 = h[4];
    const double bias = h3 * e.xxx + h2 * e.yxx + h4 * e.xxxx + h3 * e.yxxx;
    const double uv = h2 * e.yxx + h1 * e.yyx + h1 * h2 * e.xxx + h1 * h1 * e.yxx;
    const double uw = h3 * e.yxxx + h2 * e.yyxx + h1 * h3 * e.xxxx + h1 * h2 * e.yxxx;
    const double vv = h2 * h2 * e.xxxx + 2 * h1 * h2 * e.yxxx + h1 * h1 * e.yyxx;
    return {bias, 2 * uv + 2 * uw + vv};
}

}  // namespace

BiasMse first_order_report(const ErrorMoments& e, double meanY, const MeanFamilyParams& params, ExpansionForm form) {
    const BiasMse r = form == ExpansionForm::printed ? printed_first(e, params) : derived_first(e, linearization(params));
    return {meanY * r.bias, meanY * meanY * r.mse};
}

BiasMse second_order_report(const ErrorMoments& e, double meanY, const MeanFamilyParams& params, ExpansionForm form) {
    BiasMse first, inc;
    if (form == ExpansionForm::printed) {
        first = printed_first(e, params);
        inc = printed_second_increment(e, params);
    } else {
        const Series4 h = linearization(params);
        first = derived_first(e, h);
        inc = derived_second_increment(e, h);
    }
    return {meanY * (first.bias + inc.bias), meanY * meanY * (first.mse + inc.mse)};
}

BiasMse first_order_report(const MomentTable& m, const DesignCoefficients& c, double meanY,
                           const MeanFamilyParams& params, ExpansionForm form) {
    return first_order_report(srs_error_moments(m, c, 1), meanY, params, form);
}

BiasMse second_order_report(const MomentTable& m, const DesignCoefficients& c, double meanY,
                            const MeanFamilyParams& params, ExpansionForm form) {
    return second_order_report(srs_error_moments(m, c, 2), meanY, params, form);
}

BiasMse stratified_report(const StratifiedPopulation& s, double meanY, const MeanFamilyParams& params, int order,
                          ExpansionForm form, VrsMode mode) {
    if (order != 1 && order != 2) fail(ErrorKind::validation, "order must be 1 or 2");
    const ErrorMoments e = stratified_error_moments(s, order, mode);
    return order == 1 ? first_order_report(e, meanY, params, form) : second_order_report(e, meanY, params, form);
}

FamilyOptimum family_optimum(const ErrorMoments& e, double meanY, const MeanFamilyParams& fixed, ExpansionForm form) {
    if (!(e.xx > 0)) fail(ErrorKind::degenerate_optimum, "flat objective: C_20 must be positive");
    // Every printed mse1 is yy + theta^2 xx - 2 theta xy in its own theta;
    // every derived mse1 is yy + 2 h1 xy + h1^2 xx.
    const double theta = e.xy / e.xx;
    const bool derived = form == ExpansionForm::derived;
    FamilyOptimum out;
    out.params = fixed;
    auto& q = out.params;
    switch (fixed.estimator) {
        case MeanEstimator::t1:
            q.alpha = theta;
            out.parameter = q.alpha;
            break;
        case MeanEstimator::t2:
            if (q.gExp == 0) fail(ErrorKind::degenerate_optimum, "t2 with g = 0 has no free parameter");
            q.beta = theta / q.gExp;
            out.parameter = q.beta;
            break;
        case MeanEstimator::t3:
            q.w = derived ? -theta : theta;
            out.parameter = q.w;
            break;
        case MeanEstimator::t4:
            if (q.p == 0) fail(ErrorKind::degenerate_optimum, "t4 with p = 0 has no free parameter");
            q.b = q.a + (derived ? -theta : theta) / q.p;
            out.parameter = q.b;
            break;
        case MeanEstimator::t5:
            q.lambdaExp = (2 * theta - q.delta) / 2;
            out.parameter = q.lambdaExp;
            break;
    }
    out.mse1 = first_order_report(e, meanY, q, form).mse;
    return out;
}

FamilyOptimum family_optimum(const MomentTable& m, const DesignCoefficients& c, double meanY,
                             const MeanFamilyParams& fixed, ExpansionForm form) {
    return family_optimum(srs_error_moments(m, c, 1), meanY, fixed, form);
}

}  // namespace estlab
