#include "estlab/dual_ratio_product.hpp"

#include <cmath>
#include <string>

#include "estlab/errors.hpp"

namespace estlab {

double dual_transform(double xbar, double popMeanX, double g) {
    if (!(g > 0)) fail(ErrorKind::validation, "dual transform needs g > 0");
    return (1 + g) * popMeanX - g * xbar;
}

double pre(double mseBaseline, double mse) {
    if (!(mse > 0)) fail(ErrorKind::domain, "PRE needs a positive MSE, got " + std::to_string(mse));
    return 100.0 * mseBaseline / mse;
}

std::string_view to_string(ClassicalEstimator e) noexcept {
    switch (e) {
        case ClassicalEstimator::mean: return "mean";
        case ClassicalEstimator::ratio: return "ratio";
        case ClassicalEstimator::product: return "product";
        case ClassicalEstimator::ratio_cum_product: return "ratio-cum-product";
        case ClassicalEstimator::dual_ratio: return "dual-ratio";
        case ClassicalEstimator::dual_product: return "dual-product";
        case ClassicalEstimator::dual_ratio_cum_product: return "dual-ratio-cum-product";
        case ClassicalEstimator::ratio_cum_dual: return "ratio-cum-dual";
    }
    return "?";
}

const std::array<ClassicalEstimator, 8>& all_classical_estimators() noexcept {
    static const std::array<ClassicalEstimator, 8> all{
        ClassicalEstimator::mean,       ClassicalEstimator::ratio,        ClassicalEstimator::product,
        ClassicalEstimator::ratio_cum_product, ClassicalEstimator::dual_ratio, ClassicalEstimator::dual_product,
        ClassicalEstimator::dual_ratio_cum_product, ClassicalEstimator::ratio_cum_dual};
    return all;
}

namespace {

bool uses_x(ClassicalEstimator e) {
    return e != ClassicalEstimator::mean && e != ClassicalEstimator::product && e != ClassicalEstimator::dual_product;
}

bool uses_z(ClassicalEstimator e) {
    return e == ClassicalEstimator::product || e == ClassicalEstimator::ratio_cum_product ||
           e == ClassicalEstimator::dual_product || e == ClassicalEstimator::dual_ratio_cum_product;
}

void require_inputs(ClassicalEstimator e, const SummaryStats& s) {
    const std::string who(to_string(e));
    if (uses_x(e)) {
        s.require_x(who.c_str());
        if (s.meanX == 0) fail(ErrorKind::degenerate_moment, who + " divides by a zero x mean");
    }
    if (uses_z(e)) {
        s.require_z(who.c_str());
        if (s.meanZ == 0) fail(ErrorKind::degenerate_moment, who + " divides by a zero z mean");
    }
}

double cc_of(const SummaryStats& s) {
    const double R1 = s.ratioR1, R2 = s.ratioR2;
    return R1 * R1 * s.varX - 2 * R1 * R2 * s.covZX + R2 * R2 * s.varZ;
}

double dd_of(const SummaryStats& s) {
    return s.ratioR1 * s.covYX - s.ratioR2 * s.covYZ;
}

}  // namespace

double classical_mse(ClassicalEstimator e, const SummaryStats& s, double lambda, double g) {
    require_inputs(e, s);
    const double R1 = s.ratioR1, R2 = s.ratioR2;
    switch (e) {
        case ClassicalEstimator::mean: return lambda * s.varY;
        case ClassicalEstimator::ratio: return lambda * (s.varY + R1 * R1 * s.varX - 2 * R1 * s.covYX);
        case ClassicalEstimator::product: return lambda * (s.varY + R2 * R2 * s.varZ + 2 * R2 * s.covYZ);
        case ClassicalEstimator::ratio_cum_product: return lambda * (s.varY - 2 * dd_of(s) + cc_of(s));
        case ClassicalEstimator::dual_ratio: return lambda * (s.varY + g * g * R1 * R1 * s.varX - 2 * g * R1 * s.covYX);
        case ClassicalEstimator::dual_product:
            return lambda * (s.varY + g * g * R2 * R2 * s.varZ + 2 * g * R2 * s.covYZ);
        case ClassicalEstimator::dual_ratio_cum_product: return lambda * (s.varY + g * g * cc_of(s) - 2 * g * dd_of(s));
        case ClassicalEstimator::ratio_cum_dual: return lambda * s.varY * (1 - s.rhoYX * s.rhoYX);
    }
    return 0;
}

double classical_point(ClassicalEstimator e, const SummaryStats& s, const DesignCoefficients& c,
                       const SampleMeans& m) {
    require_inputs(e, s);
    const double g = c.g;
    const auto xs = [&] { return dual_transform(m.xbar, s.meanX, g); };
    const auto zs = [&] { return dual_transform(m.zbar, s.meanZ, g); };
    const auto nonzero = [](double v, const char* what) {
        if (v == 0) fail(ErrorKind::singular_input, std::string(what) + " is zero");
        return v;
    };
    switch (e) {
        case ClassicalEstimator::mean: return m.ybar;
        case ClassicalEstimator::ratio: return m.ybar * s.meanX / nonzero(m.xbar, "sample x mean");
        case ClassicalEstimator::product: return m.ybar * m.zbar / s.meanZ;
        case ClassicalEstimator::ratio_cum_product:
            return m.ybar * (s.meanX / nonzero(m.xbar, "sample x mean")) * (m.zbar / s.meanZ);
        case ClassicalEstimator::dual_ratio: return m.ybar * xs() / s.meanX;
        case ClassicalEstimator::dual_product: return m.ybar * s.meanZ / nonzero(zs(), "transformed z mean");
        case ClassicalEstimator::dual_ratio_cum_product:
            return m.ybar * (xs() / s.meanX) * (s.meanZ / nonzero(zs(), "transformed z mean"));
        case ClassicalEstimator::ratio_cum_dual: {
            // linear term is -(alpha + (1 - alpha) g) e1; optimal when that weight is rho Cy / Cx
            const double K = s.rhoYX * s.cvY / s.cvX;
            const double alpha = (K - g) / (1 - g);
            return m.ybar * (alpha * s.meanX / nonzero(m.xbar, "sample x mean") + (1 - alpha) * xs() / s.meanX);
        }
    }
    return m.ybar;
}

std::vector<ClassicalRow> classical_report(const SummaryStats& s, const DesignCoefficients& c,
                                           const std::optional<SampleMeans>& sample) {
    const double base = classical_mse(ClassicalEstimator::mean, s, c.lambda, c.g);
    std::vector<ClassicalRow> rows;
    for (auto e : all_classical_estimators()) {
        if ((uses_z(e) && !s.has_z) || (uses_x(e) && !s.has_x)) continue;
        ClassicalRow r;
        r.estimator = e;
        r.mse1 = classical_mse(e, s, c.lambda, c.g);
        r.pre = pre(base, r.mse1);
        if (sample) r.point = classical_point(e, s, c, *sample);
        rows.push_back(r);
    }
    return rows;
}

QuadraticSummary quadratic_summary(const SummaryStats& s, double g) {
    s.require_x("ybar_PR");
    s.require_z("ybar_PR");
    QuadraticSummary q;
    q.C = cc_of(s);
    q.D = dd_of(s);
    q.Cstar = s.cvX * s.cvX + s.cvZ * s.cvZ - 2 * s.rhoZX * s.cvZ * s.cvX;
    q.Dstar = s.rhoYX * s.cvX - s.rhoYZ * s.cvZ;
    if (!(q.C > 0)) fail(ErrorKind::degenerate_optimum, "C = 0: no auxiliary signal in R1 x - R2 z");
    q.E = (q.D + q.C * g) / q.C;
    q.F = g - q.E;
    q.theta0 = (q.D + q.C * g) / (2 * q.C * g);
    return q;
}

PRReport pr_report(const SummaryStats& s, const DesignCoefficients& c, const DualPRParams& params,
                   const std::optional<SampleMeans>& sample) {
    s.require_x("ybar_PR");
    s.require_z("ybar_PR");
    const double R1 = s.ratioR1, R2 = s.ratioR2, g = c.g, A = params.A(), th = params.theta;
    const double C = cc_of(s), D = dd_of(s);
    PRReport r;
    r.bias1 = c.lambda / s.meanY *
              (g * D * A + g * g * (R1 * R1 * s.varX - R1 * R2 * s.covZX - th * (R1 * R1 * s.varX - R2 * R2 * s.varZ)));
    r.mse1 = c.lambda * (s.varY + 2 * A * g * D + A * A * g * g * C);
    if (sample) {
        const double xs = dual_transform(sample->xbar, s.meanX, g);
        const double zs = dual_transform(sample->zbar, s.meanZ, g);
        if (xs == 0 || zs == 0) fail(ErrorKind::singular_input, "transformed sample mean is zero");
        r.point = sample->ybar * (th * (xs / s.meanX) * (s.meanZ / zs) + (1 - th) * (s.meanX / xs) * (zs / s.meanZ));
    }
    return r;
}

QuadraticSummary pr_optimum(const SummaryStats& s, const DesignCoefficients& c) {
    QuadraticSummary q = quadratic_summary(s, c.g);
    q.minMse = c.lambda * (s.varY + q.F * (2 * q.D + q.C * q.F));
    const double simplified = c.lambda * (s.varY - q.D * q.D / q.C);
    if (std::abs(q.minMse - simplified) > 1e-12 * std::max(1.0, std::abs(simplified))) {
        fail(ErrorKind::validation, "minimum MSE forms disagree");
    }
    return q;
}

std::array<EfficiencyCondition, 8> efficiency_conditions(const SummaryStats& s, const DesignCoefficients& c,
                                                         double theta) {
    const double R1 = s.ratioR1, R2 = s.ratioR2, g = c.g;
    const double C = cc_of(s), D = dd_of(s);
    const DualPRParams p{theta};
    const double A = p.A();
    const double mse_pr = pr_report(s, c, p).mse1;
    const double agq = A * g * (2 * D + A * g * C);
    const double quart = 4 * theta * (theta * g * C - g * C - D);

    std::array<EfficiencyCondition, 8> out{};
    const auto set = [&](std::size_t i, char label, ClassicalEstimator vs, double lhs, double rhs,
                         std::optional<bool> proviso, bool lhs_greater = false) {
        auto& e = out[i];
        e.label = label;
        e.versus = vs;
        e.lhs = lhs;
        e.rhs = rhs;
        e.proviso = proviso;
        e.printed_holds = (lhs_greater ? lhs > rhs : lhs < rhs) && proviso.value_or(true);
        e.mse_difference = mse_pr - classical_mse(vs, s, c.lambda, g);
        e.holds = e.mse_difference < 0;
    };
    set(0, 'a', ClassicalEstimator::mean, theta, (2 * D + g * C) / (2 * g * C), std::nullopt, true);
    set(1, 'b', ClassicalEstimator::ratio, agq, R1 * (R1 * s.varX - 2 * s.covYX), s.covYX < R1 * s.varX / 2);
    set(2, 'c', ClassicalEstimator::product, agq, R2 * (R2 * s.varZ + 2 * s.covYZ), s.covYZ < R2 * s.varZ / 2);
    set(3, 'd', ClassicalEstimator::ratio_cum_product, C, -2 * D / (A * g - 1), g < 1 / A);
    set(4, 'e', ClassicalEstimator::dual_ratio, quart,
        2 * g * R1 * R2 * s.covZX + 2 * R2 * s.covYZ - 4 * R1 * s.covYX - g * R2 * R2 * s.varZ, std::nullopt);
    set(5, 'f', ClassicalEstimator::dual_product, quart,
        2 * g * R1 * R2 * s.covZX + 4 * R2 * s.covYZ - 2 * R1 * s.covYX - g * R1 * R1 * s.varX, std::nullopt);
    set(6, 'g', ClassicalEstimator::dual_ratio_cum_product, g, -2 * D / (C * (A - 1)), A < 1);
    set(7, 'h', ClassicalEstimator::ratio_cum_dual, agq, -s.rhoYX * s.rhoYX * s.varY, std::nullopt);
    return out;
}

}  // namespace estlab
