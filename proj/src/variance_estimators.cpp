#include "estlab/variance_estimators.hpp"

#include <cmath>
#include <functional>

#include "estlab/dual_ratio_product.hpp"
#include "estlab/errors.hpp"

namespace estlab {

double VarianceFamilyParams::x1() const {
    if (c == d) fail(ErrorKind::validation, "c = d leaves x1 undefined");
    return d / (c - d);
}

double VarianceFamilyParams::x2() const {
    if (a + b == 0) fail(ErrorKind::validation, "a + b = 0 leaves x2 undefined");
    return b / (a + b);
}

VarianceFamilyParams VarianceFamilyParams::from_shape(double x1, double x2, double p, double q) {
    VarianceFamilyParams v;
    v.d = x1;
    v.c = 1 + x1;
    v.b = x2;
    v.a = 1 - x2;
    v.p = p;
    v.q = q;
    return v;
}

StarredMoments starred_moments(const PartialMomentTable& t) {
    return {t.starred(4, 0, 0), t.starred(0, 4, 0), t.starred(0, 0, 4),
            t.starred(2, 2, 0), t.starred(2, 0, 2), t.starred(0, 2, 2)};
}

namespace {

void check_n(int n) {
    if (n < 2) fail(ErrorKind::design, "sample size n must be at least 2");
}

void check_two_phase(int n, int nPrime) {
    check_n(n);
    if (!(n < nPrime)) {
        fail(ErrorKind::design, "two-phase design needs n < n', got (n, n') = (" + std::to_string(n) + ", " +
                                    std::to_string(nPrime) + ")");
    }
}

double positive(double v, const char* what) {
    if (!(v > 0)) fail(ErrorKind::singular_input, std::string(what) + " must be positive");
    return v;
}

double nonzero(double v, const char* what) {
    if (v == 0) fail(ErrorKind::singular_input, std::string(what) + " is zero");
    return v;
}

// Vertex of a one-variable quadratic, recovered from three evaluations.
double quad_vertex(const std::function<double(double)>& f, const char* who) {
    const double f0 = f(0), fp = f(1), fm = f(-1);
    const double a = (fp + fm) / 2 - f0;
    const double b = (fp - fm) / 2;
    if (!(a > 0)) fail(ErrorKind::degenerate_optimum, std::string(who) + " quadratic coefficient is not positive");
    return -b / (2 * a);
}

double own_px1(const StarredMoments& m) {
    if (!(m.d040 > 0)) fail(ErrorKind::degenerate_optimum, "d*040 must be positive");
    return m.d220 / m.d040;
}

double own_qx2(const StarredMoments& m) {
    if (!(m.d004 > 0)) fail(ErrorKind::degenerate_optimum, "d*004 must be positive");
    return m.d202 / m.d004;
}

double t4_mse(const StarredMoments& m, double k) {
    return m.d400 + k * k * m.d040 / 4 + (1 - k) * (1 - k) * m.d004 / 4 - k * m.d220 + (1 - k) * m.d202 -
           k * (1 - k) / 2 * m.d022;
}

double t4p_mse(const StarredMoments& m, int n, int nPrime, double k) {
    const double A = m.d400 / n, B = 0.25 * (1.0 / n - 1.0 / nPrime) * m.d040, C = m.d004 / (4.0 * nPrime);
    const double D = (1.0 / nPrime - 1.0 / n) * m.d220, E = m.d202 / nPrime;
    return A + k * k * B + (1 - k) * (1 - k) * C + k * D + (1 - k) * E;
}

}  // namespace

VarSy2 var_sy2(const PartialMomentTable& t, int n, std::optional<double> popVarY) {
    check_n(n);
    VarSy2 v;
    v.relative = t.starred(4, 0, 0) / n;
    if (popVarY) v.absolute = *popVarY * *popVarY * v.relative;
    return v;
}

std::array<double, 7> var_point(const VarianceSample& s, const VarianceFamilyParams& v) {
    positive(s.sx2, "sample variance of x");
    positive(s.sz2, "sample variance of z");
    positive(s.Sx2, "population variance of x");
    positive(s.Sz2, "population variance of z");
    const double x1 = v.x1(), x2 = v.x2();
    const double ex = std::exp((s.Sx2 - s.sx2) / (s.Sx2 + s.sx2));
    const double ez = std::exp((s.sz2 - s.Sz2) / (s.sz2 + s.Sz2));
    // (c Sx2 - d sx2) / ((c - d) Sx2) = 1 + x1 - x1 sx2 / Sx2
    const double r5 = 1 + x1 - x1 * s.sx2 / s.Sx2;
    const double r6 = 1 / nonzero(1 - x2 + x2 * s.sz2 / s.Sz2, "t6 denominator");
    const double p5 = std::pow(r5, v.p), p6 = std::pow(r6, v.q);
    if (!std::isfinite(p5) || !std::isfinite(p6)) fail(ErrorKind::domain, "fractional power of a negative base");
    return {s.sy2 * s.Sx2 / s.sx2,
            s.sy2 * ex,
            s.sy2 * ez,
            s.sy2 * (v.k4 * ex + (1 - v.k4) * ez),
            s.sy2 * p5,
            s.sy2 * p6,
            s.sy2 * (v.k7 * p5 + (1 - v.k7) * p6)};
}

std::array<double, 6> var_point_twophase(const TwoPhaseSample& s, const VarianceFamilyParams& v) {
    positive(s.sx2, "sample variance of x");
    positive(s.sz2, "sample variance of z");
    positive(s.sx2First, "first-phase variance of x");
    positive(s.sz2First, "first-phase variance of z");
    positive(s.Sz2, "population variance of z");
    const double x1 = v.x1(), x2 = v.x2();
    const double ex = std::exp((s.sx2First - s.sx2) / (s.sx2First + s.sx2));
    const double ez = std::exp((s.sz2 - s.sz2First) / (s.sz2 + s.sz2First));
    const double ezp = std::exp((s.sz2First - s.Sz2) / (s.sz2First + s.Sz2));
    const double r5 = 1 + x1 - x1 * s.sx2 / s.sx2First;
    const double r6 = 1 / nonzero(1 - x2 + x2 * s.sz2First / s.Sz2, "t6' denominator");
    const double p5 = std::pow(r5, v.p), p6 = std::pow(r6, v.q);
    if (!std::isfinite(p5) || !std::isfinite(p6)) fail(ErrorKind::domain, "fractional power of a negative base");
    return {s.sy2 * ex,
            s.sy2 * ez,
            s.sy2 * (v.k4Prime * ex + (1 - v.k4Prime) * ezp),
            s.sy2 * p5,
            s.sy2 * p6,
            s.sy2 * (v.k7Prime * p5 + (1 - v.k7Prime) * p6)};
}

double t7_quadratic(const StarredMoments& m, double k, double px1, double qx2) {
    const double A = m.d400, B = px1 * px1 * m.d040, C = qx2 * qx2 * m.d004, D = px1 * m.d220;
    const double E = px1 * qx2 * m.d022, F = qx2 * m.d202;
    return A + k * k * B + (1 - k) * (1 - k) * C - 2 * k * D - 2 * (1 - k) * F + 2 * k * (1 - k) * E;
}

double t7p_quadratic(const StarredMoments& m, int n, int nPrime, double k, double px1, double qx2) {
    const double inv = 1.0 / n - 1.0 / nPrime;
    const double A1 = m.d400 / n, B1 = px1 * px1 * inv * m.d040, C1 = qx2 * qx2 * m.d004 / nPrime;
    const double D1 = -px1 * inv * m.d220, E1 = qx2 * m.d202 / nPrime;
    return A1 + B1 * k * k + (k - 1) * (k - 1) * C1 + 2 * k * D1 + 2 * (k - 1) * E1;
}

VarOptima var_optima(const PartialMomentTable& t, int n, int nPrime, VarOptimaMode mode, double p, double q) {
    check_two_phase(n, nPrime);
    if (p == 0 || q == 0) fail(ErrorKind::validation, "exponents p and q must be nonzero");
    const StarredMoments m = starred_moments(t);
    const double u = own_px1(m), w = own_qx2(m);
    VarianceFamilyParams base = VarianceFamilyParams::from_shape(u / p, w / q, p, q);
    const double inv = 1.0 / n - 1.0 / nPrime;

    if (mode == VarOptimaMode::as_printed) {
        const double den4 = 2 * (m.d040 + m.d004 + m.d022);
        if (den4 == 0) fail(ErrorKind::degenerate_optimum, "printed k4 denominator is zero");
        base.k4 = (m.d004 / 2 + m.d220 + m.d022) / den4;
        const double B = u * u * m.d040, C = w * w * m.d004, D = u * m.d220, E = u * w * m.d022, F = w * m.d202;
        if (B + C - 2 * E == 0) fail(ErrorKind::degenerate_optimum, "printed k7 denominator is zero");
        base.k7 = (C + D - F - E) / (B + C - 2 * E);
        const double Bp = 0.25 * inv * m.d040, Cp = m.d004 / (4.0 * nPrime), Dp = -inv * m.d220, Ep = m.d202 / nPrime;
        if (Bp + Cp == 0) fail(ErrorKind::degenerate_optimum, "printed k4' denominator is zero");
        base.k4Prime = (2 * Cp + Ep - Dp) / (2 * (Bp + Cp));
        // C1 as printed carries an extra p x1 factor
        const double B1 = u * u * inv * m.d040, C1 = u * w * w * m.d004 / nPrime, D1 = -u * inv * m.d220,
                     E1 = w * m.d202 / nPrime;
        if (B1 + C1 == 0) fail(ErrorKind::degenerate_optimum, "printed k7' denominator is zero");
        base.k7Prime = (C1 - D1 - E1) / (B1 + C1);
        return {mode, base, base, base, base};
    }

    base.k4 = quad_vertex([&](double k) { return t4_mse(m, k); }, "t4");
    base.k7 = quad_vertex([&](double k) { return t7_quadratic(m, k, u, w); }, "t7");
    base.k4Prime = quad_vertex([&](double k) { return t4p_mse(m, n, nPrime, k); }, "t4'");
    base.k7Prime = quad_vertex([&](double k) { return t7p_quadratic(m, n, nPrime, k, u, w); }, "t7'");
    VarOptima out{mode, base, base, base, base};
    if (mode == VarOptimaMode::joint) {
        // with k = 1/2, u = k p x1 and v = (1 - k) q x2 are free; minimize over (u, v)
        const double det = m.d040 * m.d004 - m.d022 * m.d022;
        if (!(det > 0)) fail(ErrorKind::degenerate_optimum, "t7 joint quadratic is not positive definite");
        const double uj = (m.d220 * m.d004 - m.d022 * m.d202) / det;
        const double vj = (m.d040 * m.d202 - m.d022 * m.d220) / det;
        out.singleT7 = VarianceFamilyParams::from_shape(2 * uj / p, 2 * vj / q, p, q);
        out.singleT7.k7 = 0.5;
        // t7' has no cross term, so u and v separate
        out.twoPhaseT7 = VarianceFamilyParams::from_shape(2 * u / p, 2 * w / q, p, q);
        out.twoPhaseT7.k7Prime = 0.5;
    }
    return out;
}

namespace {

std::vector<VarRow> single_rows(const StarredMoments& m, int n, const VarianceFamilyParams& v,
                                const VarianceFamilyParams& v7, T3Sign sign) {
    const double u = v.p * v.x1(), w = v.q * v.x2();
    const double u7 = v7.p * v7.x1(), w7 = v7.q * v7.x2();
    const double s3 = sign == T3Sign::plus ? 1.0 : -1.0;
    const std::array<std::pair<const char*, double>, 8> raw{{
        {"s_y^2", m.d400},
        {"t1", m.d400 + m.d040 - 2 * m.d220},
        {"t2", m.d400 + m.d040 / 4 - m.d220},
        {"t3", m.d400 + m.d004 / 4 + s3 * m.d202},
        {"t4", t4_mse(m, v.k4)},
        {"t5", m.d400 + u * u * m.d040 - 2 * u * m.d220},
        {"t6", m.d400 + w * w * m.d004 - 2 * w * m.d202},
        {"t7", t7_quadratic(m, v7.k7, u7, w7)},
    }};
    std::vector<VarRow> rows;
    for (const auto& [id, val] : raw) rows.push_back({id, val / n, pre(m.d400, val)});
    return rows;
}

std::vector<VarRow> twophase_rows(const StarredMoments& m, int n, int nPrime, const VarianceFamilyParams& v,
                                  const VarianceFamilyParams& v7) {
    const double inv = 1.0 / n - 1.0 / nPrime;
    const double u = v.p * v.x1(), w = v.q * v.x2();
    const double base = m.d400 / n;
    const std::array<std::pair<const char*, double>, 7> raw{{
        {"s_y^2", base},
        {"t2'", base + 0.25 * inv * m.d040 - inv * m.d220},
        {"t3'", base + 0.25 * inv * m.d004 + inv * m.d202},
        {"t4'", t4p_mse(m, n, nPrime, v.k4Prime)},
        {"t5'", base + u * u * inv * m.d040 - 2 * u * inv * m.d220},
        {"t6'", base + w * w * m.d004 / nPrime - 2 * w * m.d202 / nPrime},
        {"t7'", t7p_quadratic(m, n, nPrime, v7.k7Prime, v7.p * v7.x1(), v7.q * v7.x2())},
    }};
    std::vector<VarRow> rows;
    for (const auto& [id, val] : raw) rows.push_back({id, val, pre(base, val)});
    return rows;
}

}  // namespace

std::vector<VarRow> var_single_report(const PartialMomentTable& t, int n, const VarianceFamilyParams& params,
                                      T3Sign sign) {
    check_n(n);
    return single_rows(starred_moments(t), n, params, params, sign);
}

std::vector<VarRow> var_single_report(const PartialMomentTable& t, int n, const VarOptima& opt, T3Sign sign) {
    check_n(n);
    return single_rows(starred_moments(t), n, opt.single, opt.singleT7, sign);
}

std::vector<VarRow> var_twophase_report(const PartialMomentTable& t, int n, int nPrime,
                                        const VarianceFamilyParams& params) {
    check_two_phase(n, nPrime);
    return twophase_rows(starred_moments(t), n, nPrime, params, params);
}

std::vector<VarRow> var_twophase_report(const PartialMomentTable& t, int n, int nPrime, const VarOptima& opt) {
    check_two_phase(n, nPrime);
    return twophase_rows(starred_moments(t), n, nPrime, opt.twoPhase, opt.twoPhaseT7);
}

}  // namespace estlab
