#include "estlab/systematic_nonresponse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "estlab/errors.hpp"

namespace estlab {

SystematicSummary::SystematicSummary(const SystematicInputs& in) : in_(in) {
    if (in.n < 2 || in.N < in.n) fail(ErrorKind::design, "systematic design needs 2 <= n <= N");
    if (in.N % in.n != 0) {
        fail(ErrorKind::design, "N = " + std::to_string(in.N) + " is not a multiple of n = " + std::to_string(in.n));
    }
    const double lo = -1.0 / (in.n - 1);
    for (double r : {in.rhoY, in.rhoX}) {
        if (!std::isfinite(r) || r < lo || r > 1) fail(ErrorKind::validation, "intraclass correlation out of range");
    }
    if (!(aX() > 0)) fail(ErrorKind::domain, "1 + (n - 1) rhoX must be positive");
    if (in.meanY == 0 || in.meanX == 0) fail(ErrorKind::degenerate_moment, "population means must be nonzero");
    if (!(in.S_Y2 > 0) || !(in.S_X2 > 0)) fail(ErrorKind::degenerate_moment, "mean squares must be positive");
    if (!(std::abs(in.rho) <= 1)) fail(ErrorKind::validation, "correlation must lie in [-1, 1]");
}

double SystematicSummary::base() const noexcept {
    return static_cast<double>(in_.N - 1) / (static_cast<double>(in_.n) * in_.N);
}
double SystematicSummary::C_Y() const noexcept { return std::sqrt(in_.S_Y2) / std::abs(in_.meanY); }
double SystematicSummary::C_X() const noexcept { return std::sqrt(in_.S_X2) / std::abs(in_.meanX); }
double SystematicSummary::rhoStar() const noexcept { return std::sqrt(aY() / aX()); }
double SystematicSummary::Kconst() const noexcept { return in_.rho * C_Y() / C_X(); }

void validate(const NonResponseSpec& nr) {
    if (!(nr.W2 >= 0 && nr.W2 <= 1)) fail(ErrorKind::validation, "W2 must lie in [0, 1]");
    if (!(nr.L >= 1) || !std::isfinite(nr.L)) fail(ErrorKind::validation, "L must be at least 1");
    if (!(nr.S_Y2sq >= 0)) fail(ErrorKind::validation, "S_Y2sq must be non-negative");
}

double nonresponse_term(const SystematicSummary& s, const NonResponseSpec& nr) {
    validate(nr);
    if (nr.W2 == 0) return 0.0;
    return (nr.L - 1) / s.n() * nr.W2 * nr.S_Y2sq;
}

BaseVariances sys_base_variances(const SystematicSummary& s, const NonResponseSpec& nr) {
    const auto& in = s.inputs();
    return {s.base() * s.aY() * in.S_Y2 + nonresponse_term(s, nr), s.base() * s.aX() * in.S_X2};
}

std::string_view to_string(SysEstimator e) noexcept {
    switch (e) {
        case SysEstimator::ratio: return "ratio";
        case SysEstimator::product: return "product";
        case SysEstimator::dual: return "dual";
        case SysEstimator::regression: return "regression";
    }
    return "?";
}

double factor_mse_at_phi(double phi, const SystematicSummary& s, const NonResponseSpec& nr) {
    const double Y = s.inputs().meanY, rs = s.rhoStar(), K = s.Kconst(), cx2 = s.C_X() * s.C_X();
    return s.base() * Y * Y * s.aX() * (rs * rs * s.C_Y() * s.C_Y() + (phi * phi - 2 * phi * rs * K) * cx2) +
           nonresponse_term(s, nr);
}

std::array<SysRow, 4> sys_classical_report(const SystematicSummary& s, const NonResponseSpec& nr) {
    if (!(s.C_X() > 0)) fail(ErrorKind::degenerate_moment, "C_X must be positive");
    const double Y = s.inputs().meanY, rs = s.rhoStar(), K = s.Kconst(), cx2 = s.C_X() * s.C_X();
    const double b = s.base() * Y * s.aX() * cx2;
    const double g = s.f() / (1 - s.f());
    const double cy2 = s.C_Y() * s.C_Y();
    std::array<SysRow, 4> rows{};
    rows[0] = {SysEstimator::ratio, b * (1 - K * rs), factor_mse_at_phi(1.0, s, nr)};
    rows[1] = {SysEstimator::product, b * K * rs, factor_mse_at_phi(-1.0, s, nr)};
    rows[2] = {SysEstimator::dual, -g * b * rs * K, factor_mse_at_phi(g, s, nr)};
    rows[3] = {SysEstimator::regression, std::nullopt,
               s.base() * Y * Y * s.aX() * (cy2 - K * K * cx2) * rs * rs + nonresponse_term(s, nr)};
    return rows;
}

namespace {

struct ABC {
    double A, B, C;
};

ABC abc_of(double a) { return {(a - 1) * (a - 2), (a - 1) * (a - 4), (a - 2) * (a - 3) * (a - 4)}; }

}  // namespace

double factor_phi(double alpha, double f) {
    const auto [A, B, C] = abc_of(alpha);
    return (C - f * B) / (A + f * B + C);
}

FactorTypeParams factor_coefficients(double alpha, double f) {
    if (!(alpha > 0) || !std::isfinite(alpha)) fail(ErrorKind::validation, "alpha must be positive");
    if (!(f > 0 && f <= 1)) fail(ErrorKind::validation, "sampling fraction must lie in (0, 1]");
    const auto [A, B, C] = abc_of(alpha);
    const double den = A + f * B + C;
    if (den == 0) fail(ErrorKind::singular_family, "A + fB + C = 0 at alpha = " + std::to_string(alpha));
    FactorTypeParams p;
    p.alpha = alpha;
    p.f = f;
    p.A = A;
    p.B = B;
    p.C = C;
    p.phi1 = f * B / den;
    p.phi2 = C / den;
    p.phi = p.phi2 - p.phi1;
    p.Ddenom = p.phi2;
    return p;
}

double factor_point(double ybarStar, double xbar, double popMeanX, double alpha, double f) {
    const auto p = factor_coefficients(alpha, f);
    const double den = (p.A + f * p.B) * popMeanX + p.C * xbar;
    if (den == 0) fail(ErrorKind::singular_input, "factor-type denominator is zero");
    return ybarStar * ((p.A + p.C) * popMeanX + f * p.B * xbar) / den;
}

FactorReport factor_report(double alpha, const SystematicSummary& s, const NonResponseSpec& nr) {
    FactorReport r;
    r.params = factor_coefficients(alpha, s.f());
    const double Y = s.inputs().meanY, cx2 = s.C_X() * s.C_X();
    r.bias1 = r.params.phi * s.base() * Y * s.aX() * (r.params.phi2 - s.rhoStar() * s.Kconst()) * cx2;
    r.mse1 = factor_mse_at_phi(r.params.phi, s, nr);
    return r;
}

std::vector<double> real_poly_roots(const std::array<double, 4>& c, double imagTol) {
    const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    if (scale == 0) return {};
    int deg = 3;
    while (deg > 0 && std::abs(c[static_cast<std::size_t>(deg)]) <= 1e-14 * scale) --deg;
    if (deg == 0) return {};
    const auto lead = c[static_cast<std::size_t>(deg)];
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) M(i, deg - 1) = -c[static_cast<std::size_t>(i)] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    const auto ev = es.eigenvalues();
    const auto val = [&](double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; };
    const auto der = [&](double x) { return (3 * c[3] * x + 2 * c[2]) * x + c[1]; };
    std::vector<double> out;
    for (int i = 0; i < deg; ++i) {
        if (std::abs(ev(i).imag()) > imagTol * std::max(1.0, std::abs(ev(i).real()))) continue;
        double x = ev(i).real();
        for (int it = 0; it < 4; ++it) {
            const double d = der(x);
            if (d == 0) break;
            const double nx = x - val(x) / d;
            if (!std::isfinite(nx)) break;
            x = nx;
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AlphaOptimum alpha_optimum(const SystematicSummary& s, const NonResponseSpec& nr) {
    const double t = s.rhoStar() * s.Kconst();
    const double f = s.f();
    if (!std::isfinite(t)) fail(ErrorKind::domain, "rho* K is not finite");
    // (1 - t) C - f (1 + t) B - t A = 0 with A, B, C expanded in alpha
    const std::array<double, 4> coeffs{-24 * (1 - t) - 4 * f * (1 + t) - 2 * t,
                                       26 * (1 - t) + 5 * f * (1 + t) + 3 * t,
                                       -9 * (1 - t) - f * (1 + t) - t,
                                       1 - t};
    AlphaOptimum out;
    out.target = t;
    out.allRoots = real_poly_roots(coeffs);
    for (double r : out.allRoots) {
        if (!(r > 0)) continue;
        const auto [A, B, C] = abc_of(r);
        if (A + f * B + C == 0) continue;
        out.roots.push_back(r);
    }
    if (out.roots.empty()) {
        std::string all;
        for (double r : out.allRoots) all += (all.empty() ? "" : ", ") + std::to_string(r);
        fail(ErrorKind::degenerate_optimum, "no positive real root of phi(alpha) = rho*K; real roots: [" + all + "]");
    }
    out.chosen = out.roots.front();
    const double Y = s.inputs().meanY, rs = s.rhoStar(), K = s.Kconst();
    const double cy2 = s.C_Y() * s.C_Y(), cx2 = s.C_X() * s.C_X();
    out.minMse = s.base() * Y * Y * s.aX() * (cy2 - K * K * cx2) * rs * rs + nonresponse_term(s, nr);
    const double reg = sys_classical_report(s, nr)[3].mse1;
    if (std::abs(out.minMse - reg) > 1e-12 * std::max(1.0, std::abs(reg))) {
        fail(ErrorKind::validation, "optimum MSE disagrees with the regression MSE");
    }
    return out;
}

double calibrate_rhoY(SystematicInputs in, const NonResponseSpec& nr, double varYstar) {
    in.rhoY = 0;
    const SystematicSummary s(in);
    const double a = (varYstar - nonresponse_term(s, nr)) / (s.base() * in.S_Y2);
    return (a - 1) / (in.n - 1);
}

namespace {

double fit_objective(const SystematicInputs& base, double L, double S_Y2sq, const std::vector<SysTarget>& ts,
                     double aY, double aX) {
    SystematicInputs in = base;
    in.rhoY = (aY - 1) / (in.n - 1);
    in.rhoX = (aX - 1) / (in.n - 1);
    const SystematicSummary s(in);
    double worst = 0;
    for (const auto& t : ts) {
        const NonResponseSpec nr{t.W2, L, S_Y2sq};
        const double m = t.alpha ? factor_report(*t.alpha, s, nr).mse1 : sys_classical_report(s, nr)[3].mse1;
        worst = std::max(worst, std::abs(m / t.value - 1));
    }
    return worst;
}

}  // namespace

PairFit fit_intraclass_pair(const SystematicInputs& base, double L, double S_Y2sq,
                            const std::vector<SysTarget>& targets) {
    if (targets.empty()) fail(ErrorKind::validation, "no targets to fit");
    // a = 1 + (n - 1) rho ranges over (0, n]; coarse grid then repeated zoom
    const double hi = base.n;
    double loY = 1e-6, hiY = hi, loX = 1e-6, hiX = hi;
    double bestY = 1, bestX = 1, best = std::numeric_limits<double>::infinity();
    constexpr int G = 200;
    for (int round = 0; round < 6; ++round) {
        for (int i = 0; i <= G; ++i) {
            const double aY = loY + (hiY - loY) * i / G;
            for (int j = 0; j <= G; ++j) {
                const double aX = loX + (hiX - loX) * j / G;
                const double v = fit_objective(base, L, S_Y2sq, targets, aY, aX);
                if (v < best) {
                    best = v;
                    bestY = aY;
                    bestX = aX;
                }
            }
        }
        const double wY = (hiY - loY) / G * 4, wX = (hiX - loX) / G * 4;
        loY = std::max(1e-9, bestY - wY);
        hiY = std::min(hi, bestY + wY);
        loX = std::max(1e-9, bestX - wX);
        hiX = std::min(hi, bestX + wX);
    }
    return {(bestY - 1) / (base.n - 1), (bestX - 1) / (base.n - 1), best};
}

}  // namespace estlab
