#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace estlab {

struct SystematicInputs {
    int N = 0;
    int n = 0;
    double rhoY = 0, rhoX = 0;  // intraclass correlations
    double meanY = 0, meanX = 0;
    double S_Y2 = 0, S_X2 = 0;  // population mean squares
    double rho = 0;             // y-x correlation
};

/// Validated systematic design summary with the derived constants.
class SystematicSummary {
public:
    explicit SystematicSummary(const SystematicInputs& in);

    [[nodiscard]] const SystematicInputs& inputs() const noexcept { return in_; }
    [[nodiscard]] int N() const noexcept { return in_.N; }
    [[nodiscard]] int n() const noexcept { return in_.n; }
    [[nodiscard]] int k() const noexcept { return in_.N / in_.n; }
    [[nodiscard]] double f() const noexcept { return static_cast<double>(in_.n) / in_.N; }
    [[nodiscard]] double base() const noexcept;  // (N - 1) / (nN)
    [[nodiscard]] double aY() const noexcept { return 1 + (in_.n - 1) * in_.rhoY; }
    [[nodiscard]] double aX() const noexcept { return 1 + (in_.n - 1) * in_.rhoX; }
    [[nodiscard]] double C_Y() const noexcept;
    [[nodiscard]] double C_X() const noexcept;
    [[nodiscard]] double rhoStar() const noexcept;
    [[nodiscard]] double Kconst() const noexcept;

private:
    SystematicInputs in_;
};

struct NonResponseSpec {
    double W2 = 0;
    double L = 2;
    double S_Y2sq = 0;
};

void validate(const NonResponseSpec& nr);

/// ((L - 1) / n) W2 S_Y2sq, exactly zero when W2 = 0.
[[nodiscard]] double nonresponse_term(const SystematicSummary& s, const NonResponseSpec& nr);

struct BaseVariances {
    double varYstar = 0;
    double varXbar = 0;
};

[[nodiscard]] BaseVariances sys_base_variances(const SystematicSummary& s, const NonResponseSpec& nr);

enum class SysEstimator { ratio, product, dual, regression };

[[nodiscard]] std::string_view to_string(SysEstimator e) noexcept;

struct SysRow {
    SysEstimator estimator{};
    std::optional<double> bias1;  // no first-order bias is stated for the regression estimator
    double mse1 = 0;
};

/// The dual bias carries the f/(1-f) factor, so it agrees with the factor family at alpha = 3.
[[nodiscard]] std::array<SysRow, 4> sys_classical_report(const SystematicSummary& s, const NonResponseSpec& nr);

struct FactorTypeParams {
    double alpha = 0;
    double f = 0;
    double A = 0, B = 0, C = 0;
    double phi1 = 0, phi2 = 0, phi = 0;
    double Ddenom = 0;  // equals phi2
};

[[nodiscard]] FactorTypeParams factor_coefficients(double alpha, double f);

/// phi(alpha) = phi2 - phi1, no validation.
[[nodiscard]] double factor_phi(double alpha, double f);

[[nodiscard]] double factor_point(double ybarStar, double xbar, double popMeanX, double alpha, double f);

struct FactorReport {
    FactorTypeParams params;
    double bias1 = 0;
    double mse1 = 0;
};

[[nodiscard]] FactorReport factor_report(double alpha, const SystematicSummary& s, const NonResponseSpec& nr);

/// MSE of T_alpha as a function of phi alone.
[[nodiscard]] double factor_mse_at_phi(double phi, const SystematicSummary& s, const NonResponseSpec& nr);

struct AlphaOptimum {
    std::vector<double> allRoots;  // real roots of the cleared cubic, any sign
    std::vector<double> roots;     // admissible: alpha > 0 and non-singular family
    double chosen = 0;
    double target = 0;  // rho* K
    double minMse = 0;
};

/// Solves phi(alpha) = rho* K through the companion matrix of the cleared-denominator cubic.
[[nodiscard]] AlphaOptimum alpha_optimum(const SystematicSummary& s, const NonResponseSpec& nr);

/// Real roots of c0 + c1 a + c2 a^2 + c3 a^3 (leading zeros drop the degree), Newton polished.
[[nodiscard]] std::vector<double> real_poly_roots(const std::array<double, 4>& coeffs, double imagTol = 1e-9);

/// Intraclass correlation rhoY reproducing a given V(ybar*) (the alpha = 4 column).
[[nodiscard]] double calibrate_rhoY(SystematicInputs in, const NonResponseSpec& nr, double varYstar);

/// A tabulated target: alpha (or the optimum when alpha is empty), W2, value.
struct SysTarget {
    std::optional<double> alpha;
    double W2 = 0;
    double value = 0;
};

struct PairFit {
    double rhoY = 0, rhoX = 0;
    double maxRelResidual = 0;
};

/// Best single (rhoX, rhoY) pair by minimax relative residual over the targets.
[[nodiscard]] PairFit fit_intraclass_pair(const SystematicInputs& base, double L, double S_Y2sq,
                                          const std::vector<SysTarget>& targets);

}  // namespace estlab
