#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "estlab/moments.hpp"

namespace estlab {

/// Constants of t4..t7 and their two-phase versions. The MSEs see (a, b, c, d) only
/// through x1 = d/(c - d) and x2 = b/(a + b).
struct VarianceFamilyParams {
    double a = 1, b = 1, c = 2, d = 1;
    double p = 1, q = 1;
    double k4 = 0.5, k7 = 0.5;
    double k4Prime = 0.5, k7Prime = 0.5;

    [[nodiscard]] double x1() const;
    [[nodiscard]] double x2() const;
    /// Picks c, d and a, b giving the requested x1 and x2.
    [[nodiscard]] static VarianceFamilyParams from_shape(double x1, double x2, double p = 1, double q = 1);
};

/// The six starred moments used by every formula here.
struct StarredMoments {
    double d400 = 0, d040 = 0, d004 = 0, d220 = 0, d202 = 0, d022 = 0;
};

[[nodiscard]] StarredMoments starred_moments(const PartialMomentTable& t);

struct VarSy2 {
    double relative = 0;                // d*400 / n
    std::optional<double> absolute;     // S_y^4 d*400 / n
};

[[nodiscard]] VarSy2 var_sy2(const PartialMomentTable& t, int n, std::optional<double> popVarY = std::nullopt);

struct VarianceSample {
    double sy2 = 0, sx2 = 0, sz2 = 0;  // second-phase sample variances
    double Sx2 = 0, Sz2 = 0;           // population variances
};

/// Point values of t1..t7.
[[nodiscard]] std::array<double, 7> var_point(const VarianceSample& s, const VarianceFamilyParams& params);

struct TwoPhaseSample {
    double sy2 = 0, sx2 = 0, sz2 = 0;  // second phase
    double sx2First = 0, sz2First = 0; // first phase
    double Sz2 = 0;                    // population variance of z
};

/// Point values of t2'..t7'.
[[nodiscard]] std::array<double, 6> var_point_twophase(const TwoPhaseSample& s, const VarianceFamilyParams& params);

/// Sign of the d*202 term in the t3 MSE. The product-type plus sign is the default.
enum class T3Sign { plus, printed_minus };

struct VarRow {
    std::string id;
    double mse = 0;  // in units of S_y^4
    double pre = 0;  // against s_y^2
};

enum class VarOptimaMode { as_printed, grid, joint };

struct VarOptima {
    VarOptimaMode mode{};
    VarianceFamilyParams single;    // t4, t5, t6
    VarianceFamilyParams singleT7;  // t7
    VarianceFamilyParams twoPhase;  // t4', t5', t6'
    VarianceFamilyParams twoPhaseT7;
};

/// as_printed evaluates the printed optimum formulas; grid takes the exact vertex of each
/// one-parameter quadratic with x1, x2 at their own optima; joint also frees x1 and x2 inside t7 and t7'.
[[nodiscard]] VarOptima var_optima(const PartialMomentTable& t, int n, int nPrime, VarOptimaMode mode,
                                   double p = 1, double q = 1);

/// t7 MSE: A + k^2 B + (1 - k)^2 C - 2kD - 2(1 - k)F + 2k(1 - k)E, in units of S_y^4 / n.
[[nodiscard]] double t7_quadratic(const StarredMoments& m, double k, double px1, double qx2);
/// t7' MSE with C1 = q^2 x2^2 d*004 / n', in units of S_y^4.
[[nodiscard]] double t7p_quadratic(const StarredMoments& m, int n, int nPrime, double k, double px1, double qx2);

[[nodiscard]] std::vector<VarRow> var_single_report(const PartialMomentTable& t, int n,
                                                    const VarianceFamilyParams& params, T3Sign sign = T3Sign::plus);
[[nodiscard]] std::vector<VarRow> var_single_report(const PartialMomentTable& t, int n, const VarOptima& opt,
                                                    T3Sign sign = T3Sign::plus);

[[nodiscard]] std::vector<VarRow> var_twophase_report(const PartialMomentTable& t, int n, int nPrime,
                                                      const VarianceFamilyParams& params);
[[nodiscard]] std::vector<VarRow> var_twophase_report(const PartialMomentTable& t, int n, int nPrime,
                                                      const VarOptima& opt);

}  // namespace estlab
