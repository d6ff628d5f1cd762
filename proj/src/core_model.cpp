#include "estlab/core_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "estlab/errors.hpp"

namespace estlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
void check_length(const std::optional<std::vector<T>>& col, std::size_t n, const char* name) {
    if (col && col->size() != n) {
        fail(ErrorKind::schema, std::string("column '") + name + "' has " + std::to_string(col->size()) +
                                    " values, expected " + std::to_string(n));
    }
}

void check_finite(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            fail(ErrorKind::validation, std::string("column '") + name + "' unit " + std::to_string(i + 1) +
                                            " is not finite");
        }
    }
}

void check_bits(const std::optional<std::vector<int>>& col, const char* name) {
    if (!col) return;
    for (std::size_t i = 0; i < col->size(); ++i) {
        const int v = (*col)[i];
        if (v != 0 && v != 1) {
            fail(ErrorKind::validation, std::string("column '") + name + "' unit " + std::to_string(i + 1) +
                                            " has value " + std::to_string(v) + ", expected 0 or 1");
        }
    }
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double cross_sum(const std::vector<double>& a, double ma, const std::vector<double>& b, double mb) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s;
}

double correlation(double cov, double va, double vb, const char* a, const char* b) {
    if (va <= 0) fail(ErrorKind::degenerate_moment, std::string("column '") + a + "' has zero variance");
    if (vb <= 0) fail(ErrorKind::degenerate_moment, std::string("column '") + b + "' has zero variance");
    return cov / std::sqrt(va * vb);
}

double cv_of(double var, double mean) {
    return mean != 0 ? std::sqrt(var) / std::abs(mean) : kNaN;
}

std::vector<double> bits_as_double(const std::vector<int>& b) {
    return {b.begin(), b.end()};
}

}  // namespace

double divisor_value(Divisor d, std::size_t n) noexcept {
    return d == Divisor::N ? static_cast<double>(n) : static_cast<double>(n) - 1.0;
}

FinitePopulation::FinitePopulation(PopulationColumns columns) : cols_(std::move(columns)) {
    const std::size_t n = cols_.y.size();
    if (n < 2) fail(ErrorKind::validation, "population needs at least 2 units, got " + std::to_string(n));
    check_length(cols_.x, n, "x");
    check_length(cols_.z, n, "z");
    check_length(cols_.phi1, n, "phi1");
    check_length(cols_.phi2, n, "phi2");
    check_length(cols_.stratum, n, "stratum");
    check_length(cols_.responder, n, "responder");
    check_finite(cols_.y, "y");
    if (cols_.x) check_finite(*cols_.x, "x");
    if (cols_.z) check_finite(*cols_.z, "z");
    check_bits(cols_.phi1, "phi1");
    check_bits(cols_.phi2, "phi2");
    check_bits(cols_.responder, "responder");
}

const std::vector<double>& FinitePopulation::x() const {
    if (!cols_.x) fail(ErrorKind::schema, "population has no x column");
    return *cols_.x;
}

const std::vector<double>& FinitePopulation::z() const {
    if (!cols_.z) fail(ErrorKind::schema, "population has no z column");
    return *cols_.z;
}

const std::vector<int>& FinitePopulation::phi1() const {
    if (!cols_.phi1) fail(ErrorKind::schema, "population has no phi1 column");
    return *cols_.phi1;
}

const std::vector<int>& FinitePopulation::phi2() const {
    if (!cols_.phi2) fail(ErrorKind::schema, "population has no phi2 column");
    return *cols_.phi2;
}

const std::vector<std::string>& FinitePopulation::stratum() const {
    if (!cols_.stratum) fail(ErrorKind::schema, "population has no stratum column");
    return *cols_.stratum;
}

const std::vector<int>& FinitePopulation::responder() const {
    if (!cols_.responder) fail(ErrorKind::schema, "population has no responder column");
    return *cols_.responder;
}

void SummaryStats::require_x(const char* who) const {
    if (!has_x) fail(ErrorKind::incomplete_input, std::string(who) + " needs the x column");
}

void SummaryStats::require_z(const char* who) const {
    if (!has_z) fail(ErrorKind::incomplete_input, std::string(who) + " needs the z column");
}

SummaryStats summarize_numeric(const FinitePopulation& pop, Divisor divisor) {
    if (!pop.has_x() && !pop.has_z()) fail(ErrorKind::schema, "summary needs y and at least one of x, z");
    const double d = divisor_value(divisor, pop.size());

    SummaryStats s;
    s.N = pop.size();
    s.has_x = pop.has_x();
    s.has_z = pop.has_z();
    const auto& y = pop.y();
    s.meanY = mean_of(y);
    s.varY = cross_sum(y, s.meanY, y, s.meanY) / d;
    s.cvY = cv_of(s.varY, s.meanY);

    s.meanX = s.meanZ = s.varX = s.varZ = s.covYX = s.covYZ = s.covZX = kNaN;
    s.rhoYX = s.rhoYZ = s.rhoZX = s.cvX = s.cvZ = s.ratioR1 = s.ratioR2 = kNaN;

    if (s.has_x) {
        const auto& x = pop.x();
        s.meanX = mean_of(x);
        s.varX = cross_sum(x, s.meanX, x, s.meanX) / d;
        s.covYX = cross_sum(y, s.meanY, x, s.meanX) / d;
        s.rhoYX = correlation(s.covYX, s.varY, s.varX, "y", "x");
        s.cvX = cv_of(s.varX, s.meanX);
        s.ratioR1 = s.meanY / s.meanX;
    }
    if (s.has_z) {
        const auto& z = pop.z();
        s.meanZ = mean_of(z);
        s.varZ = cross_sum(z, s.meanZ, z, s.meanZ) / d;
        s.covYZ = cross_sum(y, s.meanY, z, s.meanZ) / d;
        s.rhoYZ = correlation(s.covYZ, s.varY, s.varZ, "y", "z");
        s.cvZ = cv_of(s.varZ, s.meanZ);
        s.ratioR2 = s.meanY / s.meanZ;
    }
    if (s.has_x && s.has_z) {
        s.covZX = cross_sum(pop.z(), s.meanZ, pop.x(), s.meanX) / d;
        s.rhoZX = correlation(s.covZX, s.varZ, s.varX, "z", "x");
    }
    return s;
}

SummaryStats summary_from_printed(const PrintedSummary& p) {
    for (double r : {p.rhoYX, p.rhoYZ, p.rhoZX}) {
        if (!(std::abs(r) <= 1.0)) fail(ErrorKind::validation, "printed correlation outside [-1, 1]");
    }
    for (double v : {p.varY, p.varX, p.varZ}) {
        if (!(v > 0)) fail(ErrorKind::degenerate_moment, "printed variance must be positive");
    }
    SummaryStats s;
    s.N = p.N;
    s.has_x = s.has_z = true;
    s.meanY = p.meanY;
    s.meanX = p.meanX;
    s.meanZ = p.meanZ;
    s.varY = p.varY;
    s.varX = p.varX;
    s.varZ = p.varZ;
    s.rhoYX = p.rhoYX;
    s.rhoYZ = p.rhoYZ;
    s.rhoZX = p.rhoZX;
    s.covYX = p.rhoYX * std::sqrt(p.varY * p.varX);
    s.covYZ = p.rhoYZ * std::sqrt(p.varY * p.varZ);
    s.covZX = p.rhoZX * std::sqrt(p.varZ * p.varX);
    s.cvY = cv_of(p.varY, p.meanY);
    s.cvX = cv_of(p.varX, p.meanX);
    s.cvZ = cv_of(p.varZ, p.meanZ);
    s.ratioR1 = p.meanY / p.meanX;
    s.ratioR2 = p.meanY / p.meanZ;
    return s;
}

namespace {

void fill_attribute_constants(AttributeSummary& a) {
    if (!(a.P1 > 0 && a.P1 < 1)) fail(ErrorKind::degenerate_proportion, "P1 must lie strictly between 0 and 1");
    if (!(a.P2 > 0 && a.P2 < 1)) fail(ErrorKind::degenerate_proportion, "P2 must lie strictly between 0 and 1");
    if (a.meanY == 0) fail(ErrorKind::degenerate_moment, "y has zero mean, C_y undefined");
    a.cvY = std::sqrt(a.varY) / std::abs(a.meanY);
    a.cvP1 = std::sqrt(a.varPhi1) / a.P1;
    a.cvP2 = std::sqrt(a.varPhi2) / a.P2;
    a.kPb1 = a.rhoPb1 * a.cvY / a.cvP1;
    a.kPb2 = a.rhoPb2 * a.cvY / a.cvP2;
    a.kPhi = a.rhoPhi * a.cvP1 / a.cvP2;
}

}  // namespace

AttributeSummary summarize_attributes(const FinitePopulation& pop, Divisor divisor) {
    const double d = divisor_value(divisor, pop.size());
    const auto& y = pop.y();
    const auto p1 = bits_as_double(pop.phi1());
    const auto p2 = bits_as_double(pop.phi2());

    AttributeSummary a;
    a.N = pop.size();
    a.meanY = mean_of(y);
    a.P1 = mean_of(p1);
    a.P2 = mean_of(p2);
    if (!(a.P1 > 0 && a.P1 < 1)) fail(ErrorKind::degenerate_proportion, "phi1 is constant, C_p1 undefined");
    if (!(a.P2 > 0 && a.P2 < 1)) fail(ErrorKind::degenerate_proportion, "phi2 is constant, C_p2 undefined");
    a.varY = cross_sum(y, a.meanY, y, a.meanY) / d;
    a.varPhi1 = cross_sum(p1, a.P1, p1, a.P1) / d;
    a.varPhi2 = cross_sum(p2, a.P2, p2, a.P2) / d;
    a.covYPhi1 = cross_sum(y, a.meanY, p1, a.P1) / d;
    a.covYPhi2 = cross_sum(y, a.meanY, p2, a.P2) / d;
    a.covPhi1Phi2 = cross_sum(p1, a.P1, p2, a.P2) / d;
    a.rhoPb1 = correlation(a.covYPhi1, a.varY, a.varPhi1, "y", "phi1");
    a.rhoPb2 = correlation(a.covYPhi2, a.varY, a.varPhi2, "y", "phi2");
    a.rhoPhi = correlation(a.covPhi1Phi2, a.varPhi1, a.varPhi2, "phi1", "phi2");
    fill_attribute_constants(a);
    return a;
}

AttributeSummary attribute_summary_from_printed(const PrintedAttributeSummary& p) {
    AttributeSummary a;
    a.N = p.N;
    a.meanY = p.meanY;
    a.varY = p.varY;
    a.P1 = p.P1;
    a.P2 = p.P2;
    a.varPhi1 = p.varPhi1;
    a.varPhi2 = p.varPhi2;
    a.rhoPb1 = p.rhoPb1;
    a.rhoPb2 = p.rhoPb2;
    a.rhoPhi = p.rhoPhi;
    a.covYPhi1 = p.rhoPb1 * std::sqrt(p.varY * p.varPhi1);
    a.covYPhi2 = p.rhoPb2 * std::sqrt(p.varY * p.varPhi2);
    a.covPhi1Phi2 = p.rhoPhi * std::sqrt(p.varPhi1 * p.varPhi2);
    fill_attribute_constants(a);
    return a;
}

DesignCoefficients design_coefficients(std::size_t N, std::size_t n, std::optional<std::size_t> nPrime) {
    if (n < 2 || n >= N) {
        fail(ErrorKind::design, "need 2 <= n < N, got (N=" + std::to_string(N) + ", n=" + std::to_string(n) + ")");
    }
    if (nPrime && (*nPrime <= n || *nPrime >= N)) {
        fail(ErrorKind::design, "need n < n' < N, got (n=" + std::to_string(n) + ", n'=" + std::to_string(*nPrime) +
                                    ", N=" + std::to_string(N) + ")");
    }
    const double Nd = static_cast<double>(N);
    const double nd = static_cast<double>(n);

    DesignCoefficients c;
    c.N = N;
    c.n = n;
    c.nPrime = nPrime;
    c.f = nd / Nd;
    c.lambda = (1.0 - c.f) / nd;
    c.f1 = 1.0 / nd - 1.0 / Nd;
    c.g = nd / (Nd - nd);
    c.L1 = (Nd - nd) / ((Nd - 1) * nd);
    c.L2 = N > 2 ? (Nd - nd) * (Nd - 2 * nd) / ((Nd - 1) * (Nd - 2) * nd * nd) : kNaN;
    if (N >= 4) {
        const double den = (Nd - 1) * (Nd - 2) * (Nd - 3) * nd * nd * nd;
        c.L3 = (Nd - nd) * (Nd * Nd + Nd - 6 * nd * Nd + 6 * nd * nd) / den;
        c.L4 = Nd * (Nd - nd) * (Nd - nd - 1) * (nd - 1) / den;
    } else {
        c.L3 = c.L4 = kNaN;
    }
    return c;
}

}  // namespace estlab
