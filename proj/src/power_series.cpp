#include "estlab/power_series.hpp"

#include <cmath>

#include "estlab/errors.hpp"

namespace estlab {

Series4 Series4::constant(double v) {
    Series4 s;
    s.c[0] = v;
    return s;
}

Series4 Series4::variable() {
    Series4 s;
    s.c[1] = 1.0;
    return s;
}

Series4 operator+(const Series4& a, const Series4& b) {
    Series4 r;
    for (std::size_t i = 0; i < 5; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Series4 operator-(const Series4& a, const Series4& b) {
    Series4 r;
    for (std::size_t i = 0; i < 5; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

Series4 operator*(const Series4& a, const Series4& b) {
    Series4 r;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; i + j < 5; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

Series4 operator*(double s, const Series4& a) {
    Series4 r;
    for (std::size_t i = 0; i < 5; ++i) r.c[i] = s * a.c[i];
    return r;
}

Series4 binomial_power(double a, double r) {
    Series4 s;
    double coef = 1.0;
    double ak = 1.0;
    for (std::size_t k = 0; k < 5; ++k) {
        s.c[k] = coef * ak;
        coef *= (r - static_cast<double>(k)) / static_cast<double>(k + 1);
        ak *= a;
    }
    return s;
}

Series4 exp(const Series4& s) {
    Series4 u = s;
    u.c[0] = 0.0;
    // exp(u) = sum u^k / k!, u^5 and beyond vanish
    Series4 term = Series4::constant(1.0);
    Series4 out = term;
    for (int k = 1; k <= 4; ++k) {
        term = (1.0 / k) * (term * u);
        out = out + term;
    }
    return std::exp(s.c[0]) * out;
}

Series4 reciprocal(const Series4& s) {
    if (s.c[0] == 0) fail(ErrorKind::singular_input, "series reciprocal of a zero constant term");
    Series4 r;
    r.c[0] = 1.0 / s.c[0];
    for (std::size_t k = 1; k < 5; ++k) {
        double acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc += s.c[j] * r.c[k - j];
        r.c[k] = -acc / s.c[0];
    }
    return r;
}

Series4 power(const Series4& s, double r) {
    if (!(s.c[0] > 0)) fail(ErrorKind::domain, "series power needs a positive constant term");
    // (c0 (1 + u))^r with u = rest / c0; log(1+u) = u - u^2/2 + u^3/3 - u^4/4
    Series4 u = (1.0 / s.c[0]) * s;
    u.c[0] = 0.0;
    Series4 log1p;
    Series4 up = u;
    for (int k = 1; k <= 4; ++k) {
        log1p = log1p + ((k % 2 == 1 ? 1.0 : -1.0) / k) * up;
        up = up * u;
    }
    return std::pow(s.c[0], r) * exp(r * log1p);
}

}  // namespace estlab
