#pragma once

#include <array>
#include <cstddef>

namespace estlab {

/// Power series in one variable truncated after the e^4 term.
struct Series4 {
    std::array<double, 5> c{};

    [[nodiscard]] static Series4 constant(double v);
    [[nodiscard]] static Series4 variable();  // e

    [[nodiscard]] double operator[](std::size_t i) const { return c[i]; }

    friend Series4 operator+(const Series4& a, const Series4& b);
    friend Series4 operator-(const Series4& a, const Series4& b);
    friend Series4 operator*(const Series4& a, const Series4& b);
    friend Series4 operator*(double s, const Series4& a);
};

/// (1 + a e)^r via the generalized binomial series.
[[nodiscard]] Series4 binomial_power(double a, double r);
/// (c0 + rest)^r for c0 > 0, via exp(r log).
[[nodiscard]] Series4 power(const Series4& s, double r);
/// exp(s) for a series with zero constant term; the constant is factored out otherwise.
[[nodiscard]] Series4 exp(const Series4& s);
[[nodiscard]] Series4 reciprocal(const Series4& s);

}  // namespace estlab
