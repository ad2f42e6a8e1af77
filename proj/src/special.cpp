#include "gfl/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gfl/errors.hpp"

namespace gfl {

namespace {

constexpr int kLogFactorialTable = 2048;

const std::array<double, kLogFactorialTable>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, kLogFactorialTable> t{};
        t[0] = 0.0;
        for (int i = 1; i < kLogFactorialTable; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    return table;
}

// Taylor series of phi_p(z) = sum_j z^j / (j+p)!, used for |z| < 0.5.
std::complex<double> phi_series(std::complex<double> z, int p) {
    double denom = 1.0;
    for (int i = 2; i <= p; ++i) denom *= i;
    std::complex<double> term = 1.0 / denom;
    std::complex<double> sum = term;
    for (int j = 1; j < 24; ++j) {
        term *= z / static_cast<double>(j + p);
        sum += term;
    }
    return sum;
}

}  // namespace

double associated_laguerre(int n, int alpha, double x) {
    if (n < 0 || alpha < 0) {
        throw DomainError("associated_laguerre: negative index (n=" + std::to_string(n) +
                          ", alpha=" + std::to_string(alpha) + ")");
    }
    if (!(x >= 0.0)) {
        throw DomainError("associated_laguerre: x must be >= 0, got " + std::to_string(x));
    }
    if (n == 0) return 1.0;
    const double a = alpha;
    double prev = 1.0;
    double cur = 1.0 + a - x;
    for (int m = 1; m < n; ++m) {
        const double next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void laguerre_sequence(int alpha, double x, std::span<double> out) {
    if (out.empty()) return;
    const double a = alpha;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = 1.0 + a - x;
    for (std::size_t m = 1; m + 1 < out.size(); ++m) {
        const double md = static_cast<double>(m);
        out[m + 1] = ((2.0 * md + 1.0 + a - x) * out[m] - (md + a) * out[m - 1]) / (md + 1.0);
    }
}

double log_factorial(int n) {
    if (n < 0) throw DomainError("log_factorial: negative argument " + std::to_string(n));
    if (n < kLogFactorialTable) return log_factorial_table()[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_weight(int n, int k) {
    const int lo = std::min(n, k);
    const int hi = std::max(n, k);
    if (lo == hi) return 0.0;
    return 0.5 * (log_factorial(lo) - log_factorial(hi));
}

std::complex<double> phi1(std::complex<double> z) {
    if (std::abs(z) < 0.5) return phi_series(z, 1);
    return (std::exp(z) - 1.0) / z;
}

std::complex<double> phi2(std::complex<double> z) {
    if (std::abs(z) < 0.5) return phi_series(z, 2);
    return (std::exp(z) - 1.0 - z) / (z * z);
}

std::complex<double> exp_divided_difference(std::complex<double> x0, std::complex<double> x1,
                                            std::complex<double> x2) {
    using cd = std::complex<double>;
    std::array<cd, 3> x{x0, x1, x2};
    // Put the most distant pair at the ends so the outer division is by the largest gap.
    const double d01 = std::abs(x[0] - x[1]), d02 = std::abs(x[0] - x[2]), d12 = std::abs(x[1] - x[2]);
    if (d01 >= d02 && d01 >= d12) {
        std::swap(x[1], x[2]);
    } else if (d12 > d02) {
        std::swap(x[0], x[1]);
    }
    const double spread = std::abs(x[2] - x[0]);

    if (spread < 0.5) {
        // e^{x0} * sum_n h_n(d1, d2) / (n+2)!, h_n the complete homogeneous polynomial of degree n.
        const cd d1 = x[1] - x[0];
        const cd d2 = x[2] - x[0];
        cd h = 1.0;
        cd d2_pow = 1.0;
        cd sum = 0.0;
        double inv_fact = 0.5;
        for (int n = 0; n < 40; ++n) {
            sum += h * inv_fact;
            d2_pow *= d2;
            h = d2_pow + d1 * h;
            inv_fact /= static_cast<double>(n + 3);
        }
        return std::exp(x[0]) * sum;
    }
    const cd first_lo = std::exp(x[0]) * phi1(x[1] - x[0]);
    const cd first_hi = std::exp(x[1]) * phi1(x[2] - x[1]);
    return (first_hi - first_lo) / (x[2] - x[0]);
}

}  // namespace gfl
