#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "gfl/errors.hpp"
#include "gfl/scalars.hpp"
#include "reference.hpp"

using namespace gfl;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

ref::Coupling as_function(const CouplingProfile& p) {
    return [p](double z) { return eval_coupling(p, z); };
}

}  // namespace

TEST_CASE("scalars vanish at Z = 0") {
    for (const auto& p : {CouplingProfile::constant(1.0), CouplingProfile::cosine(1.0, 0.2, 0.75),
                          CouplingProfile::sampled({0.0, 2.0}, {1.0, 3.0})}) {
        const auto s = eval_scalars(0.7, p, 0.0);
        CHECK(s.a == cplx(0.0));
        CHECK(s.b == cplx(0.0));
        CHECK(s.c == cplx(0.0));
    }
}

TEST_CASE("constant profile: B closes after one detuning period") {
    const auto s = eval_scalars(0.5, CouplingProfile::constant(1.0), 4.0 * pi);
    CHECK(std::abs(s.b) <= 1e-14);
    CHECK(std::abs(s.a.real()) <= 1e-14);
}

TEST_CASE("constant profile at Z = pi, lambda = 1/2") {
    const auto s = eval_scalars(0.5, CouplingProfile::constant(1.0), pi);
    // (gamma/lambda)(e^{-i lambda Z} - 1) = 2(e^{-i pi/2} - 1)
    const cplx expect = 2.0 * (std::exp(cplx(0.0, -pi / 2.0)) - 1.0);
    CHECK(std::abs(s.b - expect) <= 1e-14);
    CHECK(s.b_squared() == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(std::abs(s.b - ref::scalar_b(0.5, [](double) { return 1.0; }, pi)) <= 1e-12);
}

TEST_CASE("constant profile against printed closed forms") {
    // B = (gamma/lambda)(e^{-i lambda Z} - 1); |B|^2 = 2 (gamma/lambda)^2 (1 - cos(lambda Z)).
    for (double lambda : {0.5, 0.8, -0.3, 2.0}) {
        for (double z : {0.1, 1.0, 3.7, 12.0}) {
            const double gamma = 1.3;
            const auto s = constant_profile_scalars(gamma, lambda, z);
            const cplx theta = gamma / lambda * (std::exp(cplx(0.0, -lambda * z)) - 1.0);
            const double phi = 2.0 * gamma * gamma / (lambda * lambda) * (1.0 - std::cos(lambda * z));
            CHECK(std::abs(s.b - theta) <= 1e-12);
            CHECK(std::abs(s.b_squared() - phi) <= 1e-12);
        }
    }
}

TEST_CASE("lambda = 0 limit") {
    const auto s = eval_scalars(0.0, CouplingProfile::constant(1.5), 2.0);
    CHECK(std::abs(s.b - cplx(0.0, -3.0)) <= 1e-14);
    CHECK(std::abs(s.a - cplx(4.5, 0.0)) <= 1e-14);
    const auto near = eval_scalars(1e-9, CouplingProfile::constant(1.5), 2.0);
    CHECK(std::abs(near.b - s.b) <= 1e-8);
    CHECK(std::abs(near.a - s.a) <= 1e-8);
}

TEST_CASE("modulated profile closes at its revival distance") {
    const auto s = eval_scalars(1.0, CouplingProfile::cosine(1.0, 0.2, 0.75), 8.0 * pi);
    CHECK(std::abs(s.b) <= 1e-12);
    const auto s2 = eval_scalars(1.0, CouplingProfile::cosine(1.0, 0.2, 2.0 / 3.0), 6.0 * pi);
    CHECK(std::abs(s2.b) <= 1e-12);
}

TEST_CASE("A and B agree with nested quadrature") {
    const std::vector<std::pair<double, CouplingProfile>> cases{
        {0.5, CouplingProfile::constant(1.0)},
        {1.0, CouplingProfile::cosine(1.0, 0.2, 0.75)},
        {1.0, CouplingProfile::cosine(1.0, 0.2, 1.0)},
        {0.8, CouplingProfile::cosine(0.5, 0.6, 2.3)},
        {0.6, CouplingProfile::sampled({0.0, 1.0, 2.5, 6.0}, {1.0, 0.4, 1.6, 0.9})},
    };
    for (const auto& [lambda, profile] : cases) {
        for (double z : {0.7, 3.1, 5.9}) {
            const auto s = eval_scalars(lambda, profile, z);
            const auto f = as_function(profile);
            const std::vector<double> kinks = profile.is_sampled() ? std::vector<double>{1.0, 2.5} : std::vector<double>{};
            const cplx b = ref::scalar_b(lambda, f, z, 64, kinks);
            const cplx a = ref::scalar_a(lambda, f, z, 24, kinks);
            CHECK(std::abs(s.b - b) <= 1e-9);
            CHECK(std::abs(s.a - a) <= 1e-8);
        }
    }
}

TEST_CASE("ODE path matches the closed-form path") {
    const auto p = CouplingProfile::cosine(1.0, 0.2, 0.75);
    for (double z : {0.5, 4.0, 20.0}) {
        const auto closed = eval_scalars(1.0, p, z);
        const auto ode = integrate_scalars(1.0, p, z);
        CHECK(std::abs(closed.b - ode.b) <= 1e-9);
        CHECK(std::abs(closed.a - ode.a) <= 1e-8);
    }
}

TEST_CASE("Re(A) = |B|^2 / 2 on random samples") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double lambda = -1.0 + 3.0 * u(rng);
        const double z = 25.0 * u(rng);
        CouplingProfile p = (i % 3 == 0) ? CouplingProfile::constant(0.2 + 2.0 * u(rng))
                            : (i % 3 == 1)
                                ? CouplingProfile::cosine(0.2 + 1.5 * u(rng), u(rng), 0.1 + 2.0 * u(rng))
                                : CouplingProfile::sampled({0.0, 10.0 * u(rng) + 0.1, 30.0}, {u(rng) + 0.1, 2.0 * u(rng), 1.0});
        const auto s = eval_scalars(lambda, p, z);
        CHECK(std::abs(s.a.real() - 0.5 * s.b_squared()) <= 1e-10 * std::max(1.0, s.b_squared()));
        CHECK(s.c == c_from_b(lambda, z, s.b));
        CHECK(s.c == -std::exp(cplx(0.0, -lambda * z)) * std::conj(s.b));
    }
}

TEST_CASE("series evaluation matches pointwise evaluation") {
    const auto p = CouplingProfile::sampled({0.0, 1.0, 4.0}, {1.0, 2.0, 0.5});
    const std::vector<double> zs{0.0, 0.3, 1.0, 2.2, 4.0};
    const auto series = eval_scalars_series(0.9, p, zs);
    REQUIRE(series.size() == zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto s = eval_scalars(0.9, p, zs[i]);
        CHECK(std::abs(series[i].b - s.b) <= 1e-10);
        CHECK(std::abs(series[i].a - s.a) <= 1e-10);
    }
}

TEST_CASE("|B|^2 slope is the derivative of |B|^2") {
    const auto p = CouplingProfile::cosine(1.0, 0.2, 0.75);
    for (double z : {1.0, 5.0, 9.0}) {
        const double h = 1e-5;
        const double fd = (b_squared(1.0, p, z + h) - b_squared(1.0, p, z - h)) / (2.0 * h);
        CHECK(b_squared_slope(1.0, p, z, eval_scalars(1.0, p, z).b) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("scalar errors") {
    CHECK_THROWS_AS(eval_scalars(0.5, CouplingProfile::constant(1.0), -1.0), DomainError);
    CHECK_THROWS_AS(eval_scalars(0.5, CouplingProfile::sampled({0.0, 1.0}, {1.0, 1.0}), 2.0), RangeError);
}
