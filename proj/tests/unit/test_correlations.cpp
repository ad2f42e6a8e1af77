#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "gfl/correlations.hpp"
#include "gfl/errors.hpp"
#include "gfl/oracle.hpp"
#include "gfl/propagator.hpp"

using namespace gfl;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

LatticeSpec default_spec() {
    LatticeSpec s;
    s.lambda = 0.5;
    s.profile = CouplingProfile::constant(1.0);
    return s;
}

PropagatorMatrix identity(const LatticeSpec& spec) {
    return {Eigen::MatrixXcd::Identity(spec.n_sites, spec.n_sites), 0.0, spec, PropagatorMethod::closed_form};
}

// Gamma_{p,q} = |sum sigma_{k,k'} T_{k,p} T_{k',q}|^2 by brute force over all (k, k').
Eigen::MatrixXd brute_gamma(const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& sigma) {
    const auto n = t.rows();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            cplx amp = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) {
                for (Eigen::Index kp = 0; kp < n; ++kp) amp += sigma(k, kp) * t(k, p) * t(kp, q);
            }
            g(p, q) = std::norm(amp);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("correlated state coefficients") {
    const auto spec = default_spec();
    const auto s = correlated_state(spec, 0, 9);
    CHECK(s.window() == 10);
    for (int k = 0; k < 64; ++k) {
        for (int j = 0; j < 64; ++j) {
            const cplx expect = (k == j && k <= 9) ? cplx(std::sqrt(0.1)) : cplx(0.0);
            CHECK(std::abs(s.coeffs(k, j) - expect) <= 1e-15);
        }
    }
    const auto single = correlated_state(spec, 3, 3);
    CHECK(single.coeffs(3, 3) == cplx(1.0));
    CHECK(single.coeffs.cwiseAbs().sum() == 1.0);
    const auto two = correlated_state(spec, 0, 1);
    CHECK(std::abs(two.coeffs(0, 0) - std::sqrt(0.5)) <= 1e-15);
    CHECK(std::abs(two.coeffs(1, 1) - std::sqrt(0.5)) <= 1e-15);
}

TEST_CASE("anti-correlated state pairs") {
    const auto spec = default_spec();
    const auto s = anticorrelated_state(spec, 0, 9);
    for (int j = 0; j < 5; ++j) {
        CHECK(s.coeffs(j, 9 - j) != cplx(0.0));
        CHECK(s.coeffs(j, 9 - j) == s.coeffs(9 - j, j));
    }
    CHECK((s.coeffs.array() != cplx(0.0)).count() == 10);
    const auto minimal = anticorrelated_state(spec, 0, 1);
    CHECK((minimal.coeffs.array() != cplx(0.0)).count() == 2);
    CHECK(minimal.coeffs(0, 1) != cplx(0.0));
    const auto four = anticorrelated_state(spec, 0, 3);
    CHECK(four.coeffs(0, 3) != cplx(0.0));
    CHECK(four.coeffs(1, 2) != cplx(0.0));
    CHECK((four.coeffs.array() != cplx(0.0)).count() == 4);
    CHECK_THROWS_AS(anticorrelated_state(spec, 0, 8), ConfigError);
}

TEST_CASE("fermionic state") {
    const auto spec = default_spec();
    const auto s = fermionic_state(spec, 0, 9);
    CHECK(s.coeffs(0, 9) == -s.coeffs(9, 0));
    CHECK(s.statistics == Statistics::fermionic);
    const auto t = fermionic_state(spec, 2, 5);
    CHECK((t.coeffs.array() != cplx(0.0)).count() == 2);
    CHECK(t.coeffs(2, 5) != cplx(0.0));
    CHECK(t.coeffs(5, 2) != cplx(0.0));
    CHECK_NOTHROW(fermionic_state(spec, 0, 1));
    CHECK_THROWS_AS(fermionic_state(spec, 4, 4), ConfigError);
}

TEST_CASE("windows must stay out of the guard band") {
    const auto spec = default_spec();
    CHECK_THROWS_AS(correlated_state(spec, 40, 48), ConfigError);
    CHECK_THROWS_AS(anticorrelated_state(spec, 40, 49), ConfigError);
    CHECK_THROWS_AS(fermionic_state(spec, 2, 50), ConfigError);
    CHECK_THROWS_AS(correlated_state(spec, 5, 2), ConfigError);
    CHECK_NOTHROW(correlated_state(spec, 38, 47));
}

TEST_CASE("maps without propagation") {
    const auto spec = default_spec();
    const auto c = correlation_map(identity(spec), correlated_state(spec, 0, 9));
    for (int p = 0; p < 64; ++p) {
        for (int q = 0; q < 64; ++q) {
            const double expect = (p == q && p <= 9) ? 0.1 : 0.0;
            CHECK(c.gamma(p, q) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
    CHECK(bunching_index(c) == doctest::Approx(1.0));

    const auto f = correlation_map(identity(spec), fermionic_state(spec, 0, 9));
    CHECK(f.gamma(0, 9) == doctest::Approx(0.5));
    CHECK(f.gamma(9, 0) == doctest::Approx(0.5));
    CHECK(f.gamma.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(bunching_index(f) == 0.0);
    CHECK(fermionic_exclusion_check(f) == 0.0);
}

TEST_CASE("maps match a brute-force bilinear sum") {
    LatticeSpec spec = default_spec();
    spec.n_sites = 24;
    spec.guard = 6;
    const auto t = closed_form_T(spec, 1.3);
    for (const auto& state : {correlated_state(spec, 0, 9), anticorrelated_state(spec, 2, 7), fermionic_state(spec, 1, 4)}) {
        const auto expect = brute_gamma(t.entries, state.coeffs);
        const auto raw = correlation_map(t, state, GammaScale::bilinear);
        CHECK((raw.gamma - expect).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK_FALSE(raw.normalized);
        const auto scaled = correlation_map(t, state, GammaScale::unnormalized_state);
        CHECK((scaled.gamma - state.prefactor_scale() * expect).cwiseAbs().maxCoeff() <= 1e-13);
        const auto norm = correlation_map(t, state);
        CHECK(norm.gamma.sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((norm.gamma - expect / expect.sum()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("correlated map is proportional to the single-sum coincidence formula") {
    const auto spec = default_spec();
    const auto t = closed_form_T(spec, 2.2);
    const auto g = correlation_map(t, correlated_state(spec, 0, 9), GammaScale::bilinear);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> site(0, 30);
    double ratio = 0.0;
    for (int i = 0; i < 40; ++i) {
        const int p = site(rng), q = site(rng);
        cplx amp = 0.0;
        for (int k = 0; k <= 9; ++k) amp += t.entries(k, p) * t.entries(k, q);
        const double r = g.gamma(p, q) / std::norm(amp);
        if (i == 0) ratio = r;
        CHECK(r == doctest::Approx(ratio).epsilon(1e-10));
    }
    CHECK(ratio == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("symmetry and exchange properties") {
    const auto spec = default_spec();
    const auto t = closed_form_T(spec, 2.7);
    for (auto state : {correlated_state(spec, 0, 9), anticorrelated_state(spec, 0, 9), fermionic_state(spec, 0, 9)}) {
        const auto g = correlation_map(t, state, GammaScale::bilinear);
        CHECK((g.gamma - g.gamma.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * g.gamma.maxCoeff());
        auto flipped = state;
        flipped.coeffs = state.statistics == Statistics::bosonic ? Eigen::MatrixXcd(state.coeffs.transpose())
                                                                 : Eigen::MatrixXcd(-state.coeffs);
        const auto g2 = correlation_map(t, flipped, GammaScale::bilinear);
        CHECK((g.gamma - g2.gamma).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("revival returns every map to its input form") {
    const auto spec = default_spec();
    const auto t0 = closed_form_T(spec, 0.0);
    const auto t4 = closed_form_T(spec, 4.0 * pi);
    for (auto state : {correlated_state(spec, 0, 9), anticorrelated_state(spec, 0, 9), fermionic_state(spec, 0, 9)}) {
        const auto g0 = correlation_map(t0, state);
        const auto g4 = correlation_map(t4, state);
        CHECK((g0.gamma - g4.gamma).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("fermionic diagonal vanishes under the oracle propagator") {
    LatticeSpec spec = default_spec();
    spec.n_sites = 40;
    spec.guard = 10;
    const auto t = integrate_propagator(spec, 2.345);
    const auto g = correlation_map(t, fermionic_state(spec, 2, 5));
    CHECK(fermionic_exclusion_check(g) <= 1e-12);
    CHECK_THROWS_AS(fermionic_exclusion_check(correlation_map(t, correlated_state(spec, 2, 5))), ContractError);
}

TEST_CASE("bunching index rejects unnormalized maps") {
    const auto spec = default_spec();
    const auto g = correlation_map(closed_form_T(spec, 1.0), correlated_state(spec, 0, 9), GammaScale::bilinear);
    CHECK_THROWS_AS(bunching_index(g), ContractError);
    auto fake = correlation_map(closed_form_T(spec, 1.0), correlated_state(spec, 0, 9));
    fake.gamma *= 2.0;
    CHECK_THROWS_AS(bunching_index(fake), ContractError);
}

TEST_CASE("mismatched state and propagator sizes are rejected") {
    const auto spec = default_spec();
    LatticeSpec other = spec;
    other.n_sites = 80;
    CHECK_THROWS_AS(correlation_map(closed_form_T(other, 1.0), correlated_state(spec, 0, 9)), ContractError);
}
