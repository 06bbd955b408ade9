#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fracstep/caputo.hpp"
#include "oracles.hpp"

using fracstep::caputo_apply;
using fracstep::l1_weights;
using fracstep::MeshKind;
using fracstep::TimeMesh;
using fracstep::WeightForm;

namespace {

std::vector<double> sample(const TimeMesh& m, std::size_t upto, double (*f)(double)) {
    std::vector<double> u(upto + 1);
    for (std::size_t k = 0; k <= upto; ++k) u[k] = f(m.node(k));
    return u;
}

constexpr MeshKind kKinds[] = {MeshKind::PowerLaw, MeshKind::Uniform, MeshKind::LegacyNonUniform};

}  // namespace

TEST_CASE("weights on a unit-step uniform mesh") {
    const auto m = TimeMesh::uniform(4.0, 4);
    const auto w0 = l1_weights(m, 0.5, 0);
    REQUIRE(w0.size() == 1);
    CHECK(w0[0] == doctest::Approx(2.0).epsilon(1e-15));
    const auto w1 = l1_weights(m, 0.5, 1);
    CHECK(w1[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(w1[0] == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-14));
    CHECK(w1[0] == doctest::Approx(0.828427).epsilon(1e-6));
}

TEST_CASE("scale-dependent and direct weights agree on power-law meshes") {
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        for (double mesh_a : {a, 0.5}) {
            const auto m = TimeMesh::power_law(20.0, 400, mesh_a);
            const fracstep::L1Kernel scaled(m, a, WeightForm::ScaleDependent);
            const fracstep::L1Kernel direct(m, a, WeightForm::Direct);
            std::vector<double> ws(400), wd(400);
            double worst = 0.0;
            for (std::size_t n : {0u, 1u, 7u, 100u, 398u, 399u}) {
                scaled.weights(n, ws);
                direct.weights(n, wd);
                for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(ws[k] / wd[k] - 1.0));
            }
            CAPTURE(a);
            CAPTURE(mesh_a);
            CHECK(worst <= 1e-12);
        }
    }
    const auto u = TimeMesh::uniform(1.0, 4);
    CHECK_THROWS_AS(fracstep::L1Kernel(u, 0.5, WeightForm::ScaleDependent), std::invalid_argument);
}

TEST_CASE("weights match the closed-form integral average") {
    const auto m = TimeMesh::legacy_nonuniform(3.0, 9);
    const double a = 0.35;
    const auto t = m.nodes();
    const auto w = l1_weights(m, a, 6);
    for (std::size_t k = 0; k <= 6; ++k) {
        const double expected = (std::pow(t[7] - t[k], 1.0 - a) - std::pow(t[7] - t[k + 1], 1.0 - a)) /
                                ((1.0 - a) * (t[k + 1] - t[k]));
        CHECK(w[k] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("weights are ordered and bounded below") {
    for (auto kind : kKinds) {
        for (double a : {0.4, 0.5, 0.6, 0.8}) {
            for (std::size_t N : {1u, 2u, 17u, 64u, 128u}) {
                const auto m = TimeMesh::make(kind, 10.0, N, a);
                const fracstep::L1Kernel kernel(m, a);
                std::vector<double> w(N);
                bool ordered = true;
                bool floor = true;
                for (std::size_t n = 0; n < N; ++n) {
                    kernel.weights(n, w);
                    for (std::size_t k = 0; k < n; ++k) ordered = ordered && w[k] <= w[k + 1];
                    const double t_next = m.node(n + 1);
                    floor = floor && w[0] > 0.0 && w[0] > std::pow(t_next, -a) &&
                            std::pow(t_next, -a) >= std::pow(10.0, -a) * (1.0 - 1e-15);
                }
                CAPTURE(fracstep::to_string(kind));
                CAPTURE(a);
                CAPTURE(N);
                CHECK(ordered);
                CHECK(floor);
            }
        }
    }
}

TEST_CASE("first-step weight floor over the final step") {
    for (auto kind : kKinds) {
        const auto m = TimeMesh::make(kind, 10.0, 64, 0.6);
        const double G = std::tgamma(1.0 - 0.6);
        const double lhs = std::pow(10.0 - m.node(1), -0.6) / G;
        CHECK(lhs >= std::pow(10.0, -0.6) / G);
    }
}

TEST_CASE("constant history has zero derivative") {
    const auto m = TimeMesh::power_law(5.0, 20, 0.5);
    const std::vector<double> u(13, 3.25);
    CHECK(caputo_apply(u, l1_weights(m, 0.5, 11)) == 0.0);
}

TEST_CASE("linear functions are differentiated exactly") {
    for (auto kind : kKinds) {
        for (double a : {0.4, 0.5, 0.6, 0.8, 0.95}) {
            const auto m = TimeMesh::make(kind, 7.0, 60, a);
            const fracstep::L1Kernel kernel(m, a);
            std::vector<double> w(60), u(61);
            for (std::size_t k = 0; k <= 60; ++k) u[k] = 1.5 - 0.75 * m.node(k);
            double worst = 0.0;
            for (std::size_t n = 0; n < 60; ++n) {
                const auto cw = l1_weights(m, a, n);
                const double got = caputo_apply(std::span<const double>(u).first(n + 2), cw);
                const double exact = -0.75 * oracle::caputo_power(1.0, a, m.node(n + 1));
                worst = std::max(worst, std::abs(got / exact - 1.0));
            }
            CAPTURE(fracstep::to_string(kind));
            CAPTURE(a);
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("strongly graded meshes are exact for a pure ramp") {
    // With alpha = 0.2 the first node is ~1e-9, so an offset in u would be lost
    // to rounding of the data itself; u = t keeps every difference exact.
    const auto m = TimeMesh::power_law(7.0, 60, 0.2);
    std::vector<double> u(61);
    for (std::size_t k = 0; k <= 60; ++k) u[k] = m.node(k);
    for (std::size_t n = 0; n < 60; ++n) {
        const double got = caputo_apply(std::span<const double>(u).first(n + 2), l1_weights(m, 0.2, n));
        CHECK(got == doctest::Approx(oracle::caputo_power(1.0, 0.2, m.node(n + 1))).epsilon(1e-10));
    }
}

TEST_CASE("quadratic at t = 1 on a 64-step power-law mesh") {
    const auto m = TimeMesh::power_law(1.0, 64, 0.5);
    const auto u = sample(m, 64, [](double t) { return t * t; });
    const double got = caputo_apply(u, l1_weights(m, 0.5, 63));
    const double exact = oracle::caputo_power(2.0, 0.5, 1.0);
    CHECK(exact == doctest::Approx(1.50451).epsilon(1e-5));
    CHECK(std::abs(got - exact) <= fracstep::truncation_bound(m, 0.5, 64, 2.0));
}

TEST_CASE("truncation bound holds along the whole quadratic sweep") {
    for (double a : {0.4, 0.5, 0.6, 0.8}) {
        for (std::size_t N : {16u, 32u, 64u}) {
            const auto m = TimeMesh::power_law(1.0, N, a);
            const auto u = sample(m, N, [](double t) { return t * t; });
            bool ok = true;
            for (std::size_t n = 1; n <= N; ++n) {
                const double got = caputo_apply(std::span<const double>(u).first(n + 1), l1_weights(m, a, n - 1));
                const double exact = oracle::caputo_power(2.0, a, m.node(n));
                ok = ok && std::abs(got - exact) <= fracstep::truncation_bound(m, a, n, 2.0);
            }
            CAPTURE(a);
            CAPTURE(N);
            CHECK(ok);
        }
    }
}

TEST_CASE("truncation bound arithmetic") {
    const auto m = TimeMesh::uniform(1.0, 10);
    CHECK(fracstep::truncation_bound(m, 0.5, 3, 0.0) == 0.0);
    CHECK(fracstep::truncation_bound(m, 0.5, 3, 2.0) == doctest::Approx(0.0711512).epsilon(1e-6));
    const auto half = TimeMesh::uniform(1.0, 20);
    for (double a : {0.3, 0.5, 0.9}) {
        CHECK(fracstep::truncation_bound(m, a, 1, 1.0) / fracstep::truncation_bound(half, a, 1, 1.0) ==
              doctest::Approx(std::pow(2.0, 2.0 - a)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(fracstep::truncation_bound(m, 0.5, 3, -1.0), std::domain_error);
}

TEST_CASE("agreement with a quadrature oracle on short random histories") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    for (auto kind : kKinds) {
        for (double a : {0.3, 0.5, 0.75}) {
            for (std::size_t N = 1; N <= 8; ++N) {
                const auto m = TimeMesh::make(kind, 2.0, N, a);
                std::vector<double> u(N + 1);
                for (double& v : u) v = std::sin(3.0 * value(rng)) + value(rng) * 0.1;
                for (std::size_t n = 0; n < N; ++n) {
                    const double got = caputo_apply(std::span<const double>(u).first(n + 2), l1_weights(m, a, n));
                    const double ref = oracle::caputo_piecewise_linear(m, u, n, a);
                    CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
                }
            }
        }
    }
}

TEST_CASE("argument checks") {
    const auto m = TimeMesh::power_law(1.0, 8, 0.5);
    CHECK_THROWS_AS(l1_weights(m, 1.0, 0), std::domain_error);
    CHECK_THROWS_AS(l1_weights(m, 0.0, 0), std::domain_error);
    CHECK_THROWS_AS(l1_weights(m, 0.5, 8), std::out_of_range);
    const std::vector<double> u(4, 0.0);
    CHECK_THROWS_AS(caputo_apply(u, l1_weights(m, 0.5, 3)), std::invalid_argument);
}

TEST_CASE("pow_increment avoids cancellation") {
    CHECK(fracstep::pow_increment(0.0, 2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
    const double b = 1e12, d = 1.0, beta = 0.4;
    const double expected = beta * std::pow(b, beta - 1.0) * (1.0 - 0.5 * (1.0 - beta) * d / b);
    CHECK(fracstep::pow_increment(b, d, beta) == doctest::Approx(expected).epsilon(1e-12));
}
