#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracstep/mittag_leffler.hpp"
#include "fracstep/relax.hpp"
#include "oracles.hpp"

using fracstep::RelaxProblem;
using fracstep::RelaxScheme;
using fracstep::solve_relax;
using fracstep::TimeMesh;

namespace {

RelaxProblem table_one_problem() {
    RelaxProblem p;
    p.gamma = 0.5;
    p.A = 10.0;
    p.B = 1.0;
    p.T = 20.0;
    return p;
}

double final_relative_error(const RelaxProblem& p, RelaxScheme s, std::size_t N) {
    const auto sol = solve_relax(p, s, N);
    const double ex = fracstep::exact_relaxation(p.A, p.B, p.gamma, p.T);
    return std::abs(sol.u.back() - ex) / std::abs(ex);
}

constexpr RelaxScheme kAll[] = {RelaxScheme::SfdmImplicit, RelaxScheme::UniformImplicit,
                                RelaxScheme::LegacyImplicit, RelaxScheme::SfdmExplicitVolterra,
                                RelaxScheme::ClockExplicitVolterra};

}  // namespace

TEST_CASE("zero relaxation keeps the initial value") {
    RelaxProblem p;
    p.gamma = 0.6;
    p.A = 3.5;
    p.B = 0.0;
    p.T = 4.0;
    for (auto s : kAll) {
        const auto sol = solve_relax(p, s, 50);
        REQUIRE(sol.u.size() == 51);
        for (double v : sol.u) CHECK(v == doctest::Approx(3.5).epsilon(1e-14));
    }
}

TEST_CASE("reference final-node errors at 100 intervals") {
    const auto p = table_one_problem();
    CHECK(final_relative_error(p, RelaxScheme::SfdmImplicit, 100) == doctest::Approx(2.9577e-4).epsilon(0.25));
    CHECK(final_relative_error(p, RelaxScheme::UniformImplicit, 100) == doctest::Approx(0.0025).epsilon(0.25));
}

TEST_CASE("implicit power-law solution is positive and non-increasing") {
    for (double g : {0.4, 0.5, 0.8}) {
        for (double B : {1.0, 3.0, 5.0}) {
            for (std::size_t N : {25u, 100u, 400u}) {
                RelaxProblem p;
                p.gamma = g;
                p.A = 10.0;
                p.B = B;
                p.T = 20.0;
                const auto u = solve_relax(p, RelaxScheme::SfdmImplicit, N).u;
                bool ok = u[0] == 10.0;
                for (std::size_t k = 1; k < u.size(); ++k) ok = ok && u[k] > 0.0 && u[k] <= u[k - 1];
                CAPTURE(g);
                CAPTURE(B);
                CAPTURE(N);
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("observed convergence orders") {
    const auto p = table_one_problem();
    const std::vector<double> nodes{25, 50, 100, 200};
    std::vector<double> sfdm, uni;
    for (double N : nodes) {
        sfdm.push_back(final_relative_error(p, RelaxScheme::SfdmImplicit, static_cast<std::size_t>(N)));
        uni.push_back(final_relative_error(p, RelaxScheme::UniformImplicit, static_cast<std::size_t>(N)));
    }
    CHECK(oracle::fitted_order(nodes, sfdm) == doctest::Approx(2.0 - p.gamma).epsilon(0.1));
    CHECK(std::abs(oracle::fitted_order(nodes, sfdm) - 1.5) <= 0.15);
    CHECK(std::abs(oracle::fitted_order(nodes, uni) - 1.0) <= 0.15);
}

TEST_CASE("implicit and explicit power-law schemes converge together") {
    const auto p = table_one_problem();
    double prev = INFINITY;
    for (std::size_t N : {100u, 200u, 400u}) {
        const auto a = solve_relax(p, RelaxScheme::SfdmImplicit, N).u;
        const auto b = solve_relax(p, RelaxScheme::SfdmExplicitVolterra, N).u;
        double diff = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
        CAPTURE(N);
        CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("order one reduces to backward Euler") {
    RelaxProblem p;
    p.gamma = 1.0;
    p.A = 2.0;
    p.B = 1.7;
    p.T = 3.0;
    p.source = [](double t) { return std::cos(t); };
    for (auto s : {RelaxScheme::SfdmImplicit, RelaxScheme::UniformImplicit, RelaxScheme::LegacyImplicit}) {
        const auto sol = solve_relax(p, s, 80);
        const auto ref = oracle::backward_euler(sol.mesh.nodes(), p.A, p.B, [](double t) { return std::cos(t); });
        for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(sol.u[k] - ref[k]) <= 1e-12);
    }
}

TEST_CASE("first implicit step matches the closed-form start-up formula") {
    // (chi_0^0 / G + B) u_1 = chi_0^0 u_0 / G with tau_1^gamma = T^gamma / N.
    for (double g : {0.3, 0.5, 0.8}) {
        RelaxProblem p;
        p.gamma = g;
        p.A = 10.0;
        p.B = 2.0;
        p.T = 5.0;
        const std::size_t N = 40;
        const auto sol = solve_relax(p, RelaxScheme::SfdmImplicit, N);
        const double dt_g = std::pow(p.T, g) / static_cast<double>(N);
        const double expected = p.A / (1.0 + p.B * std::tgamma(2.0 - g) * dt_g);
        CHECK(sol.u[1] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("a linear solution is reproduced exactly by the implicit scheme") {
    // u = 1 + t solves D^g u + B u = t^(1-g)/Gamma(2-g) + B (1 + t).
    for (auto s : {RelaxScheme::SfdmImplicit, RelaxScheme::UniformImplicit, RelaxScheme::LegacyImplicit}) {
        RelaxProblem p;
        p.gamma = 0.45;
        p.A = 1.0;
        p.B = 0.8;
        p.T = 6.0;
        p.source = [&](double t) { return oracle::caputo_power(1.0, 0.45, t) + 0.8 * (1.0 + t); };
        const auto sol = solve_relax(p, s, 64);
        const auto t = sol.mesh.nodes();
        for (std::size_t k = 0; k < t.size(); ++k) CHECK(sol.u[k] == doctest::Approx(1.0 + t[k]).epsilon(1e-10));
    }
}

TEST_CASE("explicit Volterra behaviour at large relaxation coefficients") {
    RelaxProblem p;
    p.gamma = 0.5;
    p.A = 10.0;
    p.T = 10.0;
    for (double B : {3.0, 4.0, 5.0}) {
        p.B = B;
        const auto clock = solve_relax(p, RelaxScheme::ClockExplicitVolterra, 100).u;
        bool negative = false;
        for (double v : clock) negative = negative || v < 0.0;
        CAPTURE(B);
        CHECK(negative);
    }
    for (double B : {3.0, 4.0}) {
        p.B = B;
        const auto u = solve_relax(p, RelaxScheme::SfdmExplicitVolterra, 100).u;
        bool ok = true;
        for (std::size_t k = 1; k < u.size(); ++k) ok = ok && u[k] >= 0.0 && u[k] <= u[k - 1];
        CAPTURE(B);
        CHECK(ok);
    }
}

TEST_CASE("Volterra weight table matches on-the-fly rows") {
    auto p = table_one_problem();
    p.B = 2.0;
    const auto a = solve_relax(p, RelaxScheme::SfdmExplicitVolterra, 120, {false}).u;
    const auto b = solve_relax(p, RelaxScheme::SfdmExplicitVolterra, 120, {true}).u;
    CHECK(a == b);

    const auto mesh = TimeMesh::power_law(10.0, 30, 0.5);
    const fracstep::VolterraMatrix table(mesh, 0.5);
    std::vector<double> row(30);
    const double dt = mesh.power_law_step();
    for (std::size_t k : {0u, 5u, 29u}) {
        fracstep::volterra_weights(mesh, 0.5, k, row);
        for (std::size_t j = 0; j <= k; ++j) {
            CHECK(table.row(k)[j] == row[j]);
            const double bform = dt / 0.5 *
                                 (std::pow(fracstep::b_coeff(k + 1, j, 0.5), 0.5) -
                                  std::pow(fracstep::b_coeff(k + 1, j + 1, 0.5), 0.5));
            CHECK(row[j] == doctest::Approx(bform).epsilon(1e-12));
        }
    }
}

TEST_CASE("relaxation argument checks") {
    auto p = table_one_problem();
    CHECK_THROWS_AS(fracstep::solve_relax_implicit(p, TimeMesh::uniform(10.0, 10)), std::invalid_argument);
    CHECK_THROWS_AS(fracstep::solve_relax_explicit_volterra(p, TimeMesh::legacy_nonuniform(20.0, 10)),
                    std::invalid_argument);
    p.gamma = 1.5;
    CHECK_THROWS_AS(solve_relax(p, RelaxScheme::SfdmImplicit, 10), std::domain_error);
    CHECK_THROWS_AS(fracstep::parse_relax_scheme("rk4"), std::invalid_argument);
    for (auto s : kAll) CHECK(fracstep::parse_relax_scheme(fracstep::to_string(s)) == s);
}
