#include <doctest.h>

#include <cmath>
#include <numbers>

#include "serrinlab/constants.hpp"

using namespace serrinlab;
namespace {
constexpr double kPi = std::numbers::pi;

GeometrySummary summary(double vol, double surf, double d, double ri,
                        double re, int dim) {
    GeometrySummary s;
    s.volume = vol;
    s.surface = surf;
    s.diameter = d;
    s.r_interior = ri;
    s.r_exterior = re;
    s.dim = dim;
    return s;
}
} // namespace

TEST_CASE("closed-form oscillation constants") {
    CHECK(osc_constant_a(2, 2.0) ==
          doctest::Approx(4.0 / std::pow(kPi, 0.25)).epsilon(1e-14));
    CHECK(osc_constant_a(2, 2.0) == doctest::Approx(3.00450217785977).epsilon(1e-12));
    CHECK(osc_constant_alpha(2, 2.0) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    // generic N, p sanity: positive, finite
    for (int N : {2, 3, 5})
        for (double p : {1.0, 2.0, 4.0}) {
            CHECK(osc_constant_a(N, p) > 0);
            CHECK(osc_constant_alpha(N, p) > 0);
        }
    CHECK_THROWS_AS(osc_constant_a(1, 2.0), InvalidDimension);
}

TEST_CASE("gradient bound constant") {
    CHECK(c_gradient_bound(2) == doctest::Approx(1.5));
    CHECK(c_gradient_bound(3) == doctest::Approx(1.5));
    CHECK(c_gradient_bound(4) == doctest::Approx(2.0));
    CHECK(c_gradient_bound(5) == doctest::Approx(2.5));
    CHECK_THROWS_AS(c_gradient_bound(1), InvalidDimension);
}

TEST_CASE("stability exponent tables") {
    CHECK(tau(2, StabilityProblem::Serrin) == doctest::Approx(1.0));
    CHECK(tau(3, StabilityProblem::Serrin, 0.1) == doctest::Approx(0.9));
    CHECK(tau(4, StabilityProblem::Serrin) == doctest::Approx(2.0 / 3.0));
    CHECK(tau(5, StabilityProblem::Serrin) == doctest::Approx(0.5));

    CHECK(tau(2, StabilityProblem::SBT) == doctest::Approx(1.0));
    CHECK(tau(3, StabilityProblem::SBT) == doctest::Approx(1.0));
    CHECK(tau(4, StabilityProblem::SBT, 0.1) == doctest::Approx(0.9));
    CHECK(tau(5, StabilityProblem::SBT) == doctest::Approx(2.0 / 3.0));
    CHECK(tau(5, StabilityProblem::HK) == doctest::Approx(2.0 / 3.0));
    CHECK(tau(5, StabilityProblem::OneOverH) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(tau(1, StabilityProblem::Serrin), InvalidDimension);
}

TEST_CASE("ledger on the unit ball") {
    const auto s = summary(kPi, 2 * kPi, 2.0, 1.0,
                           std::numeric_limits<double>::infinity(), 2);
    const ConstantLedger L = ledger(s, 2, 2.0, 1.0, 1.0);
    CHECK(L.R == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.H0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.b0_bound == doctest::Approx(2.0));
    CHECK(L.L0_bound == doctest::Approx(2.0));
    CHECK(L.delta_z_lower == doctest::Approx(0.5));  // r_i^2 / (2M)
    CHECK(L.M_bound == doctest::Approx(3.0));        // convex branch 1.5 * 2
    CHECK(L.M_bound_convex == doctest::Approx(3.0));
    CHECK(L.placeholder_k);
    CHECK(L.mean_convex_unverified_constant);
}

TEST_CASE("ledger monotonicity spot checks") {
    const double inf = std::numeric_limits<double>::infinity();
    // M bound increases in d, decreases in r_e
    const double m1 = ledger(summary(kPi, 2 * kPi, 2.0, 1.0, 5.0, 2), 2, 2, 1, 1).M_bound;
    const double m2 = ledger(summary(kPi, 2 * kPi, 3.0, 1.0, 5.0, 2), 2, 2, 1, 1).M_bound;
    const double m3 = ledger(summary(kPi, 2 * kPi, 2.0, 1.0, 9.0, 2), 2, 2, 1, 1).M_bound;
    CHECK(m2 > m1);
    CHECK(m3 < m1);
    // convex branch is the r_e -> inf limit, hence smaller
    const double mc = ledger(summary(kPi, 2 * kPi, 2.0, 1.0, inf, 2), 2, 2, 1, 1).M_bound;
    CHECK(mc < m1);

    // lemma oscillation constant increases with d and with M
    CHECK(lemma_oscillation_constant(2, 2.0, 3.0, 0.5, 1.0) >
          lemma_oscillation_constant(2, 2.0, 2.0, 0.5, 1.0));
    CHECK(lemma_oscillation_constant(2, 2.0, 2.0, 0.5, 2.0) >
          lemma_oscillation_constant(2, 2.0, 2.0, 0.5, 1.0));
    // and decreases in r_i
    CHECK(lemma_oscillation_constant(2, 2.0, 2.0, 0.8, 1.0) <
          lemma_oscillation_constant(2, 2.0, 2.0, 0.5, 1.0));
}

TEST_CASE("L0 bound vs b0 bound") {
    const auto s = summary(kPi, 2 * kPi, 2.0, 0.7,
                           std::numeric_limits<double>::infinity(), 2);
    // delta_z >= r_i: the L0 bound reduces to the b0 bound
    CHECK(ledger(s, 2, 2.0, 0.9, 1.0).L0_bound ==
          doctest::Approx(ledger(s, 2, 2.0, 0.9, 1.0).b0_bound));
    // delta_z < r_i: L0 bound is strictly larger
    CHECK(ledger(s, 2, 2.0, 0.3, 1.0).L0_bound >
          ledger(s, 2, 2.0, 0.3, 1.0).b0_bound);
}

TEST_CASE("ledger serializes every field") {
    const auto s = summary(kPi, 2 * kPi, 2.0, 1.0,
                           std::numeric_limits<double>::infinity(), 2);
    const nlohmann::json j = ledger(s, 2, 2.0, 1.0, 1.0).to_json();
    for (const char* key :
         {"R", "H0", "c_N", "M_bound", "a_Np", "alpha_Np", "b0_bound",
          "L0_bound", "placeholder_k", "mu_inv_hs", "mu_inv_pp0",
          "delta_z_lower", "trace_factor", "feldman_factor", "sbt_factor",
          "lemma_osc_constant", "tau_serrin", "tau_sbt"})
        CHECK(j.contains(key));
}
