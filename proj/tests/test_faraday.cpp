#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ecp/entanglement.hpp"
#include "ecp/faraday.hpp"
#include "random_helpers.hpp"

using namespace ecp;
using Catch::Approx;

constexpr double pi = std::numbers::pi;

TEST_CASE("matched working point gives phases (pi, pi/2)", "[faraday-model]") {
    const auto p = ideal_parameters();
    const auto rc = reflection_coupled(p);
    CHECK(std::abs(rc - std::complex<double>(-1, 0)) < 1e-12);
    const auto re = reflection_empty(p);
    CHECK(std::abs(re - std::complex<double>(0, 1)) < 1e-12);

    const auto ph = phase_pair(p);
    CHECK(std::abs(ph.phi - pi) < 1e-12);
    CHECK(std::abs(ph.phi0 - pi / 2) < 1e-12);
    CHECK(std::abs(ph.modCoupled - 1.0) < 1e-12);
    CHECK(std::abs(ph.modEmpty - 1.0) < 1e-12);
}

TEST_CASE("empty-cavity reflection", "[faraday-model]") {
    CavityParams p;
    p.omegaP = p.omegaC;
    CHECK(std::abs(reflection_empty(p) - std::complex<double>(-1, 0)) < 1e-15);
    p.omegaP = p.omegaC - 1e9;
    CHECK(std::abs(reflection_empty(p) - std::complex<double>(1, 0)) < 1e-8);
}

TEST_CASE("g = 0 reduces to the empty cavity exactly", "[faraday-model]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 200; ++t) {
        CavityParams p{u(rng), u(rng), u(rng), 1.0, std::abs(u(rng)), 0.0};
        CHECK(reflection_coupled(p) == reflection_empty(p));
    }
}

TEST_CASE("lossless reflection is a pure phase", "[faraday-model]") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 1000; ++t) {
        CavityParams p{u(rng), u(rng), u(rng), 0.1 + std::abs(u(rng)), 0.0, std::abs(u(rng))};
        const auto ph = phase_pair(p);
        REQUIRE(std::abs(ph.modCoupled - 1.0) < 1e-12);
        REQUIRE(std::abs(ph.modEmpty - 1.0) < 1e-12);
        REQUIRE(ph.phi > -pi);
        REQUIRE(ph.phi <= pi);
    }
}

TEST_CASE("detuned and mismatched phases (regression anchors)", "[faraday-model]") {
    // Values from an independent numpy evaluation of the reflection formula.
    const auto cav_pos = phase_pair(detuned_parameters(0.1, ProbeAnchor::cavity));
    CHECK(cav_pos.phi == Approx(-2.651635327336065).margin(1e-12));
    CHECK(cav_pos.phi0 == Approx(pi / 2).margin(1e-12));
    const auto cav_neg = phase_pair(detuned_parameters(-0.1, ProbeAnchor::cavity));
    CHECK(cav_neg.phi == Approx(2.8112952987605397).margin(1e-12));
    const auto atom_pos = phase_pair(detuned_parameters(0.1, ProbeAnchor::atom));
    CHECK(atom_pos.phi == Approx(2.746801533890032).margin(1e-12));
    CHECK(atom_pos.phi0 == Approx(1.3894765523934065).margin(1e-12));
    const auto atom_neg = phase_pair(detuned_parameters(-0.1, ProbeAnchor::atom));
    CHECK(atom_neg.phi == Approx(-2.746801533890032).margin(1e-12));
    CHECK(atom_neg.phi0 == Approx(1.7921107691426879).margin(1e-12));

    // g = 3 kappa / 5, otherwise matched; |phi| ~ 2.31
    const auto strong = phase_pair(detuned_parameters(0.0, ProbeAnchor::cavity, 0.6));
    CHECK(strong.phi == Approx(-2.3125789044202216).margin(1e-12));
    CHECK(strong.phi_alias() == Approx(2 * pi - 2.3125789044202216).margin(1e-12));

    const auto both = detuning_conventions(0.1, ProbeAnchor::atom);
    CHECK(both[0].convention == "wc-w0=+d");
    CHECK(both[0].detuning == 0.1);
    CHECK(both[1].detuning == -0.1);
}

TEST_CASE("phase varies continuously over a small detuning sweep", "[faraday-model]") {
    for (auto anchor : {ProbeAnchor::cavity, ProbeAnchor::atom}) {
        for (double sign : {1.0, -1.0}) {
            double prev = phase_pair(detuned_parameters(0.0, anchor)).phi;
            double unwrapped = prev;
            for (int i = 1; i < 100; ++i) {
                const double d = sign * 0.1 * i / 99.0;
                const double phi = phase_pair(detuned_parameters(d, anchor)).phi;
                const double step = std::remainder(phi - prev, 2 * pi);
                REQUIRE(std::abs(step) < 0.05);
                unwrapped += step;
                prev = phi;
            }
            CHECK(std::abs(unwrapped - pi) < 1.0);
        }
    }
}

TEST_CASE("atomic decay makes the coupled reflection lossy", "[faraday-model]") {
    auto p = ideal_parameters();
    p.gamma = 0.1;
    const auto ph = phase_pair(p);
    CHECK(ph.modCoupled == Approx(0.8198360491836058).margin(1e-12));
    CHECK(ph.phi == Approx(3.1215953196166426).margin(1e-12));
    CHECK(ph.modEmpty == Approx(1.0).margin(1e-12));
    CHECK(leakage_warning(ph).has_value());
    CHECK_FALSE(leakage_warning(PhasePair::ideal()).has_value());
}

TEST_CASE("parameter validation and singular sets", "[faraday-model]") {
    CavityParams bad;
    bad.kappa = 0;
    CHECK_THROWS_AS(reflection_empty(bad), std::invalid_argument);
    bad.kappa = 1;
    bad.g = -1;
    CHECK_THROWS_AS(reflection_coupled(bad), std::invalid_argument);
    bad.g = 0.5;
    bad.gamma = -0.1;
    CHECK_THROWS_AS(reflection_coupled(bad), std::invalid_argument);

    // Probe exactly on the atomic line with vanishing coupling: the
    // denominator collapses to g^2 = 1e-16.
    CavityParams sing{0.0, 0.3, 0.0, 1.0, 0.0, 1e-8};
    CHECK_THROWS_AS(reflection_coupled(sing), SingularParameters);
    CHECK_THROWS_AS(phase_pair(sing), SingularParameters);
}

TEST_CASE("Faraday gate is diag(-1, i, i, -1) at ideal phases", "[faraday-model]") {
    const auto gate = faraday_gate(FaradayGateSpec{});
    const std::complex<double> i(0, 1);
    REQUIRE(gate.arity() == 2);
    CHECK(std::abs(gate.matrix(0, 0) + 1.0) < 1e-15);
    CHECK(std::abs(gate.matrix(1, 1) - i) < 1e-15);
    CHECK(std::abs(gate.matrix(2, 2) - i) < 1e-15);
    CHECK(std::abs(gate.matrix(3, 3) + 1.0) < 1e-15);
    CHECK(gate.matrix.isDiagonal());
    CHECK_FALSE(gate.lossy);

    // |L>|g_L> -> -|L>|g_L>, |R>|g_L> -> i|R>|g_L>
    const auto l_gl = apply_gate(make_state({photon("p"), atom("a")}, 0), gate, {"p", "a"});
    CHECK(std::abs(l_gl[0] + 1.0) < 1e-15);
    const auto r_gl = apply_gate(make_state({photon("p"), atom("a")}, 2), gate, {"p", "a"});
    CHECK(std::abs(r_gl[2] - i) < 1e-15);
}

TEST_CASE("Faraday gate is unitary for unit-modulus phases", "[faraday-model]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int t = 0; t < 1000; ++t) {
        FaradayGateSpec spec;
        spec.phases = PhasePair::from_phases(u(rng), u(rng));
        REQUIRE(is_unitary(faraday_gate(spec).matrix, 1e-12));
    }
}

TEST_CASE("equal phases give a global phase that leaves entanglement unchanged", "[faraday-model]") {
    FaradayGateSpec spec;
    spec.phases = PhasePair::from_phases(0.7, 0.7);
    const auto gate = faraday_gate(spec);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        auto s = testutil::random_state(rng, 2);
        const double c = concurrence(s);
        apply_in_place(s, gate, {"q0", "q1"});
        CHECK(std::abs(concurrence(s) - c) < 1e-12);
    }
}

TEST_CASE("lossy operators need explicit acknowledgment in reject mode", "[faraday-model]") {
    auto p = ideal_parameters();
    p.gamma = 0.1;
    FaradayGateSpec spec;
    spec.phases = phase_pair(p);

    // renormalize (default): phases only, unitary
    CHECK(is_unitary(faraday_gate(spec).matrix, 1e-12));
    spec.lossy = true;
    CHECK(is_unitary(faraday_gate(spec).matrix, 1e-12));

    spec.leakage = LeakageMode::reject;
    CHECK_THROWS_AS(faraday_gate(spec), NonUnitaryGate);
    spec.acknowledge_nonunitary = true;
    const auto g = faraday_gate(spec);
    CHECK(g.lossy);
    CHECK(std::abs(g.matrix(0, 0)) == Approx(spec.phases.modCoupled));
}

TEST_CASE("coupling from atomic position", "[faraday-model]") {
    const double lambda = 780e-9;
    CHECK(coupling_from_position(1.0, 3 * lambda / 2, lambda) == Approx(-1.0));
    CHECK(coupling_from_position(1.0, 2 * lambda / 2, lambda) == Approx(1.0));
    CHECK(std::abs(coupling_from_position(1.0, lambda / 4, lambda)) < 1e-15);
    CHECK_THROWS_AS(coupling_from_position(1.0, 0.0, 0.0), std::invalid_argument);

    // 215 MHz at 179 nm from an antinode
    const double g = coupling_from_position(215.0, 179e-9, lambda);
    CHECK(g == Approx(27.633802970012855).margin(1e-9));
    CHECK(position_for_coupling(215.0, 26.5, 780.0) == Approx(179.6599081894967).margin(1e-9));
}

TEST_CASE("cavity Q factor", "[faraday-model]") {
    const double wc = angular_frequency_from_wavelength(780e-9);
    const double kappa = 2 * pi * 53e6;
    CHECK(cavity_q_factor(wc, kappa) == Approx(3.63e6).epsilon(0.01));
    CHECK(cavity_q_factor(wc, 2 * kappa) == Approx(cavity_q_factor(wc, kappa) / 2));
    // finesse 4510: kappa = 2 g0
    CHECK(cavity_q_factor(wc, 2 * (2 * pi * 215e6)) == Approx(4.47e5).epsilon(0.02));
    CHECK_THROWS_AS(cavity_q_factor(wc, 0.0), std::invalid_argument);
}
