#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ecp/entanglement.hpp"
#include "ecp/protocols.hpp"
#include "oracle.hpp"

using namespace ecp;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

const std::vector<Protocol> all_protocols = {Protocol::atomic, Protocol::photonic, Protocol::atomic_ghz,
                                             Protocol::photonic_ghz};

GhzSpec spec_of(double a1, double a2, int n = 1) { return {n, PairSpec::from_a(a1), PairSpec::from_a(a2)}; }

// Unnormalized residual amplitude of branch b at remote basis index x.
std::complex<double> weighted(const BranchReport& b, std::size_t x) {
    return std::sqrt(b.branch.probability) * b.branch.residual[x];
}

// Oracle amplitude on [q1, q2, q3, q4, ctrl] for remote bits (x, y), middle bits (j, k), controller c.
std::complex<double> oracle_amp(const Eigen::VectorXcd& v, int x, int j, int k, int y, int c) {
    return v[(x << 4) | (j << 3) | (k << 2) | (y << 1) | c];
}

// Branches carry an arbitrary per-branch phase relative to the oracle only
// through the residual normalization, which is real and positive, so the
// comparison is exact up to rounding.
void check_against_oracle(Protocol protocol, double a1, double a2, const PhasePair& ph) {
    const auto r = run_protocol(protocol, spec_of(a1, a2), ph);
    const auto ref = oracle::two_pair_protocol(a1, std::sqrt(1 - a1 * a1), a2, std::sqrt(1 - a2 * a2), ph.phi, ph.phi0);
    const bool atomic = protocol == Protocol::atomic;
    const std::string ctrl = atomic ? "photon" : "atom_a";
    const std::string c1 = atomic ? "atom2" : "photon2";
    const std::string c2 = atomic ? "atom3" : "photon3";

    double covered = 0;
    for (const auto& b : r.branches) {
        const int c = b.branch.bit(ctrl), j = b.branch.bit(c1), k = b.branch.bit(c2);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                REQUIRE(std::abs(weighted(b, static_cast<std::size_t>(2 * x + y)) - oracle_amp(ref, x, j, k, y, c)) < 1e-10);
        covered += b.branch.probability;
    }
    CHECK(covered == Approx(1.0).margin(1e-10));

    // and the raw pre-measurement state
    const auto circuit = build_circuit(protocol, spec_of(a1, a2));
    const auto state = evolve(circuit, ph);
    CHECK((state.amplitudes() - ref).cwiseAbs().maxCoeff() < 1e-10);
}

}  // namespace

TEST_CASE("atomic ECP with maximally entangled inputs", "[protocols]") {
    const auto r = atomic_ecp(PairSpec{}, PairSpec{}, PhasePair::ideal());
    CHECK(r.success_probability == Approx(0.5).margin(1e-12));
    REQUIRE(r.branches.size() == 8);
    for (const auto& b : r.branches) {
        REQUIRE(b.concurrence.has_value());
        CHECK(*b.concurrence == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("atomic ECP concentrates a1 = a2 = 0.6", "[protocols]") {
    const auto r = atomic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), PhasePair::ideal());
    CHECK(std::abs(r.success_probability - 0.4608) < 1e-10);
    CHECK(r.success_outcomes == std::set<std::string>{"photon=R,atom2=gL,atom3=gL", "photon=R,atom2=gL,atom3=gR",
                                                      "photon=R,atom2=gR,atom3=gL", "photon=R,atom2=gR,atom3=gR"});
    CHECK(r.remote == std::vector<std::string>{"atom1", "atom4"});
    for (const auto& b : r.branches) {
        if (!b.success) continue;
        CHECK(std::abs(*b.concurrence - 1.0) < 1e-10);
        CHECK(std::abs(b.target_fidelity - 1.0) < 1e-10);
    }
}

TEST_CASE("branch amplitude tables match the 32x32 Kronecker oracle", "[protocols]") {
    check_against_oracle(Protocol::atomic, 0.6, 0.6, PhasePair::ideal());
    check_against_oracle(Protocol::photonic, 0.6, 0.6, PhasePair::ideal());
    check_against_oracle(Protocol::atomic, 0.6, 0.8, PhasePair::ideal());
    check_against_oracle(Protocol::photonic, 0.3, 0.75, PhasePair::ideal());
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int t = 0; t < 10; ++t) {
        const auto ph = PhasePair::from_phases(u(rng), u(rng));
        check_against_oracle(Protocol::atomic, 0.6, 0.6, ph);
        check_against_oracle(Protocol::photonic, 0.45, 0.8, ph);
    }
}

TEST_CASE("sign table of the post-gate state", "[protocols]") {
    // Frozen from the Kronecker oracle (and an independent numpy run):
    // controller outcome c, middle outcomes (j, k); remote basis |xy>.
    //   c = 0: |01> -> -i (-1)^j a1 a2 / 2,  |10> -> -i (-1)^k b1 b2 / 2
    //   c = 1: |00> -> -(-1)^(j^k) a1 b2 / 2, |11> -> + b1 a2 / 2
    const double a1 = 0.6, b1 = 0.8, a2 = 0.8, b2 = 0.6;
    const std::complex<double> i(0, 1);
    for (auto protocol : {Protocol::atomic, Protocol::photonic}) {
        const auto r = run_protocol(protocol, spec_of(a1, a2), PhasePair::ideal());
        const bool atomic = protocol == Protocol::atomic;
        for (const auto& b : r.branches) {
            const int c = b.branch.bit(atomic ? "photon" : "atom_a");
            const int j = b.branch.bit(atomic ? "atom2" : "photon2");
            const int k = b.branch.bit(atomic ? "atom3" : "photon3");
            const double sj = j ? -1.0 : 1.0, sk = k ? -1.0 : 1.0;
            if (c == 0) {
                CHECK(std::abs(weighted(b, 1) - (-i * sj * a1 * a2 / 2.0)) < 1e-12);
                CHECK(std::abs(weighted(b, 2) - (-i * sk * b1 * b2 / 2.0)) < 1e-12);
                CHECK(std::abs(weighted(b, 0)) < 1e-12);
            } else {
                CHECK(std::abs(weighted(b, 0) - (-sj * sk * a1 * b2 / 2.0)) < 1e-12);
                CHECK(std::abs(weighted(b, 3) - (b1 * a2 / 2.0)) < 1e-12);
                CHECK(std::abs(weighted(b, 1)) < 1e-12);
            }
            // the Z correction is needed exactly when the relative sign is negative
            if (c == 1)
                CHECK(b.correction == (j == k ? Correction::pauli_z : Correction::identity));
        }
    }
}

TEST_CASE("photonic ECP", "[protocols]") {
    const auto r = photonic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), PhasePair::ideal());
    CHECK(std::abs(r.success_probability - 0.4608) < 1e-10);
    CHECK(r.measured == std::vector<std::string>{"photon2", "photon3", "atom_a"});
    for (const auto& b : r.branches) {
        CHECK(b.success == (b.branch.bit("atom_a") == 1));
        if (b.success) CHECK(std::abs(*b.concurrence - 1.0) < 1e-10);
    }

    SECTION("interaction order does not matter") {
        RunOptions reversed;
        reversed.order = GateOrder::reversed;
        const auto r2 = photonic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), PhasePair::ideal(), reversed);
        REQUIRE(r2.branches.size() == r.branches.size());
        CHECK(r2.success_outcomes == r.success_outcomes);
        for (std::size_t n = 0; n < r.branches.size(); ++n) {
            CHECK(r2.branches[n].branch.label() == r.branches[n].branch.label());
            CHECK(std::abs(r2.branches[n].branch.probability - r.branches[n].branch.probability) < 1e-15);
            CHECK((r2.branches[n].branch.residual.amplitudes() - r.branches[n].branch.residual.amplitudes())
                      .cwiseAbs()
                      .maxCoeff() < 1e-15);
        }
    }

    SECTION("mismatched pairs") {
        // 2 a1 b2 b1 a2 / (a1^2 b2^2 + b1^2 a2^2) with a1 = 0.6, a2 = 0.8
        const double expected = 2 * 0.36 * 0.64 / (0.36 * 0.36 + 0.64 * 0.64);
        const auto m = photonic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.8), PhasePair::ideal());
        CHECK(expected == Approx(0.8545994065281899).margin(1e-15));
        for (const auto& b : m.branches)
            if (b.success) CHECK(std::abs(*b.concurrence - expected) < 1e-10);
        CHECK(std::abs(m.success_probability - 0.5392) < 1e-10);
    }
}

TEST_CASE("GHZ variant with N = 1 is the two-pair protocol relabeled", "[protocols]") {
    const auto spec = spec_of(0.6, 0.75, 1);
    for (auto [ghz, base] : {std::pair{Protocol::atomic_ghz, Protocol::atomic}, std::pair{Protocol::photonic_ghz, Protocol::photonic}}) {
        const auto g = run_protocol(ghz, spec, PhasePair::ideal());
        const auto b = run_protocol(base, spec, PhasePair::ideal());
        REQUIRE(g.branches.size() == b.branches.size());
        for (std::size_t n = 0; n < g.branches.size(); ++n) {
            const auto& gb = g.branches[n];
            const auto& bb = b.branches[n];
            CHECK(gb.success == bb.success);
            CHECK(std::abs(gb.branch.probability - bb.branch.probability) < 1e-14);
            for (std::size_t k = 0; k < 3; ++k) CHECK(gb.branch.outcome[k].second == bb.branch.outcome[k].second);
            CHECK((gb.branch.residual.amplitudes() - bb.branch.residual.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
        }
        CHECK(g.success_probability == Approx(b.success_probability).margin(1e-14));
    }
}

TEST_CASE("GHZ concentration for N = 2 and N = 3", "[protocols]") {
    for (auto protocol : {Protocol::atomic_ghz, Protocol::photonic_ghz}) {
        const auto r2 = run_protocol(protocol, spec_of(0.6, 0.6, 2), PhasePair::ideal());
        CHECK(std::abs(r2.success_probability - 0.4608) < 1e-10);
        CHECK(r2.remote == std::vector<std::string>{"A1", "A2", "B1", "B2"});
        for (const auto& b : r2.branches)
            if (b.success) {
                CHECK(std::abs(b.target_fidelity - 1.0) < 1e-10);
                CHECK_FALSE(b.concurrence.has_value());
            }

        const auto r3 = run_protocol(protocol, spec_of(inv_sqrt2, inv_sqrt2, 3), PhasePair::ideal());
        CHECK(r3.branches.front().branch.residual.num_qubits() == 6);
        for (const auto& b : r3.branches)
            if (b.success) CHECK(std::abs(b.target_fidelity - 1.0) < 1e-10);
    }
    const auto mixed = photonic_ghz_ecp(spec_of(0.6, 0.8, 2), PhasePair::ideal());
    CHECK(std::abs(mixed.success_probability - 0.5392) < 1e-10);
}

TEST_CASE("full-register GHZ runs agree with the collective-qubit reduction", "[protocols]") {
    // Collapse each side's N qubits to one collective qubit and compare with
    // the two-qubit Kronecker oracle branch by branch.
    for (auto form : {GhzInputForm::pair_consistent, GhzInputForm::as_written}) {
        RunOptions opt;
        opt.form = form;
        for (int n : {2, 3}) {
            const double a1 = 0.55, a2 = 0.7;
            const double b1 = std::sqrt(1 - a1 * a1), b2 = std::sqrt(1 - a2 * a2);
            const auto r = run_protocol(Protocol::atomic_ghz, spec_of(a1, a2, n), PhasePair::ideal(), opt);
            // as written, the first pair's coefficients attach to the opposite collective states
            const auto ref = form == GhzInputForm::pair_consistent
                                 ? oracle::two_pair_protocol(a1, b1, a2, b2, pi, pi / 2)
                                 : oracle::two_pair_protocol(b1, a1, a2, b2, pi, pi / 2);
            const std::size_t ones = (std::size_t{1} << n) - 1;
            for (const auto& b : r.branches) {
                const int c = b.branch.bit("photon"), j = b.branch.bit("C1"), k = b.branch.bit("C2");
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        const std::size_t idx = ((x ? ones : 0) << n) | (y ? ones : 0);
                        REQUIRE(std::abs(weighted(b, idx) - oracle_amp(ref, x, j, k, y, c)) < 1e-10);
                    }
            }
        }
    }
}

TEST_CASE("input form as written moves the success port", "[protocols]") {
    RunOptions opt;
    opt.form = GhzInputForm::as_written;
    const auto r = atomic_ghz_ecp(spec_of(0.6, 0.6, 2), PhasePair::ideal(), opt);
    REQUIRE(r.success_outcomes.size() == 4);
    for (const auto& label : r.success_outcomes) CHECK(label.rfind("photon=L", 0) == 0);
    CHECK(std::abs(r.success_probability - 0.4608) < 1e-10);
    // target (|1100> + |0011>)/sqrt2
    CHECK(std::abs(std::abs(r.success_target[0b1100]) - inv_sqrt2) < 1e-15);
    for (const auto& b : r.branches)
        if (b.success) CHECK(std::abs(b.target_fidelity - 1.0) < 1e-10);
}

TEST_CASE("GHZ party count limits", "[protocols]") {
    CHECK_THROWS_AS(atomic_ghz_ecp(spec_of(0.6, 0.6, 0), PhasePair::ideal()), std::invalid_argument);
    CHECK_THROWS_AS(atomic_ghz_ecp(spec_of(0.6, 0.6, max_ghz_parties + 1), PhasePair::ideal()), std::invalid_argument);
    CHECK_NOTHROW(photonic_ghz_ecp(spec_of(0.6, 0.6, max_ghz_parties), PhasePair::ideal()));
}

TEST_CASE("analytic success probability", "[protocols]") {
    CHECK(success_probability_analytic(inv_sqrt2) == Approx(0.5).margin(1e-15));
    CHECK(success_probability_analytic(0.6) == Approx(0.4608).margin(1e-15));
    CHECK(success_probability_analytic(0.7) == Approx(0.4998).margin(1e-15));
    CHECK(atomic_ecp(PairSpec::from_a(0.7), PairSpec::from_a(0.7), PhasePair::ideal()).success_probability ==
          Approx(0.4998).margin(1e-10));
    CHECK_THROWS_AS(success_probability_analytic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(success_probability_analytic(1.0), std::invalid_argument);
    CHECK_THROWS_AS(success_probability_analytic(-0.3), std::invalid_argument);
}

TEST_CASE("pair validation", "[protocols]") {
    std::vector<std::string> warnings;
    const auto ok = validated({0.6, 0.8}, &warnings);
    CHECK(warnings.empty());
    CHECK(ok.a == 0.6);

    const auto fixed = validated({0.6, 0.8 + 1e-8}, &warnings);
    CHECK(warnings.size() == 1);
    CHECK(std::abs(fixed.a * fixed.a + fixed.b * fixed.b - 1.0) < 1e-15);

    CHECK_THROWS_AS(validated({0.6, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validated({-0.6, 0.8}), std::invalid_argument);
    CHECK_THROWS_AS(validated({0.0, 1.0}), std::invalid_argument);

    const auto r = atomic_ecp({0.6, 0.8 + 1e-8}, PairSpec::from_a(0.6), PhasePair::ideal());
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("success probability matches 2a^2(1-a^2) across protocols", "[protocols]") {
    for (int i = 0; i < 50; ++i) {
        const double a = 0.05 + 0.9 * i / 49.0;
        const double expected = 2 * a * a * (1 - a * a);
        for (auto protocol : all_protocols) {
            const int n = protocol == Protocol::atomic_ghz || protocol == Protocol::photonic_ghz ? 2 : 1;
            const auto r = run_protocol(protocol, spec_of(a, a, n), PhasePair::ideal());
            REQUIRE(std::abs(r.success_probability - expected) < 1e-10);
            for (const auto& b : r.branches)
                if (b.success) REQUIRE(std::abs(b.target_fidelity - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("structural properties of the branch tables", "[protocols]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coef(0.05, 0.95);
    for (int t = 0; t < 40; ++t) {
        const double a1 = coef(rng), a2 = coef(rng);
        const double b1 = std::sqrt(1 - a1 * a1), b2 = std::sqrt(1 - a2 * a2);
        for (auto protocol : {Protocol::atomic, Protocol::photonic}) {
            const auto r = run_protocol(protocol, spec_of(a1, a2), PhasePair::ideal());

            // a <-> b symmetry
            const auto swapped = run_protocol(protocol, {1, {b1, a1}, {b2, a2}}, PhasePair::ideal());
            REQUIRE(std::abs(swapped.success_probability - r.success_probability) < 1e-12);

            // failure residual a1a2|01> +- b1b2|10> and its concurrence
            const double fail_c = 2 * a1 * a2 * b1 * b2 / (a1 * a1 * a2 * a2 + b1 * b1 * b2 * b2);
            const double fail_w = a1 * a1 * a2 * a2 + b1 * b1 * b2 * b2;
            std::vector<double> success_p;
            for (const auto& b : r.branches) {
                if (b.success) {
                    success_p.push_back(b.branch.probability);
                    continue;
                }
                const auto& res = b.branch.residual;
                REQUIRE(std::abs(res[0]) < 1e-12);
                REQUIRE(std::abs(res[3]) < 1e-12);
                REQUIRE(std::abs(std::abs(res[1]) - a1 * a2 / std::sqrt(fail_w)) < 1e-10);
                REQUIRE(std::abs(*b.concurrence - fail_c) < 1e-10);
            }
            // four equiprobable success outcomes
            REQUIRE(success_p.size() == 4);
            for (double p : success_p) REQUIRE(std::abs(p - r.success_probability / 4) < 1e-12);
        }
        // N independence
        const auto base = atomic_ghz_ecp(spec_of(a1, a2, 1), PhasePair::ideal()).success_probability;
        for (int n : {2, 3}) {
            REQUIRE(std::abs(atomic_ghz_ecp(spec_of(a1, a2, n), PhasePair::ideal()).success_probability - base) < 1e-12);
            REQUIRE(std::abs(photonic_ghz_ecp(spec_of(a1, a2, n), PhasePair::ideal()).success_probability - base) < 1e-12);
        }
    }
}

TEST_CASE("success branches are maximally entangled for arbitrary phases", "[protocols]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int t = 0; t < 100; ++t) {
        const auto ph = PhasePair::from_phases(u(rng), u(rng));
        for (auto protocol : {Protocol::atomic, Protocol::photonic}) {
            const auto r = run_protocol(protocol, spec_of(0.6, 0.6), ph);
            for (const auto& b : r.branches)
                if (b.success) REQUIRE(std::abs(b.target_fidelity - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("lossy scattering with acknowledgment", "[protocols]") {
    auto p = ideal_parameters();
    p.gamma = 0.1;
    const auto ph = phase_pair(p);

    RunOptions strict;
    strict.lossy = true;
    strict.leakage = LeakageMode::reject;
    CHECK_THROWS_AS(atomic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), ph, strict), NonUnitaryGate);

    strict.acknowledge_nonunitary = true;
    const auto r = atomic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), ph, strict);
    CHECK(r.lost_probability > 0.0);
    double total = r.lost_probability;
    for (const auto& b : r.branches) {
        total += b.branch.probability;
        if (b.success) CHECK(std::abs(*b.concurrence - 1.0) < 1e-10);
    }
    CHECK(total == Approx(1.0).margin(1e-12));

    const auto soft = atomic_ecp(PairSpec::from_a(0.6), PairSpec::from_a(0.6), ph);
    CHECK(soft.lost_probability < 1e-14);
    CHECK_FALSE(soft.warnings.empty());
}
