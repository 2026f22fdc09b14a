#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecp/faraday.hpp"
#include "ecp/measurement.hpp"
#include "ecp/state_vector.hpp"

namespace ecp {

/// Real coefficients of a partially entangled pair a|01> + b|10>.
struct PairSpec {
    double a = 1.0 / std::numbers::sqrt2;
    double b = 1.0 / std::numbers::sqrt2;

    static PairSpec from_a(double a);
};

/// Checks a, b > 0 and a^2 + b^2 = 1. Deviations below 1e-6 are renormalized
/// and reported through `warnings`; anything larger throws.
PairSpec validated(PairSpec pair, std::vector<std::string>* warnings = nullptr);

enum class Protocol { atomic, photonic, atomic_ghz, photonic_ghz };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

// Largest N per side for the GHZ variants (register of 2N + 3 qubits).
inline constexpr int max_ghz_parties = 6;

struct GhzSpec {
    int n = 1;
    PairSpec pair1;
    PairSpec pair2;
};

// Which of Charlie's two qubits interacts first.
enum class GateOrder { forward, reversed };

/// How the first GHZ-class pair is oriented relative to Charlie's qubit.
///   pair_consistent: a1|0..0>_A|1>_C1 + b1|1..1>_A|0>_C1, the same orientation
///                    as the two-qubit pairs, so N = 1 is the two-qubit protocol.
///   as_written:      a1|0>_C1|1..1>_A + b1|1>_C1|0..0>_A. The success port is
///                    then the controller's |0> outcome.
enum class GhzInputForm { pair_consistent, as_written };

struct RunOptions {
    GateOrder order = GateOrder::forward;
    GhzInputForm form = GhzInputForm::pair_consistent;
    bool lossy = false;
    LeakageMode leakage = LeakageMode::renormalize;
    bool acknowledge_nonunitary = false;
};

// Local feed-forward applied to the first remote qubit.
enum class Correction { identity, pauli_z };

struct BranchReport {
    Branch branch;  // probability is unconditional (includes photon loss, if any)
    bool success = false;
    std::optional<double> concurrence;  // two-qubit residuals only
    // Fidelity with the canonical target for this branch class after the
    // better of the two corrections.
    double target_fidelity = 0;
    Correction correction = Correction::identity;
};

struct ProtocolResult {
    Protocol protocol = Protocol::atomic;
    int n = 1;
    PairSpec pair1;
    PairSpec pair2;
    PhasePair phases;
    RunOptions options;

    std::vector<std::string> measured;
    std::vector<std::string> remote;
    std::vector<BranchReport> branches;
    std::set<std::string> success_outcomes;
    double success_probability = 0;
    double lost_probability = 0;
    StateVector success_target;
    StateVector failure_target;
    std::vector<std::string> warnings;

    const BranchReport& branch(const std::string& label) const;
};

/// Register layout and input state of one protocol instance.
struct EcpCircuit {
    Protocol protocol = Protocol::atomic;
    int n = 1;
    StateVector initial;
    std::string controller;                 // the scattering partner: photon or atom a
    std::vector<std::string> charlie;       // C1, C2 in forward interaction order
    std::vector<std::string> measured;
    std::vector<std::string> remote;
    std::size_t success_pattern = 0;        // remote bits of the a1*b2 term
    std::size_t failure_pattern = 0;        // remote bits of the a1*a2 term
    int success_controller_bit = 1;
};

EcpCircuit build_circuit(Protocol protocol, const GhzSpec& spec, const RunOptions& options = {});

/// Pre-measurement state: both scatterings, then Hadamards on C1, C2 and
/// the controller.
StateVector evolve(const EcpCircuit& circuit, const PhasePair& phases, const RunOptions& options = {});

ProtocolResult run_protocol(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                            const RunOptions& options = {});

ProtocolResult atomic_ecp(const PairSpec& pair1, const PairSpec& pair2, const PhasePair& phases,
                          const RunOptions& options = {});
ProtocolResult photonic_ecp(const PairSpec& pair1, const PairSpec& pair2, const PhasePair& phases,
                            const RunOptions& options = {});
ProtocolResult atomic_ghz_ecp(const GhzSpec& spec, const PhasePair& phases, const RunOptions& options = {});
ProtocolResult photonic_ghz_ecp(const GhzSpec& spec, const PhasePair& phases, const RunOptions& options = {});

/// 2 a1^2 (1 - a1^2), for identical pairs.
double success_probability_analytic(double a1);

/// a1^2 b2^2 + b1^2 a2^2, for arbitrary pairs.
double success_probability_analytic(const PairSpec& pair1, const PairSpec& pair2);

}  // namespace ecp
