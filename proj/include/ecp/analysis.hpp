#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ecp/faraday.hpp"
#include "ecp/protocols.hpp"

namespace ecp {

/// 1/2 [1 - cos 2(phi - phi0)].
double mismatch_fidelity_analytic(double phi, double phi0);

struct MismatchFidelity {
    PhasePair phases;
    // Minimum over success outcomes of the fidelity with the ideal-phase
    // residual for the same outcome.
    double success_fidelity = 0;
    // Probability-weighted fidelity of failure residuals with their
    // ideal-phase counterparts.
    double failure_fidelity = 0;
    // Success probability relative to the ideal-phase run.
    double success_yield = 0;
};

MismatchFidelity mismatch_fidelity_simulated(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                                             const RunOptions& options = {});
MismatchFidelity mismatch_fidelity_simulated(const CavityParams& params, const PairSpec& pair1,
                                             const PairSpec& pair2);

/// Second pair deviates from the first as a2 = a1 (1 + k).
struct DeviationSpec {
    double a1 = 0.7;
    double k = 0;

    void validate() const;
    double a2() const { return a1 * (1.0 + k); }
};

double deviation_fidelity_analytic(const DeviationSpec& spec);

/// Runs the atomic protocol with ideal phases and returns the success-branch
/// fidelity with the canonical Bell target (after the Z feed-forward).
double deviation_fidelity_simulated(const DeviationSpec& spec, Protocol protocol = Protocol::atomic);

struct MonteCarloResult {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    // Outcome label -> count, in branch enumeration order.
    std::vector<std::pair<std::string, std::size_t>> histogram;
    std::vector<double> exact_probabilities;  // parallel to histogram
    std::size_t successes = 0;
    double success_rate = 0;
    double standard_error = 0;  // binomial, from the empirical rate
    double exact_success_probability = 0;
};

MonteCarloResult monte_carlo_protocol(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                                      std::size_t trials, std::uint64_t seed, const RunOptions& options = {});

enum class SweepAxis { a1, detuning, coupling, k };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
    SweepAxis axis = SweepAxis::a1;
    double from = 0.05;
    double to = 0.95;
    int points = 50;

    Protocol protocol = Protocol::atomic;
    int n = 1;
    RunOptions options;

    // Fixed pairs for the detuning and coupling axes, and a1 for the k axis.
    PairSpec pair1;
    PairSpec pair2;
    double a1 = 0.7;

    // Detuning/coupling axes.
    ProbeAnchor anchor = ProbeAnchor::cavity;
    bool both_conventions = true;
    double coupling = 0.5;   // g / kappa, detuning axis
    double detuning = 0.0;   // (wc - w0) / kappa, coupling axis
};

struct SweepPoint {
    double axis_value = 0;
    std::string convention;
    PhasePair phases;
    double modCoupled = 1;
    double p_analytic = 0;
    double p_simulated = 0;
    double f_analytic = 0;
    double f_simulated = 0;
    double abs_diff_p = 0;
    double abs_diff_f = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::a1;
    std::vector<SweepPoint> points;
    std::map<std::string, std::string> metadata;
};

/// Evenly spaced points from `from` to `to` inclusive.
std::vector<double> linspace(double from, double to, int points);

/// Per point: closed-form and simulated success probability and fidelity.
///   a1:        P vs 2a^2(1-a^2); F is the success-branch target fidelity (1).
///   k:         P vs a1^2 b2^2 + b1^2 a2^2; F vs the deviation formula.
///   detuning,
///   coupling:  P vs the ideal-phase formula; F vs 1/2[1 - cos 2(phi - phi0)]
///              with the failure-branch fidelity as the simulated column.
SweepResult sweep(const SweepSpec& spec);

}  // namespace ecp
