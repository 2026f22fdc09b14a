#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecp/analysis.hpp"
#include "ecp/config.hpp"

namespace ecp::cli {

// One row of the phase table.
struct PhaseRow {
    std::string anchor;
    std::string convention;
    double detuning = 0;  // signed omegaC - omega0, units of kappa
    double g = 0.5;
    PhasePair phases;
    double f_analytic = 0;
    // Literature values for this working point, when there are any.
    std::optional<double> reported_phi;
    std::optional<double> reported_phi0;
    std::optional<double> reported_f;
};

std::string format_number(double x);  // %.17g

std::string run_json(const ExperimentConfig& config, const ProtocolResult& result,
                     const std::optional<MonteCarloResult>& mc);
std::string run_csv(const ProtocolResult& result);
std::string run_table(const ProtocolResult& result, const std::optional<MonteCarloResult>& mc);

std::string sweep_json(const SweepResult& result);
std::string sweep_csv(const SweepResult& result);
std::string sweep_table(const SweepResult& result);

std::string phases_json(const std::vector<PhaseRow>& rows);
std::string phases_csv(const std::vector<PhaseRow>& rows);
std::string phases_table(const std::vector<PhaseRow>& rows);

}  // namespace ecp::cli
