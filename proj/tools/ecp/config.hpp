#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecp/analysis.hpp"
#include "ecp/faraday.hpp"
#include "ecp/protocols.hpp"

namespace ecp::cli {

/// Where a raw value came from, for error messages.
struct Source {
    std::string file;  // empty for command-line flags
    int line = 0;

    std::string describe() const;
};

struct RawValue {
    std::string text;
    Source source;
};

/// Flat key -> value settings, file entries first and flags layered on top.
using RawConfig = std::map<std::string, RawValue>;

struct Violation {
    std::string field;
    std::string message;
    Source source;

    std::string describe() const;
};

/// Reads `key = value` lines; `#` starts a comment. Syntax problems are
/// appended to `violations` with their line number.
RawConfig read_config_file(const std::string& path, std::vector<Violation>& violations);
RawConfig parse_config_text(const std::string& text, const std::string& name, std::vector<Violation>& violations);

/// Layers `overrides` on top of `base`.
RawConfig merge(RawConfig base, const RawConfig& overrides);

enum class Format { table, json, csv };
enum class PhaseSource { ideal, explicit_phases, cavity };

struct ExperimentConfig {
    Protocol protocol = Protocol::atomic;
    int n = 1;
    PairSpec pair1;
    PairSpec pair2;

    PhaseSource phase_source = PhaseSource::ideal;
    PhasePair phases = PhasePair::ideal();
    CavityParams cavity = ideal_parameters();
    RunOptions options;

    SweepSpec sweep;

    std::size_t trials = 0;
    std::uint64_t seed = 1;

    Format format = Format::table;
    std::string output;  // empty: standard output
};

enum class Command { run, sweep, validate };

struct ParseResult {
    ExperimentConfig config;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
};

/// Converts and checks every field. Never runs a simulation.
ParseResult interpret(const RawConfig& raw, Command command);

std::vector<std::string> known_keys();

}  // namespace ecp::cli
