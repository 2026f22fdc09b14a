#pragma once

#include <stdexcept>
#include <string>

namespace ecp {

// Reflection coefficient denominator vanished for the requested parameters.
class SingularParameters : public std::runtime_error {
public:
    explicit SingularParameters(const std::string& what) : std::runtime_error(what) {}
};

// A lossy scattering operator was requested without acknowledging that it is
// not unitary.
class NonUnitaryGate : public std::domain_error {
public:
    explicit NonUnitaryGate(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ecp
