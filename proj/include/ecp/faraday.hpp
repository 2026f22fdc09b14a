#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecp/errors.hpp"
#include "ecp/gate.hpp"

namespace ecp {

/// Atom-cavity parameters, all angular frequencies in one unit. Only
/// differences and ratios enter the reflection coefficients, so working in
/// units of kappa (kappa = 1) is the normal choice.
template <typename Real>
struct BasicCavityParams {
    Real omega0 = 0;  // atomic transition
    Real omegaC = 0;  // cavity mode
    Real omegaP = 0;  // probe photon
    Real kappa = 1;   // cavity damping
    Real gamma = 0;   // atomic decay
    Real g = 0;       // atom-cavity coupling

    void validate() const {
        if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
        if (!(gamma >= 0)) throw std::invalid_argument("gamma must be non-negative");
        if (!(g >= 0)) throw std::invalid_argument("g must be non-negative");
    }
};

using CavityParams = BasicCavityParams<double>;

/// omega0 = omegaC, omegaP = omegaC - kappa/2, g = kappa/2, gamma = 0: the
/// working point that gives the phase pair (pi, pi/2).
template <typename Real = double>
BasicCavityParams<Real> ideal_parameters(Real kappa = 1) {
    return {0, 0, -kappa / 2, kappa, 0, kappa / 2};
}

// Which frequency the probe sits kappa/2 below when the cavity and atom are detuned.
enum class ProbeAnchor { cavity, atom };

/// Parameters with omegaC - omega0 = detuning (signed), coupling g and the
/// probe at (anchor frequency) - kappa/2.
template <typename Real = double>
BasicCavityParams<Real> detuned_parameters(Real detuning, ProbeAnchor anchor = ProbeAnchor::cavity,
                                           Real g = Real(0.5), Real kappa = 1, Real gamma = 0) {
    BasicCavityParams<Real> p;
    p.kappa = kappa;
    p.gamma = gamma;
    p.g = g;
    p.omegaC = 0;
    p.omega0 = -detuning;
    p.omegaP = (anchor == ProbeAnchor::cavity ? p.omegaC : p.omega0) - kappa / 2;
    return p;
}

template <typename Real>
std::complex<Real> reflection_empty(const BasicCavityParams<Real>& p) {
    p.validate();
    const std::complex<Real> i(0, 1);
    const Real dc = p.omegaC - p.omegaP;
    return (i * dc - p.kappa / 2) / (i * dc + p.kappa / 2);
}

/// Reflection coefficient of the coupled atom-cavity system,
///
///   ([i(wc-wp) - k/2][i(w0-wp) + y/2] + g^2) / ([i(wc-wp) + k/2][i(w0-wp) + y/2] + g^2).
///
/// With g = 0 this reduces to the empty-cavity coefficient and takes the same
/// arithmetic path. For gamma = 0 numerator and denominator are complex
/// conjugates, so the result is a pure phase.
template <typename Real>
std::complex<Real> reflection_coupled(const BasicCavityParams<Real>& p) {
    p.validate();
    if (p.g == Real(0)) return reflection_empty(p);
    const std::complex<Real> i(0, 1);
    const std::complex<Real> atomic = i * (p.omega0 - p.omegaP) + p.gamma / 2;
    const std::complex<Real> cavity = i * (p.omegaC - p.omegaP);
    const Real g2 = p.g * p.g;
    const std::complex<Real> num = (cavity - p.kappa / 2) * atomic + g2;
    const std::complex<Real> den = (cavity + p.kappa / 2) * atomic + g2;
    if (std::abs(den) < Real(1e-15)) {
        std::ostringstream os;
        os << "singular reflection coefficient: omega0=" << p.omega0 << " omegaC=" << p.omegaC
           << " omegaP=" << p.omegaP << " kappa=" << p.kappa << " gamma=" << p.gamma << " g=" << p.g;
        throw SingularParameters(os.str());
    }
    return num / den;
}

template <typename Real>
Real principal_angle(Real a) {
    const Real pi = std::numbers::pi_v<Real>;
    a = std::remainder(a, 2 * pi);
    if (a <= -pi) a += 2 * pi;
    return a;
}

template <typename Real>
struct BasicPhasePair {
    Real phi = 0;   // coupled cavity, in (-pi, pi]
    Real phi0 = 0;  // empty cavity, in (-pi, pi]
    Real modCoupled = 1;
    Real modEmpty = 1;

    static BasicPhasePair ideal() { return {std::numbers::pi_v<Real>, std::numbers::pi_v<Real> / 2, 1, 1}; }
    static BasicPhasePair from_phases(Real phi, Real phi0) {
        return {principal_angle(phi), principal_angle(phi0), 1, 1};
    }

    // Same angles mapped into [0, 2pi), for display.
    Real phi_alias() const { return phi < 0 ? phi + 2 * std::numbers::pi_v<Real> : phi; }
    Real phi0_alias() const { return phi0 < 0 ? phi0 + 2 * std::numbers::pi_v<Real> : phi0; }

    Real min_modulus() const { return std::min(modCoupled, modEmpty); }
};

using PhasePair = BasicPhasePair<double>;

template <typename Real>
BasicPhasePair<Real> phase_pair(const BasicCavityParams<Real>& p) {
    const auto rc = reflection_coupled(p);
    const auto re = reflection_empty(p);
    auto arg = [](std::complex<Real> z) {
        Real a = std::atan2(z.imag(), z.real());
        // atan2(-0, x<0) is -pi; keep the principal value in (-pi, pi].
        if (a <= -std::numbers::pi_v<Real>) a += 2 * std::numbers::pi_v<Real>;
        return a;
    };
    return {arg(rc), arg(re), std::abs(rc), std::abs(re)};
}

enum class LeakageMode { renormalize, reject };

template <typename Real>
struct BasicFaradayGateSpec {
    BasicPhasePair<Real> phases = BasicPhasePair<Real>::ideal();
    // Keep the reflection moduli in the operator.
    bool lossy = false;
    LeakageMode leakage = LeakageMode::renormalize;
    // Required to build a lossy operator whose moduli fall below 1 - 1e-6.
    bool acknowledge_nonunitary = false;
};

using FaradayGateSpec = BasicFaradayGateSpec<double>;

// Moduli below this trigger a warning in renormalize mode.
inline constexpr double leakage_warning_threshold = 0.99;

template <typename Real>
std::optional<std::string> leakage_warning(const BasicPhasePair<Real>& phases) {
    if (phases.min_modulus() >= Real(leakage_warning_threshold)) return std::nullopt;
    std::ostringstream os;
    os << "reflection modulus " << phases.min_modulus()
       << " < 0.99; amplitude damping is dropped and only the phases are kept";
    return os.str();
}

/// Conditional photon-atom scattering operator on (photon, atom):
///   |L,gL> -> r|L,gL>,  |L,gR> -> r0|L,gR>,  |R,gL> -> r0|R,gL>,  |R,gR> -> r|R,gR>
/// with r = e^{i phi}, r0 = e^{i phi0}. Ideal phases give diag(-1, i, i, -1).
template <typename Real>
BasicGate<Real> faraday_gate(const BasicFaradayGateSpec<Real>& spec) {
    const auto& ph = spec.phases;
    const bool keep_moduli = spec.lossy && spec.leakage == LeakageMode::reject;
    const Real mc = keep_moduli ? ph.modCoupled : Real(1);
    const Real me = keep_moduli ? ph.modEmpty : Real(1);
    if (keep_moduli && ph.min_modulus() < Real(1) - Real(1e-6) && !spec.acknowledge_nonunitary) {
        std::ostringstream os;
        os << "reflection modulus " << ph.min_modulus()
           << " makes the scattering operator non-unitary; acknowledge it explicitly to proceed";
        throw NonUnitaryGate(os.str());
    }
    const std::complex<Real> rc = std::polar(mc, ph.phi);
    const std::complex<Real> re = std::polar(me, ph.phi0);
    auto gate = diagonal_gate<Real>("Faraday", {rc, re, re, rc}, false);
    gate.lossy = keep_moduli && !is_unitary(gate.matrix, Real(1e-12));
    return gate;
}

template <typename Real>
Real coupling_from_position(Real g0, Real x, Real lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("wavelength must be positive");
    return g0 * std::cos(2 * std::numbers::pi_v<Real> * x / lambda);
}

// Smallest non-negative offset from an antinode at which |g| = target.
template <typename Real>
Real position_for_coupling(Real g0, Real target, Real lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("wavelength must be positive");
    if (!(g0 > 0) || target < 0 || target > g0) throw std::invalid_argument("target coupling outside [0, g0]");
    return lambda * std::acos(target / g0) / (2 * std::numbers::pi_v<Real>);
}

template <typename Real>
Real cavity_q_factor(Real omegaC, Real kappa) {
    if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
    return omegaC / (2 * kappa);
}

inline constexpr double speed_of_light = 299792458.0;  // m/s

inline double angular_frequency_from_wavelength(double lambda_m) {
    if (!(lambda_m > 0)) throw std::invalid_argument("wavelength must be positive");
    return 2 * std::numbers::pi * speed_of_light / lambda_m;
}

/// Phase pair for one labelled detuning convention.
struct DetunedPhases {
    std::string convention;  // "wc-w0=+d" or "wc-w0=-d"
    double detuning;         // signed omegaC - omega0
    CavityParams params;
    PhasePair phases;
};

/// Both signs of a cavity-atom detuning of magnitude |d|, since only the
/// magnitude is usually quoted.
inline std::array<DetunedPhases, 2> detuning_conventions(double magnitude, ProbeAnchor anchor,
                                                         double g = 0.5, double kappa = 1) {
    const double d = std::abs(magnitude);
    std::array<DetunedPhases, 2> out;
    for (int s = 0; s < 2; ++s) {
        const double signed_d = s == 0 ? d : -d;
        auto p = detuned_parameters<double>(signed_d, anchor, g, kappa);
        out[static_cast<std::size_t>(s)] = {s == 0 ? "wc-w0=+d" : "wc-w0=-d", signed_d, p, phase_pair(p)};
    }
    return out;
}

}  // namespace ecp
