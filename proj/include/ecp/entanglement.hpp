#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ecp/state_vector.hpp"

namespace ecp {

/// Concurrence of a pure two-qubit state a|00>+b|01>+c|10>+d|11>: 2|ad-bc|.
template <typename Real>
Real concurrence(const BasicStateVector<Real>& s) {
    if (s.num_qubits() != 2)
        throw std::invalid_argument("concurrence needs a 2-qubit state, got " + std::to_string(s.num_qubits()));
    const auto& v = s.amplitudes();
    const Real c = Real(2) * std::abs(v[0] * v[3] - v[1] * v[2]);
    return std::min(c, Real(1));
}

/// |<target|state>|^2. Registers must hold the same labels; the target is
/// reordered to match if needed.
template <typename Real>
Real fidelity(const BasicStateVector<Real>& state, const BasicStateVector<Real>& target) {
    if (state.num_qubits() != target.num_qubits())
        throw std::invalid_argument("fidelity: registers differ in size");
    for (const auto& l : state.labels())
        if (!target.contains(l.name)) throw std::invalid_argument("fidelity: label '" + l.name + "' missing from target");
    const auto aligned = state.names() == target.names() ? target : permute(target, state.names());
    const Real f = std::norm(aligned.amplitudes().dot(state.amplitudes()));
    return std::min(f, Real(1));
}

/// Largest fidelity with any GHZ-class target (|x> + e^{it}|~x>)/sqrt2, where
/// ~x is the bitwise complement of x. Equals (1 + C)/2 for two qubits.
template <typename Real>
Real ghz_fidelity(const BasicStateVector<Real>& s) {
    const std::size_t dim = s.dimension();
    const std::size_t mask = dim - 1;
    Real best = 0;
    for (std::size_t x = 0; x < dim / 2 + (dim == 1 ? 1 : 0); ++x) {
        const Real sum = std::abs(s[x]) + std::abs(s[x ^ mask]);
        best = std::max(best, sum * sum / Real(2));
    }
    return std::min(best, Real(1));
}

/// (|x> + |~x>)/sqrt2 on the given register.
template <typename Real>
BasicStateVector<Real> ghz_state(std::vector<QubitLabel> labels, std::size_t x) {
    const std::size_t dim = std::size_t{1} << labels.size();
    if (x >= dim) throw std::out_of_range("ghz_state pattern out of range");
    AmplitudeVector<Real> amps = AmplitudeVector<Real>::Zero(static_cast<Eigen::Index>(dim));
    const Real s = Real(1) / std::sqrt(Real(2));
    amps[static_cast<Eigen::Index>(x)] += s;
    amps[static_cast<Eigen::Index>(x ^ (dim - 1))] += s;
    return BasicStateVector<Real>(std::move(labels), std::move(amps));
}

}  // namespace ecp
