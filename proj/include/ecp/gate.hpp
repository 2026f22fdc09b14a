#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecp/state_vector.hpp"

namespace ecp {

/// One- or two-qubit operator. The first target is the most significant bit
/// of the gate's local index, matching the register convention.
template <typename Real>
struct BasicGate {
    std::string name;
    ComplexMatrix<Real> matrix;
    // Set for damped diagonal operators that are deliberately not unitary.
    bool lossy = false;

    std::size_t arity() const {
        return matrix.rows() == 2 ? 1 : matrix.rows() == 4 ? 2 : 0;
    }
};

using Gate = BasicGate<double>;

template <typename Real>
bool is_unitary(const ComplexMatrix<Real>& m, Real tol) {
    if (m.rows() != m.cols()) return false;
    const ComplexMatrix<Real> id = ComplexMatrix<Real>::Identity(m.rows(), m.cols());
    return ((m.adjoint() * m) - id).cwiseAbs().maxCoeff() <= tol;
}

// |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2 for both atoms and photons
// (the quarter-wave plate plays this role on polarization).
template <typename Real = double>
BasicGate<Real> hadamard() {
    const Real s = Real(1) / std::sqrt(Real(2));
    ComplexMatrix<Real> m(2, 2);
    m << s, s, s, -s;
    return {"H", std::move(m), false};
}

template <typename Real = double>
BasicGate<Real> pauli_z() {
    ComplexMatrix<Real> m(2, 2);
    m << 1, 0, 0, -1;
    return {"Z", std::move(m), false};
}

template <typename Real = double>
BasicGate<Real> single_qubit(std::string name, const ComplexMatrix<Real>& m) {
    if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("single-qubit gate must be 2x2");
    return {std::move(name), m, false};
}

template <typename Real = double>
BasicGate<Real> diagonal_gate(std::string name, const std::vector<std::complex<Real>>& diag, bool lossy) {
    if (diag.size() != 2 && diag.size() != 4) throw std::invalid_argument("diagonal gate needs 2 or 4 entries");
    ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(static_cast<Eigen::Index>(diag.size()),
                                                      static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    return {std::move(name), std::move(m), lossy};
}

/// Applies `gate` to the named qubits in place.
template <typename Real>
void apply_in_place(BasicStateVector<Real>& state, const BasicGate<Real>& gate,
                    const std::vector<std::string>& targets) {
    const std::size_t k = gate.arity();
    if (k == 0 || gate.matrix.rows() != gate.matrix.cols())
        throw std::invalid_argument("gate '" + gate.name + "' has unsupported shape");
    if (targets.size() != k)
        throw std::invalid_argument("gate '" + gate.name + "' expects " + std::to_string(k) +
                                    " target(s), got " + std::to_string(targets.size()));
    std::vector<std::size_t> shifts;
    for (const auto& t : targets) shifts.push_back(state.shift(state.position(t)));
    if (k == 2 && shifts[0] == shifts[1])
        throw std::invalid_argument("gate '" + gate.name + "' targets the same qubit twice");

    std::size_t target_mask = 0;
    for (auto s : shifts) target_mask |= std::size_t{1} << s;

    const std::size_t local_dim = std::size_t{1} << k;
    std::vector<std::size_t> offsets(local_dim, 0);
    for (std::size_t local = 0; local < local_dim; ++local)
        for (std::size_t t = 0; t < k; ++t)
            if ((local >> (k - 1 - t)) & 1U) offsets[local] |= std::size_t{1} << shifts[t];

    auto& amps = state.amplitudes();
    AmplitudeVector<Real> in(static_cast<Eigen::Index>(local_dim));
    for (std::size_t base = 0; base < state.dimension(); ++base) {
        if (base & target_mask) continue;
        for (std::size_t l = 0; l < local_dim; ++l)
            in[static_cast<Eigen::Index>(l)] = amps[static_cast<Eigen::Index>(base | offsets[l])];
        const AmplitudeVector<Real> out = gate.matrix * in;
        for (std::size_t l = 0; l < local_dim; ++l)
            amps[static_cast<Eigen::Index>(base | offsets[l])] = out[static_cast<Eigen::Index>(l)];
    }
}

template <typename Real>
BasicStateVector<Real> apply_gate(BasicStateVector<Real> state, const BasicGate<Real>& gate,
                                  const std::vector<std::string>& targets) {
    apply_in_place(state, gate, targets);
    return state;
}

}  // namespace ecp
