#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ecp {

enum class Role { atom, photon };

// Basis encoding: atom |g_L> -> 0, |g_R> -> 1; photon |L> -> 0, |R> -> 1.
struct QubitLabel {
    Role role = Role::atom;
    std::string name;

    friend bool operator==(const QubitLabel&, const QubitLabel&) = default;
};

inline QubitLabel atom(std::string name) { return {Role::atom, std::move(name)}; }
inline QubitLabel photon(std::string name) { return {Role::photon, std::move(name)}; }

// "gL"/"gR" for atoms, "L"/"R" for photons.
inline std::string basis_symbol(Role role, int bit) {
    if (role == Role::atom) return bit == 0 ? "gL" : "gR";
    return bit == 0 ? "L" : "R";
}

template <typename Real>
using AmplitudeVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense pure state over an ordered register of labelled qubits.
///
/// Basis indexing is big-endian in the label order: labels()[0] is the most
/// significant bit. For the register [photon1, atom1] the amplitude array is
///   [ |L,gL>, |L,gR>, |R,gL>, |R,gR> ].
template <typename Real>
class BasicStateVector {
public:
    using Scalar = std::complex<Real>;
    using Vector = AmplitudeVector<Real>;

    BasicStateVector() : amplitudes_(Vector::Ones(1)) {}

    BasicStateVector(std::vector<QubitLabel> labels, Vector amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
        check_unique(labels_);
        if (labels_.size() > max_qubits)
            throw std::invalid_argument("register too large: " + std::to_string(labels_.size()) +
                                        " qubits");
        if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << labels_.size()))
            throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                        " does not match 2^" + std::to_string(labels_.size()));
    }

    static constexpr std::size_t max_qubits = 24;

    const std::vector<QubitLabel>& labels() const noexcept { return labels_; }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Vector& amplitudes() noexcept { return amplitudes_; }

    std::size_t num_qubits() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    Scalar operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    Real norm() const { return amplitudes_.norm(); }

    bool contains(const std::string& name) const {
        return std::any_of(labels_.begin(), labels_.end(),
                           [&](const QubitLabel& l) { return l.name == name; });
    }

    std::size_t position(const std::string& name) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i].name == name) return i;
        throw std::invalid_argument("unknown qubit label '" + name + "'");
    }

    // Bit shift of the qubit at register position pos.
    std::size_t shift(std::size_t pos) const noexcept { return labels_.size() - 1 - pos; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(labels_.size());
        for (const auto& l : labels_) out.push_back(l.name);
        return out;
    }

    // Scales to unit norm and returns the factor that was applied.
    Real normalize() {
        const Real n = norm();
        if (n == Real(0)) throw std::invalid_argument("cannot normalize the zero vector");
        amplitudes_ /= n;
        return Real(1) / n;
    }

private:
    static void check_unique(const std::vector<QubitLabel>& labels) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i].name == labels[j].name)
                    throw std::invalid_argument("duplicate qubit label '" + labels[i].name + "'");
    }

    std::vector<QubitLabel> labels_;
    Vector amplitudes_;
};

using StateVector = BasicStateVector<double>;

template <typename Real>
BasicStateVector<Real> make_state(std::vector<QubitLabel> labels, std::uint64_t basis_index) {
    const std::size_t n = labels.size();
    if (n >= 64 || basis_index >= (std::uint64_t{1} << n))
        throw std::out_of_range("basis index " + std::to_string(basis_index) + " out of range for " +
                                std::to_string(n) + " qubits");
    AmplitudeVector<Real> amps = AmplitudeVector<Real>::Zero(Eigen::Index{1} << n);
    amps[static_cast<Eigen::Index>(basis_index)] = 1;
    return BasicStateVector<Real>(std::move(labels), std::move(amps));
}

inline StateVector make_state(std::vector<QubitLabel> labels, std::uint64_t basis_index) {
    return make_state<double>(std::move(labels), basis_index);
}

template <typename Real>
struct Superposition {
    BasicStateVector<Real> state;
    // Factor applied to the given coefficients to reach unit norm.
    Real scale;
};

template <typename Real>
struct Term {
    std::complex<Real> coefficient;
    std::uint64_t basis_index;
};

/// Normalized sum of basis states. Repeated indices accumulate.
template <typename Real>
Superposition<Real> superpose(const std::vector<Term<Real>>& terms, std::vector<QubitLabel> labels) {
    const std::size_t n = labels.size();
    AmplitudeVector<Real> amps = AmplitudeVector<Real>::Zero(Eigen::Index{1} << n);
    for (const auto& t : terms) {
        if (t.basis_index >= (std::uint64_t{1} << n))
            throw std::out_of_range("basis index " + std::to_string(t.basis_index) + " out of range");
        amps[static_cast<Eigen::Index>(t.basis_index)] += t.coefficient;
    }
    if (amps.norm() == Real(0)) throw std::invalid_argument("superposition coefficients are all zero");
    BasicStateVector<Real> state(std::move(labels), std::move(amps));
    const Real scale = state.normalize();
    return {std::move(state), scale};
}

inline Superposition<double> superpose(const std::vector<Term<double>>& terms,
                                       std::vector<QubitLabel> labels) {
    return superpose<double>(terms, std::move(labels));
}

/// Kronecker product; the result's register is lhs labels followed by rhs labels.
template <typename Real>
BasicStateVector<Real> tensor(const BasicStateVector<Real>& lhs, const BasicStateVector<Real>& rhs) {
    std::vector<QubitLabel> labels = lhs.labels();
    for (const auto& l : rhs.labels()) {
        if (lhs.contains(l.name)) throw std::invalid_argument("duplicate qubit label '" + l.name + "'");
        labels.push_back(l);
    }
    const Eigen::Index dl = lhs.amplitudes().size();
    const Eigen::Index dr = rhs.amplitudes().size();
    AmplitudeVector<Real> amps(dl * dr);
    for (Eigen::Index i = 0; i < dl; ++i)
        amps.segment(i * dr, dr) = lhs.amplitudes()[i] * rhs.amplitudes();
    return BasicStateVector<Real>(std::move(labels), std::move(amps));
}

template <typename Real, typename... Rest>
BasicStateVector<Real> tensor(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b,
                              const Rest&... rest) {
    if constexpr (sizeof...(rest) == 0)
        return tensor(a, b);
    else
        return tensor(tensor(a, b), rest...);
}

/// Reorders the register so that labels appear in `order` (a permutation of names()).
template <typename Real>
BasicStateVector<Real> permute(const BasicStateVector<Real>& state, const std::vector<std::string>& order) {
    const std::size_t n = state.num_qubits();
    if (order.size() != n) throw std::invalid_argument("permutation size mismatch");
    std::vector<std::size_t> src(n);
    std::vector<QubitLabel> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        src[i] = state.position(order[i]);
        labels.push_back(state.labels()[src[i]]);
    }
    AmplitudeVector<Real> amps(state.amplitudes().size());
    for (std::size_t idx = 0; idx < state.dimension(); ++idx) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit = (idx >> state.shift(src[i])) & 1U;
            out |= bit << (n - 1 - i);
        }
        amps[static_cast<Eigen::Index>(out)] = state.amplitudes()[static_cast<Eigen::Index>(idx)];
    }
    return BasicStateVector<Real>(std::move(labels), std::move(amps));
}

/// Renames qubits positionally; amplitudes are untouched.
template <typename Real>
BasicStateVector<Real> relabel(const BasicStateVector<Real>& state, std::vector<QubitLabel> labels) {
    return BasicStateVector<Real>(std::move(labels), state.amplitudes());
}

}  // namespace ecp
