#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecp/state_vector.hpp"

namespace ecp {

// Amplitudes with modulus below this are treated as exact zeros when
// enumerating measurement outcomes.
inline constexpr double amplitude_prune_threshold = 1e-14;

template <typename Real>
struct BasicBranch {
    // (label, bit) in the order the labels were measured.
    std::vector<std::pair<QubitLabel, int>> outcome;
    Real probability = 0;
    // Renormalized state of the unmeasured qubits.
    BasicStateVector<Real> residual;

    int bit(const std::string& name) const {
        for (const auto& [label, b] : outcome)
            if (label.name == name) return b;
        throw std::invalid_argument("label '" + name + "' was not measured");
    }

    // e.g. "photon=R,atom2=gL,atom3=gR"
    std::string label() const {
        std::string s;
        for (const auto& [l, b] : outcome) {
            if (!s.empty()) s += ',';
            s += l.name + '=' + basis_symbol(l.role, b);
        }
        return s;
    }
};

using Branch = BasicBranch<double>;

/// Projective Z-basis measurement of `measured`, returning one branch per
/// outcome of nonzero probability in increasing outcome order (big-endian in
/// `measured`). Probabilities are relative to the state's total weight, so a
/// sub-normalized input still yields a complete distribution.
template <typename Real>
std::vector<BasicBranch<Real>> enumerate_branches(const BasicStateVector<Real>& state,
                                                  const std::vector<std::string>& measured) {
    if (measured.empty()) throw std::invalid_argument("no qubits to measure");
    const std::size_t n = state.num_qubits();
    std::vector<std::size_t> mpos;
    std::vector<bool> is_measured(n, false);
    for (const auto& name : measured) {
        const std::size_t p = state.position(name);
        if (is_measured[p]) throw std::invalid_argument("label '" + name + "' measured twice");
        is_measured[p] = true;
        mpos.push_back(p);
    }
    std::vector<std::size_t> rpos;
    std::vector<QubitLabel> rlabels;
    for (std::size_t p = 0; p < n; ++p)
        if (!is_measured[p]) {
            rpos.push_back(p);
            rlabels.push_back(state.labels()[p]);
        }

    const Real total = state.amplitudes().squaredNorm();
    if (total == Real(0)) throw std::invalid_argument("cannot measure the zero vector");

    const std::size_t k = mpos.size();
    const std::size_t r = rpos.size();
    std::vector<BasicBranch<Real>> branches;
    for (std::size_t m = 0; m < (std::size_t{1} << k); ++m) {
        std::size_t base = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((m >> (k - 1 - i)) & 1U) base |= std::size_t{1} << state.shift(mpos[i]);

        AmplitudeVector<Real> amps(Eigen::Index{1} << r);
        for (std::size_t j = 0; j < (std::size_t{1} << r); ++j) {
            std::size_t idx = base;
            for (std::size_t i = 0; i < r; ++i)
                if ((j >> (r - 1 - i)) & 1U) idx |= std::size_t{1} << state.shift(rpos[i]);
            auto a = state.amplitudes()[static_cast<Eigen::Index>(idx)];
            if (std::abs(a) < Real(amplitude_prune_threshold)) a = 0;
            amps[static_cast<Eigen::Index>(j)] = a;
        }
        const Real weight = amps.squaredNorm();
        if (weight == Real(0)) continue;

        BasicBranch<Real> b;
        for (std::size_t i = 0; i < k; ++i)
            b.outcome.emplace_back(state.labels()[mpos[i]], static_cast<int>((m >> (k - 1 - i)) & 1U));
        b.probability = weight / total;
        amps /= std::sqrt(weight);
        b.residual = BasicStateVector<Real>(rlabels, std::move(amps));
        branches.push_back(std::move(b));
    }
    return branches;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations so sequences are portable.
inline double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Seeded sampler over the exact branch distribution. Uses std::mt19937_64
/// (the 64-bit Mersenne Twister); the same seed gives the same sequence.
template <typename Real>
class BasicBranchSampler {
public:
    BasicBranchSampler(const BasicStateVector<Real>& state, const std::vector<std::string>& measured,
                       std::uint64_t seed)
        : branches_(enumerate_branches(state, measured)), gen_(seed) {
        Real acc = 0;
        for (const auto& b : branches_) {
            acc += b.probability;
            cumulative_.push_back(acc);
        }
    }

    std::size_t next_index() {
        const double u = unit_uniform(gen_) * static_cast<double>(cumulative_.back());
        for (std::size_t i = 0; i < cumulative_.size(); ++i)
            if (u < static_cast<double>(cumulative_[i])) return i;
        return cumulative_.size() - 1;
    }

    const BasicBranch<Real>& next() { return branches_[next_index()]; }

    const std::vector<BasicBranch<Real>>& branches() const noexcept { return branches_; }

private:
    std::vector<BasicBranch<Real>> branches_;
    std::vector<Real> cumulative_;
    std::mt19937_64 gen_;
};

using BranchSampler = BasicBranchSampler<double>;

template <typename Real>
BasicBranch<Real> sample_branch(const BasicStateVector<Real>& state, const std::vector<std::string>& measured,
                                std::uint64_t seed) {
    BasicBranchSampler<Real> sampler(state, measured, seed);
    return sampler.next();
}

}  // namespace ecp
