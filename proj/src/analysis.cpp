#include "ecp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ecp/entanglement.hpp"
#include "ecp/measurement.hpp"

namespace ecp {

double mismatch_fidelity_analytic(double phi, double phi0) {
    return 0.5 * (1.0 - std::cos(2.0 * (phi - phi0)));
}

MismatchFidelity mismatch_fidelity_simulated(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                                             const RunOptions& options) {
    const auto actual = run_protocol(protocol, spec, phases, options);
    const auto ideal = run_protocol(protocol, spec, PhasePair::ideal(), options);

    MismatchFidelity out;
    out.phases = phases;
    out.success_fidelity = 1.0;
    double failure_weight = 0;
    double failure_sum = 0;
    for (const auto& b : actual.branches) {
        const auto& label = b.branch.label();
        const BranchReport* reference = nullptr;
        for (const auto& ib : ideal.branches)
            if (ib.branch.label() == label) reference = &ib;
        const double f = reference ? fidelity(b.branch.residual, reference->branch.residual) : 0.0;
        if (ideal.success_outcomes.contains(label)) {
            out.success_fidelity = std::min(out.success_fidelity, f);
        } else {
            failure_sum += b.branch.probability * f;
            failure_weight += b.branch.probability;
        }
    }
    out.failure_fidelity = failure_weight > 0 ? failure_sum / failure_weight : 0.0;
    out.success_yield = ideal.success_probability > 0 ? actual.success_probability / ideal.success_probability : 0.0;
    return out;
}

MismatchFidelity mismatch_fidelity_simulated(const CavityParams& params, const PairSpec& pair1,
                                             const PairSpec& pair2) {
    return mismatch_fidelity_simulated(Protocol::atomic, {1, pair1, pair2}, phase_pair(params));
}

void DeviationSpec::validate() const {
    if (!(a1 > 0.0 && a1 < 1.0)) throw std::invalid_argument("deviation: a1 must lie in (0, 1)");
    const double a = a2();
    if (!(a > 0.0 && a < 1.0)) {
        std::ostringstream os;
        os << "deviation: a1(1+k) = " << a << " must lie in (0, 1)";
        throw std::invalid_argument(os.str());
    }
}

double deviation_fidelity_analytic(const DeviationSpec& spec) {
    spec.validate();
    const double q = 1.0 + spec.k;
    const double a2 = spec.a1 * spec.a1;
    const double s1 = std::sqrt(1.0 - a2 * q * q);
    const double s0 = std::sqrt(1.0 - a2);
    const double num = s1 + q * s0;
    // 1 + q^2 - 2 a^2 q^2 written as s1^2 + q^2 s0^2 so that k = 0 gives exactly 1
    return num * num / (2.0 * (s1 * s1 + q * q * (s0 * s0)));
}

double deviation_fidelity_simulated(const DeviationSpec& spec, Protocol protocol) {
    spec.validate();
    const auto r = run_protocol(protocol, {1, PairSpec::from_a(spec.a1), PairSpec::from_a(spec.a2())},
                                PhasePair::ideal());
    double weight = 0;
    double sum = 0;
    for (const auto& b : r.branches)
        if (b.success) {
            sum += b.branch.probability * b.target_fidelity;
            weight += b.branch.probability;
        }
    if (weight == 0) throw std::runtime_error("deviation: no success branches");
    return sum / weight;
}

MonteCarloResult monte_carlo_protocol(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                                      std::size_t trials, std::uint64_t seed, const RunOptions& options) {
    if (trials == 0) throw std::invalid_argument("monte carlo: trials must be at least 1");
    const auto exact = run_protocol(protocol, spec, phases, options);
    const auto circuit = build_circuit(protocol, {spec.n, exact.pair1, exact.pair2}, options);
    BranchSampler sampler(evolve(circuit, phases, options), circuit.measured, seed);

    MonteCarloResult out;
    out.trials = trials;
    out.seed = seed;
    out.exact_success_probability = exact.success_probability;
    std::vector<std::size_t> counts(sampler.branches().size(), 0);
    for (std::size_t t = 0; t < trials; ++t) ++counts[sampler.next_index()];
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& b = sampler.branches()[i];
        out.histogram.emplace_back(b.label(), counts[i]);
        out.exact_probabilities.push_back(b.probability);
        if (exact.success_outcomes.contains(b.label())) out.successes += counts[i];
    }
    out.success_rate = static_cast<double>(out.successes) / static_cast<double>(trials);
    out.standard_error = std::sqrt(out.success_rate * (1.0 - out.success_rate) / static_cast<double>(trials));
    return out;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::a1: return "a1";
        case SweepAxis::detuning: return "detuning";
        case SweepAxis::coupling: return "coupling";
        case SweepAxis::k: return "k";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "a1") return SweepAxis::a1;
    if (s == "detuning") return SweepAxis::detuning;
    if (s == "coupling") return SweepAxis::coupling;
    if (s == "k") return SweepAxis::k;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

std::vector<double> linspace(double from, double to, int points) {
    if (points < 1) throw std::invalid_argument("sweep range is empty");
    if (!std::isfinite(from) || !std::isfinite(to)) throw std::invalid_argument("sweep bounds must be finite");
    if (points == 1) return {from};
    std::vector<double> v(static_cast<std::size_t>(points));
    const double step = (to - from) / (points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = from + step * i;
    v.back() = to;
    return v;
}

namespace {

double mean_success_fidelity(const ProtocolResult& r) {
    double w = 0;
    double s = 0;
    for (const auto& b : r.branches)
        if (b.success) {
            w += b.branch.probability;
            s += b.branch.probability * b.target_fidelity;
        }
    return w > 0 ? s / w : 0.0;
}

SweepPoint phase_point(const SweepSpec& spec, double axis_value, std::string convention, const CavityParams& params) {
    SweepPoint pt;
    pt.axis_value = axis_value;
    pt.convention = std::move(convention);
    pt.phases = phase_pair(params);
    pt.modCoupled = pt.phases.modCoupled;
    const GhzSpec g{spec.n, spec.pair1, spec.pair2};
    const auto r = run_protocol(spec.protocol, g, pt.phases, spec.options);
    pt.p_analytic = success_probability_analytic(spec.pair1, spec.pair2);
    pt.p_simulated = r.success_probability;
    pt.f_analytic = mismatch_fidelity_analytic(pt.phases.phi, pt.phases.phi0);
    pt.f_simulated = mismatch_fidelity_simulated(spec.protocol, g, pt.phases, spec.options).failure_fidelity;
    return pt;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) {
    SweepResult out;
    out.axis = spec.axis;
    out.metadata["axis"] = to_string(spec.axis);
    out.metadata["protocol"] = to_string(spec.protocol);
    out.metadata["n"] = std::to_string(spec.n);
    const auto values = linspace(spec.from, spec.to, spec.points);

    const auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };

    switch (spec.axis) {
        case SweepAxis::a1:
            out.metadata["phases"] = "ideal";
            for (double a : values) {
                SweepPoint pt;
                pt.axis_value = a;
                pt.convention = "ideal";
                pt.phases = PhasePair::ideal();
                const auto pair = PairSpec::from_a(a);
                const auto r = run_protocol(spec.protocol, {spec.n, pair, pair}, pt.phases, spec.options);
                pt.p_analytic = success_probability_analytic(a);
                pt.p_simulated = r.success_probability;
                pt.f_analytic = 1.0;
                pt.f_simulated = mean_success_fidelity(r);
                out.points.push_back(pt);
            }
            break;
        case SweepAxis::k:
            out.metadata["a1"] = fmt(spec.a1);
            out.metadata["phases"] = "ideal";
            for (double k : values) {
                const DeviationSpec dev{spec.a1, k};
                dev.validate();
                SweepPoint pt;
                pt.axis_value = k;
                pt.convention = "ideal";
                pt.phases = PhasePair::ideal();
                const auto p1 = PairSpec::from_a(dev.a1);
                const auto p2 = PairSpec::from_a(dev.a2());
                const auto r = run_protocol(spec.protocol, {spec.n, p1, p2}, pt.phases, spec.options);
                pt.p_analytic = success_probability_analytic(p1, p2);
                pt.p_simulated = r.success_probability;
                pt.f_analytic = deviation_fidelity_analytic(dev);
                pt.f_simulated = mean_success_fidelity(r);
                out.points.push_back(pt);
            }
            break;
        case SweepAxis::detuning:
            out.metadata["anchor"] = spec.anchor == ProbeAnchor::cavity ? "cavity" : "atom";
            out.metadata["coupling"] = fmt(spec.coupling);
            for (double d : values) {
                if (spec.both_conventions) {
                    for (const auto& c : detuning_conventions(d, spec.anchor, spec.coupling))
                        out.points.push_back(phase_point(spec, d, c.convention, c.params));
                } else {
                    out.points.push_back(
                        phase_point(spec, d, "wc-w0=d", detuned_parameters<double>(d, spec.anchor, spec.coupling)));
                }
            }
            break;
        case SweepAxis::coupling:
            out.metadata["anchor"] = spec.anchor == ProbeAnchor::cavity ? "cavity" : "atom";
            out.metadata["detuning"] = fmt(spec.detuning);
            for (double g : values)
                out.points.push_back(
                    phase_point(spec, g, "g", detuned_parameters<double>(spec.detuning, spec.anchor, g)));
            break;
    }
    for (auto& pt : out.points) {
        pt.abs_diff_p = std::abs(pt.p_analytic - pt.p_simulated);
        pt.abs_diff_f = std::abs(pt.f_analytic - pt.f_simulated);
    }
    return out;
}

}  // namespace ecp
