#include "ecp/protocols.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ecp/entanglement.hpp"
#include "ecp/gate.hpp"

namespace ecp {

namespace {

// Pairs used to decide structurally which outcomes concentrate entanglement.
constexpr double probe_coefficient = 0.6;
constexpr double maximal_tolerance = 1e-9;

bool controller_is_photon(Protocol p) { return p == Protocol::atomic || p == Protocol::atomic_ghz; }
bool is_ghz(Protocol p) { return p == Protocol::atomic_ghz || p == Protocol::photonic_ghz; }

StateVector pair_state(std::vector<QubitLabel> labels, double a, double b, std::size_t a_pattern) {
    const std::size_t mask = (std::size_t{1} << labels.size()) - 1;
    return superpose({{a, a_pattern}, {b, a_pattern ^ mask}}, std::move(labels)).state;
}

StateVector plus_state(QubitLabel label) {
    return superpose({{1.0, 0}, {1.0, 1}}, {std::move(label)}).state;
}

double max_entanglement_measure(const StateVector& residual) {
    return residual.num_qubits() == 2 ? concurrence(residual) : ghz_fidelity(residual);
}

std::pair<double, Correction> corrected_fidelity(const StateVector& residual, const StateVector& target) {
    const double plain = fidelity(residual, target);
    const auto flipped = apply_gate(residual, pauli_z<double>(), {residual.labels().front().name});
    const double with_z = fidelity(flipped, target);
    if (with_z > plain) return {with_z, Correction::pauli_z};
    return {plain, Correction::identity};
}

FaradayGateSpec gate_spec(const PhasePair& phases, const RunOptions& options) {
    FaradayGateSpec spec;
    spec.phases = phases;
    spec.lossy = options.lossy;
    spec.leakage = options.leakage;
    spec.acknowledge_nonunitary = options.acknowledge_nonunitary;
    return spec;
}

std::set<std::string> classify(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                               const RunOptions& options) {
    GhzSpec probe = spec;
    probe.pair1 = PairSpec::from_a(probe_coefficient);
    probe.pair2 = PairSpec::from_a(probe_coefficient);
    const auto circuit = build_circuit(protocol, probe, options);
    const auto branches = enumerate_branches(evolve(circuit, phases, options), circuit.measured);

    std::set<std::string> found;
    std::set<std::string> expected;
    for (const auto& b : branches) {
        if (max_entanglement_measure(b.residual) >= 1.0 - maximal_tolerance) found.insert(b.label());
        if (b.bit(circuit.controller) == circuit.success_controller_bit) expected.insert(b.label());
    }
    if (found != expected) {
        std::ostringstream os;
        os << "structural success set for " << to_string(protocol) << " does not match the controller="
           << circuit.success_controller_bit << " port:";
        for (const auto& l : found) os << ' ' << l;
        throw std::logic_error(os.str());
    }
    return found;
}

}  // namespace

PairSpec PairSpec::from_a(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("pair coefficient a must lie in (0, 1)");
    return {a, std::sqrt(1.0 - a * a)};
}

PairSpec validated(PairSpec pair, std::vector<std::string>* warnings) {
    if (!std::isfinite(pair.a) || !std::isfinite(pair.b) || !(pair.a > 0) || !(pair.b > 0))
        throw std::invalid_argument("pair coefficients must be positive reals");
    const double s = pair.a * pair.a + pair.b * pair.b;
    const double dev = std::abs(s - 1.0);
    if (dev <= 1e-10) return pair;
    if (dev < 1e-6) {
        const double n = std::sqrt(s);
        if (warnings) {
            std::ostringstream os;
            os.precision(17);
            os << "pair (" << pair.a << ", " << pair.b << ") renormalized; a^2 + b^2 was " << s;
            warnings->push_back(os.str());
        }
        return {pair.a / n, pair.b / n};
    }
    std::ostringstream os;
    os << "pair coefficients violate normalization a^2 + b^2 = 1 (got " << s << ")";
    throw std::invalid_argument(os.str());
}

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::atomic: return "atomic";
        case Protocol::photonic: return "photonic";
        case Protocol::atomic_ghz: return "atomic-ghz";
        case Protocol::photonic_ghz: return "photonic-ghz";
    }
    return "unknown";
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "atomic") return Protocol::atomic;
    if (s == "photonic") return Protocol::photonic;
    if (s == "atomic-ghz") return Protocol::atomic_ghz;
    if (s == "photonic-ghz") return Protocol::photonic_ghz;
    throw std::invalid_argument("unknown protocol '" + s + "'");
}

const BranchReport& ProtocolResult::branch(const std::string& label) const {
    for (const auto& b : branches)
        if (b.branch.label() == label) return b;
    throw std::invalid_argument("no branch with outcome '" + label + "'");
}

EcpCircuit build_circuit(Protocol protocol, const GhzSpec& spec, const RunOptions& options) {
    const int n = is_ghz(protocol) ? spec.n : 1;
    if (n < 1) throw std::invalid_argument("GHZ party count N must be at least 1");
    if (n > max_ghz_parties)
        throw std::invalid_argument("GHZ party count N=" + std::to_string(n) + " exceeds the cap of " +
                                    std::to_string(max_ghz_parties));
    const bool photon_controller = controller_is_photon(protocol);
    const Role held = photon_controller ? Role::atom : Role::photon;
    const auto held_label = [&](std::string name) { return QubitLabel{held, std::move(name)}; };

    std::vector<QubitLabel> side_a;
    std::vector<QubitLabel> side_b;
    QubitLabel c1;
    QubitLabel c2;
    QubitLabel controller;
    if (!is_ghz(protocol)) {
        const std::string stem = photon_controller ? "atom" : "photon";
        side_a.push_back(held_label(stem + "1"));
        c1 = held_label(stem + "2");
        c2 = held_label(stem + "3");
        side_b.push_back(held_label(stem + "4"));
    } else {
        for (int i = 1; i <= n; ++i) side_a.push_back(held_label("A" + std::to_string(i)));
        c1 = held_label("C1");
        c2 = held_label("C2");
        for (int i = 1; i <= n; ++i) side_b.push_back(held_label("B" + std::to_string(i)));
    }
    controller = photon_controller ? photon("photon") : atom("atom_a");

    const GhzInputForm form = is_ghz(protocol) ? options.form : GhzInputForm::pair_consistent;
    const std::size_t all_n = (std::size_t{1} << n) - 1;  // N ones

    // Pair 1 over [A..., C1]; pair 2 over [C2, B...].
    std::vector<QubitLabel> l1 = side_a;
    l1.push_back(c1);
    std::vector<QubitLabel> l2{c2};
    l2.insert(l2.end(), side_b.begin(), side_b.end());
    const std::size_t a1_pattern = form == GhzInputForm::pair_consistent ? std::size_t{1} : all_n << 1;
    const std::size_t a2_pattern = all_n;

    const PairSpec p1 = validated(spec.pair1);
    const PairSpec p2 = validated(spec.pair2);

    EcpCircuit c;
    c.protocol = protocol;
    c.n = n;
    c.initial = tensor(pair_state(l1, p1.a, p1.b, a1_pattern), pair_state(l2, p2.a, p2.b, a2_pattern),
                       plus_state(controller));
    c.controller = controller.name;
    c.charlie = {c1.name, c2.name};
    c.measured = photon_controller ? std::vector<std::string>{controller.name, c1.name, c2.name}
                                   : std::vector<std::string>{c1.name, c2.name, controller.name};
    for (const auto& l : side_a) c.remote.push_back(l.name);
    for (const auto& l : side_b) c.remote.push_back(l.name);

    const std::size_t a_bits = form == GhzInputForm::pair_consistent ? 0 : all_n;
    c.success_pattern = a_bits << n;
    c.failure_pattern = (a_bits << n) | all_n;
    c.success_controller_bit = form == GhzInputForm::pair_consistent ? 1 : 0;
    return c;
}

StateVector evolve(const EcpCircuit& circuit, const PhasePair& phases, const RunOptions& options) {
    const auto gate = faraday_gate(gate_spec(phases, options));
    const bool photon_controller = controller_is_photon(circuit.protocol);

    StateVector state = circuit.initial;
    std::vector<std::string> order = circuit.charlie;
    if (options.order == GateOrder::reversed) std::swap(order[0], order[1]);
    for (const auto& c : order) {
        // The gate acts on (photon, atom).
        if (photon_controller)
            apply_in_place(state, gate, {circuit.controller, c});
        else
            apply_in_place(state, gate, {c, circuit.controller});
    }
    const auto h = hadamard<double>();
    apply_in_place(state, h, {circuit.charlie[0]});
    apply_in_place(state, h, {circuit.charlie[1]});
    apply_in_place(state, h, {circuit.controller});
    return state;
}

ProtocolResult run_protocol(Protocol protocol, const GhzSpec& spec, const PhasePair& phases,
                            const RunOptions& options) {
    ProtocolResult r;
    r.protocol = protocol;
    r.phases = phases;
    r.options = options;
    r.pair1 = validated(spec.pair1, &r.warnings);
    r.pair2 = validated(spec.pair2, &r.warnings);

    GhzSpec clean = spec;
    clean.pair1 = r.pair1;
    clean.pair2 = r.pair2;
    const auto circuit = build_circuit(protocol, clean, options);
    r.n = circuit.n;
    r.measured = circuit.measured;
    r.remote = circuit.remote;

    const bool drops_moduli = !(options.lossy && options.leakage == LeakageMode::reject);
    if (drops_moduli)
        if (auto w = leakage_warning(phases)) r.warnings.push_back(*w);

    const StateVector state = evolve(circuit, phases, options);
    // Only kept moduli can leak amplitude; otherwise the norm is 1 up to rounding.
    if (!drops_moduli) r.lost_probability = std::max(0.0, 1.0 - state.amplitudes().squaredNorm());
    r.success_outcomes = classify(protocol, clean, phases, options);

    std::vector<QubitLabel> remote_labels;
    for (const auto& name : circuit.remote) remote_labels.push_back(state.labels()[state.position(name)]);
    r.success_target = ghz_state<double>(remote_labels, circuit.success_pattern);
    r.failure_target = ghz_state<double>(remote_labels, circuit.failure_pattern);

    for (auto& b : enumerate_branches(state, circuit.measured)) {
        BranchReport rep;
        b.probability *= 1.0 - r.lost_probability;
        rep.success = r.success_outcomes.contains(b.label());
        if (b.residual.num_qubits() == 2) rep.concurrence = concurrence(b.residual);
        const auto [f, corr] = corrected_fidelity(b.residual, rep.success ? r.success_target : r.failure_target);
        rep.target_fidelity = f;
        rep.correction = corr;
        if (rep.success) r.success_probability += b.probability;
        rep.branch = std::move(b);
        r.branches.push_back(std::move(rep));
    }
    return r;
}

ProtocolResult atomic_ecp(const PairSpec& pair1, const PairSpec& pair2, const PhasePair& phases,
                          const RunOptions& options) {
    return run_protocol(Protocol::atomic, {1, pair1, pair2}, phases, options);
}

ProtocolResult photonic_ecp(const PairSpec& pair1, const PairSpec& pair2, const PhasePair& phases,
                            const RunOptions& options) {
    return run_protocol(Protocol::photonic, {1, pair1, pair2}, phases, options);
}

ProtocolResult atomic_ghz_ecp(const GhzSpec& spec, const PhasePair& phases, const RunOptions& options) {
    return run_protocol(Protocol::atomic_ghz, spec, phases, options);
}

ProtocolResult photonic_ghz_ecp(const GhzSpec& spec, const PhasePair& phases, const RunOptions& options) {
    return run_protocol(Protocol::photonic_ghz, spec, phases, options);
}

double success_probability_analytic(double a1) {
    if (!(a1 > 0.0 && a1 < 1.0)) throw std::invalid_argument("a1 must lie in (0, 1)");
    const double a2 = a1 * a1;
    return 2.0 * a2 * (1.0 - a2);
}

double success_probability_analytic(const PairSpec& pair1, const PairSpec& pair2) {
    const auto p1 = validated(pair1);
    const auto p2 = validated(pair2);
    return p1.a * p1.a * p2.b * p2.b + p1.b * p1.b * p2.a * p2.a;
}

}  // namespace ecp
