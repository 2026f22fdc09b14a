#include "ecp/output.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace ecp::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int schema_version = 1;

const char* correction_name(Correction c) { return c == Correction::pauli_z ? "Z" : "I"; }

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json phases_object(const PhasePair& p) {
    return Json{{"phi", p.phi}, {"phi0", p.phi0}, {"modRCoupled", p.modCoupled}, {"modREmpty", p.modEmpty}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fixed(double x, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

const char* sweep_header =
    "axis_value,phi,phi0,mod_r_coupled,P_analytic,P_simulated,F_analytic,F_simulated,abs_diff_P,abs_diff_F,"
    "convention\n";

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string run_json(const ExperimentConfig& config, const ProtocolResult& r, const std::optional<MonteCarloResult>& mc) {
    Json j;
    j["schema_version"] = schema_version;
    j["command"] = "run";
    j["protocol"] = to_string(r.protocol);
    j["n"] = r.n;
    j["pair1"] = {{"a", r.pair1.a}, {"b", r.pair1.b}};
    j["pair2"] = {{"a", r.pair2.a}, {"b", r.pair2.b}};
    j["phaseSource"] = config.phase_source == PhaseSource::ideal             ? "ideal"
                       : config.phase_source == PhaseSource::explicit_phases ? "explicit"
                                                                             : "cavity";
    if (config.phase_source == PhaseSource::cavity) {
        const auto& c = config.cavity;
        j["cavity"] = {{"omega0", c.omega0}, {"omegaC", c.omegaC}, {"omegaP", c.omegaP},
                       {"kappa", c.kappa},   {"gamma", c.gamma},   {"g", c.g}};
    }
    j["phases"] = phases_object(r.phases);
    j["successProbability"] = r.success_probability;
    j["successProbabilityAnalytic"] = success_probability_analytic(r.pair1, r.pair2);
    j["lostProbability"] = r.lost_probability;
    j["measured"] = r.measured;
    j["remote"] = r.remote;
    j["successOutcomes"] = Json(std::vector<std::string>(r.success_outcomes.begin(), r.success_outcomes.end()));
    Json branches = Json::array();
    for (const auto& b : r.branches) {
        branches.push_back({{"outcome", b.branch.label()},
                            {"probability", b.branch.probability},
                            {"success", b.success},
                            {"concurrence", optional_number(b.concurrence)},
                            {"targetFidelity", b.target_fidelity},
                            {"correction", correction_name(b.correction)}});
    }
    j["branches"] = branches;
    if (mc) {
        Json hist = Json::array();
        for (std::size_t i = 0; i < mc->histogram.size(); ++i)
            hist.push_back({{"outcome", mc->histogram[i].first},
                            {"count", mc->histogram[i].second},
                            {"exactProbability", mc->exact_probabilities[i]}});
        j["monteCarlo"] = {{"trials", mc->trials},
                           {"seed", mc->seed},
                           {"rng", "mt19937_64"},
                           {"successes", mc->successes},
                           {"successRate", mc->success_rate},
                           {"standardError", mc->standard_error},
                           {"histogram", hist}};
    }
    j["warnings"] = r.warnings;
    return dump(j);
}

std::string run_csv(const ProtocolResult& r) {
    std::string out = "outcome,probability,success,concurrence,target_fidelity,correction\n";
    for (const auto& b : r.branches) {
        out += '"' + b.branch.label() + "\"," + format_number(b.branch.probability) + ',' +
               (b.success ? "true" : "false") + ',' + (b.concurrence ? format_number(*b.concurrence) : "") + ',' +
               format_number(b.target_fidelity) + ',' + correction_name(b.correction) + '\n';
    }
    return out;
}

std::string run_table(const ProtocolResult& r, const std::optional<MonteCarloResult>& mc) {
    std::ostringstream os;
    os << "protocol " << to_string(r.protocol) << "  N=" << r.n << "  a1=" << fixed(r.pair1.a)
       << "  a2=" << fixed(r.pair2.a) << "\n";
    os << "phi=" << fixed(r.phases.phi) << "  phi0=" << fixed(r.phases.phi0) << "  |r|=" << fixed(r.phases.modCoupled)
       << "\n\n";
    os << std::left << std::setw(36) << "outcome" << std::right << std::setw(12) << "probability" << std::setw(9)
       << "success" << std::setw(13) << "concurrence" << std::setw(12) << "fidelity" << std::setw(6) << "corr"
       << "\n";
    for (const auto& b : r.branches) {
        os << std::left << std::setw(36) << b.branch.label() << std::right << std::setw(12)
           << fixed(b.branch.probability) << std::setw(9) << (b.success ? "yes" : "no") << std::setw(13)
           << (b.concurrence ? fixed(*b.concurrence) : "-") << std::setw(12) << fixed(b.target_fidelity)
           << std::setw(6) << correction_name(b.correction) << "\n";
    }
    os << "\nsuccess probability " << fixed(r.success_probability, 10) << "  (closed form "
       << fixed(success_probability_analytic(r.pair1, r.pair2), 10) << ")\n";
    if (r.lost_probability > 0) os << "lost to leakage      " << fixed(r.lost_probability, 10) << "\n";
    if (mc)
        os << "monte carlo          " << mc->successes << "/" << mc->trials << " = " << fixed(mc->success_rate)
           << " +- " << fixed(mc->standard_error) << "  (seed " << mc->seed << ")\n";
    return os.str();
}

std::string sweep_json(const SweepResult& r) {
    Json j;
    j["schema_version"] = schema_version;
    j["command"] = "sweep";
    Json meta = Json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    j["metadata"] = meta;
    Json pts = Json::array();
    for (const auto& p : r.points)
        pts.push_back({{"axisValue", p.axis_value},
                       {"phi", p.phases.phi},
                       {"phi0", p.phases.phi0},
                       {"modRCoupled", p.modCoupled},
                       {"pAnalytic", p.p_analytic},
                       {"pSimulated", p.p_simulated},
                       {"fAnalytic", p.f_analytic},
                       {"fSimulated", p.f_simulated},
                       {"absDiffP", p.abs_diff_p},
                       {"absDiffF", p.abs_diff_f},
                       {"convention", p.convention}});
    j["points"] = pts;
    return dump(j);
}

std::string sweep_csv(const SweepResult& r) {
    std::string out = sweep_header;
    for (const auto& p : r.points) {
        for (double x : {p.axis_value, p.phases.phi, p.phases.phi0, p.modCoupled, p.p_analytic, p.p_simulated,
                         p.f_analytic, p.f_simulated, p.abs_diff_p, p.abs_diff_f})
            out += format_number(x) + ',';
        out += p.convention + '\n';
    }
    return out;
}

std::string sweep_table(const SweepResult& r) {
    std::ostringstream os;
    os << "sweep over " << to_string(r.axis);
    for (const auto& [k, v] : r.metadata)
        if (k != "axis") os << "  " << k << "=" << v;
    os << "\n";
    os << std::setw(12) << to_string(r.axis) << std::setw(11) << "phi" << std::setw(11) << "phi0" << std::setw(12)
       << "P_analytic" << std::setw(12) << "P_sim" << std::setw(12) << "F_analytic" << std::setw(12) << "F_sim"
       << "  convention\n";
    for (const auto& p : r.points)
        os << std::setw(12) << fixed(p.axis_value, 5) << std::setw(11) << fixed(p.phases.phi, 5) << std::setw(11)
           << fixed(p.phases.phi0, 5) << std::setw(12) << fixed(p.p_analytic) << std::setw(12) << fixed(p.p_simulated)
           << std::setw(12) << fixed(p.f_analytic) << std::setw(12) << fixed(p.f_simulated) << "  " << p.convention
           << "\n";
    return os.str();
}

std::string phases_json(const std::vector<PhaseRow>& rows) {
    Json j;
    j["schema_version"] = schema_version;
    j["command"] = "phases";
    Json arr = Json::array();
    for (const auto& row : rows) {
        Json o{{"anchor", row.anchor}, {"convention", row.convention}, {"detuning", row.detuning}, {"g", row.g}};
        const Json ph = phases_object(row.phases);
        for (const auto& [k, v] : ph.items()) o[k] = v;
        o["fAnalytic"] = row.f_analytic;
        o["reportedPhi"] = optional_number(row.reported_phi);
        o["reportedPhi0"] = optional_number(row.reported_phi0);
        o["reportedF"] = optional_number(row.reported_f);
        arr.push_back(o);
    }
    j["rows"] = arr;
    return dump(j);
}

std::string phases_csv(const std::vector<PhaseRow>& rows) {
    std::string out = "anchor,convention,detuning,g,phi,phi0,mod_r_coupled,mod_r_empty,F_analytic,reported_phi,"
                      "reported_phi0,reported_F\n";
    const auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
    for (const auto& row : rows)
        out += row.anchor + ',' + row.convention + ',' + format_number(row.detuning) + ',' + format_number(row.g) +
               ',' + format_number(row.phases.phi) + ',' + format_number(row.phases.phi0) + ',' +
               format_number(row.phases.modCoupled) + ',' + format_number(row.phases.modEmpty) + ',' +
               format_number(row.f_analytic) + ',' + opt(row.reported_phi) + ',' + opt(row.reported_phi0) + ',' +
               opt(row.reported_f) + '\n';
    return out;
}

std::string phases_table(const std::vector<PhaseRow>& rows) {
    std::ostringstream os;
    const auto opt = [](const std::optional<double>& x) { return x ? fixed(*x, 3) : std::string("-"); };
    os << std::left << std::setw(8) << "anchor" << std::setw(11) << "convention" << std::right << std::setw(9)
       << "wc-w0" << std::setw(7) << "g" << std::setw(11) << "phi" << std::setw(11) << "phi0" << std::setw(9) << "|r|"
       << std::setw(10) << "F" << std::setw(10) << "ref phi" << std::setw(10) << "ref phi0" << std::setw(8)
       << "ref F" << "\n";
    for (const auto& row : rows)
        os << std::left << std::setw(8) << row.anchor << std::setw(11) << row.convention << std::right << std::setw(9)
           << fixed(row.detuning, 3) << std::setw(7) << fixed(row.g, 3) << std::setw(11) << fixed(row.phases.phi, 5)
           << std::setw(11) << fixed(row.phases.phi0, 5) << std::setw(9) << fixed(row.phases.modCoupled, 4)
           << std::setw(10) << fixed(row.f_analytic, 5) << std::setw(10) << opt(row.reported_phi) << std::setw(10)
           << opt(row.reported_phi0) << std::setw(8) << opt(row.reported_f) << "\n";
    return os.str();
}

}  // namespace ecp::cli
