#include "ecp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ecp::cli {

namespace {

const std::vector<std::string> keys = {
    "protocol", "n",        "a1",         "b1",     "a2",     "b2",     "ideal_phases",
    "phi",      "phi0",     "omega0",     "omegac", "omegap", "kappa",  "gamma",
    "g",        "detuning", "anchor",     "units",  "order",  "form",   "lossy",
    "leakage",  "acknowledge_nonunitary", "axis",   "from",   "to",     "points",
    "both_conventions",     "trials",     "seed",   "format", "output"};

const std::vector<std::string> cavity_keys = {"omega0", "omegac", "omegap", "gamma", "g", "detuning"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    Reader(const RawConfig& raw, std::vector<Violation>& out) : raw_(raw), out_(out) {}

    bool has(const std::string& key) const { return raw_.contains(key); }

    void fail(const std::string& key, const std::string& message) {
        const auto it = raw_.find(key);
        out_.push_back({key, message, it == raw_.end() ? Source{} : it->second.source});
    }

    std::optional<double> real(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const auto& text = raw_.at(key).text;
        double v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
            fail(key, "expected a finite number, got '" + text + "'");
            return std::nullopt;
        }
        return v;
    }

    template <typename Int>
    std::optional<Int> integer(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const auto& text = raw_.at(key).text;
        Int v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail(key, "expected an integer, got '" + text + "'");
            return std::nullopt;
        }
        return v;
    }

    bool boolean(const std::string& key) {
        if (!has(key)) return false;
        const auto& t = raw_.at(key).text;
        if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
        if (t == "false" || t == "0" || t == "no" || t == "off") return false;
        fail(key, "expected true or false, got '" + t + "'");
        return false;
    }

    std::optional<std::string> choice(const std::string& key, const std::vector<std::string>& allowed) {
        if (!has(key)) return std::nullopt;
        const auto& t = raw_.at(key).text;
        if (std::find(allowed.begin(), allowed.end(), t) != allowed.end()) return t;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(key, "unknown value '" + t + "' (expected one of: " + list + ")");
        return std::nullopt;
    }

private:
    const RawConfig& raw_;
    std::vector<Violation>& out_;
};

void read_pair(Reader& r, const std::string& a_key, const std::string& b_key, PairSpec& pair,
               std::vector<std::string>& warnings) {
    const auto a = r.real(a_key);
    const auto b = r.real(b_key);
    if (!a && !b) return;
    if (!a) {
        r.fail(b_key, b_key + " given without " + a_key);
        return;
    }
    try {
        if (b)
            pair = validated({*a, *b}, &warnings);
        else
            pair = PairSpec::from_a(*a);
    } catch (const std::invalid_argument& e) {
        r.fail(b ? b_key : a_key, e.what());
    }
}

}  // namespace

std::string Source::describe() const {
    if (file.empty()) return "command line";
    return file + ":" + std::to_string(line);
}

std::string Violation::describe() const { return source.describe() + ": field '" + field + "': " + message; }

std::vector<std::string> known_keys() { return keys; }

RawConfig parse_config_text(const std::string& text, const std::string& name, std::vector<Violation>& violations) {
    RawConfig out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const Source src{name, number};
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            violations.push_back({"", "expected 'key = value', got '" + line + "'", src});
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            violations.push_back({key, "empty key or value", src});
            continue;
        }
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            violations.push_back({key, "unknown key", src});
            continue;
        }
        if (out.contains(key)) {
            violations.push_back({key, "duplicate key (first set on line " + std::to_string(out[key].source.line) + ")", src});
            continue;
        }
        out[key] = {value, src};
    }
    return out;
}

RawConfig read_config_file(const std::string& path, std::vector<Violation>& violations) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        violations.push_back({"config", "cannot read config file '" + path + "'", {}});
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path, violations);
}

RawConfig merge(RawConfig base, const RawConfig& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

ParseResult interpret(const RawConfig& raw, Command command) {
    ParseResult res;
    auto& c = res.config;
    Reader r(raw, res.violations);

    for (const auto& [key, value] : raw)
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) r.fail(key, "unknown key");

    if (auto p = r.choice("protocol", {"atomic", "photonic", "atomic-ghz", "photonic-ghz"}))
        c.protocol = protocol_from_string(*p);
    const bool ghz = c.protocol == Protocol::atomic_ghz || c.protocol == Protocol::photonic_ghz;
    if (auto n = r.integer<int>("n")) {
        if (!ghz && *n != 1)
            r.fail("n", "N applies only to the GHZ protocols");
        else if (*n < 1)
            r.fail("n", "GHZ party count N must be at least 1");
        else if (*n > max_ghz_parties)
            r.fail("n", "GHZ party count N exceeds the cap of " + std::to_string(max_ghz_parties));
        else
            c.n = *n;
    }
    read_pair(r, "a1", "b1", c.pair1, res.warnings);
    read_pair(r, "a2", "b2", c.pair2, res.warnings);

    if (auto v = r.choice("order", {"forward", "reversed"})) c.options.order = *v == "forward" ? GateOrder::forward : GateOrder::reversed;
    if (auto v = r.choice("form", {"pair-consistent", "as-written"}))
        c.options.form = *v == "pair-consistent" ? GhzInputForm::pair_consistent : GhzInputForm::as_written;
    c.options.lossy = r.boolean("lossy");
    if (auto v = r.choice("leakage", {"renormalize", "reject"}))
        c.options.leakage = *v == "renormalize" ? LeakageMode::renormalize : LeakageMode::reject;
    c.options.acknowledge_nonunitary = r.boolean("acknowledge_nonunitary");

    // Frequencies are in units of kappa unless units = mhz, in which case
    // kappa must be given in MHz and everything is divided by it.
    double scale = 1.0;
    const auto units = r.choice("units", {"kappa", "mhz"}).value_or("kappa");
    const auto kappa = r.real("kappa");
    if (units == "mhz") {
        if (!kappa)
            r.fail("units", "units = mhz requires kappa in MHz");
        else if (!(*kappa > 0))
            r.fail("kappa", "kappa must be positive");
        else
            scale = 1.0 / *kappa;
    } else if (kappa && *kappa != 1.0) {
        r.fail("kappa", "kappa is the unit of frequency; set units = mhz to enter it in MHz");
    }
    const auto freq = [&](const std::string& key) -> std::optional<double> {
        auto v = r.real(key);
        if (v) *v *= scale;
        return v;
    };

    const auto anchor_name = r.choice("anchor", {"cavity", "atom"});
    const ProbeAnchor anchor = anchor_name.value_or("cavity") == "atom" ? ProbeAnchor::atom : ProbeAnchor::cavity;
    const auto g = freq("g");
    const auto detuning = freq("detuning");

    if (command != Command::sweep) {
        const bool ideal = r.boolean("ideal_phases");
        const bool explicit_phases = r.has("phi") || r.has("phi0");
        bool cavity = false;
        for (const auto& k : cavity_keys) cavity = cavity || r.has(k);
        const int sources = int(ideal) + int(explicit_phases) + int(cavity);
        if (sources != 1) {
            r.fail(ideal ? "ideal_phases" : explicit_phases ? "phi" : "omega0",
                   "exactly one of explicit phases (ideal_phases, or phi and phi0) and cavity parameters "
                   "must be given");
        } else if (ideal) {
            c.phase_source = PhaseSource::ideal;
        } else if (explicit_phases) {
            c.phase_source = PhaseSource::explicit_phases;
            const auto phi = r.real("phi");
            const auto phi0 = r.real("phi0");
            if (!r.has("phi") || !r.has("phi0"))
                r.fail(r.has("phi") ? "phi0" : "phi", "phi and phi0 must be given together");
            else if (phi && phi0)
                c.phases = PhasePair::from_phases(*phi, *phi0);
        } else {
            c.phase_source = PhaseSource::cavity;
            const bool absolute = r.has("omega0") || r.has("omegac") || r.has("omegap");
            if (detuning && absolute) {
                r.fail("detuning", "detuning cannot be combined with omega0, omegac or omegap");
            } else if (detuning) {
                c.cavity = detuned_parameters<double>(*detuning, anchor, g.value_or(0.5));
            } else {
                if (anchor_name) r.fail("anchor", "anchor applies only together with detuning");
                c.cavity.omega0 = freq("omega0").value_or(0.0);
                c.cavity.omegaC = freq("omegac").value_or(0.0);
                c.cavity.omegaP = freq("omegap").value_or(-0.5);
                c.cavity.g = g.value_or(0.5);
            }
            c.cavity.gamma = freq("gamma").value_or(0.0);
            try {
                c.cavity.validate();
            } catch (const std::invalid_argument& e) {
                r.fail("omega0", e.what());
            }
        }
    } else {
        auto& s = c.sweep;
        s.protocol = c.protocol;
        s.n = c.n;
        s.options = c.options;
        s.pair1 = c.pair1;
        s.pair2 = c.pair2;
        s.a1 = c.pair1.a;
        s.anchor = anchor;
        s.coupling = g.value_or(0.5);
        s.detuning = detuning.value_or(0.0);
        s.both_conventions = r.has("both_conventions") ? r.boolean("both_conventions") : true;
        for (const auto& k : {"ideal_phases", "phi", "phi0", "omega0", "omegac", "omegap"})
            if (r.has(k)) r.fail(k, "not used by sweep");

        if (auto a = r.choice("axis", {"a1", "detuning", "coupling", "k"})) s.axis = sweep_axis_from_string(*a);
        const bool frequency_axis = s.axis == SweepAxis::detuning || s.axis == SweepAxis::coupling;
        const auto from = frequency_axis ? freq("from") : r.real("from");
        const auto to = frequency_axis ? freq("to") : r.real("to");
        if (from) s.from = *from;
        if (to) s.to = *to;
        if (s.axis == SweepAxis::k) {
            if (!from) s.from = -0.1;
            if (!to) s.to = 0.1;
        } else if (frequency_axis) {
            if (!from) s.from = s.axis == SweepAxis::coupling ? 0.1 : 0.0;
            if (!to) s.to = s.axis == SweepAxis::coupling ? 1.0 : 0.5;
        }
        if (auto p = r.integer<int>("points")) {
            if (*p < 1)
                r.fail("points", "sweep range is empty");
            else
                s.points = *p;
        }
        switch (s.axis) {
            case SweepAxis::a1:
                if (!(s.from > 0 && s.from < 1 && s.to > 0 && s.to < 1)) r.fail("from", "a1 sweep bounds must lie in (0, 1)");
                break;
            case SweepAxis::k:
                for (double k : {s.from, s.to}) {
                    const double a = s.a1 * (1 + k);
                    if (!(a > 0 && a < 1)) r.fail("from", "a1(1+k) leaves (0, 1) inside the sweep range");
                }
                break;
            case SweepAxis::coupling:
                if (s.from < 0 || s.to < 0) r.fail("from", "coupling must be non-negative");
                break;
            case SweepAxis::detuning:
                break;
        }
    }

    if (auto t = r.integer<long long>("trials")) {
        if (*t < 0)
            r.fail("trials", "trials must be non-negative");
        else
            c.trials = static_cast<std::size_t>(*t);
    }
    if (auto s = r.integer<std::uint64_t>("seed")) c.seed = *s;
    if (auto f = r.choice("format", {"table", "json", "csv"}))
        c.format = *f == "json" ? Format::json : *f == "csv" ? Format::csv : Format::table;
    if (r.has("output")) c.output = raw.at("output").text;
    return res;
}

}  // namespace ecp::cli
