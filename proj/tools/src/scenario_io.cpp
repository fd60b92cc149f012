#include "salvo_cli/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "salvo/error.hpp"
#include "salvo_presets.hpp"

namespace salvo::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::validation, path + ": " + what);
}

// Typed access to one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) bad(path_, "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }
    std::string at_path(const char* key) const { return path_ + "." + key; }

    const json& raw(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key)) bad(at_path(key), "missing");
        return j_.at(key);
    }

    double num(const char* key) {
        const json& v = raw(key);
        if (!v.is_number()) bad(at_path(key), "expected a number");
        return v.get<double>();
    }
    double num(const char* key, double fallback) { return has(key) ? num(key) : (seen_.insert(key), fallback); }
    std::optional<double> opt_num(const char* key) {
        if (!has(key)) return std::nullopt;
        return num(key);
    }
    double deg(const char* key) { return deg2rad(num(key)); }
    double deg(const char* key, double fallback_rad) { return has(key) ? deg(key) : fallback_rad; }

    bool flag(const char* key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) bad(at_path(key), "expected true or false");
        return v.get<bool>();
    }
    std::string str(const char* key) {
        const json& v = raw(key);
        if (!v.is_string()) bad(at_path(key), "expected a string");
        return v.get<std::string>();
    }
    std::string str(const char* key, const std::string& fallback) { return has(key) ? str(key) : fallback; }

    std::int64_t integer(const char* key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) bad(at_path(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) bad(path_ + "." + it.key(), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

int to_vertex(const json& v, const std::string& path) {
    if (!v.is_number_integer()) bad(path, "vertex must be an integer");
    return v.get<int>();
}

Topology read_graph(const json& j, const std::string& path, int n) {
    Obj o(j, path);
    Topology g;
    if (o.has("cycle")) {
        g = Topology::cycle(static_cast<int>(o.integer("cycle", 0)));
    } else if (o.has("complete")) {
        g = Topology::complete(static_cast<int>(o.integer("complete", 0)));
    } else {
        const json& e = o.raw("edges");
        if (!e.is_array()) bad(o.at_path("edges"), "expected a list of [i, j] pairs");
        std::vector<std::pair<int, int>> edges;
        for (std::size_t k = 0; k < e.size(); ++k) {
            const std::string p = o.at_path("edges") + "[" + std::to_string(k) + "]";
            if (!e[k].is_array() || e[k].size() != 2) bad(p, "expected [i, j]");
            edges.emplace_back(to_vertex(e[k][0], p), to_vertex(e[k][1], p));
        }
        try {
            g = Topology(n, edges);
        } catch (const Error& err) {
            bad(path, err.what());
        }
    }
    o.finish();
    if (g.n() != n)
        bad(path, "graph has " + std::to_string(g.n()) + " vertices, expected " + std::to_string(n));
    return g;
}

SwitchingSchedule read_network(const json& j, int n, std::uint64_t seed, double t_max) {
    Obj o(j, "network");
    std::vector<Topology> graphs;
    if (o.has("edges") || o.has("cycle") || o.has("complete")) {
        graphs.push_back(read_graph(j, "network", n));
        return SwitchingSchedule::fixed(graphs.front());
    }
    const json& gs = o.raw("graphs");
    if (!gs.is_array() || gs.empty()) bad("network.graphs", "expected a non-empty list");
    for (std::size_t k = 0; k < gs.size(); ++k)
        graphs.push_back(read_graph(gs[k], "network.graphs[" + std::to_string(k) + "]", n));

    if (!o.has("switching")) {
        o.finish();
        if (graphs.size() != 1) bad("network.switching", "required when more than one graph is given");
        return SwitchingSchedule::fixed(graphs.front());
    }
    Obj s(o.raw("switching"), "network.switching");
    o.finish();
    const std::string mode = s.str("mode");
    SwitchingSchedule out;
    try {
        if (mode == "fixed") {
            if (graphs.size() != 1) bad("network.switching.mode", "fixed needs exactly one graph");
            out = SwitchingSchedule::fixed(graphs.front());
        } else if (mode == "random") {
            const double lo = s.num("min_dwell");
            const double hi = s.num("max_dwell", lo);
            const double horizon = s.num("horizon", t_max);
            out = SwitchingSchedule::random_signal(graphs, seed, lo, hi, horizon);
        } else if (mode == "explicit") {
            const json& sw = s.raw("switches");
            if (!sw.is_array()) bad("network.switching.switches", "expected a list of [time, graph] pairs");
            std::vector<std::pair<double, int>> pairs;
            for (std::size_t k = 0; k < sw.size(); ++k) {
                const std::string p = "network.switching.switches[" + std::to_string(k) + "]";
                if (!sw[k].is_array() || sw[k].size() != 2 || !sw[k][0].is_number())
                    bad(p, "expected [time, graph]");
                pairs.emplace_back(sw[k][0].get<double>(), to_vertex(sw[k][1], p) - 1);
            }
            out = SwitchingSchedule::explicit_signal(graphs, pairs, s.num("min_dwell", 0.0));
        } else {
            bad("network.switching.mode", "expected fixed, random or explicit, got '" + mode + "'");
        }
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::validation) throw;
        bad("network.switching", err.what());
    }
    s.finish();
    return out;
}

TargetModel read_target(const json& j) {
    Obj o(j, "target");
    TargetModel t;
    const std::string kind = o.str("kind");
    if (kind == "stationary") t.kind = TargetKind::stationary;
    else if (kind == "constant_speed") t.kind = TargetKind::constant_speed;
    else if (kind == "maneuvering") t.kind = TargetKind::maneuvering;
    else bad("target.kind", "expected stationary, constant_speed or maneuvering, got '" + kind + "'");
    t.v = o.num("v", 0.0);
    t.gamma = o.deg("gamma", 0.0);
    t.x = o.num("x", 0.0);
    t.y = o.num("y", 0.0);
    if (o.has("accel")) {
        Obj a(o.raw("accel"), "target.accel");
        t.accel.bias = a.num("bias", 0.0);
        t.accel.amplitude = a.num("amplitude", 0.0);
        t.accel.omega = a.num("omega", 0.0);
        t.accel.phase = a.deg("phase", 0.0);
        a.finish();
        if (t.kind != TargetKind::maneuvering && (t.accel.bias != 0.0 || t.accel.amplitude != 0.0))
            bad("target.accel", "only a maneuvering target may accelerate");
    }
    o.finish();
    return t;
}

GuidanceConfig read_guidance(const json& j) {
    Obj o(j, "guidance");
    GuidanceConfig c;
    const std::string law = o.str("law");
    const auto parsed = parse_law(law);
    if (!parsed) bad("guidance.law", "unknown law '" + law + "'");
    c.law = *parsed;
    c.ts = o.num("ts", c.ts);
    c.c = o.num("c", c.c);
    c.d = o.num("d", c.d);
    c.B = o.opt_num("B");
    c.eps = o.opt_num("eps");
    c.P = o.opt_num("P");
    c.mu = o.opt_num("mu");
    c.M_coef = o.num("M_coef", c.M_coef);
    c.N_coef = o.num("N_coef", c.N_coef);
    c.m_exp = o.num("m_exp", c.m_exp);
    c.n_exp = o.num("n_exp", c.n_exp);
    c.k_exp = o.num("k_exp", c.k_exp);
    c.N_nav = o.num("N_nav", c.N_nav);
    if (o.has("a_max_g")) {
        if (o.has("a_max")) bad("guidance", "give a_max or a_max_g, not both");
        c.a_max = o.num("a_max_g") * g0;
    } else {
        c.a_max = o.num("a_max", c.a_max);
    }
    c.xi_max = o.num("xi_max", c.xi_max);
    c.bound_margin = o.num("bound_margin", c.bound_margin);
    c.boundary_layer = o.num("boundary_layer", c.boundary_layer);
    c.theta_dot_floor = o.num("theta_dot_floor", c.theta_dot_floor);
    c.sin2d_floor = o.num("sin2d_floor", c.sin2d_floor);
    o.finish();
    return c;
}

std::optional<bool> read_observer(const json& j, ObserverGains& g) {
    Obj o(j, "observer");
    std::optional<bool> enabled;
    if (o.has("enabled")) enabled = o.flag("enabled", false);
    g.G0 = o.num("G0", g.G0);
    g.G1 = o.num("G1", g.G1);
    g.G2 = o.num("G2", g.G2);
    g.H0 = o.num("H0", g.H0);
    g.H1 = o.num("H1", g.H1);
    g.H2 = o.num("H2", g.H2);
    g.F = o.num("F", g.F);
    o.finish();
    return enabled;
}

std::optional<AirframeParams> read_airframe(const json& j) {
    Obj o(j, "airframe");
    AirframeParams p;
    const bool enabled = o.flag("enabled", true);
    p.mass = o.num("mass", p.mass);
    p.inertia = o.num("inertia", p.inertia);
    p.tau_c = o.num("tau_c", p.tau_c);
    p.tau_t = o.num("tau_t", p.tau_t);
    p.L_alpha = o.num("L_alpha", p.L_alpha);
    p.L_dc = o.num("L_dc", p.L_dc);
    p.L_dt = o.num("L_dt", p.L_dt);
    p.M_alpha = o.num("M_alpha", p.M_alpha);
    p.M_q = o.num("M_q", p.M_q);
    p.M_dc = o.num("M_dc", p.M_dc);
    p.M_dt = o.num("M_dt", p.M_dt);
    p.canard_share = o.num("canard_share", p.canard_share);
    p.alloc_gain = o.num("alloc_gain", p.alloc_gain);
    p.max_deflection = o.deg("max_deflection", p.max_deflection);
    o.finish();
    if (!enabled) return std::nullopt;
    return p;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

json parse_document(std::string_view text, const std::string& source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte points one past the offending character.
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        const auto cut = msg.find("syntax error");
        if (cut != std::string::npos) msg = msg.substr(cut);
        throw Error(ErrorKind::validation,
                    source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

json apply_overrides(json doc, const Overrides& ov) {
    if (!doc.is_object()) return doc;
    if (ov.dt) doc["dt"] = *ov.dt;
    if (ov.seed) doc["seed"] = *ov.seed;
    if (ov.law || ov.ts) {
        json& g = doc["guidance"];
        if (g.is_null()) g = json::object();
        if (ov.law) g["law"] = *ov.law;
        if (ov.ts) g["ts"] = *ov.ts;
    }
    return doc;
}

Scenario build_scenario(const json& doc) {
    Obj o(doc, "scenario");
    Scenario sc;
    sc.name = o.str("name", "unnamed");
    o.str("description", "");
    sc.dt = o.num("dt", sc.dt);
    sc.t_max = o.num("t_max", sc.t_max);
    sc.capture_radius = o.num("capture_radius", sc.capture_radius);
    sc.miss_gate = o.num("miss_gate", sc.miss_gate);
    sc.spread_tol = o.num("spread_tol", sc.spread_tol);
    sc.log_every = static_cast<int>(o.integer("log_every", sc.log_every));
    const std::int64_t seed = o.integer("seed", 0);
    if (seed < 0) bad("scenario.seed", "must be non-negative");
    sc.seed = static_cast<std::uint64_t>(seed);

    sc.target = read_target(o.raw("target"));
    sc.guidance = read_guidance(o.raw("guidance"));

    const json& list = o.raw("interceptors");
    if (!list.is_array()) bad("scenario.interceptors", "expected a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
        Obj io(list[k], "interceptors[" + std::to_string(k) + "]");
        InterceptorSpec s;
        s.initial.r = io.num("r");
        s.initial.theta = io.deg("theta");
        s.initial.gamma = io.deg("gamma");
        s.initial.v = io.num("v");
        s.B = io.opt_num("B");
        s.P = io.opt_num("P");
        s.N_nav = io.opt_num("N_nav");
        io.finish();
        sc.interceptors.push_back(s);
    }
    const int n = static_cast<int>(sc.interceptors.size());
    if (n < 2) bad("scenario.interceptors", "at least two interceptors required");

    sc.network = read_network(o.raw("network"), n, sc.seed, sc.t_max);
    if (o.has("observer")) sc.observer_enabled = read_observer(o.raw("observer"), sc.observer);
    if (o.has("airframe")) sc.airframe = read_airframe(o.raw("airframe"));
    o.finish();
    return sc;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> v;
        for (const auto& p : bundled_presets) v.push_back({p.name, p.text});
        return v;
    }();
    return all;
}

ScenarioSource resolve_scenario(const std::string& name_or_path) {
    for (const auto& p : presets())
        if (p.name == name_or_path) return {std::string(p.text), "preset:" + name_or_path};
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open scenario '" + name_or_path + "' (not a file or bundled preset)");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::io, "read error on '" + name_or_path + "'");
    return {ss.str(), name_or_path};
}

LoadedScenario load_scenario(const std::string& name_or_path, const Overrides& ov) {
    const ScenarioSource src = resolve_scenario(name_or_path);
    LoadedScenario out;
    out.doc = apply_overrides(parse_document(src.text, src.origin), ov);
    out.scenario = build_scenario(out.doc);
    validate_scenario(out.scenario);
    return out;
}

}  // namespace salvo::cli
