#include "qtf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qtf/initial_conditions.hpp"
#include "qtf/operators.hpp"
#include "qtf/snapshot.hpp"

namespace qtf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Assignments {
public:
    void set(const std::string& key, const std::string& value) {
        kv_[key] = value;
    }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    template <typename T>
    void take(const std::string& key, T& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        parse(it->second, out);
        consumed_.push_back(key);
        kv_.erase(it);
    }

    void finish() const {
        if (!kv_.empty())
            throw ConfigError("unknown config key: " + kv_.begin()->first);
    }

private:
    static void parse(const std::string& v, double& out) { out = std::stod(v); }
    static void parse(const std::string& v, int& out) { out = std::stoi(v); }
    static void parse(const std::string& v, std::uint64_t& out) {
        out = std::stoull(v);
    }
    static void parse(const std::string& v, std::string& out) { out = v; }
    static void parse(const std::string& v, bool& out) {
        if (v == "true" || v == "1")
            out = true;
        else if (v == "false" || v == "0")
            out = false;
        else
            throw ConfigError("expected boolean, got '" + v + "'");
    }
    static void parse(const std::string& v, Scheme& out) {
        if (v == "imex1")
            out = Scheme::imex1;
        else if (v == "imex2")
            out = Scheme::imex2;
        else
            throw ConfigError("unknown scheme '" + v + "'");
    }
    std::map<std::string, std::string> kv_;
    std::vector<std::string> consumed_;
};

const std::vector<std::string> kSections = {"grid", "model", "stepper",
                                            "regularization", "initial",
                                            "output"};

}  // namespace

void RunConfig::validate() const {
    model.validate();
    stepper.validate();
    if (d != 2 && d != 3) throw ConfigError("grid.d must be 2 or 3");
    if (n_axis < 8 || (n_axis & (n_axis - 1)) != 0)
        throw ConfigError("grid.N_axis must be a power of two >= 8");
    if (l_box <= 0.0) throw ConfigError("grid.L_box must be positive");
    if (generator != "random-bandlimited" && generator != "taylor-green" &&
        generator != "uniaxial-stripe" && generator != "snapshot")
        throw ConfigError("unknown initial.generator '" + generator + "'");
    if (generator == "snapshot" && (snapshot_q.empty() || snapshot_u.empty()))
        throw ConfigError("snapshot generator needs initial.snapshot_q/_u");
    if (snapshot_cadence < 0)
        throw ConfigError("output.snapshot_cadence must be >= 0");
    if (model.d_target < d)
        throw ConfigError("model.d_target must be >= grid.d");
}

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, Assignments> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section: " + raw);
            current = trim(line.substr(1, line.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), current) ==
                kSections.end())
                throw ConfigError("unknown config section [" + current + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value, got: " + raw);
        if (current.empty())
            throw ConfigError("key outside of any section: " + raw);
        sections[current].set(trim(line.substr(0, eq)),
                              trim(line.substr(eq + 1)));
    }

    RunConfig cfg;
    auto& grid = sections["grid"];
    grid.take("d", cfg.d);
    grid.take("N_axis", cfg.n_axis);
    grid.take("L_box", cfg.l_box);
    grid.finish();

    auto& model = sections["model"];
    model.take("a", cfg.model.a);
    model.take("b", cfg.model.b);
    model.take("c", cfg.model.c);
    model.take("L", cfg.model.L);
    model.take("Gamma", cfg.model.Gamma);
    model.take("nu", cfg.model.nu);
    model.take("lambda", cfg.model.lambda);
    model.take("xi", cfg.model.xi);
    model.take("d_target", cfg.model.d_target);
    model.take("xi0_threshold", cfg.model.xi0_threshold);
    model.finish();

    auto& st = sections["stepper"];
    st.take("dt", cfg.stepper.dt);
    st.take("scheme", cfg.stepper.scheme);
    st.take("T_final", cfg.stepper.t_final);
    st.take("cadence", cfg.stepper.cadence);
    st.take("implicit_bulk_a", cfg.stepper.implicit_bulk_a);
    st.finish();

    auto& reg = sections["regularization"];
    reg.take("enabled", cfg.stepper.reg.enabled);
    reg.take("n", cfg.stepper.reg.n);
    reg.take("eps", cfg.stepper.reg.eps);
    reg.finish();

    auto& init = sections["initial"];
    init.take("generator", cfg.generator);
    init.take("seed", cfg.seed);
    init.take("amplitude_q", cfg.amplitude_q);
    init.take("amplitude_u", cfg.amplitude_u);
    init.take("slope", cfg.slope);
    init.take("kmax", cfg.kmax);
    init.take("stripe_modulation", cfg.stripe_modulation);
    init.take("stripe_angle", cfg.stripe_angle);
    init.take("snapshot_q", cfg.snapshot_q);
    init.take("snapshot_u", cfg.snapshot_u);
    init.finish();

    auto& out = sections["output"];
    out.take("directory", cfg.out_dir);
    out.take("snapshot_cadence", cfg.snapshot_cadence);
    out.finish();

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // overrides are section.key=value lines appended as their own sections
    for (const auto& ov : overrides) {
        const auto dot = ov.find('.');
        const auto eq = ov.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value: " + ov);
        text += "\n[" + ov.substr(0, dot) + "]\n" + ov.substr(dot + 1) + "\n";
    }
    return parse_config_text(text);
}

std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream o;
    o.precision(17);
    o << "[grid]\n";
    o << "L_box = " << cfg.l_box << "\n";
    o << "N_axis = " << cfg.n_axis << "\n";
    o << "d = " << cfg.d << "\n";
    o << "[initial]\n";
    o << "amplitude_q = " << cfg.amplitude_q << "\n";
    o << "amplitude_u = " << cfg.amplitude_u << "\n";
    o << "generator = " << cfg.generator << "\n";
    o << "kmax = " << cfg.kmax << "\n";
    o << "seed = " << cfg.seed << "\n";
    o << "slope = " << cfg.slope << "\n";
    o << "snapshot_q = " << cfg.snapshot_q << "\n";
    o << "snapshot_u = " << cfg.snapshot_u << "\n";
    o << "stripe_angle = " << cfg.stripe_angle << "\n";
    o << "stripe_modulation = " << cfg.stripe_modulation << "\n";
    o << "[model]\n";
    o << "Gamma = " << cfg.model.Gamma << "\n";
    o << "L = " << cfg.model.L << "\n";
    o << "a = " << cfg.model.a << "\n";
    o << "b = " << cfg.model.b << "\n";
    o << "c = " << cfg.model.c << "\n";
    o << "d_target = " << cfg.model.d_target << "\n";
    o << "lambda = " << cfg.model.lambda << "\n";
    o << "nu = " << cfg.model.nu << "\n";
    o << "xi = " << cfg.model.xi << "\n";
    o << "xi0_threshold = " << cfg.model.xi0_threshold << "\n";
    o << "[regularization]\n";
    o << "enabled = " << (cfg.stepper.reg.enabled ? "true" : "false") << "\n";
    o << "eps = " << cfg.stepper.reg.eps << "\n";
    o << "n = " << cfg.stepper.reg.n << "\n";
    o << "[stepper]\n";
    o << "T_final = " << cfg.stepper.t_final << "\n";
    o << "cadence = " << cfg.stepper.cadence << "\n";
    o << "dt = " << cfg.stepper.dt << "\n";
    o << "implicit_bulk_a = " << (cfg.stepper.implicit_bulk_a ? "true" : "false")
      << "\n";
    o << "scheme = " << (cfg.stepper.scheme == Scheme::imex1 ? "imex1" : "imex2")
      << "\n";
    // the output block is intentionally not part of the canonical text: the
    // provenance hash identifies the run, not where its files landed
    return o.str();
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream o;
    o << std::hex << h;
    return o.str();
}

SimState make_initial_state(const RunConfig& cfg) {
    GridPtr grid = make_grid(cfg.d, cfg.n_axis, cfg.l_box);
    const int dt = cfg.model.d_target;
    SimState s;
    s.t = 0.0;
    if (cfg.generator == "random-bandlimited") {
        s.Q = random_qtensor(grid, dt, cfg.seed * 2 + 1, cfg.amplitude_q,
                             cfg.slope, cfg.kmax);
        s.u = random_velocity(grid, cfg.seed * 2 + 2, cfg.amplitude_u, cfg.slope,
                              cfg.kmax);
    } else if (cfg.generator == "taylor-green") {
        s.Q = random_qtensor(grid, dt, cfg.seed * 2 + 1, cfg.amplitude_q,
                             cfg.slope, cfg.kmax);
        s.u = taylor_green_velocity(grid, cfg.amplitude_u);
    } else if (cfg.generator == "uniaxial-stripe") {
        s.Q = uniaxial_stripe_q(grid, dt, cfg.amplitude_q, cfg.stripe_modulation,
                                cfg.stripe_angle);
        s.u = random_velocity(grid, cfg.seed * 2 + 2, cfg.amplitude_u, cfg.slope,
                              cfg.kmax);
    } else {  // snapshot
        SnapshotData q = read_snapshot(cfg.snapshot_q);
        SnapshotData u = read_snapshot(cfg.snapshot_u);
        if (!(*q.field.grid() == *u.field.grid()))
            throw std::runtime_error("snapshot initial data on different grids");
        s.Q = symmetrize_tracefree(q.field);
        s.u = leray_project(u.field);
        s.Q.apply_dealias();
        s.u.apply_dealias();
        s.t = q.time;
    }
    return s;
}

}  // namespace qtf
