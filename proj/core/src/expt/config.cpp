#include "f2f/expt/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "f2f/error.hpp"

namespace f2f::expt {

using Json = nlohmann::ordered_json;

namespace {

/// Reads fields from one JSON object, remembering which keys were used so
/// that leftovers can be reported as unknown.
class Section {
public:
    Section(const Json& parent, const std::string& key, std::string path) : path_(std::move(path)) {
        if (parent.contains(key)) {
            node_ = &parent.at(key);
            if (!node_->is_object()) throw ConfigError(path_ + " must be an object");
        }
    }
    explicit Section(const Json& node, std::string path) : node_(&node), path_(std::move(path)) {
        if (!node.is_object()) throw ConfigError(path_ + " must be an object");
    }

    template <typename T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (node_ == nullptr || !node_->contains(key)) return;
        try {
            out = node_->at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    const Json* child(const std::string& key) {
        seen_.insert(key);
        if (node_ == nullptr || !node_->contains(key)) return nullptr;
        return &node_->at(key);
    }

    const std::string& path() const { return path_; }

    void finish() const {
        if (node_ == nullptr) return;
        for (const auto& item : node_->items()) {
            if (!seen_.count(item.key())) throw ConfigError("unknown config key " + path_ + "." + item.key());
        }
    }

private:
    const Json* node_ = nullptr;
    std::string path_;
    std::set<std::string> seen_;
};

std::string balance_name(meas::BalanceRef b) { return b == meas::BalanceRef::MeanN ? "mean-n" : "exact-n"; }

meas::BalanceRef parse_balance(const std::string& s) {
    if (s == "mean-n") return meas::BalanceRef::MeanN;
    if (s == "exact-n") return meas::BalanceRef::ExactN;
    throw ConfigError("interferometer.balance must be \"mean-n\" or \"exact-n\", got \"" + s + "\"");
}

std::string schedule_name(meas::PhiSchedule::Kind k) {
    switch (k) {
        case meas::PhiSchedule::Kind::Constant: return "constant";
        case meas::PhiSchedule::Kind::Linear: return "linear";
        case meas::PhiSchedule::Kind::Quadratic: return "quadratic";
    }
    return "constant";
}

meas::PhiSchedule::Kind parse_schedule(const std::string& s) {
    if (s == "constant") return meas::PhiSchedule::Kind::Constant;
    if (s == "linear") return meas::PhiSchedule::Kind::Linear;
    if (s == "quadratic") return meas::PhiSchedule::Kind::Quadratic;
    throw ConfigError("interferometer.phi.kind must be constant, linear or quadratic, got \"" + s + "\"");
}

std::string laser_name(meas::LaserInput l) { return l == meas::LaserInput::FixedM ? "fixed-m" : "poissonian"; }

meas::LaserInput parse_laser(const std::string& s) {
    if (s == "fixed-m") return meas::LaserInput::FixedM;
    if (s == "poissonian") return meas::LaserInput::Poissonian;
    throw ConfigError("laser.input must be \"fixed-m\" or \"poissonian\", got \"" + s + "\"");
}

std::string count_name(meas::CountModel::Kind k) { return k == meas::CountModel::Kind::Fixed ? "fixed" : "poisson"; }

meas::CountModel::Kind parse_count(const std::string& s) {
    if (s == "fixed") return meas::CountModel::Kind::Fixed;
    if (s == "poisson") return meas::CountModel::Kind::Poisson;
    throw ConfigError("counts.model must be \"fixed\" or \"poisson\", got \"" + s + "\"");
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["comb"] = {{"center_index", c.comb.center_index},
                 {"width", c.comb.width},
                 {"n_lines", c.comb.n_lines},
                 {"delta", c.comb.delta},
                 {"field_scale", c.comb.field_scale}};
    const auto& ic = c.interferometer;
    j["interferometer"] = {{"xi2", ic.xi2},
                           {"detune", ic.detune},
                           {"balance", balance_name(ic.balance)},
                           {"phi",
                            {{"kind", schedule_name(ic.phi.kind)},
                             {"phi0", ic.phi.phi0},
                             {"rate", ic.phi.rate},
                             {"chirp", ic.phi.chirp}}},
                           {"randomize_phi", ic.randomize_phi},
                           {"n_min", ic.n_min}};
    j["laser"] = {{"input", laser_name(c.laser.input)}, {"mean_n", c.laser.mean_n}};
    j["counts"] = {{"model", count_name(c.counts.kind)}, {"mean", c.counts.mean}};
    j["run"] = {{"pulses", c.run.pulses},
                {"trajectories", c.run.trajectories},
                {"seed", c.run.seed},
                {"force_balanced_first_pulse", c.run.force_balanced_first_pulse},
                {"threads", c.run.threads}};
    j["calibration"] = {{"discard", c.calibration.discard},
                        {"grid_points", c.calibration.grid_points},
                        {"min_visibility", c.calibration.min_visibility},
                        {"stride", c.calibration.stride}};
    j["emergence"] = {{"trace_pulses", c.emergence.trace_pulses},
                      {"trace_points", c.emergence.trace_points},
                      {"track_gamma_fidelity", c.emergence.track_gamma_fidelity}};
    j["visibility"] = {{"n_min_values", c.visibility.n_min_values}};
    Json cases = Json::array();
    for (const auto& oc : c.oracle.cases) cases.push_back({{"m", oc.m}, {"n1", oc.n1}, {"n2", oc.n2}});
    j["oracle"] = {{"cases", cases}, {"phi", c.oracle.phi}, {"max_infidelity", c.oracle.max_infidelity}};
    j["output"] = {{"dir", c.output.dir}, {"format", c.output.format}};
    return j;
}

ExperimentConfig from_json(const Json& root) {
    if (!root.is_object()) throw ConfigError("config root must be an object");
    ExperimentConfig c;
    Section top(root, "config");
    top.child("meta");  // written alongside run outputs; ignored on input

    Section comb(root, "comb", "comb");
    top.child("comb");
    comb.get("center_index", c.comb.center_index);
    comb.get("width", c.comb.width);
    comb.get("n_lines", c.comb.n_lines);
    comb.get("delta", c.comb.delta);
    comb.get("field_scale", c.comb.field_scale);
    comb.finish();

    Section itf(root, "interferometer", "interferometer");
    top.child("interferometer");
    auto& ic = c.interferometer;
    itf.get("xi2", ic.xi2);
    itf.get("detune", ic.detune);
    std::string balance = balance_name(ic.balance);
    itf.get("balance", balance);
    ic.balance = parse_balance(balance);
    if (const Json* phi = itf.child("phi")) {
        Section ps(*phi, "interferometer.phi");
        std::string kind = schedule_name(ic.phi.kind);
        ps.get("kind", kind);
        ic.phi.kind = parse_schedule(kind);
        ps.get("phi0", ic.phi.phi0);
        ps.get("rate", ic.phi.rate);
        ps.get("chirp", ic.phi.chirp);
        ps.finish();
    }
    itf.get("randomize_phi", ic.randomize_phi);
    itf.get("n_min", ic.n_min);
    itf.finish();

    Section laser(root, "laser", "laser");
    top.child("laser");
    std::string input = laser_name(c.laser.input);
    laser.get("input", input);
    c.laser.input = parse_laser(input);
    laser.get("mean_n", c.laser.mean_n);
    laser.finish();

    Section counts(root, "counts", "counts");
    top.child("counts");
    std::string model = count_name(c.counts.kind);
    counts.get("model", model);
    c.counts.kind = parse_count(model);
    counts.get("mean", c.counts.mean);
    counts.finish();

    Section run(root, "run", "run");
    top.child("run");
    run.get("pulses", c.run.pulses);
    run.get("trajectories", c.run.trajectories);
    run.get("seed", c.run.seed);
    run.get("force_balanced_first_pulse", c.run.force_balanced_first_pulse);
    run.get("threads", c.run.threads);
    run.finish();

    Section cal(root, "calibration", "calibration");
    top.child("calibration");
    cal.get("discard", c.calibration.discard);
    cal.get("grid_points", c.calibration.grid_points);
    cal.get("min_visibility", c.calibration.min_visibility);
    cal.get("stride", c.calibration.stride);
    cal.finish();

    Section em(root, "emergence", "emergence");
    top.child("emergence");
    em.get("trace_pulses", c.emergence.trace_pulses);
    em.get("trace_points", c.emergence.trace_points);
    em.get("track_gamma_fidelity", c.emergence.track_gamma_fidelity);
    em.finish();

    Section vis(root, "visibility", "visibility");
    top.child("visibility");
    vis.get("n_min_values", c.visibility.n_min_values);
    vis.finish();

    Section orc(root, "oracle", "oracle");
    top.child("oracle");
    if (const Json* cases = orc.child("cases")) {
        if (!cases->is_array()) throw ConfigError("oracle.cases must be an array");
        c.oracle.cases.clear();
        for (const auto& item : *cases) {
            Section cs(item, "oracle.cases[]");
            OracleCase oc;
            cs.get("m", oc.m);
            cs.get("n1", oc.n1);
            cs.get("n2", oc.n2);
            cs.finish();
            c.oracle.cases.push_back(oc);
        }
    }
    orc.get("phi", c.oracle.phi);
    orc.get("max_infidelity", c.oracle.max_infidelity);
    orc.finish();

    Section out(root, "output", "output");
    top.child("output");
    out.get("dir", c.output.dir);
    out.get("format", c.output.format);
    out.finish();

    top.finish();
    return c;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto config = from_json(root);
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

void validate(const ExperimentConfig& c) {
    (void)make_comb(c);
    const auto& ic = c.interferometer;
    require(ic.xi2 >= 0.0 && std::isfinite(ic.xi2), "interferometer.xi2 must be finite and >= 0");
    require(ic.detune >= 0.0 && std::isfinite(ic.detune), "interferometer.detune must be finite and >= 0");
    require(ic.xi2 > 0.0, "interferometer.xi2 must be positive (xi1 is derived from it)");
    require(std::isfinite(ic.phi.phi0) && std::isfinite(ic.phi.rate) && std::isfinite(ic.phi.chirp),
            "interferometer.phi values must be finite");
    require(ic.n_min >= 0, "interferometer.n_min must be >= 0");
    require(c.laser.mean_n >= 1.0 && c.laser.mean_n < 2.0e9, "laser.mean_n must lie in [1, 2e9)");
    require(c.counts.mean >= 0.0 && std::isfinite(c.counts.mean), "counts.mean must be finite and >= 0");
    require(c.run.pulses >= 0, "run.pulses must be >= 0");
    require(c.run.trajectories >= 1, "run.trajectories must be >= 1");
    require(c.run.threads >= 0, "run.threads must be >= 0");
    require(c.calibration.discard >= 0, "calibration.discard must be >= 0");
    require(c.calibration.grid_points >= 16, "calibration.grid_points must be >= 16");
    require(c.calibration.min_visibility >= 0.0 && c.calibration.min_visibility <= 1.0,
            "calibration.min_visibility must lie in [0, 1]");
    require(c.calibration.stride >= 1, "calibration.stride must be >= 1");
    for (int p : c.emergence.trace_pulses) {
        require(p >= 0 && p <= c.run.pulses, "emergence.trace_pulses entries must lie in [0, run.pulses]");
    }
    require(c.emergence.trace_points >= 2, "emergence.trace_points must be >= 2");
    require(!c.visibility.n_min_values.empty(), "visibility.n_min_values must not be empty");
    for (int v : c.visibility.n_min_values) require(v >= 0, "visibility.n_min_values entries must be >= 0");
    for (const auto& oc : c.oracle.cases) {
        require(oc.n1 >= 0 && oc.n2 >= 0, "oracle case counts must be >= 0");
        require(oc.m > 2LL * (oc.n1 + oc.n2), "oracle case needs m > 2(n1 + n2)");
    }
    require(c.oracle.max_infidelity > 0.0, "oracle.max_infidelity must be positive");
    require(c.output.format == "csv" || c.output.format == "json", "output.format must be \"csv\" or \"json\"");
}

std::string fingerprint(const ExperimentConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

comb::CombMode make_comb(const ExperimentConfig& c) {
    return comb::build_comb(c.comb.center_index, c.comb.width, c.comb.n_lines, c.comb.delta, c.comb.field_scale);
}

meas::TrajectorySpec trajectory_spec(const ExperimentConfig& c) {
    meas::TrajectorySpec s;
    s.comb = make_comb(c);
    s.xi2 = c.interferometer.xi2;
    s.detune = c.interferometer.detune;
    s.balance_ref = c.interferometer.balance;
    s.phi = c.interferometer.phi;
    s.randomize_phi = c.interferometer.randomize_phi;
    s.n_min = c.interferometer.n_min;
    s.laser = c.laser.input;
    s.mean_n = c.laser.mean_n;
    s.counts = c.counts;
    s.pulses = c.run.pulses;
    s.force_balanced_first_pulse = c.run.force_balanced_first_pulse;
    s.trace_pulses = c.emergence.trace_pulses;
    s.trace_points = c.emergence.trace_points;
    return s;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return dump_config(a) == dump_config(b); }

}  // namespace f2f::expt
