#include "f2f/expt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "f2f/error.hpp"
#include "f2f/expt/pipeline.hpp"
#include "f2f/stats.hpp"

namespace f2f::expt {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::optional<int> trajectories;
    bool quiet = false;
};

Json meta_json(const RunMeta& meta) {
    return {{"command", meta.command},
            {"fingerprint", meta.fingerprint},
            {"seed", meta.seed},
            {"version", meta.version},
            {"schema", meta.schema}};
}

/// JSON cannot carry NaN; such entries become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

ExperimentConfig effective_config(const Options& opts) {
    auto config = load_config(opts.config_path);
    if (opts.seed) config.run.seed = *opts.seed;
    if (opts.trajectories) config.run.trajectories = *opts.trajectories;
    if (!opts.format.empty()) config.output.format = opts.format;
    validate(config);
    return config;
}

std::filesystem::path run_directory(const ExperimentConfig& config, const Options& opts, const std::string& command) {
    std::filesystem::path dir;
    if (!opts.out.empty()) {
        dir = opts.out;
    } else if (!config.output.dir.empty()) {
        dir = config.output.dir;
    } else {
        const char* root = std::getenv(kOutputRootEnv);
        dir = std::filesystem::path(root && *root ? root : "runs") /
              (command + "-" + fingerprint(config) + "-seed" + std::to_string(config.run.seed));
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_config(const std::filesystem::path& dir, const ExperimentConfig& config, const RunMeta& meta) {
    auto j = Json::parse(dump_config(config));
    Json wrapped;
    wrapped["meta"] = meta_json(meta);
    for (auto& [k, v] : j.items()) wrapped[k] = v;
    write_text(dir / "config.json", wrapped.dump(2) + "\n");
}

void write_summary(const std::filesystem::path& dir, const RunMeta& meta, Json body) {
    Json j;
    j["meta"] = meta_json(meta);
    for (auto& [k, v] : body.items()) j[k] = v;
    write_text(dir / "summary.json", j.dump(2) + "\n");
}

Json fit_json(const CalibrationFit& f) {
    return {{"delta", f.delta},         {"offset", f.offset},   {"amplitude", f.amplitude},
            {"theta0", f.theta0},       {"visibility", f.visibility}, {"rms_residual", f.rms_residual},
            {"samples", f.samples},     {"accepted", f.accepted},     {"diagnostic", f.diagnostic}};
}

int cmd_calibrate(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto config = effective_config(opts);
    const auto meta = make_meta(config, "calibrate");
    const auto dir = run_directory(config, opts, "calibrate");
    write_config(dir, config, meta);

    CalibrationReport report;
    try {
        report = calibration_scan(config);
    } catch (const NumericalError& e) {
        write_summary(dir, meta, {{"status", "numerical-failure"}, {"error", e.what()}});
        err << "calibrate: " << e.what() << "\n";
        return kExitNumerical;
    }
    write_table(dir / "pulses", pulses_table(report.records), meta, config.output.format);

    Json fits = Json::array();
    for (const auto& f : report.fits) fits.push_back(fit_json(f));
    const bool ok = report.all_accepted();
    write_summary(dir, meta,
                  {{"status", ok ? "ok" : "fit-rejected"},
                   {"model", "rate(N) = A + B cos(theta0 + phi_N - 2 pi delta (N-1) / f_rep), rate = n1/(n1+n2)"},
                   {"configured_delta", report.configured_delta},
                   {"discard", report.discard},
                   {"stride", report.stride},
                   {"fits", fits}});
    if (!opts.quiet) {
        for (std::size_t i = 0; i < report.fits.size(); ++i) {
            const auto& f = report.fits[i];
            out << "trajectory " << i << ": delta=" << f.delta << " visibility=" << f.visibility
                << " rms=" << f.rms_residual << (f.accepted ? "" : "  REJECTED") << "\n";
        }
        out << "wrote " << dir.string() << "\n";
    }
    if (!ok) {
        for (const auto& f : report.fits) {
            if (!f.accepted) err << "calibrate: " << f.diagnostic << "\n";
        }
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_emerge(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto config = effective_config(opts);
    const auto meta = make_meta(config, "emerge");
    const auto dir = run_directory(config, opts, "emerge");
    write_config(dir, config, meta);

    const auto report = field_emergence_report(config);
    write_table(dir / "pulses", pulses_table(report.records), meta, config.output.format);
    write_table(dir / "field_traces", field_traces_table(report.records), meta, config.output.format);

    Json trajectories = Json::array();
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        Json traces = Json::array();
        for (const auto& t : report.traces[i]) {
            traces.push_back({{"after_pulse", t.after_pulse},
                              {"peak_abs_field", t.peak_abs_field},
                              {"coherent_peak", t.coherent_peak},
                              {"mean_n", t.mean_n},
                              {"abs_b", t.abs_b}});
        }
        Json fid = Json::array();
        for (double f : report.records[i].gamma_fidelity) fid.push_back(number(f));
        trajectories.push_back({{"trajectory", report.records[i].index},
                                {"initial_m", report.records[i].trajectory.initial_m},
                                {"phi_offset", report.records[i].trajectory.phi_offset},
                                {"localized_phase", report.final_phases[i]},
                                {"exhausted", report.records[i].trajectory.exhausted},
                                {"gamma_fidelity", fid},
                                {"traces", traces}});
    }
    write_summary(dir, meta,
                  {{"status", report.any_exhausted ? "exhausted" : "ok"},
                   {"rayleigh_p", report.rayleigh_p},
                   {"trajectories", trajectories}});
    if (!opts.quiet) {
        out << "trajectories: " << report.records.size() << "  Rayleigh p of localized phases: " << report.rayleigh_p
            << "\n";
        out << "wrote " << dir.string() << "\n";
    }
    if (report.any_exhausted) {
        err << "emerge: a trajectory ran out of photons\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_visibility(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto config = effective_config(opts);
    const auto meta = make_meta(config, "visibility");
    const auto dir = run_directory(config, opts, "visibility");
    write_config(dir, config, meta);

    std::vector<VisibilityPoint> points;
    try {
        points = visibility_sweep(config);
    } catch (const NumericalError& e) {
        write_summary(dir, meta, {{"status", "numerical-failure"}, {"error", e.what()}});
        err << "visibility: " << e.what() << "\n";
        return kExitNumerical;
    }
    Table t;
    t.columns = {"n_min", "mean_visibility", "measured_ratio", "expected_ratio", "mean_delta", "rejected"};
    int rejected = 0;
    for (const auto& p : points) {
        t.add_row({static_cast<long long>(p.n_min), p.mean_visibility, p.measured_ratio, p.expected_ratio,
                   p.mean_delta, static_cast<long long>(p.rejected)});
        rejected += p.rejected;
    }
    write_table(dir / "visibility", t, meta, config.output.format);
    write_summary(dir, meta, {{"status", rejected ? "fit-rejected" : "ok"}, {"rejected_fits", rejected}});
    if (!opts.quiet) {
        for (const auto& p : points) {
            out << "n_min=" << p.n_min << " visibility=" << p.mean_visibility << " ratio=" << p.measured_ratio
                << " expected=" << p.expected_ratio << "\n";
        }
        out << "wrote " << dir.string() << "\n";
    }
    if (rejected) {
        err << "visibility: " << rejected << " calibration fit(s) rejected\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_oracle(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto config = effective_config(opts);
    const auto meta = make_meta(config, "oracle");
    const auto dir = run_directory(config, opts, "oracle");
    write_config(dir, config, meta);

    const auto results = run_oracle(config);
    Table t;
    t.columns = {"m", "n1", "n2", "fidelity", "infidelity"};
    double worst = 0.0;
    for (const auto& r : results) {
        t.add_row({r.c.m, static_cast<long long>(r.c.n1), static_cast<long long>(r.c.n2), r.fidelity, r.infidelity});
        worst = std::max(worst, r.infidelity);
    }
    write_table(dir / "oracle", t, meta, config.output.format);
    const bool ok = worst <= config.oracle.max_infidelity;
    write_summary(dir, meta,
                  {{"status", ok ? "ok" : "bound-exceeded"},
                   {"max_infidelity", worst},
                   {"bound", config.oracle.max_infidelity}});
    if (!opts.quiet) {
        for (const auto& r : results) {
            out << "m=" << r.c.m << " n1=" << r.c.n1 << " n2=" << r.c.n2 << " infidelity=" << r.infidelity << "\n";
        }
    }
    out << "max infidelity " << worst << (ok ? " <= " : " > ") << config.oracle.max_infidelity << "\n";
    if (!ok) {
        err << "oracle: binomial expansion disagrees with direct application\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_validate(const Options& opts, std::ostream& out) {
    const auto config = effective_config(opts);
    if (!opts.quiet) out << "ok " << fingerprint(config) << "\n";
    return kExitOk;
}

void add_common(CLI::App* sub, Options& opts) {
    sub->add_option("config", opts.config_path, "Experiment config (JSON)")->required();
    sub->add_option("--seed", opts.seed, "Override run.seed");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--format", opts.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--trajectories", opts.trajectories, "Override run.trajectories")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opts.quiet, "Suppress progress output");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulates carrier-envelope phase emergence from photon-number states under f:2f detection", "f2f"};
    app.require_subcommand(1);
    Options opts;
    auto* calibrate = app.add_subcommand("calibrate", "Fit the offset frequency from simulated D1 rates");
    auto* emerge = app.add_subcommand("emerge", "Trace field emergence and Gamma-branch fidelity");
    auto* visibility = app.add_subcommand("visibility", "Fitted visibility against background counts");
    auto* oracle = app.add_subcommand("oracle", "Binomial expansion against direct operator application");
    auto* validate_cmd = app.add_subcommand("validate-config", "Parse and validate a config");
    for (auto* sub : {calibrate, emerge, visibility, oracle, validate_cmd}) add_common(sub, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitConfig;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(opts, out, err);
        if (emerge->parsed()) return cmd_emerge(opts, out, err);
        if (visibility->parsed()) return cmd_visibility(opts, out, err);
        if (oracle->parsed()) return cmd_oracle(opts, out, err);
        if (validate_cmd->parsed()) return cmd_validate(opts, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

}  // namespace f2f::expt
