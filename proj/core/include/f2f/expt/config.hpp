#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "f2f/comb.hpp"
#include "f2f/meas.hpp"

namespace f2f::expt {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";
/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "F2F_OUTPUT_ROOT";

struct CombConfig {
    int center_index = 40;
    double width = 6.0;
    int n_lines = 49;
    double delta = 0.0;
    double field_scale = 1.0;
};

struct InterferometerConfig {
    double xi2 = 1.0;
    double detune = 1.0;  // xi1 = detune * sqrt(reference n) * xi2
    meas::BalanceRef balance = meas::BalanceRef::MeanN;
    meas::PhiSchedule phi;
    bool randomize_phi = false;
    int n_min = 0;
};

struct LaserConfig {
    meas::LaserInput input = meas::LaserInput::FixedM;
    double mean_n = 1e4;
};

struct RunConfig {
    int pulses = 64;
    int trajectories = 1;
    std::uint64_t seed = 1;
    bool force_balanced_first_pulse = false;
    int threads = 0;  // 0 = hardware concurrency
};

struct CalibrationConfig {
    int discard = 10;
    int grid_points = 1024;
    double min_visibility = 0.05;
    int stride = 1;  // use every stride-th pulse after the transient
};

struct EmergenceConfig {
    std::vector<int> trace_pulses{0, 2, 10, 20};
    int trace_points = 512;
    bool track_gamma_fidelity = true;
};

struct VisibilityConfig {
    std::vector<int> n_min_values{0, 50, 100};
};

struct OracleCase {
    long long m = 200;
    int n1 = 4;
    int n2 = 4;
};

struct OracleConfig {
    std::vector<OracleCase> cases{{200, 4, 4}, {2000, 6, 2}};
    double phi = 0.3;
    double max_infidelity = 1e-10;
};

struct OutputConfig {
    std::string dir;  // empty: $F2F_OUTPUT_ROOT/<command>-<fingerprint>-seed<seed>
    std::string format = "csv";
};

struct ExperimentConfig {
    CombConfig comb;
    InterferometerConfig interferometer;
    LaserConfig laser;
    meas::CountModel counts;
    RunConfig run;
    CalibrationConfig calibration;
    EmergenceConfig emergence;
    VisibilityConfig visibility;
    OracleConfig oracle;
    OutputConfig output;
};

/// Parses the JSON config text. Missing keys take defaults; unknown keys
/// and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with stable key order; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

/// Throws ConfigError on any violated module precondition.
void validate(const ExperimentConfig& config);

/// 16 hex digits of FNV-1a over the canonical dump.
std::string fingerprint(const ExperimentConfig& config);

comb::CombMode make_comb(const ExperimentConfig& config);
meas::TrajectorySpec trajectory_spec(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace f2f::expt
