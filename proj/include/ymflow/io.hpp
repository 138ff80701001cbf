#pragma once

#include <optional>
#include <string>

#include "ymflow/flow.hpp"
#include "ymflow/gauge.hpp"

namespace ymflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InitSpec {
    std::string kind = "zero";  // zero | fourier-smooth | rough-gauge | snapshot
    std::uint64_t seed = 1;
    double amplitude = 0.1;
    double roughness_p = 3.1;
    double perturb_amplitude = 0.0;
    int max_mode = 2;
    int mc_dir = 0;
    std::string snapshot_path;
};

struct RunConfig {
    std::string group = "su2";  // u1 | su2
    GridSpec grid{{8, 8, 8}, 0.125, Bc::Periodic};
    InitSpec init;
    double t_max = 0.1;
    double cfl_safety = 0.1;
    std::optional<double> dt;
    long record_every = 1;
    double geo_ratio = 1.189207115002721;
    int n_max = 0;
    double kappa = 1.0;
    std::string out_dir = ".";

    GroupSpec group_spec() const;
    GfsConstants gfs() const { return GfsConstants::make(kappa, group_spec()); }
    void validate() const;
};

RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);
std::string canonical_config_json(const RunConfig& c);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& c);

/// Build the configured initial connection (may read a snapshot).
Connection build_initial_data(const RunConfig& c);

// --- CSV series -------------------------------------------------------------

void write_series(const std::string& path, const FlowSeries& s);
FlowSeries read_series(const std::string& path);

// --- binary snapshots --------------------------------------------------------

void write_snapshot(const std::string& path, const Connection& A, double t);
struct Snapshot {
    Connection A;
    double t = 0.0;
};
Snapshot read_snapshot(const std::string& path);

/// Atomic text write (temp file + rename).
void write_text_file(const std::string& path, const std::string& content);

std::string bc_name(Bc bc);
Bc bc_from_name(const std::string& s);

}  // namespace ymflow
