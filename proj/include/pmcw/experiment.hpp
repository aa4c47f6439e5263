// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/compensation.hpp"
#include "pmcw/dsp.hpp"
#include "pmcw/scene.hpp"
#include "pmcw/txrx.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmcw {

struct NodeConfig {
    std::size_t id = 1;
    Vec2 position;
    Vec2 boresight{0.0, 1.0};
    double tx_power_dbm = 10.0;
    double gain_boresight_db = 10.0;
    double gain_90_db = -7.0;
};

/**
 * @brief Everything one run needs, as read from a config file.
 *
 * Config files are line-oriented `key = value` text with `[section]` headers:
 * [waveform], [pn], [seeds], [pipeline], [outputs], [noise], and one [node]
 * or [target] header per radar or target. Relative paths resolve against the
 * config file's directory. See config/reference.cfg for every key.
 */
struct ExperimentConfig {
    std::filesystem::path base_dir = ".";

    // [waveform]
    double carrier_hz = 79e9;
    double chip_s = 1e-9;
    std::size_t code_length = 504;
    std::size_t bursts = 256;
    std::string code = "p3"; ///< "p3" or "file"
    std::filesystem::path code_file;

    // [pn]
    bool pn_enabled = true;
    ModulationMode pn_mode = ModulationMode::Exact;
    std::filesystem::path mask_file; ///< empty: built-in default mask
    double pn_f_max_hz = 100e6;
    double pn_duration_s = 0.0; ///< 0: the frame duration

    // [seeds]
    std::uint64_t master_seed = 1;

    // [pipeline]
    bool compensation = true;
    Window window = Window::None;

    // [outputs]
    std::filesystem::path out_dir = "out";
    bool write_csv = true;
    bool write_binary = true;
    bool write_heatmap = true;
    bool write_raw = false;

    // [noise]
    ThermalNoise thermal;

    std::vector<NodeConfig> nodes;
    std::vector<Target> targets;

    std::filesystem::path resolve(const std::filesystem::path& p) const;
    double frame_duration() const { return chip_s * static_cast<double>(code_length * bursts); }
};

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Per-radar PLL seed: master XOR radar id.
inline std::uint64_t radar_seed(std::uint64_t master, std::size_t radar_id)
{
    return master ^ static_cast<std::uint64_t>(radar_id);
}

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity;
    std::string code;
    std::string message;
};

/// Static checks, without simulating anything.
std::vector<Diagnostic> validate(const ExperimentConfig& config);
std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics);

/// Builds the scenario, synthesizing one PLL per radar when PN is enabled.
Scenario build_scenario(const ExperimentConfig& config);

struct PipelineOptions {
    bool compensation = true;
    Window window = Window::None;
    double los_gate_db = kLosGateDb;
};

struct RemoteCompensation {
    std::size_t tx_id = 0;
    BinRange section;
    LosDetection los;
    std::size_t expected_los_bin = 0; ///< from geometry: floor(tau_los / T_c) + section offset
    PnVector pn;
    bool applied = false;
};

struct RadarOutput {
    std::size_t rx_id = 1;
    std::vector<PropagationPath> paths;
    BasebandFrame frame;
    RangeSlowTimeMatrix rst;
    RangeSlowTimeMatrix rst_compensated;
    RangeDopplerMap rdm_pre;
    RangeDopplerMap rdm_post;
    std::vector<RemoteCompensation> remotes;
};

/// Range bin where a path's return appears at its receiver.
std::size_t path_range_bin(const Scenario& scenario, const PropagationPath& path);

/**
 * @brief Range processing, LOS-based compensation of every remote section,
 * then Doppler processing, for one receiving radar.
 *
 * Compensation runs only when requested and the scenario has phase noise.
 * Throws LosNotFound when a remote LOS does not clear the detection gate.
 */
RadarOutput process_radar(const Scenario& scenario, std::size_t rx_id, const PipelineOptions& options);

struct RadarMetrics {
    std::size_t rx_id = 1;
    double noise_floor_pre_db = 0.0;
    double noise_floor_post_db = 0.0;
    struct Row {
        std::string kind;
        std::size_t tx_id;
        std::size_t bin;
        double ridge_pre_db;
        double ridge_post_db;
    };
    std::vector<Row> rows;
    std::vector<RemoteCompensation> remotes;
    double link_ratio_db = 0.0;    ///< los_to_mono_ratio from config values
    double path_ratio_db = 0.0;    ///< simulated LOS power minus mono power (first target)
};

RadarMetrics compute_metrics(const Scenario& scenario, const RadarOutput& out);

struct RunOptions {
    std::size_t threads = 1;
};

struct ExperimentResult {
    std::vector<RadarOutput> radars;
    std::vector<RadarMetrics> metrics;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes every artifact under config.out_dir; returns the metrics report text (JSON).
std::string write_outputs(const ExperimentConfig& config, const ExperimentResult& result);
std::string metrics_json(const ExperimentConfig& config, const ExperimentResult& result);

} // namespace pmcw
