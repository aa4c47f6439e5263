// SPDX-License-Identifier: Apache-2.0
#include "pmcw/experiment.hpp"

#include "pmcw/error.hpp"
#include "pmcw/io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace pmcw {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(std::size_t line, const std::string& msg)
{
    throw Error(ErrorCode::ConfigError, fmt::format("line {}: {}", line, msg));
}

double to_double(std::string_view v, std::size_t line)
{
    std::string s(v);
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(d))
            throw std::invalid_argument(s);
        return d;
    } catch (const std::exception&) {
        config_error(line, fmt::format("'{}' is not a number", s));
    }
}

std::uint64_t to_u64(std::string_view v, std::size_t line)
{
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        config_error(line, fmt::format("'{}' is not a non-negative integer", v));
    return out;
}

std::size_t to_size(std::string_view v, std::size_t line) { return static_cast<std::size_t>(to_u64(v, line)); }

bool to_bool(std::string_view v, std::size_t line)
{
    if (v == "true" || v == "yes" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "off" || v == "0")
        return false;
    config_error(line, fmt::format("'{}' is not a boolean", v));
}

Vec2 to_vec2(std::string_view v, std::size_t line)
{
    const auto comma = v.find(',');
    if (comma == std::string_view::npos)
        config_error(line, fmt::format("'{}' is not an 'x, y' pair", v));
    return {to_double(trim(v.substr(0, comma)), line), to_double(trim(v.substr(comma + 1)), line)};
}

Window to_window(std::string_view v, std::size_t line)
{
    if (v == "none")
        return Window::None;
    if (v == "hann")
        return Window::Hann;
    config_error(line, fmt::format("unknown window '{}'", v));
}

ModulationMode to_mode(std::string_view v, std::size_t line)
{
    if (v == "exact")
        return ModulationMode::Exact;
    if (v == "linearized")
        return ModulationMode::Linearized;
    config_error(line, fmt::format("unknown pn mode '{}'", v));
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::size_t)>;

const std::map<std::string, std::map<std::string, Setter>>& setters()
{
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"waveform",
         {
             {"carrier_hz", [](auto& c, auto v, auto l) { c.carrier_hz = to_double(v, l); }},
             {"chip_s", [](auto& c, auto v, auto l) { c.chip_s = to_double(v, l); }},
             {"code_length", [](auto& c, auto v, auto l) { c.code_length = to_size(v, l); }},
             {"bursts", [](auto& c, auto v, auto l) { c.bursts = to_size(v, l); }},
             {"code",
              [](auto& c, auto v, auto l) {
                  if (v != "p3" && v != "file")
                      config_error(l, fmt::format("code must be 'p3' or 'file', got '{}'", v));
                  c.code = std::string(v);
              }},
             {"code_file", [](auto& c, auto v, auto) { c.code_file = std::string(v); }},
         }},
        {"pn",
         {
             {"enabled", [](auto& c, auto v, auto l) { c.pn_enabled = to_bool(v, l); }},
             {"mode", [](auto& c, auto v, auto l) { c.pn_mode = to_mode(v, l); }},
             {"mask_file", [](auto& c, auto v, auto) { c.mask_file = std::string(v); }},
             {"f_max_hz", [](auto& c, auto v, auto l) { c.pn_f_max_hz = to_double(v, l); }},
             {"duration_s", [](auto& c, auto v, auto l) { c.pn_duration_s = to_double(v, l); }},
         }},
        {"seeds", {{"master", [](auto& c, auto v, auto l) { c.master_seed = to_u64(v, l); }}}},
        {"pipeline",
         {
             {"compensation", [](auto& c, auto v, auto l) { c.compensation = to_bool(v, l); }},
             {"window", [](auto& c, auto v, auto l) { c.window = to_window(v, l); }},
         }},
        {"outputs",
         {
             {"dir", [](auto& c, auto v, auto) { c.out_dir = std::string(v); }},
             {"csv", [](auto& c, auto v, auto l) { c.write_csv = to_bool(v, l); }},
             {"binary", [](auto& c, auto v, auto l) { c.write_binary = to_bool(v, l); }},
             {"heatmap", [](auto& c, auto v, auto l) { c.write_heatmap = to_bool(v, l); }},
             {"raw", [](auto& c, auto v, auto l) { c.write_raw = to_bool(v, l); }},
         }},
        {"noise",
         {
             {"enabled", [](auto& c, auto v, auto l) { c.thermal.enabled = to_bool(v, l); }},
             {"floor_dbm", [](auto& c, auto v, auto l) { c.thermal.floor_dbm = to_double(v, l); }},
             {"seed", [](auto& c, auto v, auto l) { c.thermal.seed = to_u64(v, l); }},
         }},
        {"node",
         {
             {"id", [](auto& c, auto v, auto l) { c.nodes.back().id = to_size(v, l); }},
             {"position", [](auto& c, auto v, auto l) { c.nodes.back().position = to_vec2(v, l); }},
             {"boresight", [](auto& c, auto v, auto l) { c.nodes.back().boresight = to_vec2(v, l); }},
             {"tx_power_dbm", [](auto& c, auto v, auto l) { c.nodes.back().tx_power_dbm = to_double(v, l); }},
             {"gain_boresight_db",
              [](auto& c, auto v, auto l) { c.nodes.back().gain_boresight_db = to_double(v, l); }},
             {"gain_90_db", [](auto& c, auto v, auto l) { c.nodes.back().gain_90_db = to_double(v, l); }},
         }},
        {"target",
         {
             {"position", [](auto& c, auto v, auto l) { c.targets.back().position = to_vec2(v, l); }},
             {"velocity", [](auto& c, auto v, auto l) { c.targets.back().velocity = to_vec2(v, l); }},
             {"rcs_dbsm", [](auto& c, auto v, auto l) { c.targets.back().rcs_dbsm = to_double(v, l); }},
         }},
    };
    return table;
}

void add(std::vector<Diagnostic>& out, Severity s, std::string code, std::string message)
{
    out.push_back({s, std::move(code), std::move(message)});
}

Scenario geometry_only(const ExperimentConfig& config, CodeSequence code)
{
    Scenario sc;
    sc.carrier_hz = config.carrier_hz;
    sc.chip_s = config.chip_s;
    sc.bursts = config.bursts;
    sc.code = std::move(code);
    sc.pn_enabled = false;
    sc.targets = config.targets;
    auto nodes = config.nodes;
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& n : nodes) {
        RadarNode node;
        node.id = n.id;
        node.position = n.position;
        node.boresight = n.boresight;
        node.tx_power_dbm = n.tx_power_dbm;
        node.antenna = AntennaPattern(n.gain_boresight_db, n.gain_90_db);
        sc.nodes.push_back(node);
    }
    return sc;
}

CodeSequence load_code(const ExperimentConfig& config)
{
    if (config.code == "file") {
        auto code = read_code_file(config.resolve(config.code_file));
        if (code.length() != config.code_length)
            throw Error(ErrorCode::ConfigError, fmt::format("code file holds {} chips, code_length is {}",
                                                            code.length(), config.code_length));
        return code;
    }
    return generate_p3(config.code_length);
}

} // namespace

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const
{
    return p.is_absolute() ? p : base_dir / p;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    ExperimentConfig config;
    config.base_dir = base_dir;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    std::set<std::pair<std::string, std::string>> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                config_error(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!setters().contains(section))
                config_error(line_no, fmt::format("unknown section [{}]", section));
            if (section == "node") {
                config.nodes.emplace_back();
                config.nodes.back().id = config.nodes.size();
            } else if (section == "target") {
                config.targets.emplace_back();
            }
            seen.clear();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            config_error(line_no, "expected 'key = value'");
        if (section.empty())
            config_error(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto& keys = setters().at(section);
        const auto it = keys.find(key);
        if (it == keys.end())
            config_error(line_no, fmt::format("unknown key '{}' in [{}]", key, section));
        if (!seen.insert({section, key}).second)
            config_error(line_no, fmt::format("duplicate key '{}' in [{}]", key, section));
        it->second(config, value, line_no);
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto base = path.parent_path();
    return parse_config(buffer.str(), base.empty() ? std::filesystem::path(".") : base);
}

std::vector<Diagnostic> validate(const ExperimentConfig& config)
{
    std::vector<Diagnostic> out;
    const std::size_t radars = config.nodes.size();

    if (radars == 0)
        add(out, Severity::Error, "no_radars", "at least one [node] is required");
    std::set<std::size_t> ids;
    for (const auto& n : config.nodes)
        ids.insert(n.id);
    bool ids_ok = ids.size() == radars && (radars == 0 || (*ids.begin() == 1 && *ids.rbegin() == radars));
    if (!ids_ok)
        add(out, Severity::Error, "node_ids", "node ids must be unique and cover 1..M");
    for (const auto& n : config.nodes) {
        if (n.gain_90_db > n.gain_boresight_db)
            add(out, Severity::Error, "antenna",
                fmt::format("radar {}: gain at 90 deg exceeds boresight gain", n.id));
    }

    if (!(config.carrier_hz > 0.0) || !(config.chip_s > 0.0))
        add(out, Severity::Error, "waveform", "carrier_hz and chip_s must be positive");
    if (config.code_length < 2)
        add(out, Severity::Error, "code_length", "code_length must be at least 2");
    if (config.bursts < 2)
        add(out, Severity::Error, "bursts", "Doppler processing needs at least 2 bursts");
    if (radars > 0 && config.code_length % (2 * radars) != 0)
        add(out, Severity::Error, "indivisible_code",
            fmt::format("2M = {} does not divide L = {}", 2 * radars, config.code_length));

    std::optional<CodeSequence> code;
    try {
        code = load_code(config);
        if (code->length() % 2 == 0 && code->family() != CodeFamily::P3) {
            const auto report = verify_almost_perfect(*code, 1e-9 * static_cast<double>(code->length()));
            if (!report.passed)
                add(out, Severity::Warning, "code_quality",
                    fmt::format("imported code is not almost-perfect (max sidelobe {})", report.max_sidelobe));
        } else if (code->family() == CodeFamily::P3 && code->length() % 2 != 0) {
            add(out, Severity::Warning, "code_quality", "odd-length P3 code is not a perfect periodic sequence");
        }
    } catch (const Error& e) {
        add(out, Severity::Error, e.code() == ErrorCode::IoError ? "io" : "code", e.what());
    }

    if (config.pn_enabled) {
        try {
            if (!config.mask_file.empty())
                read_mask_file(config.resolve(config.mask_file));
        } catch (const Error& e) {
            add(out, Severity::Error, e.code() == ErrorCode::IoError ? "io" : "mask", e.what());
        }
        const double frame = config.frame_duration();
        const double duration = config.pn_duration_s > 0.0 ? config.pn_duration_s : frame;
        if (config.pn_duration_s < 0.0)
            add(out, Severity::Error, "pn_duration", "pn duration_s must be positive");
        else if (duration < frame * (1.0 - 1e-9))
            add(out, Severity::Error, "pn_duration",
                fmt::format("phase noise spans {} s but the frame lasts {} s", duration, frame));
        if (duration > 0.0 && !(config.pn_f_max_hz > 1.0 / duration))
            add(out, Severity::Error, "pn_band", "f_max_hz must exceed the line spacing 1 / duration");
        if (config.chip_s > 0.0 && config.pn_f_max_hz > 0.5 / config.chip_s)
            add(out, Severity::Warning, "pn_band", "f_max_hz is above the chip-rate Nyquist frequency");
    }

    if (config.targets.empty() && config.compensation)
        add(out, Severity::Warning, "no_targets",
            "no targets: only LOS paths are simulated, compensation acts on the LOS alone");

    const bool has_errors =
        std::any_of(out.begin(), out.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
    if (has_errors || !code)
        return out;

    // Range-bin sanity: every return must land inside its transmitter's section.
    try {
        const Scenario sc = geometry_only(config, *code);
        const std::size_t width = config.code_length / (2 * radars);
        for (const auto& rx : sc.nodes) {
            for (const auto& path : enumerate_paths(sc, rx.id)) {
                const std::size_t bins = path.delay_bins(config.chip_s);
                if (bins >= width)
                    add(out, Severity::Warning, "range_ambiguous",
                        fmt::format("radar {} {} path from radar {}: delay bin {} exceeds section width {}", rx.id,
                                    to_string(path.kind), path.tx_id, bins, width));
            }
        }
    } catch (const Error& e) {
        add(out, Severity::Error, "geometry", e.what());
    }
    return out;
}

std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& d : diagnostics)
        j.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                     {"code", d.code},
                     {"message", d.message}});
    nlohmann::json root{{"ok", std::none_of(diagnostics.begin(), diagnostics.end(),
                                            [](const Diagnostic& d) { return d.severity == Severity::Error; })},
                        {"diagnostics", j}};
    return root.dump(2) + "\n";
}

Scenario build_scenario(const ExperimentConfig& config)
{
    Scenario sc = geometry_only(config, load_code(config));
    sc.pn_enabled = config.pn_enabled;
    sc.pn_mode = config.pn_mode;
    sc.thermal = config.thermal;
    sc.check();
    if (config.pn_enabled) {
        const PsdMask mask = config.mask_file.empty() ? PsdMask::default_pll()
                                                      : read_mask_file(config.resolve(config.mask_file));
        const double duration = config.pn_duration_s > 0.0 ? config.pn_duration_s : sc.frame_duration();
        for (auto& node : sc.nodes)
            node.pll = std::make_shared<const PhaseNoiseProcess>(
                synthesize(mask, duration, config.pn_f_max_hz, radar_seed(config.master_seed, node.id)));
    }
    return sc;
}

std::size_t path_range_bin(const Scenario& scenario, const PropagationPath& path)
{
    return (path.delay_bins(scenario.chip_s) + scenario.code_shift(path.tx_id)) % scenario.code_length();
}

RadarOutput process_radar(const Scenario& scenario, std::size_t rx_id, const PipelineOptions& options)
{
    RadarOutput out;
    out.rx_id = rx_id;
    out.paths = enumerate_paths(scenario, rx_id);
    out.frame = synthesize_rx(scenario, rx_id, out.paths);
    const std::size_t sections = scenario.radar_count();
    out.rst = periodic_correlate(out.frame, scenario.code, sections);
    out.rst_compensated = out.rst;

    for (std::size_t s = 0; s < sections; ++s) {
        const std::size_t tx_id = s + 1;
        if (tx_id == rx_id)
            continue;
        RemoteCompensation remote;
        remote.tx_id = tx_id;
        remote.section = section_bins(out.rst, s);
        const auto los_path = std::find_if(out.paths.begin(), out.paths.end(), [&](const PropagationPath& p) {
            return p.kind == PathKind::Los && p.tx_id == tx_id;
        });
        std::optional<std::size_t> hint;
        if (los_path != out.paths.end()) {
            remote.expected_los_bin = path_range_bin(scenario, *los_path);
            if (remote.section.contains(remote.expected_los_bin))
                hint = remote.expected_los_bin;
        }
        remote.los = locate_los_bin(out.rst, remote.section, options.los_gate_db, hint);
        remote.pn = extract_pn_vector(out.rst, remote.los.bin);
        remote.pn.rx_id = rx_id;
        remote.pn.tx_id = tx_id;
        if (options.compensation && scenario.pn_enabled) {
            if (!remote.los.detected)
                throw Error(ErrorCode::LosNotFound,
                            fmt::format("radar {}: no LOS from radar {} above {} dB (best bin {} at {:.1f} dB)",
                                        rx_id, tx_id, options.los_gate_db, remote.los.bin, remote.los.level_db));
            out.rst_compensated = apply_compensation(out.rst_compensated, remote.pn, remote.section);
            remote.applied = true;
        }
        out.remotes.push_back(std::move(remote));
    }

    out.rdm_pre = doppler_dft(out.rst, options.window);
    out.rdm_post = doppler_dft(out.rst_compensated, options.window);
    return out;
}

RadarMetrics compute_metrics(const Scenario& scenario, const RadarOutput& out)
{
    RadarMetrics m;
    m.rx_id = out.rx_id;
    m.remotes = out.remotes;

    std::vector<Exclusion> exclusions;
    std::set<std::tuple<std::string, std::size_t, std::size_t>> rows;
    for (const auto& path : out.paths) {
        const std::size_t bin = path_range_bin(scenario, path);
        if (bin >= out.rdm_pre.range_bins())
            continue;
        exclusions.push_back({bin, 1});
        rows.insert({std::string(to_string(path.kind)), path.tx_id, bin});
    }
    try {
        m.noise_floor_pre_db = noise_floor(out.rdm_pre, exclusions);
        m.noise_floor_post_db = noise_floor(out.rdm_post, exclusions);
    } catch (const Error&) {
        m.noise_floor_pre_db = noise_floor(out.rdm_pre, {});
        m.noise_floor_post_db = noise_floor(out.rdm_post, {});
    }
    for (const auto& [kind, tx, bin] : rows)
        m.rows.push_back({kind, tx, bin, ridge_power(out.rdm_pre, bin), ridge_power(out.rdm_post, bin)});

    const RadarNode& rx = scenario.node(out.rx_id);
    m.link_ratio_db = std::numeric_limits<double>::quiet_NaN();
    m.path_ratio_db = std::numeric_limits<double>::quiet_NaN();
    const auto mono = std::find_if(out.paths.begin(), out.paths.end(),
                                   [](const PropagationPath& p) { return p.kind == PathKind::Mono; });
    const auto los = std::find_if(out.paths.begin(), out.paths.end(),
                                  [](const PropagationPath& p) { return p.kind == PathKind::Los; });
    if (!scenario.targets.empty() && los != out.paths.end()) {
        const auto& target = scenario.targets.front();
        const double r_mono = (target.position - rx.position).norm();
        const double r_los = (scenario.node(los->tx_id).position - rx.position).norm();
        m.link_ratio_db =
            los_to_mono_ratio(rx.antenna.gain_db(90.0), rx.antenna.boresight_db(), r_mono, r_los, target.rcs_dbsm);
        if (mono != out.paths.end())
            m.path_ratio_db = los->power_dbm - mono->power_dbm;
    }
    return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    const auto diagnostics = validate(config);
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error)
            throw Error(d.code == "io" ? ErrorCode::IoError : ErrorCode::ConfigError,
                        fmt::format("{}: {}", d.code, d.message));
    }
    const Scenario scenario = build_scenario(config);
    const PipelineOptions pipeline{config.compensation, config.window, kLosGateDb};

    ExperimentResult result;
    const std::size_t radars = scenario.radar_count();
    result.radars.resize(radars);
    result.metrics.resize(radars);
    auto work = [&](std::size_t index) {
        result.radars[index] = process_radar(scenario, index + 1, pipeline);
        result.metrics[index] = compute_metrics(scenario, result.radars[index]);
    };

    // Each radar writes only its own slot, so the outcome is independent of the thread count.
    const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, radars));
    for (std::size_t first = 0; first < radars; first += threads) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = first; i < std::min(radars, first + threads); ++i)
            batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, work, i));
        for (auto& f : batch)
            f.get();
    }
    return result;
}

std::string metrics_json(const ExperimentConfig& config, const ExperimentResult& result)
{
    auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json radars = nlohmann::json::array();
    for (const auto& m : result.metrics) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : m.rows)
            rows.push_back({{"kind", r.kind},
                            {"tx_id", r.tx_id},
                            {"range_bin", r.bin},
                            {"ridge_pre_db", number(r.ridge_pre_db)},
                            {"ridge_post_db", number(r.ridge_post_db)}});
        nlohmann::json remotes = nlohmann::json::array();
        for (const auto& rc : m.remotes)
            remotes.push_back({{"tx_id", rc.tx_id},
                               {"section", {rc.section.begin, rc.section.end}},
                               {"los_bin", rc.los.bin},
                               {"los_bin_expected", rc.expected_los_bin},
                               {"los_level_db", number(rc.los.level_db)},
                               {"los_detected", rc.los.detected},
                               {"compensated", rc.applied}});
        radars.push_back({{"rx_id", m.rx_id},
                          {"noise_floor_pre_db", number(m.noise_floor_pre_db)},
                          {"noise_floor_post_db", number(m.noise_floor_post_db)},
                          {"los_to_mono_ratio_db", number(m.link_ratio_db)},
                          {"simulated_los_minus_mono_db", number(m.path_ratio_db)},
                          {"rows", rows},
                          {"remotes", remotes}});
    }
    nlohmann::json root{{"master_seed", config.master_seed},
                        {"pn_enabled", config.pn_enabled},
                        {"compensation", config.compensation},
                        {"window", std::string(to_string(config.window))},
                        {"code_length", config.code_length},
                        {"bursts", config.bursts},
                        {"radars", radars}};
    return root.dump(2) + "\n";
}

std::string write_outputs(const ExperimentConfig& config, const ExperimentResult& result)
{
    const auto dir = config.resolve(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    for (const auto& r : result.radars) {
        const std::string stem = fmt::format("radar{}", r.rx_id);
        const auto& pre = r.rdm_pre;
        if (config.write_csv) {
            io::write_text(dir / (stem + "_range_profile.csv"),
                           io::profile_csv(range_profile_db(pre, pre.zero_doppler_bin())));
            io::write_text(dir / (stem + "_rd_pre.csv"), io::matrix_db_csv(pre.values));
            io::write_text(dir / (stem + "_rd_post.csv"), io::matrix_db_csv(r.rdm_post.values));
            for (const auto& remote : r.remotes)
                io::write_text(dir / fmt::format("{}_xi_tx{}.csv", stem, remote.tx_id),
                               format_pn_vector_csv(remote.pn));
        }
        if (config.write_binary) {
            io::write_matrix_binary(dir / (stem + "_rd_pre.bin"), pre.values);
            io::write_matrix_binary(dir / (stem + "_rd_post.bin"), r.rdm_post.values);
        }
        if (config.write_heatmap) {
            io::write_heatmap_ppm(dir / (stem + "_rd_pre.ppm"), pre.values);
            io::write_heatmap_ppm(dir / (stem + "_rd_post.ppm"), r.rdm_post.values);
        }
        if (config.write_raw)
            io::write_raw_frame(dir / (stem + "_raw.bin"), r.frame);
    }
    const auto report = metrics_json(config, result);
    io::write_text(dir / "metrics.json", report);
    return report;
}

} // namespace pmcw
