// SPDX-License-Identifier: Apache-2.0
// Command-line front end: experiment runs, config validation, code and
// phase-noise utilities.
#include "pmcw/codes.hpp"
#include "pmcw/error.hpp"
#include "pmcw/experiment.hpp"
#include "pmcw/io.hpp"
#include "pmcw/phase_noise.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

// Exit codes, one per error class.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitLos = 3;
constexpr int kExitIo = 4;

int exit_code(pmcw::ErrorCode code)
{
    switch (code) {
    case pmcw::ErrorCode::ConfigError:
        return kExitConfig;
    case pmcw::ErrorCode::LosNotFound:
        return kExitLos;
    case pmcw::ErrorCode::IoError:
        return kExitIo;
    default:
        return kExitFailure;
    }
}

void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    pmcw::io::write_text(out_path, text);
}

std::vector<double> read_samples(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw pmcw::Error(pmcw::ErrorCode::IoError, "cannot open " + path);
    std::vector<double> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        // Last comma-separated field is the sample; a non-numeric first line is a header.
        const auto field = line.substr(line.find_last_of(',') == std::string::npos ? 0 : line.find_last_of(',') + 1);
        try {
            samples.push_back(std::stod(field));
        } catch (const std::exception&) {
            if (line_no != 1)
                throw pmcw::Error(pmcw::ErrorCode::IoError, fmt::format("{}:{}: bad sample '{}'", path, line_no, field));
        }
    }
    return samples;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"PMCW radar network simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Simulate and process an experiment");
    std::string run_config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool no_comp = false;
    bool no_pn = false;
    std::string window;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    run->add_option("config", run_config, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Master seed override");
    run->add_option("--out-dir", out_dir, "Output directory override");
    run->add_flag("--no-compensation", no_comp, "Skip LOS-based compensation");
    run->add_flag("--no-pn", no_pn, "Disable phase noise");
    run->add_option("--window", window, "Doppler window")->check(CLI::IsMember({"none", "hann"}));
    run->add_option("--threads", threads, "Radars processed in parallel")->check(CLI::PositiveNumber);

    // validate
    auto* val = app.add_subcommand("validate", "Check a config without simulating");
    std::string val_config;
    val->add_option("config", val_config, "Experiment config file")->required()->check(CLI::ExistingFile);

    // codes
    auto* codes = app.add_subcommand("codes", "Code sequence utilities");
    codes->require_subcommand(1);
    auto* search = codes->add_subcommand("search", "Exhaustive almost-perfect binary sequence search");
    std::size_t search_len = 0;
    std::string search_out;
    search->add_option("--length", search_len, "Sequence length (even, <= 20)")->required();
    search->add_option("-o,--out", search_out, "Write sequences here, one per line (default stdout)");
    auto* verify = codes->add_subcommand("verify", "Check a code file for almost-perfect autocorrelation");
    std::string verify_file;
    double verify_tol = 0.0;
    verify->add_option("file", verify_file, "Code file")->required()->check(CLI::ExistingFile);
    verify->add_option("--tolerance", verify_tol, "Allowed sidelobe magnitude");
    auto* gen = codes->add_subcommand("gen-p3", "Write a P3 polyphase code");
    std::size_t gen_len = 0;
    std::string gen_out;
    gen->add_option("--length", gen_len, "Code length")->required();
    gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

    // pn
    auto* pn = app.add_subcommand("pn", "Phase-noise utilities");
    pn->require_subcommand(1);
    auto* synth = pn->add_subcommand("synth", "Synthesize phase noise from a mask and sample it");
    std::string synth_mask;
    double synth_duration = 0.0;
    double synth_fmax = 100e6;
    double synth_fs = 1e9;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    synth->add_option("--mask", synth_mask, "Mask file (default: built-in PLL mask)");
    synth->add_option("--duration", synth_duration, "Realization length in seconds")->required();
    synth->add_option("--f-max", synth_fmax, "Highest spectral line in Hz");
    synth->add_option("--fs", synth_fs, "Sample rate in Hz");
    synth->add_option("--seed", synth_seed, "Seed");
    synth->add_option("-o,--out", synth_out, "CSV output t_s,phi_rad (default stdout)");
    auto* psd = pn->add_subcommand("psd", "Estimate the PSD of sampled phase noise");
    std::string psd_in;
    double psd_fs = 1e9;
    std::size_t psd_segments = 8;
    std::string psd_out;
    psd->add_option("samples", psd_in, "CSV whose last column holds the samples")->required()->check(CLI::ExistingFile);
    psd->add_option("--fs", psd_fs, "Sample rate in Hz");
    psd->add_option("--segments", psd_segments, "Averaged segments");
    psd->add_option("-o,--out", psd_out, "Output mask-format file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto config = pmcw::load_config(run_config);
            if (seed)
                config.master_seed = *seed;
            if (!out_dir.empty())
                config.out_dir = std::filesystem::absolute(out_dir);
            if (no_comp)
                config.compensation = false;
            if (no_pn)
                config.pn_enabled = false;
            if (!window.empty())
                config.window = window == "hann" ? pmcw::Window::Hann : pmcw::Window::None;
            for (const auto& d : pmcw::validate(config)) {
                if (d.severity == pmcw::Severity::Warning)
                    std::cerr << "warning: " << d.code << ": " << d.message << '\n';
            }
            const auto result = pmcw::run_experiment(config, {threads});
            std::cout << pmcw::write_outputs(config, result);
            return kExitOk;
        }
        if (*val) {
            const auto diagnostics = pmcw::validate(pmcw::load_config(val_config));
            std::cout << pmcw::diagnostics_json(diagnostics);
            const bool failed = std::any_of(diagnostics.begin(), diagnostics.end(),
                                            [](const auto& d) { return d.severity == pmcw::Severity::Error; });
            return failed ? kExitConfig : kExitOk;
        }
        if (*search) {
            const auto found = pmcw::search_apas(search_len);
            std::string text;
            for (const auto& seq : found) {
                for (std::size_t l = 0; l < seq.length(); ++l)
                    text += seq[l].real() > 0.0 ? '+' : '-';
                text += '\n';
            }
            emit(text, search_out);
            std::cerr << found.size() << " sequences (up to rotation and negation)\n";
            return kExitOk;
        }
        if (*verify) {
            const auto seq = pmcw::read_code_file(verify_file);
            const auto report = pmcw::verify_almost_perfect(seq, verify_tol);
            fmt::print("length {}\npeak {:.12g}\nhalf_lag {:.12g}{:+.12g}j\nmax_sidelobe {:.12g}\n{}\n", seq.length(),
                       report.peak, report.half_lag.real(), report.half_lag.imag(), report.max_sidelobe,
                       report.passed ? "PASS" : "FAIL");
            return report.passed ? kExitOk : kExitFailure;
        }
        if (*gen) {
            emit(pmcw::format_code_text(pmcw::generate_p3(gen_len)), gen_out);
            return kExitOk;
        }
        if (*synth) {
            const auto mask = synth_mask.empty() ? pmcw::PsdMask::default_pll() : pmcw::read_mask_file(synth_mask);
            const auto process = pmcw::synthesize(mask, synth_duration, synth_fmax, synth_seed);
            const auto count = static_cast<std::size_t>(std::llround(synth_duration * synth_fs));
            const auto phi = process.evaluate_grid(0.0, 1.0 / synth_fs, count);
            std::string text = "t_s,phi_rad\n";
            for (std::size_t i = 0; i < phi.size(); ++i)
                text += fmt::format("{:.12e},{:.12e}\n", static_cast<double>(i) / synth_fs, phi[i]);
            emit(text, synth_out);
            return kExitOk;
        }
        if (*psd) {
            const auto samples = read_samples(psd_in);
            const auto estimate = pmcw::estimate_psd(samples, psd_fs, psd_segments);
            emit(pmcw::format_mask_text(estimate), psd_out);
            return kExitOk;
        }
    } catch (const pmcw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
