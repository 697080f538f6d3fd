// SPDX-License-Identifier: Apache-2.0
//
// ppgq - pseudo clean PPG generation and reliability grading.
//
// Subcommands:
//   process  run the full pipeline over a record file and write a report
//   synth    generate a synthetic corpus with known ground truth
//   grade    regrade an existing report with different thresholds
//   report   render a report as a table plus plot-data files
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 invalid configuration.
#include "ppgq/io.hpp"

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

namespace {

int exit_code_for(ppgq::ErrorCode code) {
    switch (code) {
        case ppgq::ErrorCode::parse_error:
        case ppgq::ErrorCode::io_error:
        case ppgq::ErrorCode::id_mismatch:
            return 1;
        default:
            return 2;
    }
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        const std::string token = csv.substr(pos, next - pos);
        if (!token.empty()) out.push_back(std::stod(token));
        pos = next + 1;
    }
    if (out.empty()) {
        throw ppgq::Error(ppgq::ErrorCode::config_error, "empty list '" + csv + "'");
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo clean PPG generation and reliability grading"};
    app.require_subcommand(1);

    // ---- process ----------------------------------------------------------
    auto* process = app.add_subcommand("process", "run the pipeline over a record file");
    std::string process_in, process_out = "report.json";
    std::string process_config;
    std::string emit_clean;
    double level1 = 1.0, level2 = 3.0, level3 = 5.0, agreement = 10.0;
    int components = -1, window = -1, stride = -1;
    double margin_hz = -1.0;
    process->add_option("input", process_in, "record file (JSON lines)")->required();
    process->add_option("--out", process_out, "report output path");
    process->add_option("--config", process_config, "pipeline config JSON file");
    process->add_option("--emit-clean-ppg", emit_clean, "also write pseudo clean waveforms here");
    process->add_option("--level1", level1, "level-1 HR error bound (BPM)");
    process->add_option("--level2", level2, "level-2 HR error bound (BPM)");
    process->add_option("--level3", level3, "level-3 HR error bound (BPM)");
    process->add_option("--agreement-bpm", agreement, "within-N-BPM agreement bound");
    process->add_option("--components", components, "principal components p");
    process->add_option("--window", window, "sliding window length (samples)");
    process->add_option("--stride", stride, "sliding window stride (samples)");
    process->add_option("--margin-hz", margin_hz, "passband margin beyond the IHR range");

    // ---- synth -------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_out = "corpus.jsonl", truth_out;
    std::string hr_csv = "72", rr_csv = "15", pulse_shape = "gaussian";
    ppgq::io::SynthOptions synth_opts;
    synth_cmd->add_option("--out", synth_out, "corpus output path");
    synth_cmd->add_option("--truth-out", truth_out, "ground-truth sidecar path");
    synth_cmd->add_option("--hr", hr_csv, "heart rates, comma separated (BPM)");
    synth_cmd->add_option("--rr", rr_csv, "respiration rates, comma separated (BrPM)");
    synth_cmd->add_option("--duration", synth_opts.duration_s, "segment duration (s)");
    synth_cmd->add_option("--sample-rate", synth_opts.sample_rate_hz, "sample rate (Hz)");
    synth_cmd->add_option("--am-depth", synth_opts.am_depth, "amplitude modulation depth [0,1)");
    synth_cmd->add_option("--fm-depth", synth_opts.fm_depth_s, "interval modulation depth (s)");
    synth_cmd->add_option("--pulse-shape", pulse_shape, "'gaussian' or 'sinusoid'");
    synth_cmd->add_option("--seed", synth_opts.seed, "base random seed");
    synth_cmd->add_option("--wander-amp", synth_opts.noise.baseline_wander_amp,
                          "baseline wander amplitude");
    synth_cmd->add_option("--wander-freq", synth_opts.noise.baseline_wander_freq_hz,
                          "baseline wander frequency (Hz)");
    synth_cmd->add_option("--white-sigma", synth_opts.noise.white_noise_sigma,
                          "white noise standard deviation");
    synth_cmd->add_option("--burst-rate", synth_opts.noise.burst_rate_per_min,
                          "spike artifacts per minute");
    synth_cmd->add_option("--burst-amp", synth_opts.noise.burst_amp, "spike artifact amplitude");
    synth_cmd->add_option("--tone-amp", synth_opts.noise.inband_tone_amp,
                          "interfering tone amplitude");
    synth_cmd->add_option("--tone-freq", synth_opts.noise.inband_tone_freq_hz,
                          "interfering tone frequency (Hz)");

    // ---- grade -------------------------------------------------------------
    auto* grade = app.add_subcommand("grade", "regrade a report with new thresholds");
    std::string grade_in, grade_out = "regraded.json", grade_refs;
    double g_level1 = 1.0, g_level2 = 3.0, g_level3 = 5.0, g_agreement = 10.0;
    grade->add_option("estimates", grade_in, "report file with per-segment estimates")->required();
    grade->add_option("--references", grade_refs,
                      "replacement references (JSON lines keyed by segment_id)");
    grade->add_option("--out", grade_out, "regraded report output path");
    grade->add_option("--level1", g_level1, "level-1 HR error bound (BPM)");
    grade->add_option("--level2", g_level2, "level-2 HR error bound (BPM)");
    grade->add_option("--level3", g_level3, "level-3 HR error bound (BPM)");
    grade->add_option("--agreement-bpm", g_agreement, "within-N-BPM agreement bound");

    // ---- report ------------------------------------------------------------
    auto* render = app.add_subcommand("report", "summarize a report, emit plot data");
    std::string render_in, corr_out, ba_out;
    render->add_option("input", render_in, "report file")->required();
    render->add_option("--correlation-out", corr_out, "ref/est heart rate pairs (TSV)");
    render->add_option("--bland-altman-out", ba_out, "mean/diff pairs (TSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (process->parsed()) {
            ppgq::io::ProcessOptions opts;
            if (!process_config.empty()) opts.config = ppgq::io::read_config(process_config);
            if (components > 0) opts.config.num_components_p = components;
            if (window > 0) opts.config.window_len_n = window;
            if (stride > 0) opts.config.stride_t = stride;
            if (margin_hz >= 0.0) opts.config.passband_margin_hz = margin_hz;
            opts.thresholds = {level1, level2, level3};
            opts.agreement_bound_bpm = agreement;
            if (!emit_clean.empty()) opts.emit_clean_path = emit_clean;
            const ppgq::io::Report report =
                ppgq::io::run_process(process_in, process_out, opts);
            std::printf("processed %zu segments -> %s\n", report.segments.size(),
                        process_out.c_str());
        } else if (synth_cmd->parsed()) {
            synth_opts.hr_list_bpm = parse_double_list(hr_csv);
            synth_opts.rr_list_brpm = parse_double_list(rr_csv);
            if (pulse_shape == "gaussian") {
                synth_opts.pulse_shape = ppgq::synth::PulseShape::gaussian_pulse_train;
            } else if (pulse_shape == "sinusoid") {
                synth_opts.pulse_shape = ppgq::synth::PulseShape::sinusoid;
            } else {
                throw ppgq::Error(ppgq::ErrorCode::config_error,
                                  "unknown pulse shape '" + pulse_shape + "'");
            }
            if (!truth_out.empty()) synth_opts.truth_path = truth_out;
            ppgq::io::run_synth(synth_out, synth_opts);
            std::printf("wrote %zu records -> %s\n",
                        synth_opts.hr_list_bpm.size() * synth_opts.rr_list_brpm.size(),
                        synth_out.c_str());
        } else if (grade->parsed()) {
            ppgq::io::GradeOptions opts;
            opts.thresholds = {g_level1, g_level2, g_level3};
            opts.agreement_bound_bpm = g_agreement;
            if (!grade_refs.empty()) opts.references_path = grade_refs;
            const ppgq::io::Report report = ppgq::io::run_grade(grade_in, grade_out, opts);
            std::printf("regraded %zu segments -> %s\n", report.segments.size(),
                        grade_out.c_str());
        } else if (render->parsed()) {
            ppgq::io::ReportOptions opts;
            if (!corr_out.empty()) opts.correlation_path = corr_out;
            if (!ba_out.empty()) opts.bland_altman_path = ba_out;
            std::cout << ppgq::io::run_report(render_in, opts);
        }
    } catch (const ppgq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
