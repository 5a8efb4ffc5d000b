// sleeppe: permutation-entropy sleep-stage analysis of EDF recordings.
//
// Exit codes: 0 success, 2 param, 3 file, 4 format, 5 channel, 1 internal.
// Every failure prints exactly one line to stderr: "error: <category>: <message>".

#include <CLI11.hpp>
#include <cstdio>
#include <future>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "sleeppe/edf.hpp"
#include "sleeppe/error.hpp"
#include "sleeppe/ordinal.hpp"
#include "sleeppe/pipeline.hpp"
#include "sleeppe/report.hpp"
#include "sleeppe/synth.hpp"

namespace {

using namespace sleeppe;

constexpr const char* kEnvPrefix = "SLEEPPE_";

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Param: return 2;
    case ErrorCategory::File: return 3;
    case ErrorCategory::Format: return 4;
    case ErrorCategory::Channel: return 5;
  }
  return 1;
}

std::string env(const char* name) { return std::string(kEnvPrefix) + name; }

struct AnalysisOptions {
  std::string channel = "Fp2-F4";
  std::vector<std::string> fallback = {"C3-A2"};
  bool no_fallback = false;
  int order = 3;
  int delay = 1;
  std::string rate = "200";
  double cutoff = 30.0;
  int taps = 201;
  double epoch_seconds = 30.0;
  std::string tie = "stable";
  std::uint64_t seed = 0;
  bool aasm = false;
  std::string hypnogram_format;
  std::vector<std::string> formats;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--channel", channel, "EEG derivation to analyze")->envname(env("CHANNEL"))->capture_default_str();
    cmd->add_option("--fallback", fallback, "channels tried in order when --channel is absent")
        ->delimiter(',')
        ->envname(env("FALLBACK"))
        ->capture_default_str();
    cmd->add_flag("--no-fallback", no_fallback, "use only --channel");
    cmd->add_option("--order", order, "ordinal pattern order m")->envname(env("ORDER"))->capture_default_str();
    cmd->add_option("--delay", delay, "time delay tau in samples")->envname(env("DELAY"))->capture_default_str();
    cmd->add_option("--rate", rate, "resampling rate in Hz")->envname(env("RATE"))->capture_default_str();
    cmd->add_option("--cutoff", cutoff, "low-pass cutoff in Hz")->envname(env("CUTOFF"))->capture_default_str();
    cmd->add_option("--taps", taps, "low-pass FIR length (odd)")->envname(env("TAPS"))->capture_default_str();
    cmd->add_option("--epoch-seconds", epoch_seconds, "epoch length in seconds")
        ->envname(env("EPOCH_SECONDS"))
        ->capture_default_str();
    cmd->add_option("--tie", tie, "tie handling: stable or noise")
        ->check(CLI::IsMember({"stable", "noise"}))
        ->envname(env("TIE"))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "seed for --tie noise")->envname(env("SEED"))->capture_default_str();
    cmd->add_flag("--aasm", aasm, "merge S4 into S3 before analysis")->envname(env("AASM"));
    cmd->add_option("--hypnogram-format", hypnogram_format, "tsv or cap (default: by file extension)")
        ->check(CLI::IsMember({"tsv", "cap"}))
        ->envname(env("HYPNOGRAM_FORMAT"));
    cmd->add_option("--format", formats, "outputs to write: csv, report, svg (default csv,report)")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "report", "svg"}))
        ->envname(env("FORMAT"));
  }

  RunConfig config() const {
    RunConfig c;
    c.channel = channel;
    c.fallback_channels = no_fallback ? std::vector<std::string>{} : fallback;
    c.order_m = order;
    c.delay_tau = delay;
    c.target_rate_hz = Rational::parse_decimal(rate);
    if (!c.target_rate_hz.positive()) throw Error(ErrorCode::NonPositiveRate, "--rate must be positive");
    c.cutoff_hz = cutoff;
    c.num_taps = taps;
    c.epoch_len_s = epoch_seconds;
    c.tie_rule = tie == "noise" ? ordinal::TieRule::Noise : ordinal::TieRule::StableRank;
    c.noise_seed = seed;
    c.merge_s3_s4 = aasm;
    if (hypnogram_format == "tsv") c.hypnogram_format = HypnogramFormat::Tsv;
    if (hypnogram_format == "cap") c.hypnogram_format = HypnogramFormat::CapTxt;
    return c;
  }

  std::set<std::string> outputs() const {
    if (formats.empty()) return {"csv", "report"};
    return {formats.begin(), formats.end()};
  }
};

void write_outputs(const report::AnalysisReport& r, const std::filesystem::path& stem,
                   const std::set<std::string>& outputs) {
  // Render everything before touching the filesystem.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  auto with_ext = [&](const char* ext) {
    auto p = stem;
    p += ext;
    return p;
  };
  if (outputs.count("report")) files.emplace_back(with_ext(".json"), report::to_report_text(r));
  if (outputs.count("csv")) files.emplace_back(with_ext(".csv"), report::epoch_csv(r));
  if (outputs.count("svg"))
    files.emplace_back(with_ext(".svg"), report::boxplot_svg(r.per_stage, r.patient_id + " (" + r.channel_label + ")"));
  for (const auto& [path, content] : files) report::write_file_atomic(path, content);
}

std::string summary_line(const report::AnalysisReport& r) {
  const auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  return r.patient_id + "\tchannel=" + r.channel_label + "\tpairs=" + std::to_string(r.pairs.size()) +
         "\tpearson=" + fmt(r.correlation) + "\tspearman=" + fmt(r.spearman) +
         "\tmonotonic=" + (r.monotonic ? (*r.monotonic ? "true" : "false") : "NA");
}

int run(int argc, char** argv) {
  CLI::App app{"Permutation entropy of sleep EEG"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "run the full pipeline on one recording");
  std::string edf_path, hypnogram_path, out_stem, patient;
  AnalysisOptions analyze_opts;
  analyze->add_option("--edf", edf_path, "EDF recording")->required()->envname(env("EDF"));
  analyze->add_option("--hypnogram", hypnogram_path, "sleep-stage scoring file")->required()->envname(env("HYPNOGRAM"));
  analyze->add_option("--out", out_stem, "output path without extension")->required()->envname(env("OUT"));
  analyze->add_option("--patient", patient, "patient id recorded in the report (default: EDF file stem)");
  analyze_opts.add_to(analyze);

  // batch
  auto* batch = app.add_subcommand("batch", "analyze several <record>.edf / <record>.txt pairs in parallel");
  std::string data_dir, out_dir;
  std::vector<std::string> records;
  unsigned jobs = 4;
  AnalysisOptions batch_opts;
  batch->add_option("--data-dir", data_dir, "directory holding the recordings")->required();
  batch->add_option("--records", records, "record names, e.g. n1,ins5")->delimiter(',')->required();
  batch->add_option("--out-dir", out_dir, "directory for reports")->required();
  batch->add_option("--jobs", jobs, "records processed concurrently")->capture_default_str();
  batch_opts.add_to(batch);

  // pe
  auto* pe = app.add_subcommand("pe", "print the normalized permutation entropy of a numeric file");
  std::string pe_input;
  int pe_order = 3, pe_delay = 1;
  std::string pe_tie = "stable";
  std::uint64_t pe_seed = 0;
  pe->add_option("input", pe_input, "file with one value per line or comma-separated ('-' for stdin)")->required();
  pe->add_option("--order", pe_order, "order m")->envname(env("ORDER"))->capture_default_str();
  pe->add_option("--delay", pe_delay, "delay tau")->envname(env("DELAY"))->capture_default_str();
  pe->add_option("--tie", pe_tie)->check(CLI::IsMember({"stable", "noise"}))->capture_default_str();
  pe->add_option("--seed", pe_seed)->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic test signal");
  std::string kind, synth_out;
  std::size_t n = 0;
  double synth_rate = 200.0, freq = 10.0;
  std::uint64_t synth_seed = 42;
  synth_cmd->add_option("kind", kind, "ramp, sine or noise")->required()->check(CLI::IsMember({"ramp", "sine", "noise"}));
  synth_cmd->add_option("--n", n, "number of samples")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--rate", synth_rate, "sample rate in Hz")->capture_default_str();
  synth_cmd->add_option("--freq", freq, "sine frequency in Hz")->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "mt19937_64 seed for noise")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output file (default: stdout)");

  // boxplot
  auto* boxplot = app.add_subcommand("boxplot", "render per-stage boxplots from a report");
  std::string report_path, box_out;
  std::vector<std::string> box_formats;
  boxplot->add_option("report", report_path, "report written by analyze")->required();
  boxplot->add_option("--out", box_out, "output path without extension")->required()->envname(env("OUT"));
  boxplot->add_option("--format", box_formats, "svg and/or csv (default both)")
      ->delimiter(',')
      ->check(CLI::IsMember({"svg", "csv"}));

  // channels
  auto* channels = app.add_subcommand("channels", "list the signals of an EDF file");
  std::string channels_edf;
  channels->add_option("edf", channels_edf, "EDF recording")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: param: " << e.what() << "\n";
    return exit_code(ErrorCategory::Param);
  }

  if (*analyze) {
    RunConfig config = analyze_opts.config();
    config.edf_path = edf_path;
    config.hypnogram_path = hypnogram_path;
    config.patient_id = patient;
    const auto r = run_analysis(config);
    write_outputs(r, out_stem, analyze_opts.outputs());
    std::cerr << summary_line(r) << "\n";
    return 0;
  }

  if (*batch) {
    const RunConfig base = batch_opts.config();
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> lines(records.size());
    int worst = 0;
    // Each record is independent; results are collected by index so the
    // printed order never depends on scheduling.
    for (std::size_t start = 0; start < records.size(); start += std::max(1u, jobs)) {
      std::vector<std::future<std::string>> running;
      const std::size_t end = std::min(records.size(), start + std::max(1u, jobs));
      for (std::size_t i = start; i < end; ++i) {
        running.push_back(std::async(std::launch::async, [&, i] {
          RunConfig c = base;
          c.edf_path = std::filesystem::path(data_dir) / (records[i] + ".edf");
          c.hypnogram_path = std::filesystem::path(data_dir) / (records[i] + ".txt");
          c.patient_id = records[i];
          const auto r = run_analysis(c);
          write_outputs(r, std::filesystem::path(out_dir) / records[i], batch_opts.outputs());
          return summary_line(r);
        }));
      }
      for (std::size_t i = start; i < end; ++i) {
        try {
          lines[i] = running[i - start].get();
        } catch (const Error& e) {
          lines[i] = records[i] + "\terror: " + std::string(to_string(e.category())) + ": " + e.what();
          worst = std::max(worst, exit_code(e.category()));
        }
        std::cerr << "done " << records[i] << "\n";
      }
    }
    for (const auto& l : lines) std::cout << l << "\n";
    return worst;
  }

  if (*pe) {
    const std::string text = pe_input == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                             : report::read_file(pe_input);
    const auto values = synth::parse_values(text);
    ordinal::PatternParams params;
    params.order_m = pe_order;
    params.delay_tau = pe_delay;
    params.tie_rule = pe_tie == "noise" ? ordinal::TieRule::Noise : ordinal::TieRule::StableRank;
    params.noise_seed = pe_seed;
    const double h = ordinal::permutation_entropy(values, params, true);
    std::printf("%.6f\n", h);
    return 0;
  }

  if (*synth_cmd) {
    std::vector<double> values;
    if (kind == "ramp") values = synth::ramp(n);
    else if (kind == "sine") values = synth::sine(n, freq, synth_rate);
    else values = synth::uniform_noise(n, synth_seed);
    const std::string text = synth::to_text(values);
    if (synth_out.empty())
      std::cout << text;
    else
      report::write_file_atomic(synth_out, text);
    return 0;
  }

  if (*boxplot) {
    const auto r = report::parse_report(report::read_file(report_path));
    const std::set<std::string> wanted =
        box_formats.empty() ? std::set<std::string>{"svg", "csv"} : std::set<std::string>(box_formats.begin(), box_formats.end());
    const std::string svg = report::boxplot_svg(r.per_stage, r.patient_id + " (" + r.channel_label + ")");
    const std::string csv = report::boxplot_csv(r.per_stage);
    std::filesystem::path stem(box_out);
    if (wanted.count("svg")) report::write_file_atomic(std::filesystem::path(stem) += ".svg", svg);
    if (wanted.count("csv")) report::write_file_atomic(std::filesystem::path(stem) += ".csv", csv);
    return 0;
  }

  if (*channels) {
    const auto recording = edf::EdfRecording::open(channels_edf);
    for (const auto& c : recording.list_channels())
      std::cout << c.label << "\t" << c.sample_rate_hz.to_string() << (c.is_annotation ? "\tannotation" : "") << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sleeppe::Error& e) {
    std::cerr << "error: " << sleeppe::to_string(e.category()) << ": " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
