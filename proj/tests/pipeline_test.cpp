#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sleeppe/error.hpp"
#include "sleeppe/pipeline.hpp"
#include "sleeppe/report.hpp"
#include "support/synthetic_night.hpp"

using namespace sleeppe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("sleeppe_pipeline_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("end-to-end on a synthetic night") {
  const auto stages = testing::typical_stage_sequence();
  const auto night = testing::make_night(stages, 100, 5);
  const auto recording = edf::EdfRecording::from_bytes(night.edf);
  const auto hypnogram = parse_hypnogram(night.hypnogram_tsv, HypnogramFormat::Tsv);

  RunConfig config;
  config.edf_path = "night.edf";
  config.hypnogram_path = "night.tsv";
  const auto r = run_analysis(recording, hypnogram, config);

  CHECK(r.patient_id == "night");
  CHECK(r.channel_label == "Fp2-F4");
  CHECK(r.source_rate_hz == "100");
  CHECK(r.num_windows == stages.size());  // trailing unscored signal is cut
  REQUIRE(r.pairs.size() == stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    CHECK(r.pairs[i].stage == stages[i]);
    CHECK(r.pairs[i].start_time_s == doctest::Approx(30.0 * static_cast<double>(i)));
    CHECK(r.pairs[i].pe >= 0.0);
    CHECK(r.pairs[i].pe <= 1.0);
  }
  REQUIRE(r.correlation);
  CHECK(*r.correlation > 0.9);
  CHECK(r.monotonic == true);
  CHECK(r.per_stage.size() == 6);
  CHECK(r.params.order_m == 3);
  CHECK(r.params.target_rate_hz == "200");

  // Deterministic serialization.
  const auto again = run_analysis(recording, hypnogram, config);
  CHECK(report::to_report_text(r) == report::to_report_text(again));
  CHECK(report::epoch_csv(r) == report::epoch_csv(again));

  // The report text reads back to the same document.
  const auto parsed = report::parse_report(report::to_report_text(r));
  CHECK(report::to_report_text(parsed) == report::to_report_text(r));
}

TEST_CASE("scored range that starts mid-recording") {
  const auto stages = testing::typical_stage_sequence();
  const auto night = testing::make_night(stages, 200, 9);
  const auto recording = edf::EdfRecording::from_bytes(night.edf);
  // Drop the first 4 epochs from the scoring.
  std::string tsv;
  for (std::size_t e = 4; e < stages.size(); ++e)
    tsv += std::to_string(30 * e) + "\t" + std::string(stage_label(stages[e])) + "\n";
  const auto hypnogram = parse_hypnogram(tsv, HypnogramFormat::Tsv);
  const auto r = run_analysis(recording, hypnogram, RunConfig{});
  REQUIRE(r.pairs.size() == stages.size() - 4);
  CHECK(r.pairs.front().start_time_s == 120.0);
  CHECK(r.pairs.front().stage == stages[4]);
}

TEST_CASE("channel fallback") {
  const auto night = testing::make_night(testing::typical_stage_sequence(), 100, 1, "C3-A2");
  const auto recording = edf::EdfRecording::from_bytes(night.edf);
  const auto hypnogram = parse_hypnogram(night.hypnogram_tsv, HypnogramFormat::Tsv);
  RunConfig config;
  CHECK(select_channel(recording, config) == "C3-A2");
  CHECK(run_analysis(recording, hypnogram, config).channel_label == "C3-A2");

  config.fallback_channels.clear();
  try {
    run_analysis(recording, hypnogram, config);
    FAIL("expected UnknownChannel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownChannel);
    CHECK(e.category() == ErrorCategory::Channel);
  }
}

TEST_CASE("AASM merge folds S4 into S3") {
  const auto night = testing::make_night(testing::typical_stage_sequence(), 100, 2);
  const auto recording = edf::EdfRecording::from_bytes(night.edf);
  const auto hypnogram = parse_hypnogram(night.hypnogram_tsv, HypnogramFormat::Tsv);
  RunConfig config;
  config.merge_s3_s4 = true;
  const auto r = run_analysis(recording, hypnogram, config);
  CHECK(r.params.merge_s3_s4);
  CHECK(r.per_stage.size() == 5);
  for (const auto& p : r.pairs) CHECK(p.stage != SleepStage::S4);
}

TEST_CASE("files on disk, CAP-style scoring") {
  TempDir dir;
  const auto stages = testing::typical_stage_sequence();
  const auto night = testing::make_night(stages, 128, 3);
  write_bytes(dir.path / "n0.edf", night.edf);

  // Recording starts 22:00:00; scoring starts one minute later.
  std::string cap = "Patient ID:\tn0\n\nSleep Stage\tPosition\tTime [hh:mm:ss]\tEvent\tDuration[s]\tLocation\n";
  for (std::size_t e = 2; e < stages.size(); ++e) {
    const int t = 22 * 3600 + 30 * static_cast<int>(e);
    char clock[16];
    std::snprintf(clock, sizeof clock, "%02d:%02d:%02d", t / 3600, (t / 60) % 60, t % 60);
    const std::string label(stage_label(stages[e]));
    const std::string event = stages[e] == SleepStage::REM    ? "SLEEP-REM"
                              : stages[e] == SleepStage::WAKE ? "SLEEP-S0"
                                                              : "SLEEP-" + label;
    cap += label + "\tSupine\t" + clock + "\t" + event + "\t30\tROC-LOC\n";
  }
  {
    std::ofstream out(dir.path / "n0.txt");
    out << cap;
  }

  RunConfig config;
  config.edf_path = dir.path / "n0.edf";
  config.hypnogram_path = dir.path / "n0.txt";
  const auto r = run_analysis(config);
  CHECK(r.source_rate_hz == "128");
  REQUIRE(r.pairs.size() == stages.size() - 2);
  CHECK(r.pairs.front().start_time_s == 60.0);
  CHECK(r.pairs.front().stage == stages[2]);
  CHECK(r.correlation.value_or(0.0) > 0.85);

  config.hypnogram_path = dir.path / "missing.txt";
  try {
    run_analysis(config);
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::File);
  }
}
