#include <doctest.h>

#include <set>
#include <string>

#include "sleeppe/error.hpp"
#include "sleeppe/hypnogram.hpp"

using namespace sleeppe;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoFailure;
}

// Layout of the CAP Sleep Database scoring exports.
constexpr const char* kCapText =
    "Patient ID:\tn99\r\n"
    "Recording Date:\t01/02/2003\r\n"
    "Events Channel:\tROC-LOC\r\n"
    "\r\n"
    "Sleep Stage\tPosition\tTime [hh:mm:ss]\tEvent\tDuration[s]\tLocation\r\n"
    "W\tSupine\t23:59:00\tSLEEP-S0\t30\tROC-LOC\r\n"
    "W\tSupine\t23:59:30\tSLEEP-S0\t30\tROC-LOC\r\n"
    "S1\tSupine\t00:00:00\tSLEEP-S1\t30\tROC-LOC\r\n"
    "S1\tSupine\t00:00:12\tMCAP-A1\t4\tFp2-F4\r\n"
    "S2\tSupine\t00:00:30\tSLEEP-S2\t30\tROC-LOC\r\n"
    "MT\tSupine\t00:01:00\tSLEEP-MT\t30\tROC-LOC\r\n"
    "S3\tSupine\t00:01:30\tSLEEP-S3\t30\tROC-LOC\r\n"
    "S4\tSupine\t00:02:00\tSLEEP-S4\t30\tROC-LOC\r\n"
    "R\tSupine\t00:02:30\tSLEEP-REM\t30\tROC-LOC\r\n";

}  // namespace

TEST_CASE("stage values") {
  CHECK(stage_value(SleepStage::S4) == 0);
  CHECK(stage_value(SleepStage::S3) == 1);
  CHECK(stage_value(SleepStage::S2) == 2);
  CHECK(stage_value(SleepStage::S1) == 3);
  CHECK(stage_value(SleepStage::REM) == 4);
  CHECK(stage_value(SleepStage::WAKE) == 5);
  std::set<int> values;
  for (SleepStage s : kAllStages) {
    values.insert(stage_value(s));
    CHECK(stage_from_value(stage_value(s)) == s);
  }
  CHECK(values == std::set<int>{0, 1, 2, 3, 4, 5});
  CHECK(!stage_from_value(6));
  CHECK(!stage_from_value(-1));
}

TEST_CASE("label normalization") {
  CHECK(normalize_stage_label("W") == SleepStage::WAKE);
  CHECK(normalize_stage_label("Wake") == SleepStage::WAKE);
  CHECK(normalize_stage_label("0") == SleepStage::WAKE);
  CHECK(normalize_stage_label("R") == SleepStage::REM);
  CHECK(normalize_stage_label("REM") == SleepStage::REM);
  CHECK(normalize_stage_label("S1") == SleepStage::S1);
  CHECK(normalize_stage_label("4") == SleepStage::S4);
  CHECK(normalize_stage_label("SLEEP-S3") == SleepStage::S3);
  CHECK(normalize_stage_label("SLEEP-S0") == SleepStage::WAKE);
  CHECK(!normalize_stage_label("MT"));
  CHECK(!normalize_stage_label("SLEEP-UNSCORED"));
  CHECK(code_of([] { normalize_stage_label("N3"); }) == ErrorCode::UnknownStageLabel);
}

TEST_CASE("tsv parsing") {
  SUBCASE("two epochs") {
    const auto h = parse_hypnogram("0\tW\n30\tS1", HypnogramFormat::Tsv);
    REQUIRE(h.size() == 2);
    CHECK(stage_value(h.epochs()[0].stage) == 5);
    CHECK(stage_value(h.epochs()[1].stage) == 3);
    CHECK(h.epochs()[1].onset_s == 30.0);
    CHECK(h.end_s() == 60.0);
  }
  SUBCASE("CRLF, comments and blank lines") {
    const auto h = parse_hypnogram("# scored\r\n0\tS2\r\n\r\n30\tS3\r\n", HypnogramFormat::Tsv);
    CHECK(h.size() == 2);
  }
  SUBCASE("movement time is dropped, leaving a gap") {
    const auto h = parse_hypnogram("0\tW\n30\tMT\n60\tS2\n", HypnogramFormat::Tsv);
    REQUIRE(h.size() == 2);
    CHECK(h.epochs()[1].onset_s == 60.0);
  }
  SUBCASE("repeated onset") {
    CHECK(code_of([] { parse_hypnogram("0\tW\n30\tS1\n30\tS2\n", HypnogramFormat::Tsv); }) ==
          ErrorCode::NonMonotoneOnsets);
  }
  SUBCASE("off-grid onset") {
    CHECK(code_of([] { parse_hypnogram("0\tW\n45\tS1\n", HypnogramFormat::Tsv); }) == ErrorCode::MisalignedOnset);
  }
  SUBCASE("unknown label") {
    CHECK(code_of([] { parse_hypnogram("0\tN2\n", HypnogramFormat::Tsv); }) == ErrorCode::UnknownStageLabel);
  }
  SUBCASE("empty") {
    CHECK(code_of([] { parse_hypnogram("", HypnogramFormat::Tsv); }) == ErrorCode::EmptyHypnogram);
    CHECK(code_of([] { parse_hypnogram("0\tMT\n", HypnogramFormat::Tsv); }) == ErrorCode::EmptyHypnogram);
  }
  SUBCASE("bad onset") {
    CHECK(code_of([] { parse_hypnogram("zero\tW\n", HypnogramFormat::Tsv); }) == ErrorCode::MalformedInput);
  }
  SUBCASE("deterministic") {
    const char* text = "0\tW\n30\tS1\n60\tS2\n";
    const auto a = parse_hypnogram(text, HypnogramFormat::Tsv);
    const auto b = parse_hypnogram(text, HypnogramFormat::Tsv);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.epochs()[i].onset_s == b.epochs()[i].onset_s);
      CHECK(a.epochs()[i].stage == b.epochs()[i].stage);
    }
  }
}

TEST_CASE("CAP scoring text") {
  SUBCASE("relative to the recording start, across midnight") {
    HypnogramOptions opt;
    opt.recording_start_s_of_day = 23 * 3600 + 58 * 60;  // 23:58:00
    const auto h = parse_hypnogram(kCapText, HypnogramFormat::CapTxt, opt);
    REQUIRE(h.size() == 7);  // MCAP and MT rows dropped
    CHECK(h.epochs()[0].onset_s == 60.0);
    CHECK(h.epochs()[2].onset_s == 120.0);
    CHECK(h.epochs()[2].stage == SleepStage::S1);
    CHECK(h.epochs()[3].onset_s == 150.0);
    CHECK(h.epochs()[4].onset_s == 210.0);  // after the MT gap
    CHECK(h.epochs()[4].stage == SleepStage::S3);
    CHECK(h.epochs()[6].stage == SleepStage::REM);
  }
  SUBCASE("recording started the previous evening, scoring after midnight") {
    const std::string text =
        "Sleep Stage\tTime [hh:mm:ss]\tEvent\tDuration[s]\tLocation\n"
        "S2\t00:10:00\tSLEEP-S2\t30\tC4-A1\n"
        "S2\t00:10:30\tSLEEP-S2\t30\tC4-A1\n";
    HypnogramOptions opt;
    opt.recording_start_s_of_day = 23 * 3600;
    const auto h = parse_hypnogram(text, HypnogramFormat::CapTxt, opt);
    REQUIRE(h.size() == 2);
    CHECK(h.epochs()[0].onset_s == 4200.0);
  }
  SUBCASE("first stage row is the origin without a start time") {
    const auto h = parse_hypnogram(kCapText, HypnogramFormat::CapTxt);
    CHECK(h.epochs()[0].onset_s == 0.0);
    CHECK(h.epochs()[6].onset_s == 210.0);
  }
  SUBCASE("no table header") {
    CHECK(code_of([] { parse_hypnogram("W\t22:00:00\tSLEEP-S0\t30\n", HypnogramFormat::CapTxt); }) ==
          ErrorCode::MalformedInput);
  }
}

TEST_CASE("align") {
  const auto h = parse_hypnogram("0\tW\n30\tS1\n60\tS2\n90\tS3\n", HypnogramFormat::Tsv);
  SUBCASE("equal length, same origin") {
    std::vector<EpochPe> w{{0, 0.0, 0.8}, {1, 30.0, 0.7}, {2, 60.0, 0.6}, {3, 90.0, 0.5}};
    const auto pairs = align(h, w);
    REQUIRE(pairs.size() == 4);
    CHECK(pairs[0].value() == 5);
    CHECK(pairs[3].value() == 1);
    CHECK(pairs[3].pe == 0.5);
  }
  SUBCASE("hypnogram covers the first half only") {
    std::vector<EpochPe> w;
    for (std::size_t i = 0; i < 8; ++i) w.push_back({i, 30.0 * static_cast<double>(i), 0.5});
    const auto pairs = align(h, w);
    REQUIRE(pairs.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(pairs[i].start_time_s == h.epochs()[i].onset_s);
  }
  SUBCASE("gaps in the hypnogram are skipped") {
    const auto gappy = parse_hypnogram("0\tW\n30\tMT\n60\tS2\n", HypnogramFormat::Tsv);
    std::vector<EpochPe> w{{0, 0.0, 0.8}, {1, 30.0, 0.7}, {2, 60.0, 0.6}};
    const auto pairs = align(gappy, w);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[1].epoch_index == 2);
  }
  SUBCASE("long recording, shorter scoring") {
    std::string text;
    for (int i = 0; i < 732; ++i) text += std::to_string(30 * i) + "\tS2\n";
    const auto scored = parse_hypnogram(text, HypnogramFormat::Tsv);
    std::vector<EpochPe> w;
    for (std::size_t i = 0; i < 1000; ++i) w.push_back({i, 30.0 * static_cast<double>(i), 0.5});
    CHECK(align(scored, w).size() == 732);
  }
  SUBCASE("disjoint") {
    std::vector<EpochPe> w{{0, 300.0, 0.5}};
    CHECK(code_of([&] { align(h, w); }) == ErrorCode::NoOverlap);
  }
}
