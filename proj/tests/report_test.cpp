#include <doctest.h>

#include <filesystem>
#include <regex>

#include "sleeppe/error.hpp"
#include "sleeppe/report.hpp"
#include "support/oracles.hpp"

using namespace sleeppe;
using namespace sleeppe::report;

namespace {

analysis::StageBoxplot box(SleepStage s, std::vector<double> data) {
  return {s, analysis::box_stats(data)};
}

std::vector<std::string> all_matches(const std::string& text, const std::string& pattern) {
  std::vector<std::string> out;
  const std::regex re(pattern);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

std::vector<analysis::StageBoxplot> six_stages() {
  return {box(SleepStage::WAKE, {0.8, 0.82, 0.79, 0.6}), box(SleepStage::S4, {0.6, 0.61, 0.62}),
          box(SleepStage::S3, {0.63, 0.64}),             box(SleepStage::S2, {0.66, 0.7, 0.68, 0.67, 0.95}),
          box(SleepStage::S1, {0.74, 0.75}),             box(SleepStage::REM, {0.7, 0.71})};
}

}  // namespace

TEST_CASE("format_number round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 30.0, -250.0, 1e-300, 0.0})
    CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(30.0) == "30");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("boxplot SVG") {
  const auto boxes = six_stages();
  const std::string svg = boxplot_svg(boxes, "n1 (Fp2-F4)");
  CHECK(svg.starts_with("<svg"));
  CHECK(svg.find("viewBox=\"0 0 640 400\"") != std::string::npos);
  const auto stages = all_matches(svg, "data-stage=\"([^\"]+)\"");
  CHECK(stages == std::vector<std::string>{"S4", "S3", "S2", "S1", "R", "W"});

  // Whisker attributes are the CSV fields, character for character.
  const std::string csv = boxplot_csv(boxes);
  const auto lows = all_matches(svg, "data-whisker-low=\"([^\"]+)\"");
  const auto highs = all_matches(svg, "data-whisker-high=\"([^\"]+)\"");
  std::vector<std::string> csv_lows, csv_highs;
  for (const auto& line : all_matches(csv, "\n([^\n]+)")) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line + ",") {
      if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    csv_lows.push_back(cells[6]);
    csv_highs.push_back(cells[7]);
  }
  // CSV rows follow the caller's order; compare by stage.
  const auto csv_stages = all_matches(csv, "\n([A-Z0-9]+),");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto j = static_cast<std::size_t>(std::find(csv_stages.begin(), csv_stages.end(), stages[i]) - csv_stages.begin());
    REQUIRE(j < csv_stages.size());
    CHECK(lows[i] == csv_lows[j]);
    CHECK(highs[i] == csv_highs[j]);
  }

  // Red crosses for outliers: 0.6 in W and 0.95 in S2.
  const auto outliers = all_matches(svg, "class=\"outlier\" data-value=\"([^\"]+)\"");
  CHECK(outliers == std::vector<std::string>{"0.95", "0.6"});
  CHECK(svg.find("class=\"outlier\" data-value=\"0.95\" d=\"M") != std::string::npos);
}

TEST_CASE("SVG without S4 has five boxes") {
  auto boxes = six_stages();
  boxes.erase(boxes.begin() + 1);
  const std::string svg = boxplot_svg(boxes, "ins1");
  CHECK(all_matches(svg, "data-stage=\"([^\"]+)\"") == std::vector<std::string>{"S3", "S2", "S1", "R", "W"});
}

TEST_CASE("boxplot CSV layout") {
  const std::string csv = boxplot_csv(std::vector<analysis::StageBoxplot>{box(SleepStage::S2, {0.6, 0.7, 0.8})});
  CHECK(csv == "stage,value,n,q1,median,q3,whisker_low,whisker_high,num_outliers,outliers\n"
               "S2,2,3,0.6499999999999999,0.7,0.75,0.6,0.8,0,\n");
}

TEST_CASE("malformed report") {
  CHECK_THROWS_AS(parse_report("{"), Error);
  CHECK_THROWS_AS(parse_report("{\"patient_id\": 1}"), Error);
  try {
    parse_report("[]");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedInput);
  }
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto path = std::filesystem::temp_directory_path() / "sleeppe_atomic.txt";
  write_file_atomic(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_file_atomic("/nonexistent-dir/x.txt", "x"), Error);
}
