#include "sleeppe/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "sleeppe/error.hpp"

namespace sleeppe::report {
namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

SleepStage stage_from_label(const std::string& label) {
  for (SleepStage s : kAllStages)
    if (stage_label(s) == label) return s;
  throw Error(ErrorCode::MalformedInput, "unknown stage '" + label + "' in report");
}

// SVG geometry.
constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 620.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 350.0;

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string to_report_text(const AnalysisReport& r) {
  json j;
  j["patient_id"] = r.patient_id;
  j["channel"] = r.channel_label;
  j["edf_file"] = r.edf_file;
  j["hypnogram_file"] = r.hypnogram_file;
  j["source_rate_hz"] = r.source_rate_hz;

  json& p = j["params"];
  p["order_m"] = r.params.order_m;
  p["delay_tau"] = r.params.delay_tau;
  p["tie_rule"] = r.params.tie_rule;
  p["noise_seed"] = r.params.noise_seed;
  p["target_rate_hz"] = r.params.target_rate_hz;
  p["cutoff_hz"] = r.params.cutoff_hz;
  p["num_taps"] = r.params.num_taps;
  p["epoch_seconds"] = r.params.epoch_seconds;
  p["merge_s3_s4"] = r.params.merge_s3_s4;

  json& s = j["summary"];
  s["num_windows"] = r.num_windows;
  s["num_hypnogram_epochs"] = r.num_hypnogram_epochs;
  s["num_pairs"] = r.pairs.size();
  s["correlation"] = optional_number(r.correlation);
  s["spearman"] = optional_number(r.spearman);
  s["monotonic"] = r.monotonic ? json(*r.monotonic) : json(nullptr);
  s["pe_min"] = r.pe_min;
  s["pe_max"] = r.pe_max;

  json stages = json::array();
  for (const auto& b : r.per_stage) {
    json e;
    e["stage"] = std::string(stage_label(b.stage));
    e["value"] = stage_value(b.stage);
    e["n"] = b.stats.n;
    e["q1"] = b.stats.q1;
    e["median"] = b.stats.median;
    e["q3"] = b.stats.q3;
    e["whisker_low"] = b.stats.whisker_low;
    e["whisker_high"] = b.stats.whisker_high;
    e["outliers"] = b.stats.outliers;
    stages.push_back(std::move(e));
  }
  j["per_stage"] = std::move(stages);

  json epochs = json::array();
  for (const auto& e : r.pairs) {
    json row;
    row["index"] = e.epoch_index;
    row["start_s"] = e.start_time_s;
    row["stage"] = std::string(stage_label(e.stage));
    row["pe"] = e.pe;
    epochs.push_back(std::move(row));
  }
  j["epochs"] = std::move(epochs);
  return j.dump(2) + "\n";
}

AnalysisReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    AnalysisReport r;
    r.patient_id = j.at("patient_id").get<std::string>();
    r.channel_label = j.at("channel").get<std::string>();
    r.edf_file = j.at("edf_file").get<std::string>();
    r.hypnogram_file = j.at("hypnogram_file").get<std::string>();
    r.source_rate_hz = j.at("source_rate_hz").get<std::string>();

    const json& p = j.at("params");
    r.params.order_m = p.at("order_m").get<int>();
    r.params.delay_tau = p.at("delay_tau").get<int>();
    r.params.tie_rule = p.at("tie_rule").get<std::string>();
    r.params.noise_seed = p.at("noise_seed").get<std::uint64_t>();
    r.params.target_rate_hz = p.at("target_rate_hz").get<std::string>();
    r.params.cutoff_hz = p.at("cutoff_hz").get<double>();
    r.params.num_taps = p.at("num_taps").get<int>();
    r.params.epoch_seconds = p.at("epoch_seconds").get<double>();
    r.params.merge_s3_s4 = p.at("merge_s3_s4").get<bool>();

    const json& s = j.at("summary");
    r.num_windows = s.at("num_windows").get<std::size_t>();
    r.num_hypnogram_epochs = s.at("num_hypnogram_epochs").get<std::size_t>();
    if (!s.at("correlation").is_null()) r.correlation = s.at("correlation").get<double>();
    if (!s.at("spearman").is_null()) r.spearman = s.at("spearman").get<double>();
    if (!s.at("monotonic").is_null()) r.monotonic = s.at("monotonic").get<bool>();
    r.pe_min = s.at("pe_min").get<double>();
    r.pe_max = s.at("pe_max").get<double>();

    for (const auto& e : j.at("per_stage")) {
      analysis::StageBoxplot b;
      b.stage = stage_from_label(e.at("stage").get<std::string>());
      b.stats.n = e.at("n").get<std::size_t>();
      b.stats.q1 = e.at("q1").get<double>();
      b.stats.median = e.at("median").get<double>();
      b.stats.q3 = e.at("q3").get<double>();
      b.stats.whisker_low = e.at("whisker_low").get<double>();
      b.stats.whisker_high = e.at("whisker_high").get<double>();
      b.stats.outliers = e.at("outliers").get<std::vector<double>>();
      r.per_stage.push_back(std::move(b));
    }
    for (const auto& e : j.at("epochs")) {
      StagedPe row;
      row.epoch_index = e.at("index").get<std::size_t>();
      row.start_time_s = e.at("start_s").get<double>();
      row.stage = stage_from_label(e.at("stage").get<std::string>());
      row.pe = e.at("pe").get<double>();
      r.pairs.push_back(row);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("report: ") + e.what());
  }
}

std::string epoch_csv(const AnalysisReport& report) {
  std::string out = "index,start_s,stage,pe\n";
  for (const auto& e : report.pairs) {
    out += std::to_string(e.epoch_index) + "," + format_number(e.start_time_s) + "," +
           std::string(stage_label(e.stage)) + "," + format_number(e.pe) + "\n";
  }
  return out;
}

std::string boxplot_csv(std::span<const analysis::StageBoxplot> boxplots) {
  std::string out = "stage,value,n,q1,median,q3,whisker_low,whisker_high,num_outliers,outliers\n";
  for (const auto& b : boxplots) {
    std::string outliers;
    for (std::size_t i = 0; i < b.stats.outliers.size(); ++i)
      outliers += (i ? ";" : "") + format_number(b.stats.outliers[i]);
    out += std::string(stage_label(b.stage)) + "," + std::to_string(stage_value(b.stage)) + "," +
           std::to_string(b.stats.n) + "," + format_number(b.stats.q1) + "," + format_number(b.stats.median) + "," +
           format_number(b.stats.q3) + "," + format_number(b.stats.whisker_low) + "," +
           format_number(b.stats.whisker_high) + "," + std::to_string(b.stats.outliers.size()) + "," + outliers +
           "\n";
  }
  return out;
}

std::string boxplot_svg(std::span<const analysis::StageBoxplot> boxplots, std::string_view title) {
  std::vector<analysis::StageBoxplot> ordered(boxplots.begin(), boxplots.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return stage_value(a.stage) < stage_value(b.stage); });

  // Y range: data extent rounded outward to 0.05.
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& b : ordered) {
    double bmin = b.stats.whisker_low, bmax = b.stats.whisker_high;
    for (double o : b.stats.outliers) {
      bmin = std::min(bmin, o);
      bmax = std::max(bmax, o);
    }
    lo = first ? bmin : std::min(lo, bmin);
    hi = first ? bmax : std::max(hi, bmax);
    first = false;
  }
  lo = std::floor(lo * 20.0) / 20.0;
  hi = std::ceil(hi * 20.0) / 20.0;
  if (hi - lo < 0.05) hi = lo + 0.05;
  const auto y_of = [&](double v) { return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop); };
  const auto px = [](double v) { return format_number(std::round(v * 100.0) / 100.0); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
  svg << "<g class=\"axis\" data-y-min=\"" << format_number(lo) << "\" data-y-max=\"" << format_number(hi) << "\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"black\"/>\n";
  for (double t = lo; t <= hi + 1e-9; t += 0.05) {
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << px(y_of(t) + 4) << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_number(std::round(t * 100.0) / 100.0) << "</text>\n";
  }
  svg << "</g>\n";

  const double slot = ordered.empty() ? 0.0 : (kRight - kLeft) / static_cast<double>(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& b = ordered[i];
    const auto& s = b.stats;
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double half = slot * 0.25;
    const double cap = slot * 0.12;
    svg << "<g class=\"box\" data-stage=\"" << stage_label(b.stage) << "\" data-n=\"" << s.n << "\" data-q1=\""
        << format_number(s.q1) << "\" data-median=\"" << format_number(s.median) << "\" data-q3=\""
        << format_number(s.q3) << "\" data-whisker-low=\"" << format_number(s.whisker_low)
        << "\" data-whisker-high=\"" << format_number(s.whisker_high) << "\">\n";
    svg << "<rect x=\"" << px(cx - half) << "\" y=\"" << px(y_of(s.q3)) << "\" width=\"" << px(2 * half)
        << "\" height=\"" << px(y_of(s.q1) - y_of(s.q3)) << "\" fill=\"none\" stroke=\"blue\"/>\n";
    svg << "<line class=\"median\" x1=\"" << px(cx - half) << "\" y1=\"" << px(y_of(s.median)) << "\" x2=\""
        << px(cx + half) << "\" y2=\"" << px(y_of(s.median)) << "\" stroke=\"red\"/>\n";
    svg << "<line class=\"whisker\" x1=\"" << px(cx) << "\" y1=\"" << px(y_of(s.q3)) << "\" x2=\"" << px(cx)
        << "\" y2=\"" << px(y_of(s.whisker_high)) << "\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n";
    svg << "<line class=\"whisker\" x1=\"" << px(cx) << "\" y1=\"" << px(y_of(s.q1)) << "\" x2=\"" << px(cx)
        << "\" y2=\"" << px(y_of(s.whisker_low)) << "\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n";
    for (double w : {s.whisker_low, s.whisker_high}) {
      svg << "<line class=\"cap\" x1=\"" << px(cx - cap) << "\" y1=\"" << px(y_of(w)) << "\" x2=\"" << px(cx + cap)
          << "\" y2=\"" << px(y_of(w)) << "\" stroke=\"black\"/>\n";
    }
    for (double o : s.outliers) {
      const double y = y_of(o);
      svg << "<path class=\"outlier\" data-value=\"" << format_number(o) << "\" d=\"M" << px(cx - 4) << " "
          << px(y) << "H" << px(cx + 4) << "M" << px(cx) << " " << px(y - 4) << "V" << px(y + 4)
          << "\" stroke=\"red\"/>\n";
    }
    svg << "<text x=\"" << px(cx) << "\" y=\"" << kBottom + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << stage_label(b.stage) << "</text>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoFailure, "cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sleeppe::report
