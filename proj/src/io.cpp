#include "harvestsim/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <system_error>

#include "json.hpp"

#include "harvestsim/version.hpp"

namespace harvestsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r')) ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

// Reads content lines, skipping blanks and '#' comments; tracks 1-based line
// numbers for error messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_number_;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      line = t;
      return true;
    }
    return false;
  }

  int line_number() const { return line_number_; }
  const std::string& source() const { return source_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_ + ":" + std::to_string(line_number_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string source_;
  int line_number_ = 0;
};

double parse_number(const LineReader& reader, const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    reader.fail("bad number '" + token + "'");
  }
  return value;
}

void write_version_comment(std::ostream& out) {
  out << "# harvestsim " << kVersion << "\n";
}

ordered_json row_json(const ComparisonRow& row) {
  return ordered_json{{"joint", row.joint},
                      {"gait", to_string(row.gait)},
                      {"speed_kmh", row.speed_kmh},
                      {"rms_rad_s", row.rms_rad_s}};
}

ordered_json record_json(const LoadSweepRecord& rec) {
  return ordered_json{{"r_load_ohm", rec.r_load_ohm},
                      {"v_rms", rec.v_rms},
                      {"p_out_mean_w", rec.power_w}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

LandmarkSeries parse_landmark_series(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(source_name + ": no frames (missing header)");
  }
  const std::vector<std::string> header = split_csv(line);
  if (header.empty() || header[0] != "t") {
    reader.fail("first column must be 't'");
  }

  struct Columns {
    int x = -1, y = -1, v = -1;
  };
  std::vector<std::string> names;
  std::map<std::string, Columns> columns;
  for (std::size_t col = 1; col < header.size(); ++col) {
    const std::string& token = header[col];
    const std::size_t underscore = token.rfind('_');
    if (underscore == std::string::npos || underscore == 0 || underscore + 2 != token.size()) {
      reader.fail("unrecognized column '" + token + "' (expected <name>_x/_y/_v)");
    }
    const std::string name = token.substr(0, underscore);
    const char suffix = token.back();
    if (columns.find(name) == columns.end()) names.push_back(name);
    Columns& c = columns[name];
    int* slot = nullptr;
    switch (suffix) {
      case 'x': slot = &c.x; break;
      case 'y': slot = &c.y; break;
      case 'v': slot = &c.v; break;
      case 'z': continue;  // third coordinate ignored
      default: reader.fail("unrecognized column '" + token + "' (expected <name>_x/_y/_v)");
    }
    if (*slot != -1) reader.fail("duplicate column '" + token + "'");
    *slot = static_cast<int>(col);
  }
  if (names.empty()) reader.fail("no landmark columns declared");
  for (const std::string& name : names) {
    const Columns& c = columns[name];
    if (c.x == -1 || c.y == -1) {
      reader.fail("landmark '" + name + "' is missing an _x or _y column");
    }
  }

  LandmarkSeries series;
  series.names = names;
  while (reader.next(line)) {
    const std::vector<std::string> tokens = split_csv(line);
    if (tokens.size() != header.size()) {
      reader.fail("expected " + std::to_string(header.size()) + " columns, got " +
                  std::to_string(tokens.size()));
    }
    LandmarkFrame frame;
    frame.t = parse_number(reader, tokens[0]);
    if (!series.frames.empty() && !(frame.t > series.frames.back().t)) {
      reader.fail("timestamps must be strictly increasing (t=" + tokens[0] + ")");
    }
    frame.pos.reserve(names.size());
    frame.vis.reserve(names.size());
    for (const std::string& name : names) {
      const Columns& c = columns[name];
      Point2 p;
      p.x = parse_number(reader, tokens[static_cast<std::size_t>(c.x)]);
      p.y = parse_number(reader, tokens[static_cast<std::size_t>(c.y)]);
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        reader.fail("non-finite position for landmark '" + name + "'");
      }
      double vis = 1.0;
      if (c.v != -1) {
        vis = parse_number(reader, tokens[static_cast<std::size_t>(c.v)]);
        if (!(vis >= 0.0 && vis <= 1.0)) {
          reader.fail("visibility for landmark '" + name + "' must lie in [0, 1]");
        }
      }
      frame.pos.push_back(p);
      frame.vis.push_back(vis);
    }
    series.frames.push_back(std::move(frame));
  }

  if (series.frames.empty()) {
    throw ParseError(source_name + ": no frames");
  }
  if (series.frames.size() < 2) {
    throw ParseError(source_name + ": only 1 data row; a series needs at least 2 frames");
  }
  series.sample_rate_hz = static_cast<double>(series.frames.size() - 1) /
                          (series.frames.back().t - series.frames.front().t);
  return series;
}

std::vector<LoadSweepRecord> parse_sweep_csv(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(source_name + ": empty sweep table (missing header)");
  }
  const std::vector<std::string> header = split_csv(line);
  const bool has_power = header.size() == 3;
  if (header.size() < 2 || header.size() > 3 || header[0] != "r_load_ohm" ||
      header[1] != "v_rms" ||
      (has_power && header[2] != "power_w" && header[2] != "p_out_mean_w")) {
    reader.fail("expected header 'r_load_ohm,v_rms[,power_w]'");
  }

  std::vector<LoadSweepRecord> records;
  while (reader.next(line)) {
    const std::vector<std::string> tokens = split_csv(line);
    if (tokens.size() != header.size()) {
      reader.fail("expected " + std::to_string(header.size()) + " columns, got " +
                  std::to_string(tokens.size()));
    }
    LoadSweepRecord rec;
    rec.r_load_ohm = parse_number(reader, tokens[0]);
    rec.v_rms = parse_number(reader, tokens[1]);
    if (!(rec.r_load_ohm > 0.0) || !std::isfinite(rec.r_load_ohm)) {
      reader.fail("r_load_ohm must be > 0");
    }
    if (rec.v_rms < 0.0 || !std::isfinite(rec.v_rms)) {
      reader.fail("v_rms must be >= 0");
    }
    if (has_power) {
      rec.power_w = parse_number(reader, tokens[2]);
      if (rec.power_w < 0.0 || !std::isfinite(rec.power_w)) {
        reader.fail("power must be >= 0");
      }
    } else {
      rec.power_w = power_from_vrms(rec.v_rms, rec.r_load_ohm);
    }
    records.push_back(rec);
  }
  if (records.empty()) {
    throw ParseError(source_name + ": sweep table has no data rows");
  }
  return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<LoadSweepRecord>& records,
                     const std::string& power_column) {
  write_version_comment(out);
  out << "r_load_ohm,v_rms," << power_column << "\n";
  for (const LoadSweepRecord& rec : records) {
    out << format_double(rec.r_load_ohm) << ',' << format_double(rec.v_rms) << ','
        << format_double(rec.power_w) << "\n";
  }
}

void write_trace_csv(std::ostream& out, const ChainTrace& trace) {
  write_version_comment(out);
  out << "t,theta_rad,omega_arm,omega_gen,v,i,p_out,p_internal\n";
  for (const ChainSample& s : trace.samples) {
    out << format_double(s.t) << ',' << format_double(s.theta) << ','
        << format_double(s.omega_arm) << ',' << format_double(s.omega_gen) << ','
        << format_double(s.v) << ',' << format_double(s.i) << ','
        << format_double(s.p_out) << ',' << format_double(s.p_internal) << "\n";
  }
}

std::vector<ChainSample> parse_trace_csv(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(source_name + ": empty trace (missing header)");
  }
  if (line != "t,theta_rad,omega_arm,omega_gen,v,i,p_out,p_internal") {
    reader.fail("unexpected trace header");
  }
  std::vector<ChainSample> samples;
  while (reader.next(line)) {
    const std::vector<std::string> tokens = split_csv(line);
    if (tokens.size() != 8) {
      reader.fail("expected 8 columns, got " + std::to_string(tokens.size()));
    }
    ChainSample s;
    s.t = parse_number(reader, tokens[0]);
    s.theta = parse_number(reader, tokens[1]);
    s.omega_arm = parse_number(reader, tokens[2]);
    s.omega_gen = parse_number(reader, tokens[3]);
    s.v = parse_number(reader, tokens[4]);
    s.i = parse_number(reader, tokens[5]);
    s.p_out = parse_number(reader, tokens[6]);
    s.p_internal = parse_number(reader, tokens[7]);
    if (!samples.empty() && !(s.t > samples.back().t)) {
      reader.fail("timestamps must be strictly increasing");
    }
    samples.push_back(s);
  }
  return samples;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  write_version_comment(out);
  out << "joint,gait,speed_kmh,rms_rad_s\n";
  for (const ComparisonRow& row : report.rows) {
    out << row.joint << ',' << to_string(row.gait) << ',' << format_double(row.speed_kmh)
        << ',' << format_double(row.rms_rad_s) << "\n";
  }
}

std::vector<ComparisonRow> parse_comparison_csv(std::istream& in,
                                                const std::string& source_name) {
  LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(source_name + ": empty comparison table (missing header)");
  }
  if (line != "joint,gait,speed_kmh,rms_rad_s") {
    reader.fail("unexpected comparison header");
  }
  std::vector<ComparisonRow> rows;
  while (reader.next(line)) {
    const std::vector<std::string> tokens = split_csv(line);
    if (tokens.size() != 4) {
      reader.fail("expected 4 columns, got " + std::to_string(tokens.size()));
    }
    ComparisonRow row;
    row.joint = tokens[0];
    try {
      row.gait = gait_from_string(tokens[1]);
    } catch (const ConfigError& e) {
      reader.fail(e.what());
    }
    row.speed_kmh = parse_number(reader, tokens[2]);
    row.rms_rad_s = parse_number(reader, tokens[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string comparison_report_json(const ComparisonReport& report) {
  ordered_json j;
  j["harvestsim_version"] = kVersion;
  j["rows"] = ordered_json::array();
  for (const ComparisonRow& row : report.rows) j["rows"].push_back(row_json(row));
  j["best_per_speed"] = ordered_json::array();
  for (const ComparisonRow& row : report.best_per_speed) {
    j["best_per_speed"].push_back(row_json(row));
  }
  j["best_overall"] = row_json(report.best_overall);
  return dump(j);
}

std::string fit_result_json(const FitResult& fit) {
  ordered_json j;
  j["harvestsim_version"] = kVersion;
  j["emf_rms_v"] = fit.emf_rms;
  j["r_internal_ohm"] = fit.r_internal_ohm;
  j["residual_rms_v"] = fit.residual_rms;
  return dump(j);
}

FitResult parse_fit_result_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("emf_rms_v") ||
      !j.contains("r_internal_ohm") || !j.contains("residual_rms_v")) {
    throw ParseError("fit result JSON: missing emf_rms_v/r_internal_ohm/residual_rms_v");
  }
  FitResult fit;
  fit.emf_rms = j.at("emf_rms_v").get<double>();
  fit.r_internal_ohm = j.at("r_internal_ohm").get<double>();
  fit.residual_rms = j.at("residual_rms_v").get<double>();
  return fit;
}

std::string sweep_result_json(const SweepResult& sweep) {
  ordered_json j;
  j["harvestsim_version"] = kVersion;
  j["records"] = ordered_json::array();
  for (const LoadSweepRecord& rec : sweep.records) j["records"].push_back(record_json(rec));
  j["argmax"] = record_json(sweep.records.at(sweep.argmax_index));
  return dump(j);
}

std::string capacitor_result_json(const CapacitorResult& result) {
  ordered_json j;
  j["harvestsim_version"] = kVersion;
  j["final_voltage_v"] = result.final_voltage_v;
  j["stored_energy_j"] = result.stored_energy_j;
  j["clamped"] = result.clamped;
  return dump(j);
}

std::string geartrain_report_json(const GearTrain& train, const ValidationReport& report) {
  ordered_json j;
  j["harvestsim_version"] = kVersion;
  j["overall_ratio"] = overall_ratio(train);
  j["stages"] = ordered_json::array();
  for (const GearStage& stage : train.stages) {
    j["stages"].push_back(
        ordered_json{{"id", stage.id},
                     {"module_mm", stage.module_mm},
                     {"teeth_large", stage.teeth_large},
                     {"teeth_small", stage.teeth_small},
                     {"pitch_diameter_large_mm", pitch_diameter(stage, GearSide::Large)},
                     {"pitch_diameter_small_mm", pitch_diameter(stage, GearSide::Small)}});
  }
  j["meshes"] = ordered_json::array();
  for (std::size_t i = 0; i + 1 < train.stages.size(); ++i) {
    const GearStage& up = train.stages[i];
    const GearStage& down = train.stages[i + 1];
    ordered_json mesh{{"from", up.id}, {"to", down.id}};
    if (up.module_mm == down.module_mm) {
      mesh["center_distance_mm"] = mesh_center_distance(up, down);
    } else {
      mesh["center_distance_mm"] = nullptr;
    }
    j["meshes"].push_back(mesh);
  }
  j["checks"] = ordered_json::array();
  for (const CheckResult& check : report.checks) {
    j["checks"].push_back(ordered_json{
        {"name", check.name}, {"status", to_string(check.status)}, {"detail", check.detail}});
  }
  j["all_passed"] = report.all_passed();
  j["warnings"] = report.has_warnings();
  return dump(j);
}

}  // namespace harvestsim
