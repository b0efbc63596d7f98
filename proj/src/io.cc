#include "planar_pose/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "planar_pose/error.h"

namespace planar_pose {

namespace {

void CheckCalibration(const Calibration& c) {
  if (!(c.fx > 0.0) || !(c.fy > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "calibration focal lengths must be positive");
  }
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& field, int line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": not a finite number: '" + field + "'");
  }
}

Calibration ParseCamera(const nlohmann::json& j) {
  Calibration c;
  c.fx = j.at("fx").get<double>();
  c.fy = j.at("fy").get<double>();
  c.cx = j.at("cx").get<double>();
  c.cy = j.at("cy").get<double>();
  return c;
}

nlohmann::json CameraJson(const Calibration& c) {
  return {{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}};
}

}  // namespace

std::vector<Correspondence> NormalizePoints(std::span<const PixelPair> pixels,
                                            const CameraPairCalibration& calib) {
  CheckCalibration(calib.cam1);
  CheckCalibration(calib.cam2);
  std::vector<Correspondence> out;
  out.reserve(pixels.size());
  for (const auto& p : pixels) {
    out.push_back({(p.p1x - calib.cam1.cx) / calib.cam1.fx, (p.p1y - calib.cam1.cy) / calib.cam1.fy,
                   (p.p2x - calib.cam2.cx) / calib.cam2.fx, (p.p2y - calib.cam2.cy) / calib.cam2.fy});
  }
  return out;
}

std::vector<PixelPair> DenormalizePoints(std::span<const Correspondence> points,
                                         const CameraPairCalibration& calib) {
  std::vector<PixelPair> out;
  out.reserve(points.size());
  for (const auto& q : points) {
    out.push_back({q.q1x * calib.cam1.fx + calib.cam1.cx, q.q1y * calib.cam1.fy + calib.cam1.cy,
                   q.q2x * calib.cam2.fx + calib.cam2.cx, q.q2y * calib.cam2.fy + calib.cam2.cy});
  }
  return out;
}

CameraPairCalibration ParseCalibrationJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CameraPairCalibration calib;
    calib.cam1 = ParseCamera(j.at("cam1"));
    calib.cam2 = j.contains("cam2") ? ParseCamera(j.at("cam2")) : calib.cam1;
    CheckCalibration(calib.cam1);
    CheckCalibration(calib.cam2);
    return calib;
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("calibration: ") + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("calibration: ") + e.what());
  }
}

CameraPairCalibration ReadCalibrationFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open calibration file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCalibrationJson(ss.str());
}

std::string CalibrationToJson(const CameraPairCalibration& calib) {
  return nlohmann::json{{"cam1", CameraJson(calib.cam1)}, {"cam2", CameraJson(calib.cam2)}}
      .dump(2);
}

CsvTable ReadCorrespondenceCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = SplitFields(trimmed);
    if (!have_header) {
      std::vector<std::string> names = fields;
      if (!names.empty() && names.front() == "pair") {
        table.has_pair_column = true;
        names.erase(names.begin());
      }
      if (names == std::vector<std::string>{"q1x", "q1y", "q2x", "q2y"}) {
        table.pixel_coordinates = false;
      } else if (names == std::vector<std::string>{"p1x", "p1y", "p2x", "p2y"}) {
        table.pixel_coordinates = true;
      } else {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) +
                        ": expected header q1x,q1y,q2x,q2y or p1x,p1y,p2x,p2y");
      }
      width = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != width) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(width) + " fields");
    }
    const size_t off = table.has_pair_column ? 1 : 0;
    if (table.has_pair_column) table.pair_ids.push_back(fields[0]);
    table.raw.push_back({ParseNumber(fields[off], line_no), ParseNumber(fields[off + 1], line_no),
                         ParseNumber(fields[off + 2], line_no),
                         ParseNumber(fields[off + 3], line_no)});
  }
  if (!have_header) throw Error(ErrorCode::kParse, "empty correspondence file");
  return table;
}

std::vector<Correspondence> TableToCorrespondences(
    const CsvTable& table, const std::optional<CameraPairCalibration>& calib) {
  if (table.pixel_coordinates) {
    if (!calib) throw Error(ErrorCode::kParse, "pixel coordinates require --calib");
    return NormalizePoints(table.raw, *calib);
  }
  if (calib) {
    throw Error(ErrorCode::kParse, "normalized coordinates given together with --calib");
  }
  std::vector<Correspondence> out;
  out.reserve(table.raw.size());
  for (const auto& r : table.raw) out.push_back({r.p1x, r.p1y, r.p2x, r.p2y});
  return out;
}

std::vector<Correspondence> ReadCorrespondenceFile(
    const std::string& path, const std::optional<CameraPairCalibration>& calib) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  return TableToCorrespondences(ReadCorrespondenceCsv(in), calib);
}

void WriteSceneCsv(std::ostream& out, const SyntheticScene& scene, bool pixels) {
  out << "# gt alpha_deg=" << FormatNumber(Rad2Deg(scene.gt_pose.alpha))
      << " beta_deg=" << FormatNumber(Rad2Deg(scene.gt_pose.beta)) << "\n";
  if (pixels) {
    out << "p1x,p1y,p2x,p2y\n";
    for (const auto& p : scene.pixel_points) {
      out << FormatNumber(p.p1x) << ',' << FormatNumber(p.p1y) << ',' << FormatNumber(p.p2x)
          << ',' << FormatNumber(p.p2y) << '\n';
    }
  } else {
    out << "q1x,q1y,q2x,q2y\n";
    for (const auto& c : scene.correspondences) {
      out << FormatNumber(c.q1x) << ',' << FormatNumber(c.q1y) << ',' << FormatNumber(c.q2x)
          << ',' << FormatNumber(c.q2y) << '\n';
    }
  }
}

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

double Round15(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(FormatNumber(value));
}

void WriteBenchCsv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "method,N,sigma,steepness,trial_count,rot_err_med_deg,rot_err_mean_deg,"
         "trans_err_med_deg,trans_err_mean_deg,time_us_med\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.n << ',' << FormatNumber(r.sigma) << ','
        << FormatNumber(r.steepness) << ',' << r.trial_count << ','
        << FormatNumber(r.rot_err_med_deg) << ',' << FormatNumber(r.rot_err_mean_deg) << ','
        << FormatNumber(r.trans_err_med_deg) << ',' << FormatNumber(r.trans_err_mean_deg) << ',';
    if (r.time_us_med) out << FormatNumber(*r.time_us_med);
    out << '\n';
  }
}

void WriteStabilityCsv(std::ostream& out, const StabilityHistogram& hist) {
  out << "log10_err_lo,log10_err_hi,count\n";
  for (size_t i = 0; i < hist.counts.size(); ++i) {
    out << FormatNumber(hist.bin_lo(static_cast<int>(i))) << ','
        << FormatNumber(hist.bin_hi(static_cast<int>(i))) << ',' << hist.counts[i] << '\n';
  }
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> out;
  for (const auto& f : SplitFields(text)) {
    if (f.empty()) throw Error(ErrorCode::kParse, "empty list element in '" + text + "'");
    out.push_back(ParseNumber(f, 0));
  }
  return out;
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  for (double v : ParseDoubleList(text)) {
    if (v != std::floor(v) || v < 0 || v > 1e9) {
      throw Error(ErrorCode::kParse, "expected non-negative integers in '" + text + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace planar_pose
