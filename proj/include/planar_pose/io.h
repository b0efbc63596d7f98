#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "planar_pose/geometry.h"
#include "planar_pose/synthetic.h"

namespace planar_pose {

// Pinhole intrinsics in pixels.
struct Calibration {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

struct CameraPairCalibration {
  Calibration cam1;
  Calibration cam2;
};

// q = ((px - cx) / fx, (py - cy) / fy) per camera. Throws
// Error(kInvalidInput) for a non-positive focal length.
std::vector<Correspondence> NormalizePoints(std::span<const PixelPair> pixels,
                                            const CameraPairCalibration& calib);
std::vector<PixelPair> DenormalizePoints(std::span<const Correspondence> points,
                                         const CameraPairCalibration& calib);

// {"cam1": {"fx","fy","cx","cy"}, "cam2": {...}}; a missing cam2 reuses cam1.
// Throws Error(kParse).
CameraPairCalibration ParseCalibrationJson(const std::string& text);
CameraPairCalibration ReadCalibrationFile(const std::string& path);
std::string CalibrationToJson(const CameraPairCalibration& calib);

// Correspondence CSV. The header is either q1x,q1y,q2x,q2y (normalized) or
// p1x,p1y,p2x,p2y (pixels, requires a calibration). An optional leading
// `pair` column groups rows into image pairs. Blank lines and lines starting
// with '#' are ignored. Throws Error(kParse).
struct CsvTable {
  bool has_pair_column = false;
  bool pixel_coordinates = false;
  std::vector<std::string> pair_ids;  // parallel to points when present
  std::vector<PixelPair> raw;         // coordinates as read
};
CsvTable ReadCorrespondenceCsv(std::istream& in);

// Normalizes a table when it holds pixels. Throws Error(kParse) for pixel
// input without calibration or normalized input with one.
std::vector<Correspondence> TableToCorrespondences(
    const CsvTable& table, const std::optional<CameraPairCalibration>& calib);

std::vector<Correspondence> ReadCorrespondenceFile(
    const std::string& path, const std::optional<CameraPairCalibration>& calib);

// Writes a scene as CSV with a ground-truth comment line.
void WriteSceneCsv(std::ostream& out, const SyntheticScene& scene, bool pixels);

// Shortest text that round-trips the value rounded to 15 significant digits.
std::string FormatNumber(double value);
// The value rounded to 15 significant digits.
double Round15(double value);

void WriteBenchCsv(std::ostream& out, std::span<const BenchRow> rows);
void WriteStabilityCsv(std::ostream& out, const StabilityHistogram& hist);

std::vector<double> ParseDoubleList(const std::string& text);
std::vector<int> ParseIntList(const std::string& text);

}  // namespace planar_pose
