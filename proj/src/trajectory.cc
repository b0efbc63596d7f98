#include "planar_pose/trajectory.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "planar_pose/error.h"

namespace planar_pose {

std::vector<PairRecord> ReadPairRecords(std::istream& in,
                                        const std::optional<CameraPairCalibration>& calib) {
  const CsvTable table = ReadCorrespondenceCsv(in);
  if (!table.has_pair_column) {
    throw Error(ErrorCode::kParse, "pair file needs a leading 'pair' column");
  }
  const std::vector<Correspondence> points = TableToCorrespondences(table, calib);
  std::vector<PairRecord> records;
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < points.size(); ++i) {
    const std::string& id = table.pair_ids[i];
    auto [it, inserted] = index.try_emplace(id, records.size());
    if (inserted) records.push_back({id, {}, std::nullopt});
    records[it->second].correspondences.push_back(points[i]);
  }
  return records;
}

std::map<std::string, PlanarPose> ReadGroundTruth(std::istream& in) {
  std::map<std::string, PlanarPose> out;
  std::string line;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::stringstream ss(line);
    std::string id, a, b;
    std::getline(ss, id, ',');
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    if (!have_header) {
      if (id != "pair" || a != "alpha_deg" || b != "beta_deg") {
        throw Error(ErrorCode::kParse, "ground truth header must be pair,alpha_deg,beta_deg");
      }
      have_header = true;
      continue;
    }
    try {
      out[id] = PlanarPose(Deg2Rad(std::stod(a)), Deg2Rad(std::stod(b)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "ground truth line " + std::to_string(line_no) + " is invalid");
    }
  }
  return out;
}

PathState ComposeStep(const PathState& state, const PlanarPose& step) {
  const double alpha_deg = Rad2Deg(step.alpha);
  const double theta = Deg2Rad(state.heading_deg + alpha_deg);
  // Rotation about Y by -theta applied to t = [cos b, 0, sin b].
  const double tx = std::cos(step.beta);
  const double tz = std::sin(step.beta);
  PathState next;
  next.heading_deg = state.heading_deg + alpha_deg;
  next.x = state.x + std::cos(theta) * tx - std::sin(theta) * tz;
  next.z = state.z + std::sin(theta) * tx + std::cos(theta) * tz;
  return next;
}

std::vector<TrajectoryRow> RunTrajectory(std::span<const PairRecord> records,
                                         const TrajectoryOptions& options) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(records.size());
  PathState state;
  for (const auto& record : records) {
    TrajectoryRow row;
    row.pair = record.id;
    try {
      const RansacResult r = RansacEstimate(record.correspondences, options.ransac);
      PlanarPose pose = r.pose;
      if (options.continuous_path) {
        pose = PlanarPose(Deg2Rad(FoldContinuousPathDeg(Rad2Deg(pose.alpha))), pose.beta);
      }
      row.ok = true;
      row.status = "ok";
      row.pose = pose;
      row.inliers = r.num_inliers;
      state = ComposeStep(state, pose);
      if (record.ground_truth) {
        row.rot_err_deg = RotationAngularError(pose.alpha, record.ground_truth->alpha);
        row.trans_err_deg = TranslationAngularError(pose.beta, record.ground_truth->beta);
      }
    } catch (const Error& e) {
      row.ok = false;
      row.status = std::string(ToString(e.code()));
    }
    row.state = state;
    rows.push_back(row);
  }
  return rows;
}

void WriteTrajectoryCsv(std::ostream& out, std::span<const TrajectoryRow> rows) {
  out << "pair,status,alpha_deg,beta_deg,inliers,heading_deg,x,z,rot_err_deg,trans_err_deg\n";
  for (const auto& r : rows) {
    out << r.pair << ',' << r.status << ',';
    if (r.ok) {
      out << FormatNumber(Rad2Deg(r.pose.alpha)) << ',' << FormatNumber(Rad2Deg(r.pose.beta))
          << ',' << r.inliers;
    } else {
      out << ",,";
    }
    out << ',' << FormatNumber(r.state.heading_deg) << ',' << FormatNumber(r.state.x) << ','
        << FormatNumber(r.state.z) << ',';
    if (r.rot_err_deg) out << FormatNumber(*r.rot_err_deg);
    out << ',';
    if (r.trans_err_deg) out << FormatNumber(*r.trans_err_deg);
    out << '\n';
  }
}

void WriteErrorCdfCsv(std::ostream& out, std::span<const TrajectoryRow> rows) {
  out << "kind,error_deg,cdf\n";
  auto emit = [&](const char* kind, std::vector<double> errors) {
    std::sort(errors.begin(), errors.end());
    for (size_t i = 0; i < errors.size(); ++i) {
      out << kind << ',' << FormatNumber(errors[i]) << ','
          << FormatNumber(static_cast<double>(i + 1) / static_cast<double>(errors.size())) << '\n';
    }
  };
  std::vector<double> rot, trans;
  for (const auto& r : rows) {
    if (r.rot_err_deg) rot.push_back(*r.rot_err_deg);
    if (r.trans_err_deg) trans.push_back(*r.trans_err_deg);
  }
  emit("rotation", rot);
  emit("translation", trans);
}

}  // namespace planar_pose
