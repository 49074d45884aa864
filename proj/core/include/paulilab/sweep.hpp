#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/experiment.hpp"
#include "paulilab/scalelab.hpp"

namespace paulilab {

struct SweepPoint {
  double h = 0.0;
  double kappa = 0.0;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& c);

/// 16 hex digits identifying the numeric content of the config plus the point.
std::string point_hash(const ExperimentConfig& c, const SweepPoint& p);
std::filesystem::path point_directory(const std::filesystem::path& out, const SweepPoint& p);

struct LocalizedValues {
  double trace_minus = 0.0;  // Tr^-(psi H psi) at A*
  double energy = 0.0;       // with the field term
  double weyl1 = 0.0;        // integral Weyl1(x) psi^2
  double cutoff_c = 0.0;
  bool cutoff_ok = false;
};

struct SweepRecord {
  double h = 0.0;
  double kappa = 0.0;
  std::string hash;
  std::uint64_t seed = 0;
  double trace_minus = 0.0;   // Tr^- H_{A*,V}
  double trace_zero = 0.0;    // Tr^- H_{0,V}
  double energy = 0.0;        // E(A*)
  double energy_zero = 0.0;   // E(0), same functional
  double weyl1 = 0.0;
  double weyl1_corr = 0.0;
  double field_energy = 0.0;
  double el_residual = 0.0;
  bool converged = false;
  bool restarted_from_zero = false;
  bool smoothed = false;
  int iterations = 0;
  nlohmann::json diagnostics;
  std::optional<LocalizedValues> localized;
  std::string started;
  std::string finished;
  double seconds = 0.0;
};

nlohmann::json to_json(const SweepRecord& r);
SweepRecord record_from_json(const nlohmann::json& j);

/// Fixed index columns, in order.
const std::vector<std::string>& index_columns();
std::string index_row(const SweepRecord& r);

/// Runs one point and writes record.json and A.bin into its directory. With
/// `resume`, a minimizer checkpoint left by an interrupted run is continued.
SweepRecord run_point(const ExperimentConfig& c, const SweepPoint& p,
                      const std::filesystem::path& out, bool resume);

struct SweepSummary {
  int computed = 0;
  int skipped = 0;
  std::vector<std::string> failures;  // "h=..., kappa=...: message"
  std::vector<SweepRecord> records;   // every completed point, in sweep order
};

/// Runs every point not already completed with the same hash. Points are
/// spread over `workers` threads; index.csv rows are appended by one writer.
SweepSummary run_sweep(const ExperimentConfig& c, const std::filesystem::path& out,
                       int workers, bool resume,
                       const std::function<void(const std::string&)>& log = {});

/// Records found under out/points, sorted by (kappa, h descending).
std::vector<SweepRecord> load_records(const std::filesystem::path& out);

/// Exponent fits per kappa of |E(A*) - Weyl1|, |E(A*) - Weyl1 corrected| and
/// |Tr^- H_{0,V} - Weyl1| against h. Groups with fewer than three distinct h
/// are listed in `skipped`.
struct FitReport {
  std::vector<FitResult> fits;
  std::vector<std::string> skipped;
};
FitReport fit_records(const std::vector<SweepRecord>& records);
nlohmann::json to_json(const FitReport& f);

/// Writes report.csv into `out` and a text table to `table`.
void write_report(const std::vector<SweepRecord>& records, const ConstantsConfig& constants,
                  const std::filesystem::path& out, std::ostream& table);

}  // namespace paulilab
