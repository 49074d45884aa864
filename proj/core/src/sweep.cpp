#include "paulilab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "paulilab/cutoff.hpp"
#include "paulilab/field_io.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/weyl.hpp"

namespace paulilab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string full(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_json_atomic(const fs::path& path, const json& j) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << j.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

std::optional<SweepRecord> completed_record(const fs::path& dir, const std::string& hash) {
  const fs::path path = dir / "record.json";
  if (!fs::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path);
    const json j = json::parse(in);
    if (j.value("hash", "") != hash) return std::nullopt;
    return record_from_json(j);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<SweepPoint> sweep_points(const ExperimentConfig& c) {
  std::vector<SweepPoint> out;
  for (double k : c.kappa_values)
    for (double h : c.h_values) out.push_back({h, k});
  return out;
}

std::string point_hash(const ExperimentConfig& c, const SweepPoint& p) {
  json j = numeric_content(c);
  j["point"] = {{"h", p.h}, {"kappa", p.kappa}};
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
  return os.str();
}

fs::path point_directory(const fs::path& out, const SweepPoint& p) {
  return out / "points" / ("h" + fmt(p.h) + "_k" + fmt(p.kappa));
}

json to_json(const SweepRecord& r) {
  json j = {{"h", r.h},
            {"kappa", r.kappa},
            {"hash", r.hash},
            {"seed", r.seed},
            {"trace_minus", r.trace_minus},
            {"trace_zero", r.trace_zero},
            {"energy", r.energy},
            {"energy_zero", r.energy_zero},
            {"weyl1", r.weyl1},
            {"weyl1_corr", r.weyl1_corr},
            {"field_energy", r.field_energy},
            {"el_residual", r.el_residual},
            {"converged", r.converged},
            {"restarted_from_zero", r.restarted_from_zero},
            {"smoothed", r.smoothed},
            {"iterations", r.iterations},
            {"diagnostics", r.diagnostics},
            {"started", r.started},
            {"finished", r.finished},
            {"seconds", r.seconds}};
  if (r.localized) {
    j["localized"] = {{"trace_minus", r.localized->trace_minus},
                      {"energy", r.localized->energy},
                      {"weyl1", r.localized->weyl1},
                      {"cutoff_c", r.localized->cutoff_c},
                      {"cutoff_ok", r.localized->cutoff_ok}};
  } else {
    j["localized"] = nullptr;
  }
  return j;
}

SweepRecord record_from_json(const json& j) {
  SweepRecord r;
  r.h = j.at("h").get<double>();
  r.kappa = j.at("kappa").get<double>();
  r.hash = j.value("hash", "");
  r.seed = j.value("seed", std::uint64_t{0});
  r.trace_minus = j.at("trace_minus").get<double>();
  r.trace_zero = j.value("trace_zero", 0.0);
  r.energy = j.at("energy").get<double>();
  r.energy_zero = j.value("energy_zero", 0.0);
  r.weyl1 = j.at("weyl1").get<double>();
  r.weyl1_corr = j.at("weyl1_corr").get<double>();
  r.field_energy = j.at("field_energy").get<double>();
  r.el_residual = j.at("el_residual").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.restarted_from_zero = j.value("restarted_from_zero", false);
  r.smoothed = j.value("smoothed", false);
  r.iterations = j.value("iterations", 0);
  r.diagnostics = j.value("diagnostics", json::object());
  if (j.contains("localized") && !j["localized"].is_null()) {
    const json& l = j["localized"];
    r.localized = LocalizedValues{l.at("trace_minus").get<double>(), l.at("energy").get<double>(),
                                  l.at("weyl1").get<double>(), l.value("cutoff_c", 0.0),
                                  l.value("cutoff_ok", false)};
  }
  r.started = j.value("started", "");
  r.finished = j.value("finished", "");
  r.seconds = j.value("seconds", 0.0);
  return r;
}

const std::vector<std::string>& index_columns() {
  static const std::vector<std::string> cols = {"h", "kappa", "trace_minus", "energy",
                                                "weyl1", "weyl1_corr", "field_energy",
                                                "mu", "el_residual", "converged"};
  return cols;
}

std::string index_row(const SweepRecord& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << r.h << ',' << r.kappa << ',' << r.trace_minus << ',' << r.energy << ',' << r.weyl1 << ','
     << r.weyl1_corr << ',' << r.field_energy << ',' << r.diagnostics.value("mu", 0.0) << ','
     << r.el_residual << ',' << (r.converged ? 1 : 0);
  return os.str();
}

SweepRecord run_point(const ExperimentConfig& c, const SweepPoint& p, const fs::path& out,
                      bool resume) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord r;
  r.started = utc_now();
  r.h = p.h;
  r.kappa = p.kappa;
  r.hash = point_hash(c, p);
  r.seed = fnv1a(r.hash) ^ c.seed;

  const fs::path dir = point_directory(out, p);
  fs::create_directories(dir);
  const fs::path ckpt = dir / "checkpoint";
  if (!resume) fs::remove_all(ckpt);

  const Grid grid = c.grid();
  const ScalarField v = sample_potential(c.potential, grid);
  MinimizeOptions mo = c.minimize_options(r.seed);
  mo.checkpoint = ckpt;
  const MinimizerState st = minimize(v, p.h, p.kappa, mo);

  r.trace_minus = st.trace_minus;
  r.energy = st.energy;
  r.energy_zero = st.energy_zero;
  r.field_energy = st.field_energy;
  r.el_residual = st.el_residual;
  r.converged = st.converged;
  r.restarted_from_zero = st.restarted_from_zero;
  r.smoothed = st.smoothed;
  r.iterations = st.iteration;
  if (st.smoothed) {
    const PauliOperator zero(grid, VectorField(grid), v, p.h);
    r.trace_zero = trace_minus(negative_spectrum(zero, 0.0, c.solver_options())).value;
  } else {
    r.trace_zero = st.energy_zero;
  }

  const CorrectedWeyl w = weyl_corrected(v, p.h, c.kappa1, c.kappa2);
  r.weyl1 = w.weyl1;
  r.weyl1_corr = w.combined_form;
  r.diagnostics = to_json(diagnostics(st.a, p.h, p.kappa, c.m_ref, c.theta));

  if (c.cutoff) {
    const CutoffSpec cut = make_cutoff(grid, c.cutoff->center, c.cutoff->radius, c.cutoff->taper);
    LocalizedValues loc;
    loc.energy = energy_localized(st.a, v, p.h, p.kappa, cut.psi, c.solver_options());
    loc.trace_minus = loc.energy - st.field_energy / (p.kappa * p.h * p.h);
    loc.weyl1 = hadamard(weyl1_local(v, p.h), hadamard(cut.psi, cut.psi)).integral();
    loc.cutoff_c = cut.c();
    loc.cutoff_ok = cut.audit.ok;
    r.localized = loc;
  }

  write_blob(dir / "A.bin", to_blob(st.a));
  r.finished = utc_now();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json j = to_json(r);
  j["config"] = numeric_content(c);
  j["minimizer"] = to_json(st);
  write_json_atomic(dir / "record.json", j);
  fs::remove_all(ckpt);
  return r;
}

SweepSummary run_sweep(const ExperimentConfig& c, const fs::path& out, int workers, bool resume,
                       const std::function<void(const std::string&)>& log) {
  fs::create_directories(out / "points");
  write_json_atomic(out / "config.json", to_json(c));

  const auto points = sweep_points(c);
  const fs::path index_path = out / "index.csv";
  std::set<std::string> indexed;
  {
    std::ifstream in(index_path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        header = false;
        continue;
      }
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      if (a == std::string::npos || b == std::string::npos) continue;
      indexed.insert(fmt(std::stod(line.substr(0, a))) + "|" +
                     fmt(std::stod(line.substr(a + 1, b - a - 1))));
    }
  }
  std::ofstream index(index_path, std::ios::app);
  if (!index) throw std::runtime_error("cannot open " + index_path.string());
  if (indexed.empty() && fs::file_size(index_path) == 0) {
    const auto& cols = index_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) index << (i ? "," : "") << cols[i];
    index << '\n' << std::flush;
  }

  std::mutex mu;  // guards index, summary and log
  SweepSummary summary;
  std::vector<std::optional<SweepRecord>> results(points.size());
  auto append = [&](const SweepRecord& r) {
    const std::string key = fmt(r.h) + "|" + fmt(r.kappa);
    if (indexed.insert(key).second) index << index_row(r) << '\n' << std::flush;
  };
  auto say = [&](const std::string& s) {
    if (log) log(s);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const SweepPoint& p = points[i];
      const std::string label = "h=" + fmt(p.h) + ", kappa=" + fmt(p.kappa);
      const auto done = completed_record(point_directory(out, p), point_hash(c, p));
      if (done) {
        std::lock_guard<std::mutex> lock(mu);
        results[i] = *done;
        ++summary.skipped;
        append(*done);
        say(label + ": already complete");
        continue;
      }
      try {
        const SweepRecord r = run_point(c, p, out, resume);
        std::lock_guard<std::mutex> lock(mu);
        results[i] = r;
        ++summary.computed;
        append(r);
        say(label + ": energy " + fmt(r.energy) + ", weyl1 " + fmt(r.weyl1) +
            (r.converged ? "" : " (not converged)"));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        summary.failures.push_back(label + ": " + e.what());
        say(label + ": failed: " + e.what());
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& r : results)
    if (r) summary.records.push_back(*r);
  return summary;
}

std::vector<SweepRecord> load_records(const fs::path& out) {
  std::vector<SweepRecord> records;
  const fs::path points = out / "points";
  if (!fs::exists(points)) return records;
  for (const auto& entry : fs::directory_iterator(points)) {
    const fs::path path = entry.path() / "record.json";
    if (!fs::exists(path)) continue;
    std::ifstream in(path);
    records.push_back(record_from_json(json::parse(in)));
  }
  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.kappa != b.kappa ? a.kappa < b.kappa : a.h > b.h;
  });
  return records;
}

FitReport fit_records(const std::vector<SweepRecord>& records) {
  std::map<double, std::vector<const SweepRecord*>> by_kappa;
  for (const auto& r : records) by_kappa[r.kappa].push_back(&r);
  FitReport report;
  using Getter = double (*)(const SweepRecord&);
  const std::vector<std::pair<std::string, Getter>> targets = {
      {"energy_minus_weyl1", [](const SweepRecord& r) { return r.energy - r.weyl1; }},
      {"energy_minus_weyl1_corr", [](const SweepRecord& r) { return r.energy - r.weyl1_corr; }},
      {"zero_field_trace_minus_weyl1", [](const SweepRecord& r) { return r.trace_zero - r.weyl1; }},
  };
  for (const auto& [kappa, group] : by_kappa) {
    for (const auto& [name, get] : targets) {
      const std::string label = name + " kappa=" + fmt(kappa);
      std::vector<FitPoint> pts;
      for (const auto* r : group) pts.push_back({r->h, get(*r)});
      try {
        report.fits.push_back(fit_exponent(pts, label));
      } catch (const std::invalid_argument& e) {
        report.skipped.push_back(label + ": " + e.what());
      }
    }
  }
  return report;
}

json to_json(const FitReport& f) {
  json fits = json::array();
  for (const auto& r : f.fits) fits.push_back(to_json(r));
  return {{"fits", fits}, {"skipped", f.skipped}};
}

void write_report(const std::vector<SweepRecord>& records, const ConstantsConfig& constants,
                  const fs::path& out, std::ostream& table) {
  fs::create_directories(out);
  std::ofstream csv(out / "report.csv");
  if (!csv) throw std::runtime_error("cannot write " + (out / "report.csv").string());
  csv << "h,kappa,energy,weyl1,weyl1_corr,energy_minus_weyl1,energy_minus_weyl1_corr,"
         "remainder_kappa_squared,remainder_log_form,remainder,regime,converged\n";
  csv << std::setprecision(17);
  table << std::left << std::setw(8) << "h" << std::setw(8) << "kappa" << std::setw(14)
        << "E(A*)" << std::setw(14) << "Weyl1" << std::setw(14) << "Weyl1*" << std::setw(13)
        << "E-Weyl1" << std::setw(13) << "E-Weyl1*" << std::setw(13) << "predicted"
        << "regime\n";
  for (const auto& r : records) {
    const RemainderPrediction pred =
        r.h < 1.0 ? predicted_remainder(r.kappa, r.h, constants.big_c, constants.c)
                  : RemainderPrediction{};
    csv << r.h << ',' << r.kappa << ',' << r.energy << ',' << r.weyl1 << ',' << r.weyl1_corr
        << ',' << r.energy - r.weyl1 << ',' << r.energy - r.weyl1_corr << ','
        << pred.kappa_squared << ',' << (pred.log_form ? full(*pred.log_form) : "")
        << ',' << pred.value << ',' << pred.regime << ',' << (r.converged ? 1 : 0) << '\n';
    table << std::setprecision(5) << std::setw(8) << r.h << std::setw(8) << r.kappa
          << std::setw(14) << r.energy << std::setw(14) << r.weyl1 << std::setw(14)
          << r.weyl1_corr << std::setw(13) << r.energy - r.weyl1 << std::setw(13)
          << r.energy - r.weyl1_corr << std::setw(13);
    if (r.h < 1.0) {
      table << pred.value << pred.regime << '\n';
    } else {
      table << "-" << "(needs h < 1)\n";
    }
  }
  if (records.empty()) table << "(no records)\n";
}

}  // namespace paulilab
