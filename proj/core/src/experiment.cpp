#include "paulilab/experiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "paulilab/cutoff.hpp"
#include "paulilab/expression.hpp"
#include "paulilab/pauli.hpp"

namespace paulilab {

ConfigError::ConfigError(const std::string& source, int line, int column,
                         const std::string& path, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + (path.empty() ? "" : path + ": ") + message),
      line_(line),
      column_(column),
      path_(path),
      detail_(message) {}

namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

struct Frame {
  bool object = false;
  bool expect_key = true;
  int index = 0;
  std::string key;
  std::string base;
};

}  // namespace

std::map<std::string, std::pair<int, int>> locate_json_values(const std::string& text) {
  std::map<std::string, std::pair<int, int>> out;
  std::vector<Frame> stack;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto current = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    return f.base + "/" + (f.object ? escape_pointer(f.key) : std::to_string(f.index));
  };
  auto read_string = [&]() {
    std::string s;
    advance();  // opening quote
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < text.size()) {
        advance();
        s += text[i] == 'n' ? '\n' : text[i];
      } else {
        s += text[i];
      }
      advance();
    }
    if (i < text.size()) advance();
    return s;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':') {
      advance();
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) stack.back().expect_key = true;
        else ++stack.back().index;
      }
      advance();
    } else if (c == '"') {
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = read_string();
        stack.back().expect_key = false;
      } else {
        out.emplace(current(), std::make_pair(line, col));
        read_string();
      }
    } else if (c == '{' || c == '[') {
      const std::string here = current();
      out.emplace(here, std::make_pair(line, col));
      Frame f;
      f.object = c == '{';
      f.base = here;
      stack.push_back(f);
      advance();
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      advance();
    } else {
      out.emplace(current(), std::make_pair(line, col));
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != ',' && text[i] != '}' && text[i] != ']') {
        advance();
      }
    }
  }
  return out;
}

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& root, const std::string& text, std::string source)
      : root_(root), where_(locate_json_values(text)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    while (!where_.count(p) && !p.empty()) p = p.substr(0, p.rfind('/'));
    const auto it = where_.find(p);
    const auto pos = it == where_.end() ? std::make_pair(1, 1) : it->second;
    throw ConfigError(source_, pos.first, pos.second, ptr, msg);
  }

  const json* find(const std::string& ptr) const {
    const json::json_pointer jp(ptr);
    return root_.contains(jp) ? &root_.at(jp) : nullptr;
  }

  void only_keys(const std::string& ptr, const std::set<std::string>& allowed) const {
    const json* obj = find(ptr);
    if (!obj || (ptr == "/cutoff" && obj->is_null())) return;
    if (!obj->is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : obj->items()) {
      if (!allowed.count(k)) fail(ptr + "/" + escape_pointer(k), "unknown key '" + k + "'");
    }
  }

  double number(const std::string& ptr, double def) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_number()) fail(ptr, "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(ptr, "expected a finite number");
    return x;
  }

  double positive(const std::string& ptr, double def) const {
    const double x = number(ptr, def);
    if (!(x > 0.0)) fail(ptr, "must be positive");
    return x;
  }

  double non_negative(const std::string& ptr, double def) const {
    const double x = number(ptr, def);
    if (x < 0.0) fail(ptr, "must be non-negative");
    return x;
  }

  int integer(const std::string& ptr, int def, int min_value) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_number_integer()) fail(ptr, "expected an integer");
    const auto x = v->get<long long>();
    if (x < min_value) fail(ptr, "must be at least " + std::to_string(min_value));
    if (x > 1000000000LL) fail(ptr, "too large");
    return static_cast<int>(x);
  }

  std::uint64_t seed(const std::string& ptr, std::uint64_t def) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      fail(ptr, "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::string string(const std::string& ptr, const std::string& def) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_string()) fail(ptr, "expected a string");
    return v->get<std::string>();
  }

  bool is_null_or_missing(const std::string& ptr) const {
    const json* v = find(ptr);
    return !v || v->is_null();
  }

  std::vector<double> number_list(const std::string& ptr, const std::vector<double>& def) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_array()) fail(ptr, "expected a list of numbers");
    if (v->empty()) fail(ptr, "list must not be empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(number(ptr + "/" + std::to_string(i), 0.0));
    return out;
  }

  template <std::size_t N>
  std::array<double, N> number_array(const std::string& ptr, const std::array<double, N>& def) const {
    const json* v = find(ptr);
    if (!v) return def;
    if (!v->is_array() || v->size() != N) fail(ptr, "expected a list of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(ptr + "/" + std::to_string(i), 0.0);
    return out;
  }

  PotentialSpec potential(const std::string& ptr, const PotentialSpec& def) const {
    if (!find(ptr)) return def;
    only_keys(ptr, {"preset", "params", "expression"});
    PotentialSpec spec;
    spec.preset = string(ptr + "/preset", def.preset);
    spec.expression = string(ptr + "/expression", "");
    if (const json* p = find(ptr + "/params")) {
      if (!p->is_object()) fail(ptr + "/params", "expected an object");
      for (const auto& [k, v] : p->items()) {
        spec.params[k] = number(ptr + "/params/" + escape_pointer(k), 0.0);
      }
    }
    try {
      Potential check(spec);
      (void)check;
    } catch (const ExpressionError& e) {
      fail(ptr + "/expression", e.what());
    } catch (const std::invalid_argument& e) {
      fail(ptr, e.what());
    }
    return spec;
  }

 private:
  const json& root_;
  std::map<std::string, std::pair<int, int>> where_;
  std::string source_;
};

json potential_json(const PotentialSpec& p) {
  json params = json::object();
  for (const auto& [k, v] : preset_defaults(p.preset)) params[k] = v;
  for (const auto& [k, v] : p.params) params[k] = v;
  return {{"preset", p.preset}, {"params", params}, {"expression", p.expression}};
}

}  // namespace

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions s;
  s.kind = solver_kind_from_string(solver);
  s.dense_max_sites = static_cast<std::size_t>(dense_max_sites);
  s.ambiguity = ambiguity;
  s.krylov.block_size = block_size;
  s.krylov.blocks_per_cycle = blocks_per_cycle;
  s.krylov.tol = krylov_tol;
  s.krylov.seed = seed;
  return s;
}

MinimizeOptions ExperimentConfig::minimize_options(std::uint64_t point_seed) const {
  MinimizeOptions m;
  m.mixing = mixing;
  m.min_mixing = min_mixing;
  m.max_iterations = max_iterations;
  m.tolerance = tolerance;
  m.initial_amplitude = initial_amplitude;
  m.smoothing_factor = smoothing_factor;
  m.seed = point_seed;
  m.energy.solver = solver_options();
  m.energy.field_weight = field_weight;
  if (smoothing_L) m.energy.smoothing = SmoothingSpec{*smoothing_L};
  return m;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw ConfigError(source, line, col, "", msg);
  }
  Reader r(root, text, source);
  if (!root.is_object()) r.fail("", "expected a JSON object");
  r.only_keys("", {"potential", "grid", "h", "kappa", "minimizer", "solver", "smoothing_L",
                   "weyl", "cutoff", "partition_gamma", "dynamics", "constants",
                   "diagnostics", "output", "seed", "workers"});
  r.only_keys("/grid", {"dims", "box"});
  r.only_keys("/minimizer", {"mixing", "min_mixing", "max_iterations", "tolerance",
                             "initial_amplitude", "smoothing_factor", "field_weight"});
  r.only_keys("/solver", {"kind", "dense_max_sites", "ambiguity", "block_size",
                          "blocks_per_cycle", "tol"});
  r.only_keys("/weyl", {"tau", "kappa1", "kappa2"});
  r.only_keys("/cutoff", {"center", "radius", "taper"});
  r.only_keys("/dynamics", {"potential", "tau", "step", "horizon", "rho", "min_return_time",
                            "samples", "seed", "sample_box"});
  r.only_keys("/constants", {"c", "C", "epsilon"});
  r.only_keys("/diagnostics", {"m_ref", "theta"});

  ExperimentConfig c;
  c.seed = r.seed("/seed", c.seed);
  c.workers = r.integer("/workers", c.workers, 1);
  c.output = r.string("/output", c.output.string());

  if (const json* d = r.find("/grid/dims")) {
    if (!d->is_array() || d->size() != 3) r.fail("/grid/dims", "expected a list of 3 integers");
    for (int a = 0; a < 3; ++a) c.dims[a] = r.integer("/grid/dims/" + std::to_string(a), 0, 4);
  }
  c.box = r.number_array<3>("/grid/box", c.box);
  for (int a = 0; a < 3; ++a) {
    if (!(c.box[a] > 0.0)) r.fail("/grid/box/" + std::to_string(a), "must be positive");
  }
  const Grid grid = c.grid();

  c.potential = r.potential("/potential", c.potential);
  try {
    (void)sample_potential(c.potential, grid);
  } catch (const std::invalid_argument& e) {
    r.fail("/potential", e.what());
  }

  const double h_min = min_resolved_h(grid);
  c.h_values = r.number_list("/h", c.h_values);
  for (std::size_t i = 0; i < c.h_values.size(); ++i) {
    const double h = c.h_values[i];
    const std::string p = "/h/" + std::to_string(i);
    if (!(h > 0.0 && h <= 1.0)) r.fail(p, "h must lie in (0, 1]");
    if (h < h_min) {
      std::ostringstream os;
      os << "h = " << h << " is below the grid resolution limit " << h_min
         << " (4 max spacing / pi)";
      r.fail(p, os.str());
    }
  }
  c.kappa_values = r.number_list("/kappa", c.kappa_values);
  for (std::size_t i = 0; i < c.kappa_values.size(); ++i) {
    if (!(c.kappa_values[i] > 0.0)) r.fail("/kappa/" + std::to_string(i), "kappa must be positive");
  }

  c.mixing = r.positive("/minimizer/mixing", c.mixing);
  if (c.mixing > 1.0) r.fail("/minimizer/mixing", "must not exceed 1");
  c.min_mixing = r.positive("/minimizer/min_mixing", c.min_mixing);
  c.max_iterations = r.integer("/minimizer/max_iterations", c.max_iterations, 1);
  c.tolerance = r.positive("/minimizer/tolerance", c.tolerance);
  c.initial_amplitude = r.non_negative("/minimizer/initial_amplitude", c.initial_amplitude);
  c.smoothing_factor = r.positive("/minimizer/smoothing_factor", c.smoothing_factor);
  c.field_weight = r.positive("/minimizer/field_weight", c.field_weight);
  if (!r.is_null_or_missing("/smoothing_L")) c.smoothing_L = r.positive("/smoothing_L", 0.0);

  c.solver = r.string("/solver/kind", c.solver);
  try {
    (void)solver_kind_from_string(c.solver);
  } catch (const std::invalid_argument& e) {
    r.fail("/solver/kind", e.what());
  }
  c.dense_max_sites = r.integer("/solver/dense_max_sites", c.dense_max_sites, 0);
  c.ambiguity = r.non_negative("/solver/ambiguity", c.ambiguity);
  c.block_size = r.integer("/solver/block_size", c.block_size, 1);
  c.blocks_per_cycle = r.integer("/solver/blocks_per_cycle", c.blocks_per_cycle, 2);
  c.krylov_tol = r.positive("/solver/tol", c.krylov_tol);

  c.weyl_tau = r.number("/weyl/tau", c.weyl_tau);
  c.kappa1 = r.number("/weyl/kappa1", c.kappa1);
  c.kappa2 = r.number("/weyl/kappa2", c.kappa2);

  if (!r.is_null_or_missing("/cutoff")) {
    CutoffConfig cut;
    cut.center = r.number_array<3>("/cutoff/center", cut.center);
    cut.radius = r.positive("/cutoff/radius", cut.radius);
    cut.taper = r.positive("/cutoff/taper", cut.taper);
    if (cut.taper > 1.0) r.fail("/cutoff/taper", "must lie in (0, 1]");
    try {
      (void)make_cutoff(grid, cut.center, cut.radius, cut.taper);
    } catch (const std::invalid_argument& e) {
      r.fail("/cutoff", e.what());
    }
    c.cutoff = cut;
  }
  if (!r.is_null_or_missing("/partition_gamma")) {
    c.partition_gamma = r.positive("/partition_gamma", 0.0);
    if (*c.partition_gamma < 4.0 * grid.max_spacing()) {
      r.fail("/partition_gamma", "must be at least 4 grid spacings");
    }
  }

  FlowConfig& f = c.dynamics;
  f.potential = r.potential("/dynamics/potential", c.potential);
  f.tau = r.number("/dynamics/tau", f.tau);
  f.step = r.positive("/dynamics/step", f.step);
  f.horizon = r.positive("/dynamics/horizon", f.horizon);
  f.rho = r.positive("/dynamics/rho", f.rho);
  if (f.step > f.rho / 10.0) r.fail("/dynamics/step", "step must not exceed rho / 10");
  f.min_return_time = r.non_negative("/dynamics/min_return_time", f.min_return_time);
  f.samples = r.integer("/dynamics/samples", f.samples, 100);
  f.seed = r.seed("/dynamics/seed", c.seed);
  f.sample_box = r.positive("/dynamics/sample_box", f.sample_box);
  f.workers = c.workers;

  c.constants.c = r.positive("/constants/c", c.constants.c);
  c.constants.big_c = r.positive("/constants/C", c.constants.big_c);
  c.constants.epsilon = r.positive("/constants/epsilon", c.constants.epsilon);
  c.m_ref = r.positive("/diagnostics/m_ref", c.m_ref);
  c.theta = r.positive("/diagnostics/theta", c.theta);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 1, 1, "", "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

nlohmann::json numeric_content(const ExperimentConfig& c) {
  json j;
  j["potential"] = potential_json(c.potential);
  j["grid"] = {{"dims", c.dims}, {"box", c.box}};
  j["minimizer"] = {{"mixing", c.mixing},
                    {"min_mixing", c.min_mixing},
                    {"max_iterations", c.max_iterations},
                    {"tolerance", c.tolerance},
                    {"initial_amplitude", c.initial_amplitude},
                    {"smoothing_factor", c.smoothing_factor},
                    {"field_weight", c.field_weight}};
  j["solver"] = {{"kind", c.solver},
                 {"dense_max_sites", c.dense_max_sites},
                 {"ambiguity", c.ambiguity},
                 {"block_size", c.block_size},
                 {"blocks_per_cycle", c.blocks_per_cycle},
                 {"tol", c.krylov_tol}};
  j["smoothing_L"] = c.smoothing_L ? json(*c.smoothing_L) : json(nullptr);
  j["weyl"] = {{"tau", c.weyl_tau}, {"kappa1", c.kappa1}, {"kappa2", c.kappa2}};
  j["cutoff"] = c.cutoff ? json{{"center", c.cutoff->center},
                                {"radius", c.cutoff->radius},
                                {"taper", c.cutoff->taper}}
                         : json(nullptr);
  j["partition_gamma"] = c.partition_gamma ? json(*c.partition_gamma) : json(nullptr);
  j["constants"] = {{"c", c.constants.c}, {"C", c.constants.big_c}, {"epsilon", c.constants.epsilon}};
  j["diagnostics"] = {{"m_ref", c.m_ref}, {"theta", c.theta}};
  j["seed"] = c.seed;
  return j;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j = numeric_content(c);
  j["h"] = c.h_values;
  j["kappa"] = c.kappa_values;
  const FlowConfig& f = c.dynamics;
  j["dynamics"] = {{"potential", potential_json(f.potential)},
                   {"tau", f.tau},
                   {"step", f.step},
                   {"horizon", f.horizon},
                   {"rho", f.rho},
                   {"min_return_time", f.min_return_time},
                   {"samples", f.samples},
                   {"seed", f.seed},
                   {"sample_box", f.sample_box}};
  j["output"] = c.output.string();
  j["workers"] = c.workers;
  return j;
}

}  // namespace paulilab
