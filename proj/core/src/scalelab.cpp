#include "paulilab/scalelab.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace paulilab {

Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

std::string to_string(const Rational& r) { return r.str(); }

double ScaleState::m() const { return std::pow(kappa, beta) * std::pow(h, -1.5 - alpha); }

ScalePair rescale(double h, double kappa, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("rescale: gamma must lie in (0, 1]");
  if (!(h > 0.0 && kappa > 0.0)) throw std::invalid_argument("rescale: h and kappa must be positive");
  if (h / gamma > 1.0) throw std::invalid_argument("rescale: h / gamma exceeds 1");
  return {h / gamma, kappa * gamma};
}

GammaChoice gamma_choice(double kappa, double h, double alpha, double beta, double c) {
  const double s = alpha + beta + 1.0;
  if (!(s > 0.0)) throw std::invalid_argument("gamma choice: alpha + beta + 1 must be positive");
  GammaChoice g;
  g.gamma = std::pow(kappa, -(beta + 1.0) / s) * std::pow(h, alpha / s);
  g.before = std::pow(kappa, beta + 1.0) * std::pow(h, -alpha);
  g.after = std::pow(kappa * g.gamma, beta + 1.0) * std::pow(h / g.gamma, -alpha);
  g.precondition_failed_before = g.before > c;
  g.in_range = h < g.gamma && g.gamma <= 1.0;
  return g;
}

Recurrence alpha_recurrence(const Rational& alpha0, int steps) {
  if (steps < 0) throw std::invalid_argument("recurrence: negative step count");
  const Rational half(1, 2), four_fifths(4, 5), three_halves(3, 2);
  Recurrence r;
  Rational a = alpha0;
  r.steps.push_back({a, three_halves - a});
  if (a < 0) r.first_negative = 0;
  for (int i = 1; i <= steps; ++i) {
    a = -half + four_fifths * a;
    r.steps.push_back({a, three_halves - a});
    if (!r.first_negative && a < 0) r.first_negative = i;
  }
  return r;
}

Rational alpha_fixed_point() {
  // a = -1/2 + 4/5 a  =>  a = -5/2
  return Rational(-1, 2) / (Rational(1) - Rational(4, 5));
}

double kappa_star(double h, double epsilon) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("kappa_star: h must lie in (0, 1)");
  return epsilon * std::pow(h, -0.25) * std::pow(std::abs(std::log(h)), -0.75);
}

RemainderPrediction predicted_remainder(double kappa, double h, double big_c, double small_c) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("remainder: h must lie in (0, 1)");
  if (!(kappa > 0.0)) throw std::invalid_argument("remainder: kappa must be positive");
  RemainderPrediction r;
  r.kappa_squared = big_c * kappa * kappa / h;
  r.value = r.kappa_squared;
  r.form = "kappa_squared";
  if (kappa >= 1.0 && kappa <= small_c / h) {
    const double kh = kappa * h;
    const double l = std::log(kh);
    r.log_form = big_c * std::pow(h, -3.0) * std::pow(kh, 8.0 / 3.0) * l * l;
    if (*r.log_form < r.value) {
      r.value = *r.log_form;
      r.form = "log_form";
    }
  }
  const double kh = kappa * h / small_c;
  r.regime = kappa < 1.0 ? "weak-coupling" : (kh >= 0.5 ? "near-critical" : "intermediate");
  return r;
}

namespace {

LineFit line_fit(const std::vector<FitPoint>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    const double x = std::log(p.h), y = std::log(std::abs(p.error));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 1e-300)) throw std::invalid_argument("fit: degenerate h values");
  const double slope = (n * sxy - sx * sy) / den;
  const double icept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (const auto& p : pts) {
    const double r = std::log(std::abs(p.error)) - (icept + slope * std::log(p.h));
    ss += r * r;
  }
  return {-slope, std::exp(icept), std::sqrt(ss / n), static_cast<int>(pts.size())};
}

}  // namespace

FitResult fit_exponent(const std::vector<FitPoint>& points, const std::string& label) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.h > 0.0) || !std::isfinite(p.error) || p.error == 0.0) {
      throw std::invalid_argument("fit: need positive h and non-zero finite errors");
    }
    distinct.insert(p.h);
  }
  if (distinct.size() < 3) throw std::invalid_argument("fit: need at least 3 distinct h values");
  FitResult f;
  f.label = label;
  f.all_points = line_fit(points);
  f.fit = f.all_points;
  if (f.all_points.residual > 0.1) {
    // Drop every record at the two largest h values.
    auto it = distinct.rbegin();
    const double second = *std::next(it);
    std::vector<FitPoint> kept;
    for (const auto& p : points)
      if (p.h < second) kept.push_back(p);
    std::set<double> left;
    for (const auto& p : kept) left.insert(p.h);
    if (left.size() >= 3) {
      f.trimmed = line_fit(kept);
      f.fit = *f.trimmed;
    }
  }
  return f;
}

namespace {

nlohmann::json to_json(const LineFit& f) {
  return {{"p", f.p}, {"constant", f.constant}, {"residual", f.residual}, {"points", f.points}};
}

}  // namespace

nlohmann::json to_json(const FitResult& f) {
  nlohmann::json j = to_json(f.fit);
  j["label"] = f.label;
  j["all_points"] = to_json(f.all_points);
  j["trimmed"] = f.trimmed ? to_json(*f.trimmed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const RemainderPrediction& r) {
  return {{"kappa_squared", r.kappa_squared},
          {"log_form", r.log_form ? nlohmann::json(*r.log_form) : nlohmann::json(nullptr)},
          {"value", r.value},
          {"form", r.form},
          {"regime", r.regime}};
}

}  // namespace paulilab
