#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace paulilab {

using Rational = boost::multiprecision::cpp_rational;

/// Rational from a decimal-free string "p/q" or "p".
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);

struct ScaleState {
  double h = 0.0;
  double kappa = 0.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double beta = 0.0;

  double m() const;  // kappa^beta h^{-3/2 - alpha}
  double h_rescaled() const { return h / gamma; }
  double kappa_rescaled() const { return kappa * gamma; }
};

struct ScalePair {
  double h = 0.0;
  double kappa = 0.0;
};

/// (h / gamma, kappa gamma). Requires 0 < gamma <= 1 and h / gamma <= 1.
ScalePair rescale(double h, double kappa, double gamma);

struct GammaChoice {
  double gamma = 0.0;
  double before = 0.0;  // kappa^{beta+1} h^{-alpha}
  double after = 0.0;   // the same for the rescaled pair (1 by construction)
  bool precondition_failed_before = false;  // before > c
  bool in_range = false;                    // h < gamma <= 1
};

/// gamma = kappa^{-(beta+1)/(alpha+beta+1)} h^{alpha/(alpha+beta+1)}.
GammaChoice gamma_choice(double kappa, double h, double alpha, double beta, double c = 1.0);

struct RecurrenceStep {
  Rational alpha;
  Rational beta;
};

struct Recurrence {
  std::vector<RecurrenceStep> steps;  // steps[0] is the start
  std::optional<int> first_negative;  // first index with alpha < 0
};

/// alpha' = -1/2 + 4/5 alpha, beta' = 3/2 - alpha', exactly.
Recurrence alpha_recurrence(const Rational& alpha0, int steps);
/// Fixed point of the recurrence (-5/2).
Rational alpha_fixed_point();

/// epsilon h^{-1/4} |log h|^{-3/4}, 0 < h < 1.
double kappa_star(double h, double epsilon = 1.0);

struct RemainderPrediction {
  double kappa_squared = 0.0;  // C kappa^2 / h
  std::optional<double> log_form;  // C h^-3 (kappa h)^{8/3} |log kappa h|^2, 1 <= kappa <= c/h
  double value = 0.0;          // min of the available forms
  std::string form;            // "kappa_squared" or "log_form"
  std::string regime;          // "weak-coupling", "intermediate", "near-critical"
};

RemainderPrediction predicted_remainder(double kappa, double h, double big_c = 1.0,
                                        double small_c = 1.0);

struct FitPoint {
  double h = 0.0;
  double error = 0.0;  // E - reference; the fit uses |error|
};

struct LineFit {
  double p = 0.0;         // |error| ~ constant * h^{-p}
  double constant = 0.0;
  double residual = 0.0;  // RMS residual of log|error|
  int points = 0;
};

struct FitResult {
  LineFit fit;                   // the reported fit
  LineFit all_points;            // fit over every point
  std::optional<LineFit> trimmed;  // without the two largest h
  std::string label;
};

/// Least squares of log|error| against log h. Needs at least three distinct h
/// and non-zero errors. When the residual exceeds 0.1 and at least three
/// points remain, the two largest-h points are dropped and that fit reported.
FitResult fit_exponent(const std::vector<FitPoint>& points, const std::string& label = "");

nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const RemainderPrediction& r);

}  // namespace paulilab
