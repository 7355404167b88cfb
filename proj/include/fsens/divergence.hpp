#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fsens {

/// The ten supported convex generating functions. Each is normalised so
/// that f(1) = 0; alpha and vajda carry a real parameter.
enum class DivergenceKind {
  kForwardKl,      // t ln t
  kReversedKl,     // -ln t
  kTotalVariation, // |t - 1|
  kHellinger,      // (sqrt(t) - 1)^2
  kPearsonChi2,    // t^2 - 1
  kNeymanChi2,     // (1 - t^2) / t
  kAlpha,          // 4 (1 - t^{(1-a)/2}) / (1 - a^2), a != +-1
  kVajdaChi,       // |t - 1|^a, a >= 1
  kJeffreys,       // (t - 1) ln t
  kTriangular,     // (t - 1)^2 / (t + 1)
};

/// Convex generating function of an f-divergence together with its limit
/// values. Evaluation is extended-real: f(0) and the slope at infinity
/// lim f(t)/t are explicit values that may be infinite; infinities are
/// returned as signed IEEE infinities, never produced by silent overflow.
///
/// Immutable after construction; safe for concurrent reads.
class GeneratingFunction {
 public:
  explicit GeneratingFunction(DivergenceKind kind,
                              std::optional<double> param = std::nullopt);

  /// Parses a selector such as "tv", "kl", "alpha:0.5" or "vajda:2".
  static GeneratingFunction parse(const std::string& selector);

  /// f(t) for t in [0, +inf]; t = 0 returns f0(), t = +inf the tail limit.
  /// Throws std::domain_error for negative or NaN t.
  double operator()(double t) const;

  double f0() const { return f0_; }           // lim_{t->0+} f(t)
  double fstar0() const { return fstar0_; }   // lim_{t->inf} f(t)/t
  bool is_metric() const { return is_metric_; }
  bool conjugated() const { return conjugated_; }
  DivergenceKind kind() const { return kind_; }
  std::optional<double> param() const { return param_; }
  const std::string& name() const { return name_; }

  friend GeneratingFunction conjugate(const GeneratingFunction& f);

 private:
  double base_eval(double t) const;  // closed form, t in (0, inf)
  double tail_limit() const;         // lim_{t->inf} f(t) of the base form

  DivergenceKind kind_;
  std::optional<double> param_;
  bool conjugated_ = false;
  bool is_metric_ = false;
  double f0_ = 0.0;
  double fstar0_ = 0.0;
  std::string name_;
};

/// f(t) with domain check; alias for GeneratingFunction::operator().
double eval_f(const GeneratingFunction& f, double t);

/// The *-conjugate t f(1/t). Conjugating twice restores the original
/// pointwise on (0, inf).
GeneratingFunction conjugate(const GeneratingFunction& f);

/// f(0) + f*(0): the sharp upper range of the induced sensitivity index.
/// Finite for tv, hellinger, triangular (= 2) and alpha with |a| < 1.
double range_upper_bound(const GeneratingFunction& f);

/// The ten named entries with default parameters (alpha:0.5, vajda:2).
std::vector<GeneratingFunction> divergence_catalog();

/// Ratios below this floor are treated as exactly zero when forming
/// estimator summands, so that KDE tail underflow triggers the f(0)
/// convention instead of producing NaN.
inline constexpr double kDensityRatioFloor = 1e-300;

}  // namespace fsens
