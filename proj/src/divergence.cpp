#include "fsens/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_param(double a) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", a);
  return buf;
}

}  // namespace

GeneratingFunction::GeneratingFunction(DivergenceKind kind,
                                       std::optional<double> param)
    : kind_(kind), param_(param) {
  switch (kind_) {
    case DivergenceKind::kForwardKl:
      f0_ = 0.0;
      fstar0_ = kInf;
      name_ = "kl";
      break;
    case DivergenceKind::kReversedKl:
      f0_ = kInf;
      fstar0_ = 0.0;
      name_ = "rkl";
      break;
    case DivergenceKind::kTotalVariation:
      f0_ = 1.0;
      fstar0_ = 1.0;
      is_metric_ = true;
      name_ = "tv";
      break;
    case DivergenceKind::kHellinger:
      f0_ = 1.0;
      fstar0_ = 1.0;
      is_metric_ = true;
      name_ = "hellinger";
      break;
    case DivergenceKind::kPearsonChi2:
      f0_ = -1.0;
      fstar0_ = kInf;
      name_ = "pearson";
      break;
    case DivergenceKind::kNeymanChi2:
      f0_ = kInf;
      fstar0_ = -1.0;
      name_ = "neyman";
      break;
    case DivergenceKind::kAlpha: {
      if (!param_) param_ = 0.5;
      const double a = *param_;
      if (a == 1.0 || a == -1.0)
        throw std::invalid_argument("alpha divergence: parameter must not be +-1");
      if (a > -1.0 && a < 1.0) {
        f0_ = 4.0 / (1.0 - a * a);
        fstar0_ = 0.0;
      } else if (a > 1.0) {
        f0_ = kInf;
        fstar0_ = 0.0;
      } else {  // a < -1
        f0_ = 4.0 / (1.0 - a * a);
        fstar0_ = kInf;
      }
      name_ = "alpha:" + format_param(a);
      break;
    }
    case DivergenceKind::kVajdaChi: {
      if (!param_) param_ = 2.0;
      const double a = *param_;
      if (a < 1.0)
        throw std::invalid_argument("vajda divergence: parameter must be >= 1");
      f0_ = 1.0;
      fstar0_ = a == 1.0 ? 1.0 : kInf;
      is_metric_ = a == 1.0;  // coincides with total variational distance
      name_ = "vajda:" + format_param(a);
      break;
    }
    case DivergenceKind::kJeffreys:
      f0_ = kInf;
      fstar0_ = kInf;
      name_ = "jeffreys";
      break;
    case DivergenceKind::kTriangular:
      f0_ = 1.0;
      fstar0_ = 1.0;
      name_ = "triangular";
      break;
  }
}

double GeneratingFunction::base_eval(double t) const {
  if (std::isinf(t)) return tail_limit();
  switch (kind_) {
    case DivergenceKind::kForwardKl:
      return t * std::log(t);
    case DivergenceKind::kReversedKl:
      return -std::log(t);
    case DivergenceKind::kTotalVariation:
      return std::abs(t - 1.0);
    case DivergenceKind::kHellinger: {
      const double s = std::sqrt(t) - 1.0;
      return s * s;
    }
    case DivergenceKind::kPearsonChi2:
      return t * t - 1.0;
    case DivergenceKind::kNeymanChi2:
      return 1.0 / t - t;
    case DivergenceKind::kAlpha: {
      const double a = *param_;
      return 4.0 * (1.0 - std::pow(t, 0.5 * (1.0 - a))) / (1.0 - a * a);
    }
    case DivergenceKind::kVajdaChi:
      return std::pow(std::abs(t - 1.0), *param_);
    case DivergenceKind::kJeffreys:
      return (t - 1.0) * std::log(t);
    case DivergenceKind::kTriangular: {
      const double s = t - 1.0;
      return s * s / (t + 1.0);
    }
  }
  return 0.0;  // unreachable
}

double GeneratingFunction::tail_limit() const {
  switch (kind_) {
    case DivergenceKind::kForwardKl:
    case DivergenceKind::kTotalVariation:
    case DivergenceKind::kHellinger:
    case DivergenceKind::kPearsonChi2:
    case DivergenceKind::kVajdaChi:
    case DivergenceKind::kJeffreys:
    case DivergenceKind::kTriangular:
      return kInf;
    case DivergenceKind::kReversedKl:
    case DivergenceKind::kNeymanChi2:
      return -kInf;
    case DivergenceKind::kAlpha: {
      const double a = *param_;
      if (a > -1.0 && a < 1.0) return -kInf;
      if (a > 1.0) return 4.0 / (1.0 - a * a);
      return kInf;  // a < -1
    }
  }
  return kInf;  // unreachable
}

double GeneratingFunction::operator()(double t) const {
  if (std::isnan(t) || t < 0.0)
    throw std::domain_error("generating function: argument must be >= 0");
  if (t == 0.0) return f0_;
  if (!conjugated_) return base_eval(t);
  if (std::isinf(t)) {
    // lim t f(1/t): decided by the sign of f(0); a vanishing f(0) forces a
    // strictly negative slope at 0+ for any admissible convex f.
    const double base_f0 = fstar0_;  // limits are swapped on this object
    if (base_f0 > 0.0) return kInf;
    return -kInf;
  }
  return t * base_eval(1.0 / t);
}

double eval_f(const GeneratingFunction& f, double t) { return f(t); }

GeneratingFunction conjugate(const GeneratingFunction& f) {
  GeneratingFunction g = f;
  g.conjugated_ = !f.conjugated_;
  std::swap(g.f0_, g.fstar0_);
  g.name_ = f.conjugated_ ? f.name_.substr(0, f.name_.size() - 1)
                          : f.name_ + "*";
  return g;
}

double range_upper_bound(const GeneratingFunction& f) {
  return f.f0() + f.fstar0();
}

GeneratingFunction GeneratingFunction::parse(const std::string& selector) {
  const auto colon = selector.find(':');
  const std::string head = selector.substr(0, colon);
  std::optional<double> param;
  if (colon != std::string::npos) {
    try {
      param = std::stod(selector.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("divergence selector '" + selector +
                                  "': malformed parameter");
    }
  }
  DivergenceKind kind;
  if (head == "kl")
    kind = DivergenceKind::kForwardKl;
  else if (head == "rkl")
    kind = DivergenceKind::kReversedKl;
  else if (head == "tv")
    kind = DivergenceKind::kTotalVariation;
  else if (head == "hellinger")
    kind = DivergenceKind::kHellinger;
  else if (head == "pearson")
    kind = DivergenceKind::kPearsonChi2;
  else if (head == "neyman")
    kind = DivergenceKind::kNeymanChi2;
  else if (head == "alpha")
    kind = DivergenceKind::kAlpha;
  else if (head == "vajda")
    kind = DivergenceKind::kVajdaChi;
  else if (head == "jeffreys")
    kind = DivergenceKind::kJeffreys;
  else if (head == "triangular")
    kind = DivergenceKind::kTriangular;
  else
    throw std::invalid_argument("unknown divergence '" + selector + "'");
  if (param && kind != DivergenceKind::kAlpha && kind != DivergenceKind::kVajdaChi)
    throw std::invalid_argument("divergence '" + head + "' takes no parameter");
  return GeneratingFunction(kind, param);
}

std::vector<GeneratingFunction> divergence_catalog() {
  return {
      GeneratingFunction(DivergenceKind::kForwardKl),
      GeneratingFunction(DivergenceKind::kReversedKl),
      GeneratingFunction(DivergenceKind::kTotalVariation),
      GeneratingFunction(DivergenceKind::kHellinger),
      GeneratingFunction(DivergenceKind::kPearsonChi2),
      GeneratingFunction(DivergenceKind::kNeymanChi2),
      GeneratingFunction(DivergenceKind::kAlpha, 0.5),
      GeneratingFunction(DivergenceKind::kVajdaChi, 2.0),
      GeneratingFunction(DivergenceKind::kJeffreys),
      GeneratingFunction(DivergenceKind::kTriangular),
  };
}

}  // namespace fsens
