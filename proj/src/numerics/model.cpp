#include "bcsgp/numerics/model.hpp"
#include "bcsgp/numerics/errors.hpp"
#include <algorithm>
#include <cmath>
#include <sstream>

namespace bcsgp::numerics {

namespace {
double table_lookup(const std::vector<double> &xs, const std::vector<double> &ys,
                    double x) {
  if (xs.empty() || x > xs.back())
    return 0.0;
  if (x <= xs.front())
    return ys.front();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto j = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - t) * ys[j - 1] + t * ys[j];
}

void validate_table(const std::vector<double> &xs, const std::vector<double> &ys,
                    const char *what) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw ConfigError(std::string(what) + ": table needs >= 2 (r, value) pairs");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError(std::string(what) + ": table radii must increase");
  if (xs.front() < 0.0)
    throw ConfigError(std::string(what) + ": table radii must be >= 0");
}
} // namespace

Interaction Interaction::spherical_well(double depth, double radius) {
  Interaction v;
  v.kind = Kind::spherical_well;
  v.depth = depth;
  v.range = radius;
  return v;
}

Interaction Interaction::gaussian_well(double depth, double width) {
  Interaction v;
  v.kind = Kind::gaussian_well;
  v.depth = depth;
  v.range = width;
  return v;
}

double Interaction::operator()(double r) const {
  switch (kind) {
  case Kind::spherical_well:
    return r < range ? -depth : 0.0;
  case Kind::gaussian_well:
    return -depth * std::exp(-(r * r) / (range * range));
  case Kind::tabulated:
    return table_lookup(table_r, table_v, r);
  }
  return 0.0;
}

double Interaction::cell_average(double a, double b) const {
  if (kind != Kind::spherical_well || b <= a)
    return (*this)(0.5 * (a + b));
  const double inside = std::clamp(range, a, b) - a;
  return -depth * inside / (b - a);
}

double Interaction::length_scale() const {
  if (kind == Kind::tabulated)
    return table_r.back() - table_r.front();
  return range;
}

void Interaction::validate() const {
  if (kind == Kind::tabulated) {
    validate_table(table_r, table_v, "interaction");
    return;
  }
  if (!(depth >= 0.0) || !std::isfinite(depth))
    throw ConfigError("interaction: depth must be finite and >= 0");
  if (!(range > 0.0) || !std::isfinite(range))
    throw ConfigError("interaction: radius/width must be positive");
}

std::string Interaction::describe() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::spherical_well:
    os << "spherical-well(V0=" << depth << ", radius=" << range << ")";
    break;
  case Kind::gaussian_well:
    os << "gaussian-well(V0=" << depth << ", width=" << range << ")";
    break;
  case Kind::tabulated:
    os << "tabulated(" << table_r.size() << " nodes)";
    break;
  }
  return os.str();
}

Trap Trap::harmonic(double coefficient) {
  Trap w;
  w.kind = Kind::harmonic;
  w.coefficient = coefficient;
  w.beta = 2.0;
  return w;
}

Trap Trap::power(double beta, double coefficient) {
  Trap w;
  w.kind = Kind::power;
  w.beta = beta;
  w.coefficient = coefficient;
  return w;
}

double Trap::operator()(double r) const {
  switch (kind) {
  case Kind::harmonic:
    return coefficient * r * r;
  case Kind::power:
    return coefficient * std::pow(r, beta);
  case Kind::tabulated: {
    if (r <= table_r.back())
      return table_lookup(table_r, table_w, r);
    // Continue with the power law through the last two nodes.
    const std::size_t m = table_r.size();
    const double b = std::log(table_w[m - 1] / table_w[m - 2]) /
                     std::log(table_r[m - 1] / table_r[m - 2]);
    return table_w[m - 1] * std::pow(r / table_r[m - 1], b);
  }
  }
  return 0.0;
}

double Trap::growth_exponent() const {
  if (kind != Kind::tabulated)
    return beta;
  const std::size_t m = table_r.size();
  return std::log(table_w[m - 1] / table_w[m - 2]) /
         std::log(table_r[m - 1] / table_r[m - 2]);
}

void Trap::validate() const {
  if (kind == Kind::tabulated) {
    validate_table(table_r, table_w, "trap");
    for (double w : table_w)
      if (!(w >= 0.0))
        throw ConfigError("trap: tabulated W must be nonnegative");
    if (!(table_w.back() > 0.0 && table_w[table_w.size() - 2] > 0.0 &&
          table_r[table_r.size() - 2] > 0.0 &&
          table_w.back() > table_w[table_w.size() - 2]))
      throw ConfigError("trap: tabulated W must grow at the last nodes");
    return;
  }
  if (!(coefficient > 0.0) || !std::isfinite(coefficient))
    throw ConfigError("trap: coefficient must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ConfigError("trap: beta must be positive");
}

std::string Trap::describe() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::harmonic:
    os << "harmonic(c=" << coefficient << ")";
    break;
  case Kind::power:
    os << "power(beta=" << beta << ", c=" << coefficient << ")";
    break;
  case Kind::tabulated:
    os << "tabulated(" << table_r.size() << " nodes)";
    break;
  }
  return os.str();
}

void PhysicsModel::validate() const {
  V.validate();
  W.validate();
  if (!(h > 0.0 && h < 1.0))
    throw ConfigError("h must lie in (0, 1), got " + std::to_string(h));
  if (!std::isfinite(D))
    throw ConfigError("D must be finite");
}

} // namespace bcsgp::numerics
