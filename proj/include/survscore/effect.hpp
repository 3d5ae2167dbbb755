#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "survscore/linalg.hpp"

namespace survscore {

namespace basis {

struct Constant {};

/// I(t <= t0) + ratio * I(t > t0)
struct Changepoint {
  double t0 = 0.5;
  double ratio = 0.0;
};

/// (1 - t)^k
struct Power {
  double k = 1.0;
};

/// 1 - t^2
struct OneMinusSquare {};

/// log(t); only evaluated on grid points t >= 1/k_n.
struct LogT {};

/// Piecewise constant: values[0] on [0, breaks[0]], values[m] on (breaks[m-1], breaks[m]],
/// the last value beyond the last break. values.size() == breaks.size() + 1.
struct Table {
  std::vector<double> breaks;
  std::vector<double> values;
};

/// Arbitrary shape; integrated numerically.
struct Custom {
  std::function<double(double)> shape;
  std::string label = "custom";
};

}  // namespace basis

using Basis = std::variant<basis::Constant, basis::Changepoint, basis::Power,
                           basis::OneMinusSquare, basis::LogT, basis::Table, basis::Custom>;

double evaluate_basis(const Basis& b, double t);
/// Integral of the shape over [0, t]. Closed form for the built-in shapes,
/// 1024-point trapezoid for Custom.
double integrate_basis(const Basis& b, double t);
std::string describe_basis(const Basis& b);
bool is_constant_basis(const Basis& b);

/// beta(t) = (loading_j * B_j(t))_j.
class TemporalEffect {
 public:
  TemporalEffect() = default;
  TemporalEffect(Vector loadings, std::vector<Basis> shapes);

  static TemporalEffect constant(Vector loadings);
  static TemporalEffect zero(Eigen::Index p);

  Eigen::Index dimension() const { return loadings_.size(); }
  const Vector& loadings() const { return loadings_; }
  const std::vector<Basis>& shapes() const { return shapes_; }

  Vector operator()(double t) const;
  /// B(t) without loadings.
  Vector shape_at(double t) const;
  /// Integral of beta(s) over [0, t].
  Vector integral(double t) const;

  TemporalEffect with_loadings(Vector loadings) const;
  bool is_zero() const;
  std::string describe() const;

 private:
  Vector loadings_;
  std::vector<Basis> shapes_;
};

}  // namespace survscore
