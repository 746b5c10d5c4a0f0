#pragma once

#include <string>
#include <vector>

namespace ordtest {

/// Nonnegative weight function h on [0,1] with unit integral. Accumulation
/// procedures average h over a prefix of the p-values; large h values flag
/// likely nulls near 1.
class AccumulationFn {
 public:
  enum class Kind { ForwardStop, SeqStep, HingeExp, Custom };

  /// h(x) = -log(1 - x).
  static AccumulationFn forward_stop();

  /// h(x) = c on (1 - 1/c, 1], 0 below. Requires c > 1.
  static AccumulationFn seq_step(double c);

  /// h(x) = c * log(1/(c(1-x))) on (1 - 1/c, 1], 0 below. Requires c > 1.
  /// The unit integral is re-verified by quadrature at construction.
  static AccumulationFn hinge_exp(double c);

  /// Piecewise-linear h through (x[i], h[i]). x must start at 0, end at 1
  /// and strictly increase; h must be nonnegative with trapezoid integral
  /// within 1e-8 of 1.
  static AccumulationFn custom(std::vector<double> x, std::vector<double> h);

  /// Evaluate h. The argument is clamped to 1 - 1e-12 first, so kinds with
  /// a pole at 1 stay finite.
  double operator()(double p) const;

  Kind kind() const noexcept { return kind_; }

  /// SeqStep / HingeExp parameter c; 0 for the other kinds.
  double param() const noexcept { return c_; }

  /// Interior points where h jumps or kinks (quadrature split hints).
  std::vector<double> breakpoints() const;

  /// Custom tables (empty for the built-in kinds).
  const std::vector<double>& knots_x() const noexcept { return xs_; }
  const std::vector<double>& knots_h() const noexcept { return hs_; }

  std::string name() const;

  friend bool operator==(const AccumulationFn&, const AccumulationFn&) = default;

 private:
  AccumulationFn(Kind k, double c) : kind_(k), c_(c) {}

  Kind kind_;
  double c_ = 0.0;
  std::vector<double> xs_, hs_;  // Custom only
};

}  // namespace ordtest
