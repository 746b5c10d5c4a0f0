#include "ordtest/accumulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ordtest/quadrature.hpp"

namespace ordtest {

namespace {
constexpr double kClamp = 1.0 - 1e-12;
}

AccumulationFn AccumulationFn::forward_stop() {
  return AccumulationFn(Kind::ForwardStop, 0.0);
}

AccumulationFn AccumulationFn::seq_step(double c) {
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw std::invalid_argument("AccumulationFn::seq_step: c must be > 1");
  }
  return AccumulationFn(Kind::SeqStep, c);
}

AccumulationFn AccumulationFn::hinge_exp(double c) {
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw std::invalid_argument("AccumulationFn::hinge_exp: c must be > 1");
  }
  AccumulationFn fn(Kind::HingeExp, c);
  // log pole at 1; the truncated tail mass is O(1e-11), below the tolerance
  const double integral = adaptive_simpson(
      [&fn](double x) { return fn(x); }, 1.0 - 1.0 / c, kClamp, 1e-10);
  if (std::fabs(integral - 1.0) > 1e-8) {
    throw NumericError("AccumulationFn::hinge_exp: unit-integral check failed");
  }
  return fn;
}

AccumulationFn AccumulationFn::custom(std::vector<double> x,
                                      std::vector<double> h) {
  if (x.size() != h.size() || x.size() < 2) {
    throw std::invalid_argument(
        "AccumulationFn::custom: need matching x/h tables with >= 2 knots");
  }
  if (x.front() != 0.0 || x.back() != 1.0) {
    throw std::invalid_argument("AccumulationFn::custom: x must span [0,1]");
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i])) {
      throw std::invalid_argument(
          "AccumulationFn::custom: x must strictly increase");
    }
    if (h[i] < 0.0 || h[i + 1] < 0.0 || !std::isfinite(h[i])) {
      throw std::invalid_argument("AccumulationFn::custom: h must be >= 0");
    }
    integral += 0.5 * (h[i] + h[i + 1]) * (x[i + 1] - x[i]);
  }
  if (std::fabs(integral - 1.0) > 1e-8) {
    throw std::invalid_argument(
        "AccumulationFn::custom: integral of h must be 1 (got " +
        std::to_string(integral) + ")");
  }
  AccumulationFn fn(Kind::Custom, 0.0);
  fn.xs_ = std::move(x);
  fn.hs_ = std::move(h);
  return fn;
}

double AccumulationFn::operator()(double p) const {
  p = std::min(p, kClamp);
  switch (kind_) {
    case Kind::ForwardStop:
      return -std::log1p(-p);
    case Kind::SeqStep:
      return p > 1.0 - 1.0 / c_ ? c_ : 0.0;
    case Kind::HingeExp:
      return p > 1.0 - 1.0 / c_ ? c_ * std::log(1.0 / (c_ * (1.0 - p))) : 0.0;
    case Kind::Custom: {
      if (p <= xs_.front()) return hs_.front();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), p);
      const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
      const double w = (p - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return hs_[j - 1] + w * (hs_[j] - hs_[j - 1]);
    }
  }
  return 0.0;
}

std::vector<double> AccumulationFn::breakpoints() const {
  switch (kind_) {
    case Kind::ForwardStop:
      return {};
    case Kind::SeqStep:
    case Kind::HingeExp:
      return {1.0 - 1.0 / c_};
    case Kind::Custom:
      return std::vector<double>(xs_.begin() + 1, xs_.end() - 1);
  }
  return {};
}

std::string AccumulationFn::name() const {
  switch (kind_) {
    case Kind::ForwardStop:
      return "forwardstop";
    case Kind::SeqStep:
      return "seqstep(c=" + std::to_string(c_) + ")";
    case Kind::HingeExp:
      return "hingeexp(c=" + std::to_string(c_) + ")";
    case Kind::Custom:
      return "custom(" + std::to_string(xs_.size()) + " knots)";
  }
  return "?";
}

}  // namespace ordtest
