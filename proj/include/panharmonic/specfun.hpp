#pragma once

// Modified Bessel functions I_nu of integer and half-integer order on the
// positive half-line, and the mean-value coefficients built from them.
//
// Everything here is templated on the scalar type; double is the working
// precision of the rest of the toolkit.

#include <cmath>
#include <limits>
#include <numbers>

#include "panharmonic/error.hpp"

namespace panharmonic {

/// Order nu stored doubled, so nu = two_nu / 2 is exact for half-integers.
struct BesselOrder {
  int two_nu;

  explicit constexpr BesselOrder(int twice_nu) : two_nu(twice_nu) {
    if (twice_nu < 0) throw Error(ErrorKind::InvalidOrder, "negative order");
  }
  static constexpr BesselOrder from_half(int twice_nu) { return BesselOrder(twice_nu); }
  static constexpr BesselOrder integer(int nu) { return BesselOrder(2 * nu); }

  template <typename Scalar = double>
  constexpr Scalar value() const {
    return Scalar(two_nu) / Scalar(2);
  }
  constexpr bool half_integer() const { return two_nu % 2 != 0; }
};

/// Ambient dimension m >= 2.
struct Dimension {
  int m;

  explicit constexpr Dimension(int dim) : m(dim) {
    if (dim < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2");
  }
  /// Order (m-2)/2 of the sphere coefficient.
  constexpr BesselOrder sphere_order() const { return BesselOrder(m - 2); }
  /// Order m/2 of the ball coefficient.
  constexpr BesselOrder ball_order() const { return BesselOrder(m); }
};

namespace specfun {

/// Switchover between ascending series and large-argument expansion.
inline constexpr double kSeriesLimit = 25.0;
inline constexpr int kMaxSeriesTerms = 60;

namespace detail {

template <typename Scalar>
void check_argument(Scalar z) {
  if (!(z >= Scalar(0)) || !std::isfinite(static_cast<double>(z)))
    throw Error(ErrorKind::Domain, "argument must be finite and nonnegative");
}

// sum_k (z^2/4)^k / (k! (nu+1)_k), i.e. Gamma(nu+1) I_nu(z) / (z/2)^nu.
template <typename Scalar>
Scalar kernel_series(Scalar nu, Scalar z) {
  const Scalar q = z * z / Scalar(4);
  Scalar term = Scalar(1);
  Scalar sum = Scalar(1);
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    term *= q / (Scalar(k) * (nu + Scalar(k)));
    sum += term;
    if (term < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-1) * sum) break;
  }
  return sum;
}

// sum_k (-1)^k a_k(nu) / z^k of I_nu(z) ~ e^z / sqrt(2 pi z) * sum.
// Terminates for half-integer nu, where it is the exact hyperbolic form
// up to an e^{-2z} relative correction.
template <typename Scalar>
Scalar asymptotic_sum(Scalar nu, Scalar z) {
  const Scalar four_nu2 = Scalar(4) * nu * nu;
  Scalar term = Scalar(1);
  Scalar sum = Scalar(1);
  Scalar previous = std::numeric_limits<Scalar>::infinity();
  for (int k = 1; k < 200; ++k) {
    const Scalar odd = Scalar(2 * k - 1);
    const Scalar next = -term * (four_nu2 - odd * odd) / (Scalar(8 * k) * z);
    if (next == Scalar(0)) break;
    if (std::abs(next) >= previous) break;  // optimal truncation
    sum += next;
    previous = std::abs(next);
    term = next;
    if (std::abs(term) < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-2) * std::abs(sum))
      break;
  }
  return sum;
}

}  // namespace detail

/// e^{-z} I_nu(z); finite for every finite z >= 0.
template <typename Scalar = double>
Scalar bessel_i_scaled(BesselOrder order, Scalar z) {
  detail::check_argument(z);
  const Scalar nu = order.value<Scalar>();
  if (z <= Scalar(kSeriesLimit)) {
    if (z == Scalar(0)) return order.two_nu == 0 ? Scalar(1) : Scalar(0);
    const Scalar lead = std::exp(nu * std::log(z / Scalar(2)) - std::lgamma(nu + Scalar(1)) - z);
    return lead * detail::kernel_series(nu, z);
  }
  return detail::asymptotic_sum(nu, z) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * z);
}

/// I_nu(z) for z >= 0. Signals Overflow once e^z leaves the double range.
template <typename Scalar = double>
Scalar bessel_i(BesselOrder order, Scalar z) {
  detail::check_argument(z);
  const Scalar nu = order.value<Scalar>();
  if (z <= Scalar(kSeriesLimit)) {
    if (z == Scalar(0)) return order.two_nu == 0 ? Scalar(1) : Scalar(0);
    const Scalar lead = std::pow(z / Scalar(2), nu) / std::tgamma(nu + Scalar(1));
    return lead * detail::kernel_series(nu, z);
  }
  const Scalar growth = std::exp(z);
  if (!std::isfinite(static_cast<double>(growth)))
    throw Error(ErrorKind::Overflow, "e^z not representable");
  const Scalar value = growth * detail::asymptotic_sum(nu, z) /
                       std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * z);
  if (!std::isfinite(static_cast<double>(value)))
    throw Error(ErrorKind::Overflow, "I_nu(z) not representable");
  return value;
}

/// g_nu(t) = Gamma(nu+1) I_nu(t) / (t/2)^nu, with g_nu(0) = 1.
template <typename Scalar = double>
Scalar scaled_kernel(BesselOrder order, Scalar t) {
  detail::check_argument(t);
  const Scalar nu = order.value<Scalar>();
  if (t <= Scalar(kSeriesLimit)) return detail::kernel_series(nu, t);
  const Scalar growth = std::exp(t);
  if (!std::isfinite(static_cast<double>(growth)))
    throw Error(ErrorKind::Overflow, "e^t not representable");
  const Scalar prefactor = std::tgamma(nu + Scalar(1)) / std::pow(t / Scalar(2), nu) /
                           std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * t);
  const Scalar value = growth * prefactor * detail::asymptotic_sum(nu, t);
  if (!std::isfinite(static_cast<double>(value)))
    throw Error(ErrorKind::Overflow, "scaled kernel not representable");
  return value;
}

/// e^{-t} g_nu(t); used for ratios at arguments where g itself overflows.
template <typename Scalar = double>
Scalar scaled_kernel_damped(BesselOrder order, Scalar t) {
  detail::check_argument(t);
  const Scalar nu = order.value<Scalar>();
  if (t <= Scalar(kSeriesLimit)) return std::exp(-t) * detail::kernel_series(nu, t);
  const Scalar prefactor = std::tgamma(nu + Scalar(1)) / std::pow(t / Scalar(2), nu) /
                           std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * t);
  return prefactor * detail::asymptotic_sum(nu, t);
}

/// Sphere coefficient a°(t) = Gamma(m/2) I_{(m-2)/2}(t) / (t/2)^{(m-2)/2}.
template <typename Scalar = double>
Scalar a_sphere(Dimension dim, Scalar t) {
  return scaled_kernel(dim.sphere_order(), t);
}

/// Ball coefficient a•(t) = Gamma(m/2+1) I_{m/2}(t) / (t/2)^{m/2}.
template <typename Scalar = double>
Scalar a_ball(Dimension dim, Scalar t) {
  return scaled_kernel(dim.ball_order(), t);
}

/// c = a•(t)/a°(t) = m I_{m/2}(t) / (t I_{(m-2)/2}(t)) for t > 0.
///
/// Strictly below min(1, m/t). The t -> 0 limit is 1 but t = 0 itself is a
/// domain error.
template <typename Scalar = double>
Scalar ball_ratio(Dimension dim, Scalar t) {
  detail::check_argument(t);
  if (t == Scalar(0)) throw Error(ErrorKind::Domain, "ball ratio undefined at t = 0");
  return scaled_kernel_damped(dim.ball_order(), t) / scaled_kernel_damped(dim.sphere_order(), t);
}

/// Area of the unit sphere in R^m, 2 pi^{m/2} / Gamma(m/2).
template <typename Scalar = double>
Scalar unit_sphere_area(Dimension dim) {
  const Scalar half_m = Scalar(dim.m) / Scalar(2);
  return Scalar(2) * std::pow(std::numbers::pi_v<Scalar>, half_m) / std::tgamma(half_m);
}

/// Volume of the unit ball in R^m, omega_m / m.
template <typename Scalar = double>
Scalar unit_ball_volume(Dimension dim) {
  return unit_sphere_area<Scalar>(dim) / Scalar(dim.m);
}

}  // namespace specfun
}  // namespace panharmonic
