#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace hillwave {

/// 100 significant digits; used where band-edge structure sits far below double resolution.
using HighPrecision =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                  boost::multiprecision::et_off>;

template <typename Scalar>
inline Scalar pi() {
  return boost::math::constants::pi<Scalar>();
}

template <typename Scalar>
inline Scalar epsilon() {
  return std::numeric_limits<Scalar>::epsilon();
}

template <typename Scalar>
inline double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

}  // namespace hillwave
