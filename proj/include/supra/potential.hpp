#pragma once

#include <cmath>

#include "supra/model.hpp"

namespace supra {

inline double potential_value(PotentialKind kind, double u) {
  switch (kind) {
    case PotentialKind::SineGordon:
      return 1.0 - std::cos(u);
    case PotentialKind::KleinGordon: {
      const double u2 = u * u;
      return u2 * (1.0 / 2.0 + u2 * (-1.0 / 24.0 + u2 * (1.0 / 720.0)));
    }
    case PotentialKind::Harmonic:
      return 0.5 * u * u;
  }
  return 0.0;
}

inline double potential_slope(PotentialKind kind, double u) {
  switch (kind) {
    case PotentialKind::SineGordon:
      return std::sin(u);
    case PotentialKind::KleinGordon: {
      const double u2 = u * u;
      return u * (1.0 + u2 * (-1.0 / 6.0 + u2 * (1.0 / 120.0)));
    }
    case PotentialKind::Harmonic:
      return u;
  }
  return 0.0;
}

inline double potential_curvature(PotentialKind kind, double u) {
  switch (kind) {
    case PotentialKind::SineGordon:
      return std::cos(u);
    case PotentialKind::KleinGordon: {
      const double u2 = u * u;
      return 1.0 + u2 * (-0.5 + u2 * (1.0 / 24.0));
    }
    case PotentialKind::Harmonic:
      return 1.0;
  }
  return 0.0;
}

namespace detail {

// sin(h)/h and its derivative, series near the origin.
inline double sinc(double h) {
  if (std::abs(h) < 1e-2) {
    const double h2 = h * h;
    return 1.0 + h2 * (-1.0 / 6.0 + h2 * (1.0 / 120.0 - h2 / 5040.0));
  }
  return std::sin(h) / h;
}

inline double sinc_slope(double h) {
  if (std::abs(h) < 1e-2) {
    const double h2 = h * h;
    return h * (-1.0 / 3.0 + h2 * (1.0 / 30.0 - h2 / 840.0));
  }
  return (h * std::cos(h) - std::sin(h)) / (h * h);
}

}  // namespace detail

/// (V(x) - V(w)) / (x - w) in a factored form free of cancellation; the
/// removable singularity at x = w is filled with V'(x).
inline double potential_divided_difference(PotentialKind kind, double x, double w) {
  switch (kind) {
    case PotentialKind::SineGordon: {
      const double mid = 0.5 * (x + w);
      const double half = 0.5 * (x - w);
      return std::sin(mid) * detail::sinc(half);
    }
    case PotentialKind::KleinGordon: {
      const double s = x + w;
      const double x2 = x * x;
      const double w2 = w * w;
      return s * (0.5 - (x2 + w2) / 24.0 + (x2 * x2 + x2 * w2 + w2 * w2) / 720.0);
    }
    case PotentialKind::Harmonic:
      return 0.5 * (x + w);
  }
  return 0.0;
}

/// Partial derivative of potential_divided_difference with respect to x.
inline double potential_divided_difference_slope(PotentialKind kind, double x, double w) {
  switch (kind) {
    case PotentialKind::SineGordon: {
      const double mid = 0.5 * (x + w);
      const double half = 0.5 * (x - w);
      return 0.5 * (std::cos(mid) * detail::sinc(half) + std::sin(mid) * detail::sinc_slope(half));
    }
    case PotentialKind::KleinGordon: {
      const double s = x + w;
      const double x2 = x * x;
      const double w2 = w * w;
      const double quartic = x2 * x2 + x2 * w2 + w2 * w2;
      return 0.5 - (x2 + w2 + 2.0 * x * s) / 24.0 +
             (quartic + s * (4.0 * x2 * x + 2.0 * x * w2)) / 720.0;
    }
    case PotentialKind::Harmonic:
      return 0.5;
  }
  return 0.0;
}

struct DividedDifference {
  double value = 0.0;
  double slope = 0.0;
};

/// Value and x-slope together; shares the trigonometric work for sine-Gordon.
inline DividedDifference potential_divided_difference_pair(PotentialKind kind, double x,
                                                           double w) {
  if (kind != PotentialKind::SineGordon) {
    return {potential_divided_difference(kind, x, w),
            potential_divided_difference_slope(kind, x, w)};
  }
  const double mid = 0.5 * (x + w);
  const double half = 0.5 * (x - w);
  const double sin_mid = std::sin(mid);
  const double cos_mid = std::cos(mid);
  double sinc = 0.0;
  double sinc_slope = 0.0;
  if (std::abs(half) < 1e-2) {
    sinc = detail::sinc(half);
    sinc_slope = detail::sinc_slope(half);
  } else {
    const double sin_half = std::sin(half);
    const double cos_half = std::cos(half);
    sinc = sin_half / half;
    sinc_slope = (half * cos_half - sin_half) / (half * half);
  }
  return {sin_mid * sinc, 0.5 * (cos_mid * sinc + sin_mid * sinc_slope)};
}

}  // namespace supra
