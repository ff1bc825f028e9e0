#pragma once

// Independent reference formulas used by the tests.  Written directly from
// the defining expressions, sharing no code with the library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
inline const C I(0.0, 1.0);

inline C mobius(C z, double a) { return (z + a) / (1.0 + z * a); }
inline C phi(C w) { return -I * (w + 1.0) / (w - 1.0); }
inline C phi_inv(C z) { return (z - I) / (z + I); }
inline C gt(C w, double t) { return phi_inv(phi(w) + t); }
inline C dgt_dt_at0(C w) { return -I * (w - 1.0) * (w - 1.0) / 2.0; }

inline double hyperbolic_disc(C z, C w) { return std::atanh(std::abs((z - w) / (1.0 - std::conj(z) * w))); }

inline C pj(C z1, C z2, int j) {
  const C num = z1 / (std::abs(z1) + 1.0 / (j + 1));
  const C e = std::exp(I * double(j) * z2);
  return num / (e / std::abs(e));
}

/// Uniform points in the disc |z| < r.
inline std::vector<C> disc_points(int n, double r, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<C> out;
  while (static_cast<int>(out.size()) < n) {
    const C z(u(gen) * 2 - 1, u(gen) * 2 - 1);
    if (std::abs(z) < 1.0) out.push_back(r * z);
  }
  return out;
}

}  // namespace oracle
