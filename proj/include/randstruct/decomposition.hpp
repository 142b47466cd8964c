// Copyright 2026 The randstruct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Structured/random split f = f1 + f2 of a density bounded by a pseudorandom
// majorant.
//
//   Lambda0 = { xi : |f^(xi)| >= eps0 }
//   B0      = B(Lambda0, eps0)
//   f1(x)   = E_{y1, y2 in B0} f(x + y1 - y2)
//   f2      = f - f1
//
// With beta = 1_{B0} / |B0|, f1 = f * beta * reflect(beta), so on the Fourier
// side f1^ = f^ * |N beta^|^2. The multiplier is real and lies in [0, 1], which
// is what makes |f1^| and |f2^| both at most |f^|.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "randstruct/bohr.hpp"
#include "randstruct/fourier.hpp"
#include "randstruct/random_model.hpp"
#include "randstruct/tolerance.hpp"

namespace randstruct {

/// { xi : |F(xi)| >= eps0 }, ascending.
inline std::vector<std::size_t> large_spectrum(const Spectrum& spectrum, double eps0) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("large_spectrum: epsilon0 must be positive");
  std::vector<std::size_t> out;
  for (std::size_t xi = 0; xi < spectrum.modulus(); ++xi) {
    if (std::abs(spectrum[xi]) >= eps0) out.push_back(xi);
  }
  return out;
}

template <ZnReal Fn>
std::vector<std::size_t> large_spectrum(const Fn& f, double eps0) {
  return large_spectrum(dft(f), eps0);
}

/// Checks of the four conclusions of the decomposition, with measured values.
struct DecompositionCertificate {
  // (i) 0 <= f1 <= 1 + (1 + P(B0)^{-1}) eta
  double f1_min = 0.0;
  double f1_max = 0.0;
  double f1_upper_bound = 0.0;
  bool bounded_ok = false;
  // (ii) E f1 = E f
  double mean_gap = 0.0;
  bool mean_ok = false;
  // (iii) ||f2^||_inf <= 3 (1 + eta) eps0
  double f2_sup = 0.0;
  double f2_sup_bound = 0.0;
  bool f2_sup_ok = false;
  // (iv) |fi^(xi)| <= |f^(xi)| for all xi, i = 1, 2
  double domination_excess = 0.0;  // max_xi,i (|fi^| - |f^|), <= 0 when it holds
  bool domination_ok = false;
  // eta measured from nu at certification time, for audit
  double measured_eta = 0.0;

  bool all_ok() const { return bounded_ok && mean_ok && f2_sup_ok && domination_ok; }
};

struct DecompositionResult {
  double epsilon0 = 0.0;
  std::vector<std::size_t> lambda0;
  BohrSet b0;
  DensityFunction f;
  DensityFunction f1;
  BalancedFunction f2;
  double eta = 0.0;
  Spectrum f_hat;
  Spectrum f1_hat;
  Spectrum f2_hat;
  /// Populated by certify_decomposition.
  std::optional<DecompositionCertificate> bounds;
};

/// Splits f into the B0-smoothed part f1 and the remainder f2. When eta is
/// not supplied it is measured from nu.
inline DecompositionResult decompose(const DensityFunction& f, const DensityFunction& nu,
                                     double eps0, std::optional<double> eta = std::nullopt) {
  detail::require_same_modulus(f.modulus(), nu.modulus(), "decompose");
  if (!(eps0 > 0.0 && eps0 < 1.0)) {
    throw std::invalid_argument("decompose: epsilon0=" + std::to_string(eps0) + " outside (0,1)");
  }
  const std::size_t n = f.modulus();
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x] > nu[x] + tol::kCertificateAbs) {
      throw std::invalid_argument("decompose: f exceeds nu at x=" + std::to_string(x));
    }
  }
  DecompositionResult r;
  r.epsilon0 = eps0;
  r.f = f;
  r.f_hat = dft(f);
  r.eta = eta ? *eta : pseudorandom_eta(dft(nu));
  r.lambda0 = large_spectrum(r.f_hat, eps0);
  r.b0 = bohr_elements(n, r.lambda0, eps0, 0);

  // N beta^(xi) = |B0|^{-1} sum_{y in B0} e^{-2 pi i y xi / N}; real since B0 = -B0.
  const Spectrum b0_hat = dft(r.b0.indicator());
  const double scale = static_cast<double>(n) / static_cast<double>(r.b0.size());
  r.f1_hat.coeffs.resize(n);
  r.f2_hat.coeffs.resize(n);
  for (std::size_t xi = 0; xi < n; ++xi) {
    const double m = std::norm(b0_hat[xi] * scale);
    r.f1_hat.coeffs[xi] = r.f_hat[xi] * m;
    r.f2_hat.coeffs[xi] = r.f_hat[xi] - r.f1_hat.coeffs[xi];
  }
  r.f1 = inverse_dft<DensityFunction>(r.f1_hat);
  std::vector<double> rest(n);
  for (std::size_t x = 0; x < n; ++x) rest[x] = f[x] - r.f1[x];
  r.f2 = BalancedFunction(std::move(rest));
  return r;
}

inline DecompositionCertificate certify_decomposition(const DecompositionResult& r,
                                                      const DensityFunction& nu) {
  DecompositionCertificate c;
  const double eta = r.eta;
  c.measured_eta = pseudorandom_eta(dft(nu));

  c.f1_min = *std::min_element(r.f1.values().begin(), r.f1.values().end());
  c.f1_max = *std::max_element(r.f1.values().begin(), r.f1.values().end());
  c.f1_upper_bound = 1.0 + (1.0 + 1.0 / r.b0.density()) * eta;
  c.bounded_ok = c.f1_min >= -tol::kCertificateAbs &&
                 c.f1_max <= c.f1_upper_bound + tol::kCertificateAbs;

  c.mean_gap = std::abs(r.f1.mean() - r.f.mean());
  c.mean_ok = c.mean_gap <= tol::kAdditivityAbs;

  // Recomputed from f2 itself rather than read off the multiplier.
  const Spectrum f2_hat = dft(r.f2);
  const Spectrum f1_hat = dft(r.f1);
  c.f2_sup = f2_hat.sup();
  c.f2_sup_bound = 3.0 * (1.0 + eta) * r.epsilon0;
  c.f2_sup_ok = c.f2_sup <= c.f2_sup_bound + tol::kCertificateAbs;

  c.domination_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t xi = 0; xi < r.f_hat.modulus(); ++xi) {
    const double base = std::abs(r.f_hat[xi]);
    c.domination_excess = std::max(c.domination_excess, std::abs(f1_hat[xi]) - base);
    c.domination_excess = std::max(c.domination_excess, std::abs(f2_hat[xi]) - base);
  }
  c.domination_ok = c.domination_excess <= tol::kCertificateAbs;
  return c;
}

/// decompose followed by certify_decomposition, with the certificate attached.
inline DecompositionResult decompose_certified(const DensityFunction& f, const DensityFunction& nu,
                                               double eps0, std::optional<double> eta = std::nullopt) {
  DecompositionResult r = decompose(f, nu, eps0, eta);
  r.bounds = certify_decomposition(r, nu);
  return r;
}

}  // namespace randstruct
