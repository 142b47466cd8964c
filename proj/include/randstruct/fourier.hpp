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

// Fourier analysis on the cyclic group Z_N.
//
// Conventions (used by every other header in this library):
//
//   dft:          F(xi) = (1/N) * sum_x f(x) e^{-2 pi i x xi / N}
//   inverse_dft:  f(x)  =         sum_xi F(xi) e^{+2 pi i x xi / N}
//   convolve:     (f*g)(x) = sum_y f(y) g(x - y),   so  dft(f*g) = N dft(f) dft(g)
//
// Any length N >= 1 is supported in O(N log N): power-of-two lengths go
// straight to an iterative radix-2 kernel, every other length (primes in
// particular) is reduced to a power-of-two cyclic convolution by the chirp-z
// (Bluestein) identity  x*xi = (x^2 + xi^2 - (xi - x)^2) / 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "randstruct/tolerance.hpp"

namespace randstruct {

using Complex = std::complex<double>;

/// Sign policy for real functions on Z_N.
struct NonNegative {
  static constexpr bool kAllowNegative = false;
  static constexpr const char* kName = "DensityFunction";
};
struct Signed {
  static constexpr bool kAllowNegative = true;
  static constexpr const char* kName = "BalancedFunction";
};

/// A real-valued function on Z_N, stored as its N values.
///
/// The policy decides whether negative values are admissible. Construction
/// validates the invariants; the object is immutable afterwards.
template <class Policy>
class ZnFunction {
 public:
  using policy_type = Policy;

  ZnFunction() = default;

  explicit ZnFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument(std::string(Policy::kName) +
                                  ": modulus must be at least 1");
    }
    for (std::size_t x = 0; x < values_.size(); ++x) {
      const double v = values_[x];
      if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(Policy::kName) +
                                    ": non-finite value at x=" + std::to_string(x));
      }
      if constexpr (!Policy::kAllowNegative) {
        if (v < 0.0) {
          throw std::invalid_argument(std::string(Policy::kName) +
                                      ": negative value at x=" + std::to_string(x));
        }
      }
    }
  }

  /// Constant function c on Z_N.
  static ZnFunction constant(std::size_t modulus, double c) {
    return ZnFunction(std::vector<double>(modulus, c));
  }

  std::size_t modulus() const noexcept { return values_.size(); }
  double operator()(std::size_t x) const { return values_[x % values_.size()]; }
  double operator[](std::size_t x) const { return values_[x]; }
  std::span<const double> values() const noexcept { return values_; }

  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }
  /// E_x f(x) over all of Z_N.
  double mean() const { return sum() / static_cast<double>(values_.size()); }
  double sup() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Conversion between sign policies. Moving to a nonnegative policy snaps
  /// round-off negatives (above -kNonNegativeSnap) to zero.
  template <class Other>
  ZnFunction<Other> as() const {
    std::vector<double> v = values_;
    if constexpr (!Other::kAllowNegative) {
      for (double& x : v) {
        if (x < 0.0 && x > -tol::kNonNegativeSnap) x = 0.0;
      }
    }
    return ZnFunction<Other>(std::move(v));
  }

 private:
  std::vector<double> values_;
};

using DensityFunction = ZnFunction<NonNegative>;
using BalancedFunction = ZnFunction<Signed>;

template <class T>
struct is_zn_function : std::false_type {};
template <class P>
struct is_zn_function<ZnFunction<P>> : std::true_type {};
template <class T>
concept ZnReal = is_zn_function<std::remove_cvref_t<T>>::value;

/// The N Fourier coefficients of a function on Z_N; coeffs[xi] = F(xi).
struct Spectrum {
  std::vector<Complex> coeffs;

  std::size_t modulus() const noexcept { return coeffs.size(); }
  const Complex& operator[](std::size_t xi) const { return coeffs[xi]; }
  double sup() const {
    double m = 0.0;
    for (const Complex& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

/// Per-thread cache of small tables keyed by (length, sign); cleared
/// wholesale once it holds more than 32 entries.
template <class T, class Make>
const T& cached_table(std::size_t n, int sign, Make make) {
  thread_local std::map<std::pair<std::size_t, int>, T> cache;
  const auto key = std::make_pair(n, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 32) cache.clear();
  return cache.emplace(key, make()).first->second;
}

/// Twiddles e^{sign 2 pi i k / n}, k < n/2, evaluated directly rather than by
/// recurrence so that the error does not grow with the stage length.
inline const std::vector<Complex>& twiddles(std::size_t n, int sign) {
  return cached_table<std::vector<Complex>>(n, sign, [&] {
    std::vector<Complex> roots(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
      roots[k] = Complex(std::cos(angle), std::sin(angle));
    }
    return roots;
  });
}

/// In-place iterative radix-2 transform, unnormalized:
///   a[k] <- sum_n a[n] e^{sign * 2 pi i n k / n_total}.
inline void fft_radix2(std::vector<Complex>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::vector<Complex>& roots = twiddles(n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + half] * roots[j * stride];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

/// Chirp c[j] = e^{sign * pi i j^2 / N} and the transformed conjugate-chirp
/// kernel. j^2 is reduced mod 2N in integers so the angle stays in [0, 2 pi).
struct BluesteinPlan {
  std::size_t m = 0;
  std::vector<Complex> chirp;
  std::vector<Complex> kernel_hat;

  BluesteinPlan(std::size_t n, int sign) : m(next_power_of_two(2 * n - 1)), chirp(n), kernel_hat(m) {
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t jj = (static_cast<std::uint64_t>(j) * j) % two_n;
      const double angle =
          sign * std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n);
      chirp[j] = Complex(std::cos(angle), std::sin(angle));
    }
    kernel_hat[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
      kernel_hat[j] = std::conj(chirp[j]);
      kernel_hat[m - j] = kernel_hat[j];
    }
    fft_radix2(kernel_hat, -1);
  }
};

/// Unnormalized DFT of any length:
///   X[k] = sum_n x[n] e^{sign * 2 pi i n k / N}.
inline std::vector<Complex> transform(std::span<const Complex> x, int sign) {
  const std::size_t n = x.size();
  if (is_power_of_two(n)) {
    std::vector<Complex> a(x.begin(), x.end());
    fft_radix2(a, sign);
    return a;
  }
  const BluesteinPlan& plan = cached_table<BluesteinPlan>(n, sign, [&] { return BluesteinPlan(n, sign); });
  const std::vector<Complex>& chirp = plan.chirp;
  const std::size_t m = plan.m;
  std::vector<Complex> a(m);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  fft_radix2(a, -1);
  for (std::size_t i = 0; i < m; ++i) a[i] *= plan.kernel_hat[i];
  fft_radix2(a, +1);
  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = chirp[k] * a[k] * inv_m;
  return out;
}

inline void require_same_modulus(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": modulus mismatch (" << a << " vs " << b << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace detail

/// Normalized transform F(xi) = E_x f(x) e^{-2 pi i x xi / N}.
template <ZnReal Fn>
Spectrum dft(const Fn& f) {
  const std::size_t n = f.modulus();
  std::vector<Complex> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = f[i];
  Spectrum s{detail::transform(x, -1)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Complex& c : s.coeffs) c *= inv_n;
  return s;
}

/// Complex inversion f(x) = sum_xi F(xi) e^{+2 pi i x xi / N}.
inline std::vector<Complex> inverse_dft_complex(const Spectrum& spectrum) {
  if (spectrum.coeffs.empty()) {
    throw std::invalid_argument("inverse_dft: modulus must be at least 1");
  }
  return detail::transform(spectrum.coeffs, +1);
}

/// Inversion back to a real function. Imaginary parts (round-off for spectra
/// of real functions) are discarded.
template <ZnReal Fn = BalancedFunction>
Fn inverse_dft(const Spectrum& spectrum) {
  const std::vector<Complex> z = inverse_dft_complex(spectrum);
  std::vector<double> v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = z[i].real();
  return BalancedFunction(std::move(v)).template as<typename Fn::policy_type>();
}

/// Circular convolution (f*g)(x) = sum_y f(y) g(x-y).
///
/// The result is a DensityFunction when both inputs are, otherwise a
/// BalancedFunction.
template <ZnReal F, ZnReal G>
auto convolve(const F& f, const G& g) {
  detail::require_same_modulus(f.modulus(), g.modulus(), "convolve");
  const std::size_t n = f.modulus();
  std::vector<Complex> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = f[i];
    b[i] = g[i];
  }
  a = detail::transform(a, -1);
  b = detail::transform(b, -1);
  for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
  a = detail::transform(a, +1);
  std::vector<double> v(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a[i].real() * inv_n;
  BalancedFunction raw(std::move(v));
  using FP = typename std::remove_cvref_t<F>::policy_type;
  using GP = typename std::remove_cvref_t<G>::policy_type;
  if constexpr (!FP::kAllowNegative && !GP::kAllowNegative) {
    return raw.template as<NonNegative>();
  } else {
    return raw;
  }
}

/// Reflection x -> f(-x).
template <ZnReal Fn>
std::remove_cvref_t<Fn> reflect(const Fn& f) {
  const std::size_t n = f.modulus();
  std::vector<double> v(n);
  for (std::size_t x = 0; x < n; ++x) v[x] = f[(n - x) % n];
  return std::remove_cvref_t<Fn>(std::move(v));
}

/// l^q norm of an array of magnitudes, q in [1, inf]. Evaluated with the
/// maximum factored out so large exponents neither underflow nor overflow.
inline double lq_norm(std::span<const double> magnitudes, double q) {
  if (std::isnan(q) || q < 1.0) {
    throw std::invalid_argument("lq norm: exponent q must be >= 1 (got " +
                                std::to_string(q) + ")");
  }
  double peak = 0.0;
  for (double m : magnitudes) peak = std::max(peak, std::abs(m));
  if (std::isinf(q) || peak == 0.0) return peak;
  double acc = 0.0;
  for (double m : magnitudes) acc += std::pow(std::abs(m) / peak, q);
  return peak * std::pow(acc, 1.0 / q);
}

/// (sum_xi |F(xi)|^q)^{1/q}; q = infinity gives the max modulus.
inline double spectral_lq_norm(const Spectrum& spectrum, double q) {
  std::vector<double> mags(spectrum.coeffs.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(spectrum.coeffs[i]);
  return lq_norm(mags, q);
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace randstruct
