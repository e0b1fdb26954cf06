#pragma once

// The weights W (signed window) and S (Selberg/Fejer) and their exponential
// sums. Kernel values are exact integers; Fourier-side quantities are doubles.

#include <cstdint>
#include <span>
#include <string_view>

#include "sievelab/number.hpp"

namespace sievelab {

enum class KernelFamily { W, S };

std::string_view to_string(KernelFamily family);

struct KernelSpec {
  KernelFamily family = KernelFamily::W;
  std::int64_t h = 1;

  /// W(a) = 2h - 3|a| on |a| <= h, |a| - 2h on h <= |a| <= 2h, 0 beyond.
  /// S(a) = max(2h - |a|, 0).
  std::int64_t operator()(std::int64_t a) const;
  std::int64_t support() const { return 2 * h; }
};

/// Below this distance to the integers the closed forms (0/0 at integers)
/// are replaced by direct summation.
inline constexpr double kSingularityTolerance = 1e-6;

std::int64_t kernel_value(const KernelSpec& k, std::int64_t a);

/// sum_{a = 0 mod q} W(a) = 2q ||h/q||, evaluated in integers.
Rational sum_W_over_multiples(std::int64_t h, std::int64_t q);

/// sum_a K(a*ell) cos(2 pi a beta), compensated summation.
double fourier_direct(const KernelSpec& k, std::int64_t ell, double beta);

/// sum_{|a| <= 2h} W(a) e(a beta) = 4 sin^4(pi h beta) / sin^2(pi beta).
double fourier_W(std::int64_t h, double beta);

/// (1/ell) sum_a W(a ell) e(a beta) through the closed form with the
/// {h/ell} < 1/2 and {h/ell} >= 1/2 cases handled separately.
double fourier_W_scaled(std::int64_t h, std::int64_t ell, double beta);

/// The same quantity through the single un-split expression
/// (4 sin^2(pi beta [h/ell]) - sin^2(pi beta [2h/ell])) / sin^2(pi beta)
///   + 4{h/ell} E_{h/ell}(beta) - {2h/ell} E_{2h/ell}(beta).
double fourier_W_scaled_unified(std::int64_t h, std::int64_t ell, double beta);

/// True iff sum_b W(ell b) cos(2 pi b alpha) >= -1e-9 (2h)^2 for every alpha.
bool spectrum_nonneg_check(std::int64_t h, std::int64_t ell, std::span<const double> alphas);

/// sum_a S(a) e_q(j a) = sin^2(2 pi j h / q) / sin^2(pi j / q), and 4h^2 when q | j.
double fejer_S(std::int64_t h, std::int64_t j, std::int64_t q);

/// sum_{1 <= n <= X} cos(2 pi n theta) and sum_{1 <= n <= X} sin(2 pi n theta).
double cos_sum(std::int64_t X, double theta);
double sin_sum(std::int64_t X, double theta);

/// E_X(beta) = sum_{0 <= |a| <= X} e(a beta) for real X >= 0.
double exp_sum_E(double X, double beta);

/// Distance to the nearest integer.
double dist_to_int(double r);

}  // namespace sievelab
