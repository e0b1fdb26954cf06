#pragma once

// Randomised identity checks for the kernel closed forms against direct
// summation, as run by `sievelab kernels-selfcheck`.

#include <cstdint>
#include <string>
#include <vector>

namespace sievelab {

struct KernelCheckOptions {
  std::int64_t h_max = 50;
  std::int64_t q_max = 50;
  std::int64_t samples_per_h = 1000;
  std::int64_t spectrum_samples = 10000;
  std::int64_t spectrum_h_max = 30;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

struct KernelCheck {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  double worst = 0.0;  // largest |closed - direct| / (1 + |direct|), or most negative value
  bool passed() const { return failures == 0; }
};

std::vector<KernelCheck> run_kernel_checks(const KernelCheckOptions& options);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_double(std::uint64_t bits);

}  // namespace sievelab
