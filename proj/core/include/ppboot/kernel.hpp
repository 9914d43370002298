#pragma once

#include <string>
#include <string_view>

namespace ppboot {

enum class KernelKind { box, epanechnikov };

/// Smoothing kernel with explicit bandwidth: K_b(u) = k(u / b) / b, where k is a
/// probability density supported on [-1, 1].
class KernelFunction {
 public:
  KernelFunction(KernelKind kind, double bandwidth);

  KernelKind kind() const noexcept { return kind_; }
  double bandwidth() const noexcept { return bandwidth_; }

  double operator()(double u) const noexcept;

  /// K_b(u) vanishes for |u| > support_radius().
  double support_radius() const noexcept { return bandwidth_; }

  std::string name() const;

 private:
  KernelKind kind_;
  double bandwidth_;
};

/// Accepts "box" and "epa" / "epanechnikov".
KernelKind parse_kernel_kind(std::string_view name);

}  // namespace ppboot
