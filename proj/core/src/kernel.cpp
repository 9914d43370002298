#include "ppboot/kernel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ppboot/error.hpp"

namespace ppboot {

KernelFunction::KernelFunction(KernelKind kind, double bandwidth) : kind_(kind), bandwidth_(bandwidth) {
  if (!std::isfinite(bandwidth) || bandwidth <= 0.0) {
    throw InvalidParameter(fmt::format("kernel bandwidth must be positive, got {}", bandwidth));
  }
}

double KernelFunction::operator()(double u) const noexcept {
  const double v = u / bandwidth_;
  if (std::abs(v) > 1.0) return 0.0;
  switch (kind_) {
    case KernelKind::box:
      return 0.5 / bandwidth_;
    case KernelKind::epanechnikov:
      return 0.75 * (1.0 - v * v) / bandwidth_;
  }
  return 0.0;
}

std::string KernelFunction::name() const {
  return kind_ == KernelKind::box ? "box" : "epa";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "box") return KernelKind::box;
  if (name == "epa" || name == "epanechnikov") return KernelKind::epanechnikov;
  throw InvalidParameter(fmt::format("unknown kernel '{}' (expected box or epa)", name));
}

}  // namespace ppboot
