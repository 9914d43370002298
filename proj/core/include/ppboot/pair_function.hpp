#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "ppboot/geometry.hpp"
#include "ppboot/kernel.hpp"

namespace ppboot {

/// f(x, y) = 0 unless r_min <= |x - y| <= r_max.
struct RadialSupport {
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Symmetric pair function of the form f(x, y) = 1_W(x) 1_W(y) h(x, y).
///
/// The window indicator is applied here, so `h` only needs to be defined for
/// points in W. An optional radial support lets integrators concentrate
/// samples on the region where f can be nonzero.
class PairFunction {
 public:
  using Inner = std::function<double(const Point2&, const Point2&)>;

  PairFunction(Window2 window, Inner h, std::string descriptor,
               std::optional<RadialSupport> support = std::nullopt);

  double operator()(const Point2& a, const Point2& b) const {
    if (!window_.contains(a) || !window_.contains(b)) return 0.0;
    return h_(a, b);
  }

  const Window2& window() const noexcept { return window_; }
  const std::optional<RadialSupport>& support() const noexcept { return support_; }
  const std::string& descriptor() const noexcept { return descriptor_; }

  static PairFunction zero(const Window2& window);
  static PairFunction constant(const Window2& window, double value);
  /// The product-density estimator's summand at radius r:
  /// K_b(r - |x - y|) / (2 pi r area(W)).
  static PairFunction product_density(const Window2& window, double r, const KernelFunction& kernel);
  /// 1{|x - y| <= radius}.
  static PairFunction disk_indicator(const Window2& window, double radius);

 private:
  Window2 window_;
  Inner h_;
  std::string descriptor_;
  std::optional<RadialSupport> support_;
};

/// Parses the textual f-spec used by the CLI and config files:
///   zero | const[:c] | pcf:r=<r>,b=<b>[,kernel=box|epa] | disk:<radius>
PairFunction parse_pair_function(std::string_view spec, const Window2& window);

}  // namespace ppboot
