#include "ppboot/pair_function.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "ppboot/error.hpp"

namespace ppboot {
namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidParameter(fmt::format("cannot parse {} from '{}'", what, text));
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_key_values(std::string_view body) {
  std::map<std::string, std::string, std::less<>> out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidParameter(fmt::format("expected key=value, got '{}'", item));
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

PairFunction::PairFunction(Window2 window, Inner h, std::string descriptor,
                           std::optional<RadialSupport> support)
    : window_(window), h_(std::move(h)), descriptor_(std::move(descriptor)), support_(support) {
  if (!h_) throw InvalidParameter("pair function is empty");
  if (support_ && !(support_->r_min >= 0.0 && support_->r_min <= support_->r_max)) {
    throw InvalidParameter(
        fmt::format("radial support [{}, {}] is invalid", support_->r_min, support_->r_max));
  }
}

PairFunction PairFunction::zero(const Window2& window) {
  return PairFunction(window, [](const Point2&, const Point2&) { return 0.0; }, "zero",
                      RadialSupport{0.0, 0.0});
}

PairFunction PairFunction::constant(const Window2& window, double value) {
  if (!std::isfinite(value)) throw InvalidParameter("constant pair function must be finite");
  return PairFunction(window, [value](const Point2&, const Point2&) { return value; },
                      fmt::format("const:{}", value));
}

PairFunction PairFunction::product_density(const Window2& window, double r, const KernelFunction& kernel) {
  if (!std::isfinite(r) || r <= 0.0) {
    throw InvalidParameter(fmt::format("product density radius must be positive, got {}", r));
  }
  const double scale = 1.0 / (2.0 * std::numbers::pi * r * window.area());
  const double reach = kernel.support_radius();
  return PairFunction(
      window,
      [kernel, r, scale](const Point2& a, const Point2& b) { return scale * kernel(r - distance(a, b)); },
      fmt::format("pcf:r={},b={},kernel={}", r, kernel.bandwidth(), kernel.name()),
      RadialSupport{std::max(0.0, r - reach), r + reach});
}

PairFunction PairFunction::disk_indicator(const Window2& window, double radius) {
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw InvalidParameter(fmt::format("disk radius must be positive, got {}", radius));
  }
  return PairFunction(
      window, [radius](const Point2& a, const Point2& b) { return distance(a, b) <= radius ? 1.0 : 0.0; },
      fmt::format("disk:{}", radius), RadialSupport{0.0, radius});
}

PairFunction parse_pair_function(std::string_view spec, const Window2& window) {
  const auto colon = spec.find(':');
  const auto head = spec.substr(0, colon);
  const auto body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (head == "zero") return PairFunction::zero(window);
  if (head == "const") {
    return PairFunction::constant(window, body.empty() ? 1.0 : parse_number(body, "constant"));
  }
  if (head == "disk") return PairFunction::disk_indicator(window, parse_number(body, "disk radius"));
  if (head == "pcf") {
    auto kv = parse_key_values(body);
    const auto take = [&](std::string_view key) -> std::optional<std::string> {
      const auto it = kv.find(key);
      if (it == kv.end()) return std::nullopt;
      auto value = it->second;
      kv.erase(it);
      return value;
    };
    const auto r = take("r");
    const auto b = take("b");
    const auto kernel = take("kernel");
    if (!r || !b) throw InvalidParameter("pcf f-spec needs r=<radius> and b=<bandwidth>");
    if (!kv.empty()) {
      throw InvalidParameter(fmt::format("unknown pcf f-spec key '{}'", kv.begin()->first));
    }
    const KernelFunction k(kernel ? parse_kernel_kind(*kernel) : KernelKind::box,
                           parse_number(*b, "bandwidth"));
    return PairFunction::product_density(window, parse_number(*r, "radius"), k);
  }
  throw InvalidParameter(fmt::format("unknown f-spec '{}' (expected zero, const, pcf or disk)", spec));
}

}  // namespace ppboot
