#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "ppboot/geometry.hpp"

namespace ppboot {

using AnyPattern = std::variant<PointPattern1, PointPattern2>;

/// "dir/pattern.csv" -> "dir/pattern.window.json"
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Reads a CSV point file (header `x` or `x,y`) and its window sidecar
/// `{"window": {"x_min": .., "x_max": .., "y_min": .., "y_max": ..}}` (1-d files
/// omit the y bounds). Without an explicit `window_path` the sidecar next to the
/// CSV is used. Row numbers in errors are 1-based file lines.
AnyPattern ingest_pattern(const std::filesystem::path& csv_path,
                          const std::optional<std::filesystem::path>& window_path = std::nullopt);

PointPattern2 ingest_pattern2(const std::filesystem::path& csv_path,
                              const std::optional<std::filesystem::path>& window_path = std::nullopt);
PointPattern1 ingest_pattern1(const std::filesystem::path& csv_path,
                              const std::optional<std::filesystem::path>& window_path = std::nullopt);

std::string pattern_csv(const PointPattern2& pattern);
std::string pattern_csv(const PointPattern1& pattern);
nlohmann::json window_json(const Window2& window);
nlohmann::json window_json(const Interval1& interval);

Window2 parse_window2(const nlohmann::json& window);
Interval1 parse_interval(const nlohmann::json& window);
/// "x_min,x_max,y_min,y_max"
Window2 parse_window2(std::string_view text);
/// "lo,hi"
Interval1 parse_interval(std::string_view text);

/// const:<c> | linear:<intercept>,<slope>
IntensityFunction parse_intensity(std::string_view spec, const Interval1& domain);

/// Shortest round-trip decimal representation of a double.
std::string format_number(double value);

std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
/// Writes to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, std::string_view content);

}  // namespace ppboot
