#include "ppboot/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "ppboot/error.hpp"

namespace ppboot {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double require_number(std::string_view s, std::string_view what) {
  const auto v = to_double(trim(s));
  if (!v) throw InvalidParameter(fmt::format("cannot parse {} from '{}'", what, s));
  return *v;
}

struct RawCsv {
  std::size_t columns = 0;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;  // file line of each row
};

RawCsv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open point file '{}'", path.string()));
  RawCsv csv;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto fields = split(content, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 1 && fields[0] == "x") {
        csv.columns = 1;
      } else if (fields.size() == 2 && fields[0] == "x" && fields[1] == "y") {
        csv.columns = 2;
      } else {
        throw DataError(fmt::format("{}: header must be 'x' or 'x,y', got '{}'", path.string(), content));
      }
      continue;
    }
    if (fields.size() != csv.columns) {
      throw DataError(fmt::format("{}: row {} has {} fields, expected {}", path.string(), line_no, fields.size(),
                                  csv.columns));
    }
    std::vector<double> row;
    for (const auto f : fields) {
      const auto v = to_double(f);
      if (!v) throw DataError(fmt::format("{}: row {}: '{}' is not a finite number", path.string(), line_no, f));
      row.push_back(*v);
    }
    csv.rows.push_back(std::move(row));
    csv.lines.push_back(line_no);
  }
  if (!header_seen) throw DataError(fmt::format("{}: empty file, expected a header", path.string()));
  return csv;
}

nlohmann::json read_window_document(const std::filesystem::path& csv_path,
                                    const std::optional<std::filesystem::path>& window_path) {
  const auto path = window_path ? *window_path : sidecar_path(csv_path);
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open window file '{}'", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  if (!doc.is_object() || !doc.contains("window")) {
    throw DataError(fmt::format("{}: expected an object with a \"window\" member", path.string()));
  }
  return doc.at("window");
}

template <typename Pattern, typename Build>
Pattern build_with_rows(const RawCsv& csv, const std::filesystem::path& path, Build&& build) {
  try {
    return build();
  } catch (const DuplicatePoint& e) {
    const auto line = csv.lines.at(e.row());
    throw DuplicatePoint(fmt::format("{}: row {} repeats an earlier point; points must be pairwise different",
                                     path.string(), line),
                         line);
  } catch (const OutOfWindow& e) {
    const auto line = csv.lines.at(e.row());
    throw OutOfWindow(fmt::format("{}: row {} lies outside the window", path.string(), line), line);
  }
}

double window_field(const nlohmann::json& w, const char* key) {
  if (!w.contains(key)) throw DataError(fmt::format("window is missing \"{}\"", key));
  const auto& v = w.at(key);
  if (!v.is_number()) throw DataError(fmt::format("window field \"{}\" must be a number", key));
  return v.get<double>();
}

void reject_unknown(const nlohmann::json& w, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : w.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw DataError(fmt::format("unknown window field \"{}\"", key));
  }
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".window.json");
  return p;
}

Window2 parse_window2(const nlohmann::json& w) {
  if (!w.is_object()) throw DataError("window must be a JSON object");
  reject_unknown(w, {"x_min", "x_max", "y_min", "y_max"});
  try {
    return Window2(window_field(w, "x_min"), window_field(w, "x_max"), window_field(w, "y_min"),
                   window_field(w, "y_max"));
  } catch (const InvalidParameter& e) {
    throw DataError(e.what());
  }
}

Interval1 parse_interval(const nlohmann::json& w) {
  if (!w.is_object()) throw DataError("window must be a JSON object");
  reject_unknown(w, {"x_min", "x_max"});
  try {
    return Interval1(window_field(w, "x_min"), window_field(w, "x_max"));
  } catch (const InvalidParameter& e) {
    throw DataError(e.what());
  }
}

Window2 parse_window2(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw InvalidParameter(fmt::format("window '{}' must be x_min,x_max,y_min,y_max", text));
  return Window2(require_number(parts[0], "x_min"), require_number(parts[1], "x_max"),
                 require_number(parts[2], "y_min"), require_number(parts[3], "y_max"));
}

Interval1 parse_interval(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidParameter(fmt::format("interval '{}' must be lo,hi", text));
  return Interval1(require_number(parts[0], "lo"), require_number(parts[1], "hi"));
}

IntensityFunction parse_intensity(std::string_view spec, const Interval1& domain) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter(fmt::format("intensity spec '{}' must be const:<c> or linear:<a>,<b>", spec));
  }
  const auto head = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  if (head == "const") return IntensityFunction::constant(require_number(body, "constant intensity"));
  if (head == "linear") {
    const auto parts = split(body, ',');
    if (parts.size() != 2) throw InvalidParameter(fmt::format("linear intensity '{}' needs a,b", spec));
    return IntensityFunction::linear(require_number(parts[0], "intercept"), require_number(parts[1], "slope"), domain);
  }
  throw InvalidParameter(fmt::format("unknown intensity spec '{}'", spec));
}

AnyPattern ingest_pattern(const std::filesystem::path& csv_path,
                          const std::optional<std::filesystem::path>& window_path) {
  const auto csv = read_csv(csv_path);
  const auto window = read_window_document(csv_path, window_path);
  if (csv.columns == 2) {
    const auto w = parse_window2(window);
    return build_with_rows<PointPattern2>(csv, csv_path, [&] {
      std::vector<Point2> pts;
      pts.reserve(csv.rows.size());
      for (const auto& r : csv.rows) pts.push_back({r[0], r[1]});
      return PointPattern2(w, std::move(pts));
    });
  }
  const auto interval = parse_interval(window);
  return build_with_rows<PointPattern1>(csv, csv_path, [&] {
    std::vector<double> pts;
    pts.reserve(csv.rows.size());
    for (const auto& r : csv.rows) pts.push_back(r[0]);
    return PointPattern1(interval, std::move(pts));
  });
}

PointPattern2 ingest_pattern2(const std::filesystem::path& csv_path,
                              const std::optional<std::filesystem::path>& window_path) {
  auto any = ingest_pattern(csv_path, window_path);
  if (auto* p = std::get_if<PointPattern2>(&any)) return std::move(*p);
  throw DataError(fmt::format("{}: expected a planar pattern with header 'x,y'", csv_path.string()));
}

PointPattern1 ingest_pattern1(const std::filesystem::path& csv_path,
                              const std::optional<std::filesystem::path>& window_path) {
  auto any = ingest_pattern(csv_path, window_path);
  if (auto* p = std::get_if<PointPattern1>(&any)) return std::move(*p);
  throw DataError(fmt::format("{}: expected a one-dimensional pattern with header 'x'", csv_path.string()));
}

std::string format_number(double value) {
  return fmt::format("{}", value);
}

std::string pattern_csv(const PointPattern2& pattern) {
  std::string out = "x,y\n";
  for (const auto& p : pattern.points()) out += fmt::format("{},{}\n", format_number(p.x), format_number(p.y));
  return out;
}

std::string pattern_csv(const PointPattern1& pattern) {
  std::string out = "x\n";
  for (double x : pattern.points()) out += fmt::format("{}\n", format_number(x));
  return out;
}

nlohmann::json window_json(const Window2& w) {
  return {{"window", {{"x_min", w.x_min()}, {"x_max", w.x_max()}, {"y_min", w.y_min()}, {"y_max", w.y_max()}}}};
}

nlohmann::json window_json(const Interval1& interval) {
  return {{"window", {{"x_min", interval.lo()}, {"x_max", interval.hi()}}}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, std::string_view content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  out << content;
}

}  // namespace ppboot
