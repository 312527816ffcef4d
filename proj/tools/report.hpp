#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Output plumbing for the elastica CLI: manifest hashing, CSV, SVG.

namespace elastica::cli {

using Json = nlohmann::json;

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

// %.17g
std::string format_double(double v);

struct Manifest {
  std::string command_line;
  std::string subcommand;
  Json config;  // every option that influences numeric output
  std::optional<std::uint64_t> seed;
  std::string version;
  double wall_seconds = 0.0;

  std::string config_hash() const;
  // Hash of everything except the wall time.
  std::string hash() const;
  Json to_json() const;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(const std::vector<double>& row);
  void add_text(const std::vector<std::string>& row);
  // "# manifest_hash=<hash>" line, header, rows; LF endings.
  std::string render(const std::string& manifest_hash) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Polyline {
  std::vector<Eigen::Vector2d> points;
  std::string color = "#1f4e9c";
};

struct SvgScene {
  std::vector<Polyline> curves;
  std::vector<double> support_lines;  // vertical lines x = const
  std::string title;
};

// One user unit per length unit, y pointing up, viewBox fitted with a 5% margin.
std::string render_svg(const SvgScene& scene, const std::string& manifest_hash);

}  // namespace elastica::cli
