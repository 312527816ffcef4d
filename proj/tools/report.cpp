#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace elastica::cli {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Manifest::config_hash() const { return hex64(fnv1a(config.dump())); }

std::string Manifest::hash() const {
  Json j = {{"subcommand", subcommand}, {"config_hash", config_hash()}, {"version", version}};
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return hex64(fnv1a(j.dump()));
}

Json Manifest::to_json() const {
  Json j;
  j["command_line"] = command_line;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["config_hash"] = config_hash();
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  j["manifest_hash"] = hash();
  return j;
}

void CsvTable::add(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_text(const std::vector<std::string>& row) { rows_.push_back(row); }

std::string CsvTable::render(const std::string& manifest_hash) const {
  std::ostringstream os;
  os << "# manifest_hash=" << manifest_hash << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

std::string render_svg(const SvgScene& scene, const std::string& manifest_hash) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& c : scene.curves) {
    for (const auto& p : c.points) {
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
  }
  for (double x : scene.support_lines) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
  double w = xmax - xmin, h = ymax - ymin;
  const double size = std::max({w, h, 1e-9});
  const double margin = 0.05 * size;
  // SVG y points down; plot (x, -y).
  const double vx = xmin - margin, vy = -ymax - margin;
  w += 2 * margin;
  h += 2 * margin;
  const double stroke = 0.004 * size;

  std::ostringstream os;
  os.precision(10);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- manifest_hash: " << manifest_hash << " -->\n";
  // Larger side 800 px.
  const double px_w = w >= h ? 800.0 : std::max(1.0, std::round(800 * w / h));
  const double px_h = w >= h ? std::max(1.0, std::round(800 * h / w)) : 800.0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << vx << " " << vy << " " << w << " "
     << h << "\" width=\"" << px_w << "\" height=\"" << px_h << "\">\n";
  if (!scene.title.empty()) os << "  <title>" << scene.title << "</title>\n";
  for (double x : scene.support_lines) {
    os << "  <line x1=\"" << x << "\" y1=\"" << vy << "\" x2=\"" << x << "\" y2=\"" << vy + h
       << "\" stroke=\"#999999\" stroke-width=\"" << stroke << "\" stroke-dasharray=\""
       << 4 * stroke << " " << 3 * stroke << "\"/>\n";
  }
  for (const auto& c : scene.curves) {
    os << "  <polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"" << 2 * stroke
       << "\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      os << (i ? " " : "") << c.points[i].x() << "," << -c.points[i].y();
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace elastica::cli
