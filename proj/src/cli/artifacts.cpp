#include "gatebound/cli/run.hpp"

#include "gatebound/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace gatebound::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return format_number(v.get<double>());
  throw ValidationError("config: unsupported value " + v.dump());
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  bool log = true;
  double lo = 0.0, hi = 1.0;

  double map(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool log, bool use_x) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series) {
    const auto& vals = use_x ? s.x : s.y;
    for (const double v : vals) {
      if (!a.usable(v)) continue;
      lo = std::min(lo, a.map(v));
      hi = std::max(hi, a.map(v));
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

} // namespace

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += "\r\n";
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string render_svg(const PlotSpec& plot) {
  constexpr double W = 640, H = 420, left = 80, right = 170, top = 40, bottom = 60;
  constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const Axis ax = fit_axis(plot.series, plot.log_x, true);
  const Axis ay = fit_axis(plot.series, plot.log_y, false);
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double v) { return left + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-size=\"14\">" << xml_escape(plot.title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](const Axis& a) {
    std::vector<double> t;
    if (a.log) {
      for (double e = a.lo; e <= a.hi + 1e-9; e += 1.0) t.push_back(e);
    } else {
      for (int i = 0; i <= 4; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 4.0);
    }
    return t;
  };
  for (const double t : ticks(ax)) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    s << "<line x1=\"" << svg_num(x) << "\" y1=\"" << top + ph << "\" x2=\"" << svg_num(x)
      << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << svg_num(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
      << (ax.log ? "1e" + format_number(t) : format_number(t)) << "</text>\n";
  }
  for (const double t : ticks(ay)) {
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << svg_num(y) << "\" x2=\"" << left
      << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left - 8 << "\" y=\"" << svg_num(y + 4) << "\" text-anchor=\"end\">"
      << (ay.log ? "1e" + format_number(t) : format_number(t)) << "</text>\n";
  }
  s << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << H - 20
    << "\" text-anchor=\"middle\">" << xml_escape(plot.x_label) << "</text>\n";
  s << "<text transform=\"translate(22," << svg_num(top + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& ser = plot.series[k];
    const char* color = colors[k % std::size(colors)];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
      if (ax.usable(ser.x[i]) && ay.usable(ser.y[i])) pts.emplace_back(px(ser.x[i]), py(ser.y[i]));
    }
    std::sort(pts.begin(), pts.end());
    if (pts.size() > 1) {
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) s << svg_num(x) << ',' << svg_num(y) << ' ';
      s << "\"/>\n";
    }
    for (const auto& [x, y] : pts) {
      s << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(y) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
    }
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    s << "<line x1=\"" << W - right + 15 << "\" y1=\"" << svg_num(ly) << "\" x2=\""
      << W - right + 35 << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - right + 40 << "\" y=\"" << svg_num(ly + 4) << "\">"
      << xml_escape(ser.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> known = {"command",     "params", "seed", "output_dir",
                                                 "units",       "plot",   "parallelism"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  RunConfig cfg;
  try {
    if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("plot")) cfg.plot = j.at("plot").get<bool>();
    if (j.contains("parallelism")) cfg.parallelism = j.at("parallelism").get<std::size_t>();
    if (j.contains("units")) cfg.units = parse_units(j.at("units").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object()) throw ValidationError("config: params must be an object");
    for (const auto& [key, v] : p.items()) {
      if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
          if (!joined.empty()) joined += ',';
          joined += json_scalar(e);
        }
        cfg.params[key] = joined;
      } else {
        cfg.params[key] = json_scalar(v);
      }
    }
  }
  return cfg;
}

UnitSystem parse_units(const std::string& name) {
  if (name == "natural") return UnitSystem::natural;
  if (name == "si" || name == "SI") return UnitSystem::si;
  throw ValidationError("units must be natural or si");
}

} // namespace gatebound::cli
