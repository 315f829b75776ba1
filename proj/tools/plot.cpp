#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pipescope/error.hpp"
#include "pipescope/graph.hpp"
#include "pipescope/irm_io.hpp"

namespace pipescope::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 260.0;
constexpr double kTop = 36.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kPanelPadTop = 24.0;
constexpr double kPanelPadBottom = 44.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// Round tick values (1, 2 or 5 times a power of ten) inside [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {2.0, 5.0, 10.0}) {
    if (step >= raw) break;
    step = m * mag;
  }
  std::vector<double> out;
  for (double k = std::ceil(lo / step); k * step <= hi + 1e-9 * step; k += 1.0) {
    out.push_back(k * step);
  }
  return out;
}

struct Line {
  std::vector<double> x, y;
};

Line stairs(const ProfileSeries& s) {
  Line l;
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    double width = 0.0;
    if (k + 1 < s.x.size()) {
      width = s.x[k + 1] - s.x[k];
    } else if (k > 0) {
      width = s.x[k] - s.x[k - 1];
    }
    l.x.push_back(s.x[k]);
    l.y.push_back(s.value[k]);
    l.x.push_back(s.x[k] + width);
    l.y.push_back(s.value[k]);
  }
  return l;
}

Line true_area(const Pipe& pipe) {
  Line l;
  if (pipe.area.is_piecewise_constant()) {
    std::vector<double> cuts{0.0};
    for (double b : pipe.area.breakpoints(pipe.length)) cuts.push_back(b);
    cuts.push_back(pipe.length);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double v = pipe.area(0.5 * (cuts[k] + cuts[k + 1]));
      l.x.push_back(cuts[k]);
      l.y.push_back(v);
      l.x.push_back(cuts[k + 1]);
      l.y.push_back(v);
    }
  } else {
    for (int k = 0; k <= 200; ++k) {
      const double x = pipe.length * k / 200.0;
      l.x.push_back(x);
      l.y.push_back(pipe.area(x));
    }
  }
  return l;
}

Line true_volume(const Network& net, std::size_t p, const ProfileSeries& s) {
  Line l;
  const double len = net.pipe(p).length;
  for (double x : s.x) {
    if (!(x > 0.0) || !(x < len)) continue;
    l.x.push_back(x);
    l.y.push_back(admissible_set(net, PointOnPipe{p, x}).volume(net));
  }
  return l;
}

std::optional<std::size_t> find_pipe(const Network& net, const std::string& id) {
  for (std::size_t p = 0; p < net.pipes().size(); ++p) {
    if (net.pipe(p).id == id) return p;
  }
  return std::nullopt;
}

}  // namespace

ProfileTable read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::ParseError, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ProfileTable table;
  if (line == "pipe,x_m,A_m2") {
    table.kind = ProfileKind::Area;
  } else if (line == "pipe,x_m,V_m3") {
    table.kind = ProfileKind::Volume;
  } else {
    throw Error(Errc::ParseError, path + ": unknown header '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos || c1 == 0) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    const std::string pipe = line.substr(0, c1);
    const double x = parse_number(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    const double v = parse_number(std::string_view(line).substr(c2 + 1));
    auto it = std::find_if(table.series.begin(), table.series.end(),
                           [&](const ProfileSeries& s) { return s.pipe == pipe; });
    if (it == table.series.end()) {
      table.series.push_back({pipe, {}, {}});
      it = table.series.end() - 1;
    }
    it->x.push_back(x);
    it->value.push_back(v);
  }
  if (table.series.empty()) throw Error(Errc::ParseError, path + ": no data rows");
  return table;
}

std::string render_svg(const ProfileTable& table, const Network* truth, const std::string& title) {
  const bool area = table.kind == ProfileKind::Area;
  const double height = kTop + kPanelHeight * static_cast<double>(table.series.size()) + 12.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\""
     << fixed(height) << "\" viewBox=\"0 0 " << fixed(kWidth) << ' ' << fixed(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth) << "\" height=\"" << fixed(height)
     << "\" fill=\"white\"/>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";

  for (std::size_t panel = 0; panel < table.series.size(); ++panel) {
    const ProfileSeries& s = table.series[panel];
    const Line rec = area ? stairs(s) : Line{s.x, s.value};
    Line ref;
    if (truth) {
      if (auto p = find_pipe(*truth, s.pipe)) {
        ref = area ? true_area(truth->pipe(*p)) : true_volume(*truth, *p, s);
      }
    }
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const Line* l : {&rec, static_cast<const Line*>(&ref)}) {
      for (double v : l->x) x0 = std::min(x0, v), x1 = std::max(x1, v);
      for (double v : l->y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (area) y0 = std::min(y0, 0.0);
    if (!(x1 > x0)) x0 -= 1.0, x1 += 1.0;
    if (!(y1 > y0)) y0 -= 1.0, y1 += 1.0;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double top = kTop + kPanelHeight * static_cast<double>(panel) + kPanelPadTop;
    const double bottom = kTop + kPanelHeight * static_cast<double>(panel + 1) - kPanelPadBottom;
    const double left = kLeft;
    const double right = kWidth - kRight;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
    auto py = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };

    os << "<text x=\"" << fixed(left) << "\" y=\"" << fixed(top - 6) << "\">pipe " << escape(s.pipe)
       << "</text>\n";
    os << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\""
       << fixed(right - left) << "\" height=\"" << fixed(bottom - top)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double xv : ticks(x0, x1)) {
      os << "<line x1=\"" << fixed(px(xv)) << "\" y1=\"" << fixed(bottom) << "\" x2=\""
         << fixed(px(xv)) << "\" y2=\"" << fixed(bottom + 4) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(bottom + 17)
         << "\" text-anchor=\"middle\">" << label(xv) << "</text>\n";
    }
    for (double yv : ticks(y0, y1)) {
      os << "<line x1=\"" << fixed(left - 4) << "\" y1=\"" << fixed(py(yv)) << "\" x2=\""
         << fixed(left) << "\" y2=\"" << fixed(py(yv)) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << fixed(left - 7) << "\" y=\"" << fixed(py(yv) + 4)
         << "\" text-anchor=\"end\">" << label(yv) << "</text>\n";
    }
    os << "<text x=\"" << fixed(0.5 * (left + right)) << "\" y=\"" << fixed(bottom + 34)
       << "\" text-anchor=\"middle\">x (m)</text>\n";
    os << "<text x=\"16\" y=\"" << fixed(0.5 * (top + bottom))
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << fixed(0.5 * (top + bottom))
       << ")\">" << (area ? "A (m^2)" : "V (m^3)") << "</text>\n";

    auto polyline = [&](const Line& l, const char* style) {
      if (l.x.empty()) return;
      os << "<polyline fill=\"none\" " << style << " points=\"";
      for (std::size_t k = 0; k < l.x.size(); ++k) {
        if (k) os << ' ';
        os << fixed(px(l.x[k])) << ',' << fixed(py(l.y[k]));
      }
      os << "\"/>\n";
    };
    polyline(ref, "stroke=\"#888888\" stroke-width=\"2\"");
    polyline(rec, "stroke=\"#1f4e9c\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");

    const double ly = top - 10;
    double lx = right - 130;
    os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24)
       << "\" y2=\"" << fixed(ly) << "\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" "
       << "stroke-dasharray=\"6 4\"/>\n";
    os << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4)
       << "\">reconstruction</text>\n";
    if (!ref.x.empty()) {
      lx -= 90;
      os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24)
         << "\" y2=\"" << fixed(ly) << "\" stroke=\"#888888\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4) << "\">truth</text>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace pipescope::cli
