#include "ideoscale/analysis/plots.hpp"

#include "ideoscale/io.hpp"

#include <algorithm>
#include <cstdio>

namespace ideoscale::analysis {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 70.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo;
  double hi;

  void pad() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double p = 0.05 * (hi - lo);
    lo -= p;
    hi += p;
  }
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" +
         num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
}

std::string axis_frame(const std::string& x_label, const std::string& y_label) {
  std::string out;
  out += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin / 2) + "\" width=\"" +
         num(kWidth - 1.5 * kMargin) + "\" height=\"" + num(kHeight - 1.5 * kMargin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + num(kHeight / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(kHeight / 2) + ")\">" + escape(y_label) + "</text>\n";
  return out;
}

}  // namespace

std::string scatter_svg(const std::vector<LabeledPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
  std::string out = open_svg(title) + axis_frame(x_label, y_label);
  if (points.empty()) return out + "</svg>\n";
  Range xr{points[0].x, points[0].x};
  Range yr{points[0].y, points[0].y};
  for (const auto& p : points) {
    xr.lo = std::min(xr.lo, p.x);
    xr.hi = std::max(xr.hi, p.x);
    yr.lo = std::min(yr.lo, p.y);
    yr.hi = std::max(yr.hi, p.y);
  }
  xr.pad();
  yr.pad();
  const double left = kMargin;
  const double right = kWidth - kMargin / 2;
  const double top = kMargin / 2;
  const double bottom = kHeight - kMargin;

  for (double v : {xr.lo, (xr.lo + xr.hi) / 2, xr.hi}) {
    out += "<text x=\"" + num(xr.map(v, left, right)) + "\" y=\"" + num(bottom + 14) +
           "\" text-anchor=\"middle\">" + model::format_real(v).substr(0, 6) + "</text>\n";
  }
  for (double v : {yr.lo, (yr.lo + yr.hi) / 2, yr.hi}) {
    out += "<text x=\"" + num(left - 4) + "\" y=\"" + num(yr.map(v, bottom, top)) +
           "\" text-anchor=\"end\">" + model::format_real(v).substr(0, 6) + "</text>\n";
  }

  if (points.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& p : points) {
      mx += p.x;
      my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0, sxx = 0;
    for (const auto& p : points) {
      sxy += (p.x - mx) * (p.y - my);
      sxx += (p.x - mx) * (p.x - mx);
    }
    if (sxx > 0) {
      const double slope = sxy / sxx;
      const double a = xr.lo + 0.05 * (xr.hi - xr.lo);
      const double b = xr.hi - 0.05 * (xr.hi - xr.lo);
      out += "<line x1=\"" + num(xr.map(a, left, right)) + "\" y1=\"" +
             num(yr.map(my + slope * (a - mx), bottom, top)) + "\" x2=\"" +
             num(xr.map(b, left, right)) + "\" y2=\"" + num(yr.map(my + slope * (b - mx), bottom, top)) +
             "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  for (const auto& p : points) {
    const double cx = xr.map(p.x, left, right);
    const double cy = yr.map(p.y, bottom, top);
    out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"3.5\" fill=\"#3366aa\"/>\n";
    out += "<text x=\"" + num(cx + 5) + "\" y=\"" + num(cy - 5) + "\">" + escape(p.label) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::string coefficient_svg(const RegressionReport& report, const std::string& title) {
  std::vector<const Coefficient*> shown;
  for (const auto& c : report.coefficients) {
    if (c.name != kInterceptName && c.significant()) shown.push_back(&c);
  }
  std::string out = open_svg(title);
  if (shown.empty()) {
    return out + "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight / 2) +
           "\" text-anchor=\"middle\">no coefficient significant at p &lt; .05</text>\n</svg>\n";
  }
  Range xr{0.0, 0.0};
  for (const auto* c : shown) {
    xr.lo = std::min(xr.lo, c->ci_low);
    xr.hi = std::max(xr.hi, c->ci_high);
  }
  xr.pad();
  const double left = 200.0;
  const double right = kWidth - 30.0;
  const double top = 50.0;
  const double step = (kHeight - top - 60.0) / static_cast<double>(shown.size());
  const double zero = xr.map(0.0, left, right);
  out += "<line x1=\"" + num(zero) + "\" y1=\"" + num(top - 10) + "\" x2=\"" + num(zero) + "\" y2=\"" +
         num(kHeight - 50) + "\" stroke=\"#999\"/>\n";
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const auto* c = shown[i];
    const double y = top + step * (static_cast<double>(i) + 0.5);
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           escape(c->name) + "</text>\n";
    out += "<line x1=\"" + num(xr.map(c->ci_low, left, right)) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(xr.map(c->ci_high, left, right)) + "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
    out += "<circle cx=\"" + num(xr.map(c->estimate, left, right)) + "\" cy=\"" + num(y) +
           "\" r=\"4\" fill=\"#aa3333\"/>\n";
  }
  out += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kHeight - 20) +
         "\" text-anchor=\"middle\">estimate (95% interval)</text>\n";
  return out + "</svg>\n";
}

}  // namespace ideoscale::analysis
