#include "qnd_cli/plot.hpp"

#include <algorithm>
#include <cstdio>

#include "qnd/errors.hpp"

namespace qnd::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
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

}  // namespace

std::string render_svg(const CsvTable& table) {
  if (table.columns.size() < 2) throw InvalidInput("plot: need at least two columns");
  if (table.rows.empty()) throw InvalidInput("plot: no data rows");

  double x0 = table.rows.front()[0], x1 = x0, y0 = table.rows.front()[1], y1 = y0;
  for (const auto& r : table.rows) {
    x0 = std::min(x0, r[0]);
    x1 = std::max(x1, r[0]);
    y0 = std::min(y0, r[1]);
    y1 = std::max(y1, r[1]);
  }
  if (y0 > 0.0) y0 = 0.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  if (!table.comment.empty())
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(table.comment) +
         "</text>\n";
  s += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" + fmt("%.2f", pw) + "\" height=\"" +
       fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= kTicks; ++i) {
    const double f = static_cast<double>(i) / kTicks;
    const double xv = x0 + f * (x1 - x0);
    const double yv = y0 + f * (y1 - y0);
    const std::string tx = fmt("%.2f", px(xv));
    const std::string ty = fmt("%.2f", py(yv));
    s += "<line x1=\"" + tx + "\" y1=\"" + fmt("%.2f", kTop + ph) + "\" x2=\"" + tx + "\" y2=\"" + fmt("%.2f", kTop + ph + 5) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + tx + "\" y=\"" + fmt("%.2f", kTop + ph + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + fmt("%.6g", xv) + "</text>\n";
    s += "<line x1=\"" + fmt("%.2f", kLeft - 5) + "\" y1=\"" + ty + "\" x2=\"" + fmt("%.2f", kLeft) + "\" y2=\"" + ty +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt("%.2f", kLeft - 8) + "\" y=\"" + ty +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + fmt("%.4g", yv) +
         "</text>\n";
  }
  s += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(table.columns[0]) + "</text>\n";
  s += "<text x=\"15\" y=\"" + fmt("%.2f", kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 15 " +
       fmt("%.2f", kTop + ph / 2) + ")\">" + escape(table.columns[1]) + "</text>\n";

  s += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i) s += ' ';
    s += fmt("%.2f", px(table.rows[i][0])) + "," + fmt("%.2f", py(table.rows[i][1]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

}  // namespace qnd::cli
