#include "floodgate/plot.hpp"

#include "floodgate/errors.hpp"
#include "floodgate/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace floodgate {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string
escape(const std::string& text)
{
  std::string out;
  for (char c : text) {
    switch (c) {
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '&':
      out += "&amp;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::pair<double, double>
range_of(const std::vector<double>& v)
{
  if (v.empty()) {
    return {0.0, 1.0};
  }
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double a = std::min(*lo, 0.0);
  double b = *hi;
  if (b <= a) {
    b = a + 1.0;
  }
  return {a, b};
}

} // namespace

std::string
render_svg_chart(const Series& data,
                 const std::string& title,
                 const std::string& x_label,
                 const std::string& y_label,
                 ChartStyle style)
{
  if (data.x.size() != data.y.size()) {
    throw InvalidParameter("series x and y lengths differ");
  }
  auto [x0, x1] = range_of(data.x);
  auto [y0, y1] = range_of(data.y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << format_double(x0)
     << "</text>\n";
  os << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
     << format_double(x1) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">" << format_double(y0)
     << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">" << format_double(y1)
     << "</text>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(y_label) << "</text>\n";

  if (style == ChartStyle::Scatter) {
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      os << "<circle cx=\"" << px(data.x[i]) << "\" cy=\"" << py(data.y[i]) << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
    }
  }
  else if (!data.x.empty()) {
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < data.x.size(); ++i) {
      if (style == ChartStyle::Step && i > 0) {
        os << px(data.x[i]) << ',' << py(data.y[i - 1]) << ' ';
      }
      os << px(data.x[i]) << ',' << py(data.y[i]) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path>
write_plots(const std::filesystem::path& dir,
            const std::vector<MetricsWindow>& windows,
            const std::vector<AlarmSignal>& signals)
{
  Series drops, util, arrivals_vs_util, drops_vs_util, signal;
  for (const auto& w : windows) {
    drops.x.push_back(w.window_start);
    drops.y.push_back(static_cast<double>(w.p_drops));
    util.x.push_back(w.window_start);
    util.y.push_back(w.bandwidth_utilization);
    arrivals_vs_util.x.push_back(w.bandwidth_utilization);
    arrivals_vs_util.y.push_back(static_cast<double>(w.p_arrivals));
    drops_vs_util.x.push_back(w.bandwidth_utilization);
    drops_vs_util.y.push_back(static_cast<double>(w.p_drops));
  }
  for (const auto& s : signals) {
    signal.x.push_back(s.window_start);
    signal.y.push_back(s.value);
  }

  struct Chart
  {
    const char* file;
    const Series* data;
    const char* title;
    const char* x;
    const char* y;
    ChartStyle style;
  };
  const Chart charts[] = {
    {"drops.svg", &drops, "Packet drops per window", "time (s)", "drops", ChartStyle::Line},
    {"utilization.svg", &util, "Bandwidth utilization", "time (s)", "utilization", ChartStyle::Line},
    {"arrivals_vs_utilization.svg", &arrivals_vs_util, "Arrivals against utilization", "utilization", "arrivals",
     ChartStyle::Scatter},
    {"drops_vs_utilization.svg", &drops_vs_util, "Drops against utilization", "utilization", "drops",
     ChartStyle::Scatter},
    {"signal.svg", &signal, "Alarm signal", "time (s)", "signal", ChartStyle::Step},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& c : charts) {
    auto path = dir / c.file;
    std::ofstream out(path);
    if (!out) {
      throw Error(path.string() + ": cannot write plot");
    }
    out << render_svg_chart(*c.data, c.title, c.x, c.y, c.style);
    written.push_back(path);
  }
  return written;
}

} // namespace floodgate
