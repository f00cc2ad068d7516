#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/experiment.hpp"

namespace efg {

inline constexpr double kPlotExploitFloor = 1e-12;  // keeps log10 finite at equilibria

namespace detail {

struct Series {
  std::string label;
  std::vector<long> iterations;
  std::vector<double> mean_log10;
  std::vector<double> min_log10;
  std::vector<double> max_log10;
};

inline double log10_floored(double v) {
  return std::log10(std::max(v, kPlotExploitFloor));
}

inline std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// mean/min/max of exploit_last across seeds per iteration, one series per
// (algo, sampling). Rows are ordered by (seed, iteration) first so the
// averaging is invariant to the caller's row order.
inline std::vector<Series> build_series(ResultsFile rows) {
  std::sort(rows.begin(), rows.end(), [](const ExploitRecord& a, const ExploitRecord& b) {
    if (a.algo != b.algo) return a.algo < b.algo;
    if (a.sampling != b.sampling) return a.sampling < b.sampling;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.iteration < b.iteration;
  });
  std::map<std::pair<std::string, std::string>,
           std::map<long, std::vector<double>>> grouped;
  for (const ExploitRecord& r : rows) {
    grouped[{r.algo, r.sampling}][r.iteration].push_back(r.exploit_last);
  }
  std::vector<Series> out;
  for (const auto& [key, by_iter] : grouped) {
    Series s;
    s.label = key.first + " (" + key.second + ")";
    for (const auto& [iter, vals] : by_iter) {
      double sum = 0.0, lo = vals.front(), hi = vals.front();
      for (double v : vals) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      s.iterations.push_back(iter);
      s.mean_log10.push_back(log10_floored(sum / static_cast<double>(vals.size())));
      s.min_log10.push_back(log10_floored(lo));
      s.max_log10.push_back(log10_floored(hi));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline const char* series_color(size_t i) {
  static constexpr const char* kPalette[] = {"#7a4fd3", "#d62728", "#ff7f0e", "#1f77b4",
                                             "#2ca02c", "#8c564b", "#17becf", "#7f7f7f"};
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

inline void write_game_svg(const std::string& game, const std::vector<Series>& series,
                           std::ostream& os) {
  const double width = 720, height = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  long x_min = 0, x_max = 1;
  double y_min = 0.0, y_max = -1.0;
  bool first = true;
  for (const Series& s : series) {
    for (size_t i = 0; i < s.iterations.size(); ++i) {
      if (first) {
        x_min = x_max = s.iterations[i];
        y_min = s.min_log10[i];
        y_max = s.max_log10[i];
        first = false;
      }
      x_min = std::min(x_min, s.iterations[i]);
      x_max = std::max(x_max, s.iterations[i]);
      y_min = std::min(y_min, s.min_log10[i]);
      y_max = std::max(y_max, s.max_log10[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  y_min = std::floor(y_min - 0.05);
  y_max = std::ceil(y_max + 0.05);
  if (y_max <= y_min) y_max = y_min + 1.0;

  auto sx = [&](double it) {
    return ml + pw * (it - static_cast<double>(x_min)) /
                    static_cast<double>(x_max - x_min);
  };
  auto sy = [&](double log_v) { return mt + ph * (y_max - log_v) / (y_max - y_min); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << game << "</text>\n";

  // frame + ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int x_ticks = 5;
  for (int i = 0; i <= x_ticks; ++i) {
    const double it = static_cast<double>(x_min) +
                      (static_cast<double>(x_max - x_min) * i) / x_ticks;
    const double x = sx(it);
    os << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.0f", it);
    os << "<text x=\"" << x << "\" y=\"" << mt + ph + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
       << "</text>\n";
  }
  for (double ty = y_min; ty <= y_max + 1e-9; ty += 1.0) {
    const double y = sy(ty);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
       << "\" stroke=\"#dddddd\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.0f", ty);
    os << "<text x=\"" << ml - 10 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
       << "</text>\n";
  }
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">iteration"
        "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">log10 exploitability</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = series_color(si);
    if (s.iterations.size() > 1) {
      // min/max band across seeds
      std::ostringstream band;
      for (size_t i = 0; i < s.iterations.size(); ++i) {
        band << format_double(sx(static_cast<double>(s.iterations[i]))) << ","
             << format_double(sy(s.max_log10[i])) << " ";
      }
      for (size_t i = s.iterations.size(); i-- > 0;) {
        band << format_double(sx(static_cast<double>(s.iterations[i]))) << ","
             << format_double(sy(s.min_log10[i])) << " ";
      }
      os << "<polygon points=\"" << band.str() << "\" fill=\"" << color
         << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    std::ostringstream line;
    for (size_t i = 0; i < s.iterations.size(); ++i) {
      line << format_double(sx(static_cast<double>(s.iterations[i]))) << ","
           << format_double(sy(s.mean_log10[i])) << " ";
    }
    os << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    // legend entry
    const double ly = mt + 16 + 16 * static_cast<double>(si);
    os << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 130
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw - 125 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace detail

// Renders exploitability curves: x iteration, y log10 of the seed-mean
// exploitability of the last iterate, one series per (algorithm, sampling),
// shaded min/max band across seeds. One SVG per game; with several games in
// the input the game name is inserted before the extension.
inline std::vector<std::string> emit_plot(const std::vector<ResultsFile>& results,
                                          const std::string& path) {
  std::map<std::string, ResultsFile> by_game;
  for (const ResultsFile& rows : results) {
    for (const ExploitRecord& r : rows) by_game[r.game].push_back(r);
  }
  if (by_game.empty()) throw std::invalid_argument("emit_plot: no rows to plot");

  std::vector<std::string> written;
  for (const auto& [game, rows] : by_game) {
    std::string out_path = path;
    if (by_game.size() > 1) {
      const size_t dot = path.rfind('.');
      out_path = dot == std::string::npos ? path + "_" + game
                                          : path.substr(0, dot) + "_" + game + path.substr(dot);
    }
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open plot file: " + out_path);
    detail::write_game_svg(game, detail::build_series(rows), os);
    written.push_back(out_path);
  }
  return written;
}

}  // namespace efg
