#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "lamination.hpp"
#include "quotient.hpp"

namespace laminar::svg {

// Presentation only: doubles never flow back into exact data. Points sit on
// the unit circle at angle 2π·chart(p), so the projective model is drawn
// through the same order chart used everywhere else.

struct Layer {
  const FiniteLamination* lamination;
  std::string color;
  bool shade_gaps = true;
};

struct Options {
  double size = 480;  // pixel width of one disk panel
  double stroke = 1.0;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

struct Frame {
  double cx, cy, r;
  std::pair<double, double> at(const CirclePoint& p) const {
    double t = 2 * M_PI * chart_double(p);
    return {cx + r * std::cos(t), cy - r * std::sin(t)};
  }
};

inline void circle(std::ostream& os, const Frame& f) {
  os << "<circle cx=\"" << num(f.cx) << "\" cy=\"" << num(f.cy) << "\" r=\"" << num(f.r)
     << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n";
}

inline void layer(std::ostream& os, const Frame& f, const Layer& L, const Options& o) {
  if (L.shade_gaps) {
    for (const auto& g : gaps(*L.lamination)) {
      if (!g.ideal_polygon()) continue;
      os << "<polygon fill=\"" << L.color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        auto [x, y] = f.at(g.vertices[i]);
        os << (i ? " " : "") << num(x) << ',' << num(y);
      }
      os << "\"/>\n";
    }
  }
  os << "<g stroke=\"" << L.color << "\" stroke-width=\"" << num(o.stroke) << "\">\n";
  for (const auto& l : L.lamination->leaves()) {
    auto [x1, y1] = f.at(l.first());
    auto [x2, y2] = f.at(l.second());
    os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2) << "\"/>\n";
  }
  os << "</g>\n";
}

inline void header(std::ostream& os, double w, double h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

}  // namespace detail

// all layers overlaid on one disk
inline std::string chord_diagram(const std::vector<Layer>& layers, const Options& o = {}) {
  std::ostringstream os;
  detail::header(os, o.size, o.size);
  detail::Frame f{o.size / 2, o.size / 2, o.size / 2 - 10};
  detail::circle(os, f);
  for (const auto& L : layers) detail::layer(os, f, L, o);
  os << "</svg>\n";
  return os.str();
}

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p{"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                          "#46f0f0", "#f032e6", "#bcf60c", "#008080", "#9a6324"};
  return p;
}

// both laminations on separate disks, nontrivial classes color-keyed
inline std::string quotient_diagram(const QuotientComplex& Q, const Options& o = {}) {
  std::ostringstream os;
  detail::header(os, 2 * o.size, o.size);
  const FiniteLamination* lams[2] = {&Q.first(), &Q.second()};
  const char* colors[2] = {"#1f4e9c", "#b22222"};
  for (int k = 0; k < 2; ++k) {
    detail::Frame f{o.size / 2 + k * o.size, o.size / 2, o.size / 2 - 10};
    detail::circle(os, f);
    detail::layer(os, f, Layer{lams[k], colors[k], false}, o);
    std::size_t colored = 0;
    for (std::size_t c = 0; c < Q.class_count(); ++c) {
      const auto& m = Q.members(c);
      std::string col = m.size() > 1 ? palette()[colored++ % palette().size()] : "#888";
      for (const auto& p : m) {
        auto [x, y] = f.at(p);
        os << "<circle cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y) << "\" r=\"2.5\" fill=\"" << col
           << "\"/>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace laminar::svg
