#include "plc/svg.hpp"

#include <array>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "plc/errors.hpp"
#include "plc/triple.hpp"

namespace plc {

Viewport parse_viewport(std::string_view text) {
  const std::string s(text);
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("viewport must be xmin:xmax,ymin:ymax");
  }
  auto parse_range = [](const std::string& part) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("viewport range must be lo:hi");
    }
    return std::pair<Rational, Rational>{parse_rational(part.substr(0, colon)),
                                         parse_rational(part.substr(colon + 1))};
  };
  const auto [xmin, xmax] = parse_range(s.substr(0, comma));
  const auto [ymin, ymax] = parse_range(s.substr(comma + 1));
  return Viewport{xmin, xmax, ymin, ymax};
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

using RatPair = std::pair<Rational, Rational>;

bool inside(const Viewport& vp, const RatPair& p) {
  return cmp(p.first, vp.xmin) >= 0 && cmp(p.first, vp.xmax) <= 0 &&
         cmp(p.second, vp.ymin) >= 0 && cmp(p.second, vp.ymax) <= 0;
}

RatPair affine_of(const Point& p) {
  Rational x(p.a, p.c), y(p.b, p.c);
  x.canonicalize();
  y.canonicalize();
  return {x, y};
}

}  // namespace

std::string render_svg(const Snapshot& snap, const Viewport& vp) {
  if (cmp(vp.xmax, vp.xmin) <= 0 || cmp(vp.ymax, vp.ymin) <= 0) {
    throw EmptyViewport{};
  }

  const Rational width_r = vp.xmax - vp.xmin;
  const Rational height_r = vp.ymax - vp.ymin;
  const double scale = 800.0 / width_r.get_d();
  const double plot_h = height_r.get_d() * scale;
  auto px = [&](const Rational& x) { return Rational(x - vp.xmin).get_d() * scale; };
  auto py = [&](const Rational& y) { return Rational(vp.ymax - y).get_d() * scale; };

  // border lines of the viewport, as exact line triples
  const std::array<Line, 4> borders{
      normalized_line(vp.xmin.get_den(), 0, -vp.xmin.get_num()),
      normalized_line(vp.xmax.get_den(), 0, -vp.xmax.get_num()),
      normalized_line(0, vp.ymin.get_den(), -vp.ymin.get_num()),
      normalized_line(0, vp.ymax.get_den(), -vp.ymax.get_num())};
  const std::array<std::array<RatPair, 2>, 4> border_ends{{
      {RatPair{vp.xmin, vp.ymin}, RatPair{vp.xmin, vp.ymax}},
      {RatPair{vp.xmax, vp.ymin}, RatPair{vp.xmax, vp.ymax}},
      {RatPair{vp.xmin, vp.ymin}, RatPair{vp.xmax, vp.ymin}},
      {RatPair{vp.xmin, vp.ymax}, RatPair{vp.xmax, vp.ymax}},
  }};

  std::vector<std::array<RatPair, 2>> segments;
  std::vector<std::string> legend;

  for (const auto& l : snap.lines) {
    if (sgn(l.a) == 0 && sgn(l.b) == 0) {
      legend.push_back("line at infinity (0 : 0 : 1)");
      continue;
    }
    std::set<RatPair> hits;
    bool is_border = false;
    for (std::size_t bi = 0; bi < borders.size(); ++bi) {
      if (l == borders[bi]) {
        hits.insert(border_ends[bi][0]);
        hits.insert(border_ends[bi][1]);
        is_border = true;
        break;
      }
    }
    if (!is_border) {
      for (const auto& border : borders) {
        if (parallel(l, border)) continue;
        Point p = meet(l, border);
        if (p.at_infinity()) continue;
        RatPair xy = affine_of(p);
        if (inside(vp, xy)) hits.insert(std::move(xy));
      }
    }
    if (hits.size() >= 2) {
      segments.push_back({*hits.begin(), *hits.rbegin()});
    }
  }

  std::vector<RatPair> circles;
  for (const auto& p : snap.points) {
    if (p.at_infinity()) {
      std::ostringstream os;
      os << "point at infinity " << p;
      legend.push_back(os.str());
      continue;
    }
    RatPair xy = affine_of(p);
    if (inside(vp, xy)) circles.push_back(std::move(xy));
  }

  const double legend_h = legend.empty() ? 0.0 : 10.0 + 16.0 * legend.size();
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 "
      << fmt(plot_h + legend_h) << "\" width=\"800\" height=\""
      << fmt(plot_h + legend_h) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"" << fmt(plot_h)
      << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  for (const auto& seg : segments) {
    svg << "<line x1=\"" << fmt(px(seg[0].first)) << "\" y1=\""
        << fmt(py(seg[0].second)) << "\" x2=\"" << fmt(px(seg[1].first))
        << "\" y2=\"" << fmt(py(seg[1].second))
        << "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
  }
  for (const auto& c : circles) {
    svg << "<circle cx=\"" << fmt(px(c.first)) << "\" cy=\"" << fmt(py(c.second))
        << "\" r=\"4\" fill=\"#1a4f8f\"/>\n";
  }
  for (std::size_t i = 0; i < legend.size(); ++i) {
    svg << "<text x=\"8\" y=\"" << fmt(plot_h + 16.0 * (i + 1))
        << "\" font-family=\"monospace\" font-size=\"12\">" << legend[i]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace plc
