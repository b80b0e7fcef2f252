#include <algorithm>
#include <set>
#include <sstream>

#include "plc/configuration.hpp"
#include "plc/start.hpp"
#include "plc/triple.hpp"

namespace plc {

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0) {
    throw std::invalid_argument("bad rational: " + std::string(text));
  }
  if (sgn(q.get_den()) == 0) {
    throw std::invalid_argument("zero denominator: " + std::string(text));
  }
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << q.get_num() << "/" << q.get_den();
  return os.str();
}

Point affine_point(const Rational& x, const Rational& y) {
  // (xn/xd, yn/yd) ~ (xn*yd : yn*xd : xd*yd)
  return normalized_point(x.get_num() * y.get_den(), y.get_num() * x.get_den(),
                          x.get_den() * y.get_den());
}

StartConfig canonical_start() {
  return StartConfig{{RatPoint{Rational(0), Rational(0)},
                      RatPoint{Rational(1), Rational(0)},
                      RatPoint{Rational(0), Rational(1)},
                      RatPoint{Rational(5), Rational(7)}}};
}

std::string Violation::describe() const {
  std::ostringstream os;
  if (kind == Kind::collinear_triple) {
    os << "points " << indices[0] << ", " << indices[1] << ", " << indices[2]
       << " are collinear";
  } else {
    os << "join(" << indices[0] << "," << indices[1] << ") is parallel to join("
       << indices[2] << "," << indices[3] << ")";
  }
  return os.str();
}

std::vector<Violation> validate_start(const StartConfig& cfg) {
  std::vector<Violation> out;
  std::array<Point, 4> pts;
  for (int i = 0; i < 4; ++i) {
    pts[i] = affine_point(cfg.points[i].x, cfg.points[i].y);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (pts[i] == pts[j]) {
        // report a coincident pair as a collinear triple with any third point
        int k = 0;
        while (k == i || k == j) ++k;
        out.push_back({Violation::Kind::collinear_triple, {i, j, k, -1}});
        return out;
      }
    }
  }

  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        if (incident(pts[k], line_through(pts[i], pts[j]))) {
          out.push_back({Violation::Kind::collinear_triple, {i, j, k, -1}});
        }
      }
    }
  }

  // the six connecting lines, checked pairwise for parallelism; pairs that
  // produce the same line are covered by a collinearity report above
  std::array<std::pair<int, int>, 6> pairs{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  std::array<Line, 6> joins;
  for (int i = 0; i < 6; ++i) {
    joins[i] = line_through(pts[pairs[i].first], pts[pairs[i].second]);
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if (joins[i] == joins[j]) continue;
      if (parallel(joins[i], joins[j])) {
        out.push_back({Violation::Kind::parallel_joins,
                       {pairs[i].first, pairs[i].second, pairs[j].first,
                        pairs[j].second}});
      }
    }
  }
  return out;
}

static std::string violations_message(const std::vector<Violation>& v) {
  std::ostringstream os;
  os << "start configuration rejected:";
  for (const auto& x : v) os << " [" << x.describe() << "]";
  return os.str();
}

InvalidStart::InvalidStart(std::vector<Violation> v)
    : Error(violations_message(v)), violations(std::move(v)) {}

std::string_view to_string(ParallelPolicy p) {
  switch (p) {
    case ParallelPolicy::error: return "error";
    case ParallelPolicy::skip: return "skip";
    case ParallelPolicy::projective: return "projective";
  }
  return "skip";
}

std::optional<ParallelPolicy> parse_policy(std::string_view text) {
  if (text == "error") return ParallelPolicy::error;
  if (text == "skip") return ParallelPolicy::skip;
  if (text == "projective") return ParallelPolicy::projective;
  return std::nullopt;
}

std::uint64_t degree_recurrence_bound(const StageStats& s) {
  const std::uint64_t by_count = s.point_count - 1;
  // every point lies on at least two lines, so 2*delta - 3 >= 1
  const std::uint64_t by_degree = 2 * s.min_point_degree - 3;
  return std::min(by_count, by_degree);
}

}  // namespace plc
