#include "plc/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "plc/errors.hpp"

namespace plc {

bool operator==(const Snapshot& a, const Snapshot& b) {
  auto same_rat = [](const RatPoint& x, const RatPoint& y) {
    return cmp(x.x, y.x) == 0 && cmp(x.y, y.y) == 0;
  };
  for (int i = 0; i < 4; ++i) {
    if (!same_rat(a.start.points[i], b.start.points[i])) return false;
  }
  return a.version == b.version && a.stage == b.stage && a.policy == b.policy &&
         a.points == b.points && a.lines == b.lines;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

[[noreturn]] void bad(const std::string& why) {
  throw SnapshotParseError("snapshot: " + why);
}

}  // namespace

std::string render_snapshot(const Snapshot& s) {
  std::ostringstream body;
  body << "PLC " << s.version << "\n";
  body << "K " << s.stage << "\n";
  body << "POLICY " << to_string(s.policy) << "\n";
  body << "START";
  for (const auto& rp : s.start.points) {
    body << " " << rational_string(rp.x) << " " << rational_string(rp.y);
  }
  body << "\n";
  for (const auto& p : s.points) {
    body << "P " << p.a << " " << p.b << " " << p.c << "\n";
  }
  for (const auto& l : s.lines) {
    body << "L " << l.a << " " << l.b << " " << l.c << "\n";
  }
  std::string text = body.str();
  text += "SUM " + hex16(fnv1a64(text)) + "\n";
  return text;
}

Snapshot parse_snapshot(std::string_view text) {
  // split into lines; the final SUM line covers everything before it
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) bad("missing final newline");
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (pos != text.size()) bad("trailing bytes after final newline");
  if (lines.size() < 5) bad("too short");

  auto fields = [](std::string_view line) {
    std::vector<std::string> out;
    std::istringstream is{std::string(line)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  };

  // the version gate comes first: a future format may checksum differently
  const auto header = fields(lines[0]);
  if (header.size() != 2 || header[0] != "PLC") bad("bad header");
  if (header[1] != "1") {
    throw VersionMismatch("snapshot version " + header[1] + " not supported");
  }

  const std::string_view sum_line = lines.back();
  if (sum_line.substr(0, 4) != "SUM ") bad("missing SUM line");
  const std::size_t body_len = text.rfind("SUM ");
  const std::uint64_t actual = fnv1a64(text.substr(0, body_len));
  if (hex16(actual) != sum_line.substr(4)) {
    throw ChecksumMismatch("snapshot checksum does not match body");
  }

  Snapshot s;
  const auto kline = fields(lines[1]);
  if (kline.size() != 2 || kline[0] != "K") bad("bad K line");
  try {
    s.stage = std::stoi(kline[1]);
  } catch (const std::exception&) {
    bad("unreadable stage number " + kline[1]);
  }
  if (s.stage < 1) bad("stage must be >= 1");

  const auto pline = fields(lines[2]);
  if (pline.size() != 2 || pline[0] != "POLICY") bad("bad POLICY line");
  const auto policy = parse_policy(pline[1]);
  if (!policy) bad("unknown policy " + pline[1]);
  s.policy = *policy;

  const auto sline = fields(lines[3]);
  if (sline.size() != 9 || sline[0] != "START") bad("bad START line");
  try {
    for (int i = 0; i < 4; ++i) {
      s.start.points[static_cast<std::size_t>(i)] = {
          parse_rational(sline[static_cast<std::size_t>(1 + 2 * i)]),
          parse_rational(sline[static_cast<std::size_t>(2 + 2 * i)])};
    }
  } catch (const std::exception&) {
    bad("unreadable START coordinates");
  }

  bool in_lines = false;
  for (std::size_t i = 4; i + 1 < lines.size(); ++i) {
    const auto rec = fields(lines[i]);
    if (rec.size() != 4) bad("bad record");
    BigInt a, b, c;
    try {
      a = BigInt(rec[1]);
      b = BigInt(rec[2]);
      c = BigInt(rec[3]);
    } catch (const std::exception&) {
      bad("unreadable coordinate in record");
    }
    if (rec[0] == "P") {
      if (in_lines) bad("point record after line records");
      Point p = normalized_point(a, b, c);
      if (p.a != a || p.b != b || p.c != c) bad("point record not canonical");
      s.points.push_back(std::move(p));
    } else if (rec[0] == "L") {
      in_lines = true;
      Line l = normalized_line(a, b, c);
      if (l.a != a || l.b != b || l.c != c) bad("line record not canonical");
      s.lines.push_back(std::move(l));
    } else {
      bad("unknown record " + rec[0]);
    }
  }
  if (!std::is_sorted(s.points.begin(), s.points.end()) ||
      std::adjacent_find(s.points.begin(), s.points.end()) != s.points.end()) {
    bad("points not in strict canonical order");
  }
  if (!std::is_sorted(s.lines.begin(), s.lines.end()) ||
      std::adjacent_find(s.lines.begin(), s.lines.end()) != s.lines.end()) {
    bad("lines not in strict canonical order");
  }
  if (s.points.empty() || s.lines.empty()) bad("empty configuration");
  return s;
}

void save_snapshot(const Snapshot& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::string text = render_snapshot(s);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

Snapshot make_snapshot(const Configuration& c, const StartConfig& start,
                       ParallelPolicy policy) {
  Snapshot s;
  s.stage = c.stage;
  s.policy = policy;
  s.start = start;
  s.points = c.points;
  s.lines = c.lines;
  std::sort(s.points.begin(), s.points.end());
  std::sort(s.lines.begin(), s.lines.end());
  return s;
}

Configuration to_configuration(const Snapshot& s) {
  Configuration c;
  c.stage = s.stage;
  c.points = s.points;
  c.lines = s.lines;
  c.point_index.reserve(c.points.size() * 2);
  for (std::uint32_t i = 0; i < c.points.size(); ++i) {
    c.point_index.emplace(c.points[i], i);
  }
  c.line_index.reserve(c.lines.size() * 2);
  for (std::uint32_t i = 0; i < c.lines.size(); ++i) {
    c.line_index.emplace(c.lines[i], i);
  }
  c.lines_of_point.assign(c.points.size(), {});
  c.points_of_line.assign(c.lines.size(), {});
  for (std::uint32_t li = 0; li < c.lines.size(); ++li) {
    for (std::uint32_t pi = 0; pi < c.points.size(); ++pi) {
      if (incident(c.points[pi], c.lines[li])) {
        c.points_of_line[li].push_back(pi);
        c.lines_of_point[pi].push_back(li);
      }
    }
  }
  for (const auto& pencil : c.lines_of_point) {
    if (pencil.size() < 2) {
      throw SnapshotParseError("rebuilt incidence: point on fewer than two lines");
    }
  }
  for (const auto& row : c.points_of_line) {
    if (row.size() < 2) {
      throw SnapshotParseError("rebuilt incidence: line with fewer than two points");
    }
  }
  return c;
}

}  // namespace plc
