#include "lrkit/formats.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "lrkit/error.hpp"

namespace lrkit {

namespace {

constexpr int kMaxDegree = 64;
constexpr std::size_t kMaxGeometric = 64;

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

std::string format_double(double v, FloatEncoding e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, e == FloatEncoding::Hex ? "%a" : "%.17g", v);
  return buf;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view tok, std::size_t line) {
  if (tok.size() > 64) parse_fail(line, "number too long");
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) parse_fail(line, "bad number '" + s + "'");
  return v;
}

long long parse_int(std::string_view tok, std::size_t line, long long lo, long long hi) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v < lo || v > hi)
    parse_fail(line, "bad integer '" + std::string(tok) + "'");
  return v;
}

Rational parse_rational(std::string_view tok, std::size_t line) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (tok.size() > 4096) parse_fail(line, "rational too long");
  std::string_view body = tok;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den) || den.find_first_not_of('0') == std::string_view::npos)
    parse_fail(line, "bad rational '" + std::string(tok) + "'");
  Rational r(std::string(tok), 10);
  r.canonicalize();
  return r;
}

}  // namespace

LocalBSplineRecord LocalBSplineRecord::from_local(const LocalKnots& t) {
  LocalBSplineRecord r;
  for (double v : t.values()) {
    if (!r.knots.empty() && r.knots.back() == v) ++r.multiplicities.back();
    else {
      r.knots.push_back(v);
      r.multiplicities.push_back(1);
    }
  }
  return r;
}

LocalKnots LocalBSplineRecord::to_local(int degree) const {
  require(degree >= 0 && degree <= kMaxDegree, ErrorCode::Validation, "knot record: unsupported degree");
  require(!knots.empty() && knots.size() == multiplicities.size(), ErrorCode::Validation,
          "knot record: values and multiplicities differ in length");
  long long sum = 0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require(std::isfinite(knots[i]), ErrorCode::Validation, "knot record: non-finite knot");
    require(i == 0 || knots[i - 1] < knots[i], ErrorCode::Validation, "knot record: values not strictly increasing");
    require(multiplicities[i] >= 1, ErrorCode::Validation, "knot record: multiplicity below 1");
    sum += multiplicities[i];
    require(sum <= degree + 2, ErrorCode::Validation, "knot record: multiplicities exceed degree + 2");
  }
  require(sum == degree + 2, ErrorCode::Validation, "knot record: multiplicities must sum to degree + 2");
  std::vector<double> v;
  for (std::size_t i = 0; i < knots.size(); ++i) v.insert(v.end(), static_cast<std::size_t>(multiplicities[i]), knots[i]);
  return LocalKnots(std::move(v), degree);
}

bool same_document(const LRSplineDocument& a, const LRSplineDocument& b) {
  const auto& x = a.collection;
  const auto& y = b.collection;
  if (a.type != b.type || x.independence != y.independence || x.dim != y.dim || x.degrees != y.degrees ||
      x.coef_dim != y.coef_dim || x.rational != y.rational || x.members.size() != y.members.size())
    return false;
  for (std::size_t i = 0; i < x.members.size(); ++i) {
    const auto& m = x.members[i];
    const auto& n = y.members[i];
    if (m.gamma != n.gamma || !same_bits(m.coef, n.coef) || !same_bits(m.weight, n.weight)) return false;
    if (m.bspline.dim() != n.bspline.dim()) return false;
    for (std::size_t k = 0; k < m.bspline.dim(); ++k)
      if (m.bspline.knots(k).degree() != n.bspline.knots(k).degree() ||
          !same_bits(m.bspline.knots(k).values(), n.bspline.knots(k).values()))
        return false;
  }
  return true;
}

void validate_document(const LRSplineDocument& doc) {
  const auto& c = doc.collection;
  require(!c.members.empty(), ErrorCode::Validation, "document: no records");
  require(c.dim >= 1 && c.dim <= 3, ErrorCode::Validation, "document: parametric dimension must be 1..3");
  for (std::size_t i = 0; i < c.members.size(); ++i)
    for (std::size_t k = 0; k < c.members[i].bspline.dim(); ++k) {
      const auto& t = c.members[i].bspline.knots(k);
      for (std::size_t j = 0; j < t.values().size(); ++j)
        require(std::isfinite(t[j]) && (j == 0 || t[j - 1] <= t[j]), ErrorCode::Validation,
                "record " + std::to_string(i) + ": bad knot vector");
    }
  for (std::size_t i = 0; i < c.members.size(); ++i)
    for (double v : c.members[i].coef)
      require(std::isfinite(v), ErrorCode::Validation, "record " + std::to_string(i) + ": non-finite control value");
  try {
    c.validate();
  } catch (const Error& e) {
    // Member indices from the collection are record indices here.
    fail(ErrorCode::Validation, std::string("document: ") + e.what());
  }
}

std::string write_lr(const LRSplineDocument& doc, FloatEncoding encoding) {
  validate_document(doc);
  const auto& c = doc.collection;
  std::ostringstream out;
  out << "LRSP 1\n";
  out << "type " << to_string(doc.type) << "\n";
  out << "independence " << to_string(c.independence) << "\n";
  out << "parametric " << c.dim << "\n";
  out << "geometric " << c.coef_dim << "\n";
  out << "rational " << (c.rational ? 1 : 0) << "\n";
  out << "degrees";
  for (int p : c.degrees) out << ' ' << p;
  out << "\n";
  out << "encoding " << (encoding == FloatEncoding::Hex ? "hex" : "decimal") << "\n";
  out << "records " << c.members.size() << "\n";
  for (const auto& m : c.members) {
    Rational g = m.gamma;
    g.canonicalize();
    out << "record " << g.get_str() << "\n";
    for (std::size_t k = 0; k < c.dim; ++k) {
      const auto r = LocalBSplineRecord::from_local(m.bspline.knots(k));
      out << "knots";
      for (double v : r.knots) out << ' ' << format_double(v, encoding);
      out << " :";
      for (int n : r.multiplicities) out << ' ' << n;
      out << "\n";
    }
    out << "coef";
    for (double v : m.coef) out << ' ' << format_double(v, encoding);
    out << "\n";
    if (c.rational) out << "weight " << format_double(m.weight, encoding) << "\n";
    out << "end\n";
  }
  return out.str();
}

LRSplineDocument read_lr(std::string_view text) {
  // Lines with their 1-based numbers, comments and blanks removed.
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    auto t = tokens(line);
    if (t.empty() || t.front().front() == '#') continue;
    lines.emplace_back(number, std::move(t));
  }
  std::size_t pos = 0;
  auto next = [&](std::string_view keyword, std::size_t min_args, std::size_t max_args) -> const auto& {
    if (pos >= lines.size())
      parse_fail(number, "unexpected end of input, expected '" + std::string(keyword) + "'");
    const auto& [ln, t] = lines[pos];
    if (t.front() != keyword) parse_fail(ln, "expected '" + std::string(keyword) + "'");
    if (t.size() - 1 < min_args || t.size() - 1 > max_args) parse_fail(ln, "wrong number of fields");
    ++pos;
    return lines[pos - 1];
  };

  LRSplineDocument doc;
  auto& c = doc.collection;
  {
    const auto& [ln, t] = next("LRSP", 1, 1);
    if (t[1] != "1") parse_fail(ln, "unsupported version '" + std::string(t[1]) + "'");
  }
  {
    const auto& [ln, t] = next("type", 1, 1);
    try {
      doc.type = spline_type_from_string(std::string(t[1]));
    } catch (const Error&) {
      parse_fail(ln, "unknown type '" + std::string(t[1]) + "'");
    }
  }
  {
    const auto& [ln, t] = next("independence", 1, 1);
    try {
      c.independence = independence_from_string(std::string(t[1]));
    } catch (const Error&) {
      parse_fail(ln, "unknown independence status '" + std::string(t[1]) + "'");
    }
  }
  {
    const auto& [ln, t] = next("parametric", 1, 1);
    c.dim = static_cast<std::size_t>(parse_int(t[1], ln, 1, 3));
  }
  {
    const auto& [ln, t] = next("geometric", 1, 1);
    c.coef_dim = static_cast<std::size_t>(parse_int(t[1], ln, 1, static_cast<long long>(kMaxGeometric)));
  }
  {
    const auto& [ln, t] = next("rational", 1, 1);
    c.rational = parse_int(t[1], ln, 0, 1) == 1;
  }
  {
    const auto& [ln, t] = next("degrees", c.dim, c.dim);
    for (std::size_t k = 0; k < c.dim; ++k) c.degrees.push_back(static_cast<int>(parse_int(t[k + 1], ln, 0, kMaxDegree)));
  }
  {
    const auto& [ln, t] = next("encoding", 1, 1);
    if (t[1] != "hex" && t[1] != "decimal") parse_fail(ln, "unknown encoding '" + std::string(t[1]) + "'");
  }
  std::size_t declared = 0;
  {
    const auto& [ln, t] = next("records", 1, 1);
    declared = static_cast<std::size_t>(parse_int(t[1], ln, 0, 1LL << 40));
  }

  while (pos < lines.size()) {
    const std::size_t index = c.members.size();
    const std::string where = "record " + std::to_string(index);
    Rational gamma;
    {
      const auto& [ln, t] = next("record", 1, 1);
      gamma = parse_rational(t[1], ln);
    }
    std::vector<LocalKnots> knots;
    for (std::size_t k = 0; k < c.dim; ++k) {
      const auto& [ln, t] = next("knots", 3, std::numeric_limits<std::size_t>::max());
      LocalBSplineRecord r;
      std::size_t i = 1;
      for (; i < t.size() && t[i] != ":"; ++i) r.knots.push_back(parse_double(t[i], ln));
      if (i == t.size()) parse_fail(ln, "missing ':' between knots and multiplicities");
      for (++i; i < t.size(); ++i) r.multiplicities.push_back(static_cast<int>(parse_int(t[i], ln, 0, 1000)));
      try {
        knots.push_back(r.to_local(c.degrees[k]));
      } catch (const Error& e) {
        fail(ErrorCode::Validation, where + " (line " + std::to_string(ln) + "): " + e.what());
      }
    }
    ScaledBSpline m{TensorBSpline(std::move(knots)), gamma, {}, 1.0};
    {
      const auto& [ln, t] = next("coef", c.coef_dim, c.coef_dim);
      for (std::size_t r = 1; r < t.size(); ++r) m.coef.push_back(parse_double(t[r], ln));
    }
    const bool has_weight = pos < lines.size() && lines[pos].second.front() == "weight";
    if (has_weight != c.rational)
      fail(ErrorCode::Validation, where + (c.rational ? ": missing weight" : ": weight on a non-rational document"));
    if (has_weight) {
      const auto& [ln, t] = next("weight", 1, 1);
      m.weight = parse_double(t[1], ln);
    }
    next("end", 0, 0);
    c.members.push_back(std::move(m));
  }
  if (c.members.size() != declared)
    fail(ErrorCode::Parse, "declared " + std::to_string(declared) + " records, found " + std::to_string(c.members.size()));
  validate_document(doc);
  return doc;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

std::uint32_t get_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)])) << (8 * i);
  return v;
}

double get_f32(std::string_view b, std::size_t at) { return std::bit_cast<float>(get_u32(b, at)); }

std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(v)));
  return buf;
}

bool starts_with_solid(std::string_view b) {
  std::size_t i = 0;
  while (i < b.size() && std::isspace(static_cast<unsigned char>(b[i]))) ++i;
  return b.substr(i, 5) == "solid";
}

TriangleSoup read_ascii_stl(std::string_view text) {
  TriangleSoup soup;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    auto t = tokens(line);
    if (!t.empty()) lines.emplace_back(line_no, std::move(t));
  }
  std::size_t pos = 0;
  auto expect = [&](std::initializer_list<std::string_view> words, std::size_t numbers) {
    if (pos >= lines.size()) parse_fail(line_no, "unexpected end of ASCII STL");
    const auto& [ln, t] = lines[pos];
    if (t.size() != words.size() + numbers) parse_fail(ln, "malformed STL line");
    std::size_t i = 0;
    for (auto w : words)
      if (t[i++] != w) parse_fail(ln, "expected '" + std::string(w) + "'");
    Vec3 v{};
    for (std::size_t k = 0; k < numbers; ++k) v[k] = static_cast<float>(parse_double(t[i + k], ln));
    ++pos;
    return v;
  };
  if (lines.empty() || lines[0].second.front() != "solid") parse_fail(1, "expected 'solid'");
  {
    // The name is the rest of the first line, verbatim.
    const auto& t = lines[0].second;
    if (t.size() > 1) soup.name = std::string(t[1].data(), static_cast<std::size_t>(t.back().data() + t.back().size() - t[1].data()));
    ++pos;
  }
  while (pos < lines.size() && lines[pos].second.front() == "facet") {
    Triangle tri;
    tri.normal = expect({"facet", "normal"}, 3);
    expect({"outer", "loop"}, 0);
    for (auto& v : tri.v) v = expect({"vertex"}, 3);
    expect({"endloop"}, 0);
    expect({"endfacet"}, 0);
    soup.triangles.push_back(tri);
  }
  if (pos >= lines.size() || lines[pos].second.front() != "endsolid") parse_fail(pos < lines.size() ? lines[pos].first : line_no, "expected 'endsolid'");
  if (pos + 1 != lines.size()) parse_fail(lines[pos + 1].first, "trailing content after 'endsolid'");
  return soup;
}

}  // namespace

bool is_binary_stl(std::string_view b) {
  if (b.size() < 84) return false;
  return static_cast<std::uint64_t>(b.size()) == 84 + 50 * static_cast<std::uint64_t>(get_u32(b, 80));
}

std::string write_stl(const TriangleSoup& soup, StlMode mode) {
  std::string out;
  if (mode == StlMode::Binary) {
    require(soup.triangles.size() <= 0xffffffffu, ErrorCode::InvalidInput, "STL: too many triangles");
    out.assign(80, '\0');
    std::memcpy(out.data(), soup.name.data(), std::min<std::size_t>(80, soup.name.size()));
    put_u32(out, static_cast<std::uint32_t>(soup.triangles.size()));
    for (const auto& t : soup.triangles) {
      for (double v : t.normal) put_f32(out, v);
      for (const auto& p : t.v)
        for (double v : p) put_f32(out, v);
      out.push_back(static_cast<char>(t.attribute & 0xff));
      out.push_back(static_cast<char>(t.attribute >> 8));
    }
    return out;
  }
  std::string name = soup.name;
  for (char& ch : name)
    if (ch == '\n' || ch == '\r') ch = ' ';
  auto vec = [](const Vec3& v) { return format_float(v[0]) + " " + format_float(v[1]) + " " + format_float(v[2]); };
  out = "solid " + name + "\n";
  for (const auto& t : soup.triangles) {
    out += "  facet normal " + vec(t.normal) + "\n    outer loop\n";
    for (const auto& p : t.v) out += "      vertex " + vec(p) + "\n";
    out += "    endloop\n  endfacet\n";
  }
  out += "endsolid " + name + "\n";
  return out;
}

TriangleSoup read_stl(std::string_view b) {
  if (is_binary_stl(b)) {
    TriangleSoup soup;
    const std::string_view header = b.substr(0, 80);
    soup.name = std::string(header.substr(0, header.find('\0')));
    const std::uint32_t n = get_u32(b, 80);
    soup.triangles.reserve(n);
    for (std::size_t i = 0, at = 84; i < n; ++i, at += 50) {
      Triangle t;
      for (std::size_t k = 0; k < 3; ++k) t.normal[k] = get_f32(b, at + 4 * k);
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) t.v[j][k] = get_f32(b, at + 12 + 12 * j + 4 * k);
      t.attribute = static_cast<std::uint16_t>(static_cast<unsigned char>(b[at + 48]) |
                                               (static_cast<unsigned char>(b[at + 49]) << 8));
      soup.triangles.push_back(t);
    }
    return soup;
  }
  if (starts_with_solid(b)) return read_ascii_stl(b);
  if (b.size() < 84) fail(ErrorCode::Parse, "STL: truncated binary header");
  fail(ErrorCode::Parse, "STL: binary triangle count " + std::to_string(get_u32(b, 80)) + " does not match size " +
                             std::to_string(b.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::InvalidInput, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::InvalidInput, "write failed for '" + path + "'");
}

}  // namespace lrkit
