// Command-line front end. Exit status: 0 success, 1 validation or
// diagnostic failure, 2 parse or usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>

#include "lrkit/diagnostics.hpp"
#include "lrkit/error.hpp"
#include "lrkit/formats.hpp"
#include "lrkit/geometry.hpp"
#include "lrkit/scenario.hpp"

using namespace lrkit;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_refine(const std::string& in, const std::string& out, bool decimal) {
  const auto result = run_scenario(parse_scenario(read_file(in)));
  std::cout << result.report;
  if (!out.empty()) {
    require(!result.document.collection.members.empty(), ErrorCode::InvalidInput,
            "refine: growth scenarios produce no collection");
    write_file(out, write_lr(result.document, decimal ? FloatEncoding::Decimal : FloatEncoding::Hex));
  }
  return result.failed == 0 ? 0 : 1;
}

int cmd_compare(const std::string& in) {
  const Scenario s = parse_scenario(read_file(in));
  const bool has_steps = std::any_of(s.items.begin(), s.items.end(),
                                     [](const Scenario::Item& it) { return it.kind == Scenario::Item::Kind::Step; });
  require(s.engine == Scenario::Engine::Growth || !has_steps, ErrorCode::InvalidInput,
          "compare: scenario must use local/global steps");
  Scenario g = s;
  g.engine = Scenario::Engine::Growth;
  const auto result = run_scenario(g);
  std::cout << result.report;
  return result.failed == 0 ? 0 : 1;
}

int cmd_check(const std::string& in, const std::string& coarse_path) {
  const auto doc = read_lr(read_file(in));
  const auto& c = doc.collection;
  bool ok = true;
  const auto ind = linear_independence(c);
  std::cout << "type: " << to_string(doc.type) << ", " << c.size() << " functions\n";
  std::cout << "independence: " << to_string(ind.status) << " (rank " << ind.rank << " of " << ind.count << ")\n";
  ok = ok && ind.status != Independence::NotIndependent;
  const auto pou = partition_of_unity(c);
  std::cout << "partition of unity: deviation " << fmt("%.3g", pou.max_deviation) << ", exact "
            << (pou.exact ? "yes" : "no") << "\n";
  ok = ok && pou.max_deviation < 1e-10;
  const auto rep = polynomial_reproduction(c, induced_partition(c));
  const auto good = static_cast<std::size_t>(std::count(rep.begin(), rep.end(), true));
  std::cout << "polynomial reproduction: " << good << " of " << rep.size() << " elements\n";
  ok = ok && good == rep.size();
  if (!coarse_path.empty()) {
    const auto coarse = read_lr(read_file(coarse_path));
    const auto n = nestedness(coarse.collection, c);
    std::cout << "nestedness: " << (n.nested ? "nested" : "not nested") << " (" << n.failures << " failures)\n";
    ok = ok && n.nested;
  }
  std::cout << to_string(ind.status) << ", PoU deviation " << fmt("%.3g", pou.max_deviation) << "\n";
  return ok ? 0 : 1;
}

int cmd_eval(const std::string& in, const std::string& grid) {
  const auto doc = read_lr(read_file(in));
  const auto& c = doc.collection;
  std::vector<int> n;
  {
    std::stringstream ss(grid);
    for (std::string part; std::getline(ss, part, 'x');) {
      int v = 0;
      try {
        v = std::stoi(part);
      } catch (const std::exception&) {
        fail(ErrorCode::Parse, "--grid: bad size '" + grid + "'");
      }
      require(v >= 2 && v <= 100000, ErrorCode::Parse, "--grid: sizes must be at least 2");
      n.push_back(v);
    }
  }
  require(n.size() == c.dim, ErrorCode::Parse, "--grid: one size per parametric direction");
  CollectionEvaluator ev(c);
  const Box box = ev.domain();
  std::vector<int> idx(c.dim, 0);
  std::vector<double> x(c.dim);
  for (bool done = false; !done;) {
    for (std::size_t k = 0; k < c.dim; ++k) {
      const int i = idx[k];
      x[k] = i + 1 == n[k] ? box[k].hi : box[k].lo + (box[k].hi - box[k].lo) * i / (n[k] - 1);
    }
    std::string line;
    for (double v : x) line += fmt("%.17g", v) + " ";
    line += ":";
    for (double v : ev.point(x)) line += " " + fmt("%.17g", v);
    std::cout << line << "\n";
    done = true;
    for (std::size_t k = 0; k < c.dim; ++k)
      if (++idx[k] < n[k]) {
        done = false;
        break;
      } else
        idx[k] = 0;
  }
  return 0;
}

int cmd_tessellate(const std::string& in, double tol, const std::string& out, bool ascii) {
  const auto doc = read_lr(read_file(in));
  auto soup = tessellate(SplineGeometry(doc.collection), tol);
  soup.name = "lrkit";
  write_file(out, write_stl(soup, ascii ? StlMode::Ascii : StlMode::Binary));
  std::cout << soup.triangles.size() << " triangles\n";
  return 0;
}

int cmd_slice(const std::string& in, double step, double tol, const std::string& out) {
  require(step > 0, ErrorCode::Parse, "--z-step must be positive");
  const auto soup = read_stl(read_file(in));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& t : soup.triangles)
    for (const auto& p : t.v) {
      lo = std::min(lo, p[2]);
      hi = std::max(hi, p[2]);
    }
  std::ostringstream s;
  std::size_t layers = 0;
  for (long k = 1; lo + k * step < hi; ++k) {
    const auto sl = slice(soup, lo + k * step, tol);
    ++layers;
    std::size_t closed = 0;
    for (const auto& p : sl.polylines) closed += p.closed;
    s << "layer " << layers << " z " << fmt("%.17g", sl.height) << (sl.perturbed ? " perturbed" : "") << " polylines "
      << sl.polylines.size() << " closed " << closed << "\n";
    for (const auto& p : sl.polylines) {
      s << (p.closed ? "closed" : "open") << ' ' << p.points.size() << " length " << fmt("%.17g", p.length()) << "\n";
      for (const auto& q : p.points) s << fmt("%.17g", q[0]) << ' ' << fmt("%.17g", q[1]) << "\n";
    }
  }
  if (out.empty()) std::cout << s.str();
  else {
    write_file(out, s.str());
    std::cout << layers << " layers\n";
  }
  return 0;
}

int cmd_convert(const std::string& in, const std::string& out, const std::string& to) {
  const auto soup = read_stl(read_file(in));
  write_file(out, write_stl(soup, to == "ascii" ? StlMode::Ascii : StlMode::Binary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally refined spline toolkit"};
  app.require_subcommand(1);

  std::string in, out, coarse, grid, to = "binary";
  bool decimal = false, ascii = false;
  double tol = 1e-3, zstep = 0, chain_tol = 1e-9;

  auto* refine = app.add_subcommand("refine", "Run a scenario and write the resulting collection");
  refine->add_option("scenario", in, "Scenario file (.scn)")->required();
  refine->add_option("-o,--output", out, "Output .lrsp file");
  refine->add_flag("--decimal", decimal, "Write decimal instead of hex-float values");

  auto* check = app.add_subcommand("check", "Report independence, partition of unity, reproduction, nestedness");
  check->add_option("file", in, "Collection (.lrsp)")->required();
  check->add_option("--coarse", coarse, "Coarser collection for the nestedness check");

  auto* compare = app.add_subcommand("compare", "Growth comparison table for a scenario");
  compare->add_option("scenario", in, "Scenario file (.scn)")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a collection on a parameter grid");
  eval->add_option("file", in, "Collection (.lrsp)")->required();
  eval->add_option("--grid", grid, "Points per direction, e.g. 11x11")->required();

  auto* tess = app.add_subcommand("tessellate", "Triangulate a surface to STL");
  tess->add_option("file", in, "Surface collection (.lrsp)")->required();
  tess->add_option("--tol", tol, "Chordal tolerance");
  tess->add_option("-o,--output", out, "Output .stl")->required();
  tess->add_flag("--ascii", ascii, "Write ASCII STL");

  auto* sl = app.add_subcommand("slice", "Slice an STL soup into layers");
  sl->add_option("file", in, "Input .stl")->required();
  sl->add_option("--z-step", zstep, "Layer spacing")->required();
  sl->add_option("--tol", chain_tol, "Endpoint matching tolerance");
  sl->add_option("-o,--output", out, "Output layer file (stdout when omitted)");

  auto* conv = app.add_subcommand("convert", "Convert STL between ASCII and binary");
  conv->add_option("file", in, "Input .stl")->required();
  conv->add_option("-o,--output", out, "Output .stl")->required();
  conv->add_option("--to", to, "ascii or binary")->check(CLI::IsMember({"ascii", "binary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*refine) return cmd_refine(in, out, decimal);
    if (*check) return cmd_check(in, coarse);
    if (*compare) return cmd_compare(in);
    if (*eval) return cmd_eval(in, grid);
    if (*tess) return cmd_tessellate(in, tol, out, ascii);
    if (*sl) return cmd_slice(in, zstep, chain_tol, out);
    if (*conv) return cmd_convert(in, out, to);
  } catch (const Error& e) {
    std::cerr << "lrkit: " << e.what() << "\n";
    return e.code() == ErrorCode::Parse ? 2 : 1;
  }
  return 2;
}
