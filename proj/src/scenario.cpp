#include "lrkit/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lrkit/diagnostics.hpp"
#include "lrkit/error.hpp"
#include "lrkit/growth.hpp"
#include "lrkit/hbsplines.hpp"
#include "lrkit/lrsplines.hpp"
#include "lrkit/tsplines.hpp"

namespace lrkit {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "scenario line " + std::to_string(line) + ": " + what);
}

double number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) parse_fail(line, "bad number '" + s + "'");
  return v;
}

int integer(const std::string& s, std::size_t line, int lo, int hi) {
  const double v = number(s, line);
  if (v != std::floor(v) || v < lo || v > hi) parse_fail(line, "bad integer '" + s + "'");
  return static_cast<int>(v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::optional<Scenario::Engine> family(const std::string& step) {
  if (step == "lr-meshrectangle" || step == "structured") return Scenario::Engine::LR;
  if (step == "hb-region") return Scenario::Engine::HB;
  if (step == "ts-anchor") return Scenario::Engine::TS;
  if (step == "local" || step == "global") return Scenario::Engine::Growth;
  return std::nullopt;
}

/// Argument checks shared by parsing and running.
void check_step(const Scenario::Item& it, std::size_t d) {
  const auto& a = it.args;
  auto numbers = [&] {
    for (const auto& s : a) number(s, it.line);
  };
  if (it.name == "lr-meshrectangle") {
    if (a.size() != 2 + 2 * (d - 1) && a.size() != 3 + 2 * (d - 1)) parse_fail(it.line, "lr-meshrectangle: wrong argument count");
    integer(a[0], it.line, 0, static_cast<int>(d) - 1);
    numbers();
    if (a.size() == 3 + 2 * (d - 1)) integer(a.back(), it.line, 1, 64);
  } else if (it.name == "structured") {
    if (a.size() != d) parse_fail(it.line, "structured: one coordinate per direction");
    numbers();
  } else if (it.name == "hb-region") {
    if (a.size() != 1 + 2 * d) parse_fail(it.line, "hb-region: level and one interval per direction");
    integer(a[0], it.line, 0, 9);
    numbers();
  } else if (it.name == "ts-anchor") {
    if (a.empty() || a.size() % 2) parse_fail(it.line, "ts-anchor: coordinate pairs expected");
    numbers();
  } else if (it.name == "local") {
    if (a.size() != 3) parse_fail(it.line, "local: s t w expected");
    numbers();
  } else if (it.name == "global") {
    if (!a.empty()) parse_fail(it.line, "global takes no arguments");
  }
}

bool consistent(const TMesh& m) {
  const auto fs = m.functions();
  if (fs.size() != m.anchors().size()) return false;
  for (const auto& f : fs)
    if (!m.is_anchor(f.anchor) || infer_knots(m, f.anchor) != f.knots) return false;
  return true;
}

SplineCollection lifted(SplineCollection c) {
  if (c.coef_dim >= 3) return c;
  for (auto& m : c.members) m.coef.resize(3, 0.0);
  c.coef_dim = 3;
  return c;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::map<std::size_t, KnotVector> knots;
  std::map<std::size_t, int> cells;
  std::optional<Scenario::Engine> engine;
  std::size_t number_of_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number_of_line;
    const std::size_t ln = number_of_line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> t;
    for (std::string w; ls >> w;) t.push_back(w);
    if (t.empty()) continue;
    const std::string key = t[0];
    const std::vector<std::string> args(t.begin() + 1, t.end());

    if (key == "degrees") {
      if (!s.degrees.empty()) parse_fail(ln, "degrees given twice");
      if (args.empty() || args.size() > 3) parse_fail(ln, "degrees: 1 to 3 values");
      for (const auto& a : args) s.degrees.push_back(integer(a, ln, 0, 10));
      continue;
    }
    if (key == "uniform" || key == "knots") {
      if (s.degrees.empty()) parse_fail(ln, "degrees must come first");
      if (args.empty()) parse_fail(ln, key + ": direction expected");
      const auto dir = static_cast<std::size_t>(integer(args[0], ln, 0, static_cast<int>(s.degrees.size()) - 1));
      if (knots.count(dir)) parse_fail(ln, "knots for direction " + args[0] + " given twice");
      const int p = s.degrees[dir];
      try {
        if (key == "uniform") {
          if (args.size() != 4) parse_fail(ln, "uniform: dir lo hi cells");
          const int n = integer(args[3], ln, 1, 4096);
          knots.emplace(dir, KnotVector::clamped_uniform(number(args[1], ln), number(args[2], ln), n, p));
          cells[dir] = n;
        } else {
          std::vector<double> v;
          for (std::size_t i = 1; i < args.size(); ++i) v.push_back(number(args[i], ln));
          knots.emplace(dir, KnotVector(v, p));
          cells[dir] = 0;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw;
        parse_fail(ln, e.what());
      }
      continue;
    }

    if (knots.size() != s.degrees.size() || s.degrees.empty()) parse_fail(ln, "space incomplete before '" + key + "'");
    Scenario::Item it;
    it.name = key;
    it.args = args;
    it.line = ln;
    if (key == "expect") {
      if (args.size() != 3) parse_fail(ln, "expect <key> <op> <value>");
      static const std::set<std::string> ops{"=", "<", ">", "<=", ">="};
      if (!ops.count(args[1])) parse_fail(ln, "unknown comparison '" + args[1] + "'");
      it.kind = Scenario::Item::Kind::Expect;
      it.name = args[0];
      it.args = {args[1], args[2]};
    } else if (key == "collection") {
      if (args.size() != 1 || (args[0] != "hb" && args[0] != "thb")) parse_fail(ln, "collection hb|thb");
      it.kind = Scenario::Item::Kind::View;
      it.args = args;
    } else {
      const auto f = family(key);
      if (!f) parse_fail(ln, "unknown directive '" + key + "'");
      if (engine && *engine != *f) parse_fail(ln, "steps of different methods in one scenario");
      engine = f;
      it.kind = Scenario::Item::Kind::Step;
      check_step(it, s.degrees.size());
    }
    s.items.push_back(std::move(it));
  }
  if (s.degrees.empty() || knots.size() != s.degrees.size()) parse_fail(number_of_line, "incomplete space");
  for (std::size_t k = 0; k < s.degrees.size(); ++k) {
    s.knots.push_back(knots.at(k));
    s.uniform_cells.push_back(cells.at(k));
  }
  s.engine = engine.value_or(Scenario::Engine::LR);
  return s;
}

namespace {

struct Runner {
  const Scenario& sc;
  std::size_t d;
  std::optional<LRCollection> lr, lr_prev;
  std::optional<HierarchySelection> hb, hb_prev;
  std::optional<TMesh> ts, ts_prev;
  std::vector<GrowthRow> rows;
  std::size_t step = 0;
  bool thb_view = true;
  std::size_t ts_extra = 0, ts_updated = 0;
  std::ostringstream out;
  std::size_t failed = 0;

  explicit Runner(const Scenario& s) : sc(s), d(s.degrees.size()) {}

  Box domain() const {
    Box b;
    for (const auto& k : sc.knots) b.sides.push_back(k.domain());
    return b;
  }

  void require_uniform(const char* what) const {
    for (int n : sc.uniform_cells)
      require(n > 0, ErrorCode::InvalidInput, std::string(what) + " scenarios need uniform knot vectors");
  }

  SplineCollection collection_of(const std::optional<LRCollection>& l, const std::optional<HierarchySelection>& h,
                                 const std::optional<TMesh>& t) const {
    if (l) return l->splines;
    if (h) return hb_to_collection(*h, thb_view);
    if (t) return tmesh_to_collection(*t).collection;
    fail(ErrorCode::InvalidInput, "scenario: no collection for this method");
  }
  SplineCollection current() const { return collection_of(lr, hb, ts); }

  void start() {
    switch (sc.engine) {
      case Scenario::Engine::LR: lr = from_tensor(sc.knots); break;
      case Scenario::Engine::HB:
        require_uniform("hierarchical");
        hb.emplace(domain(), sc.uniform_cells, sc.degrees);
        break;
      case Scenario::Engine::TS:
        require(d == 2, ErrorCode::InvalidInput, "T-spline scenarios are bivariate");
        ts = TMesh::from_tensor(sc.knots[0], sc.knots[1]);
        break;
      case Scenario::Engine::Growth: {
        require_uniform("growth");
        require(d == 2, ErrorCode::InvalidInput, "growth scenarios are bivariate");
        std::vector<GrowthStep> steps;
        for (const auto& it : sc.items) {
          if (it.kind != Scenario::Item::Kind::Step) continue;
          if (it.name == "global") steps.push_back({GrowthStep::Kind::Global});
          else
            steps.push_back({GrowthStep::Kind::Local, number(it.args[0], it.line), number(it.args[1], it.line),
                             number(it.args[2], it.line)});
        }
        rows = growth_compare({domain(), sc.uniform_cells, sc.degrees}, steps);
        break;
      }
    }
    out << "space: degrees";
    for (int p : sc.degrees) out << ' ' << p;
    if (sc.engine == Scenario::Engine::Growth) out << ", growth comparison\n";
    else out << ", " << current().size() << " functions\n";
  }

  void run_step(const Scenario::Item& it) {
    ++step;
    const auto& a = it.args;
    auto num = [&](std::size_t i) { return number(a[i], it.line); };
    out << "step " << step << " (line " << it.line << ") " << it.name;
    for (const auto& s : a) out << ' ' << s;
    out << ": ";
    if (it.name == "lr-meshrectangle") {
      lr_prev = lr;
      MeshRectangle r;
      r.direction = static_cast<std::size_t>(num(0));
      r.value = num(1);
      for (std::size_t k = 0; k + 1 < d; ++k) r.extent.push_back({num(2 + 2 * k), num(3 + 2 * k)});
      r.multiplicity = a.size() > 2 * d ? static_cast<int>(num(a.size() - 1)) : 1;
      lr = refine(*lr, r);
      out << "split " << lr->last.split << ", produced " << lr->last.produced << ", " << lr->splines.size()
          << " functions\n";
    } else if (it.name == "structured") {
      lr_prev = lr;
      std::vector<double> x;
      for (std::size_t k = 0; k < d; ++k) x.push_back(num(k));
      std::vector<std::size_t> sel;
      for (std::size_t i = 0; i < lr->splines.members.size(); ++i) {
        const Box b = support_box(lr->splines.members[i].bspline);
        bool inside = true;
        for (std::size_t k = 0; k < d; ++k) inside = inside && b[k].contains_strictly(x[k]);
        if (inside) sel.push_back(i);
      }
      lr = structured_refine(*lr, sel);
      out << sel.size() << " selected, " << lr->splines.size() << " functions\n";
    } else if (it.name == "hb-region") {
      hb_prev = hb;
      Box region;
      for (std::size_t k = 0; k < d; ++k) region.sides.push_back({num(1 + 2 * k), num(2 + 2 * k)});
      hb = hb_refine(*hb, static_cast<int>(num(0)), region);
      out << hb->active().size() << " active functions\n";
    } else if (it.name == "ts-anchor") {
      ts_prev = ts;
      std::vector<TPoint> qs;
      std::size_t fresh = 0;
      for (std::size_t i = 0; i < a.size(); i += 2) {
        qs.push_back(ts->point(num(i), num(i + 1)));
        fresh += ts->is_anchor(qs.back()) ? 0 : 1;
      }
      ts = semi_standard_insert(*ts, qs).first;
      ts_extra = ts->anchors().size() - ts_prev->anchors().size() - fresh;
      ts_updated = 0;
      for (const auto& p : ts_prev->anchors())
        if (infer_knots(*ts_prev, p) != infer_knots(*ts, p)) ++ts_updated;
      out << ts->anchors().size() << " anchors, " << ts_extra << " extra, " << ts_updated << " updated\n";
    } else {
      const auto& r = rows.at(step);
      auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
      out << "HB " << cell(r.hb) << ", THB " << cell(r.thb) << ", LR " << cell(r.lr) << ", TS " << cell(r.ts) << "\n";
    }
  }

  /// Value of a key after the current step: a number or a word.
  std::string value(const std::string& key, std::size_t line) const {
    auto yes = [](bool b) { return std::string(b ? "yes" : "no"); };
    if (sc.engine == Scenario::Engine::Growth) {
      const auto& r = rows.at(step);
      auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
      if (key == "hb") return cell(r.hb);
      if (key == "thb") return cell(r.thb);
      if (key == "lr") return cell(r.lr);
      if (key == "ts") return cell(r.ts);
      if (key == "hb-exceeds") return yes(r.hb && r.lr && r.ts && *r.hb > *r.lr && *r.hb > *r.ts);
      parse_fail(line, "unknown key '" + key + "' for a growth scenario");
    }
    if (key == "split" || key == "produced") {
      if (!lr) parse_fail(line, key + " needs an LR scenario");
      return std::to_string(key == "split" ? lr->last.split : lr->last.produced);
    }
    if (key == "active") {
      if (!hb) parse_fail(line, "active needs a hierarchical scenario");
      return std::to_string(hb->active().size());
    }
    if (key == "anchors" || key == "extra" || key == "updated" || key == "consistent") {
      if (!ts) parse_fail(line, key + " needs a T-spline scenario");
      if (key == "anchors") return std::to_string(ts->anchors().size());
      if (key == "extra") return std::to_string(ts_extra);
      if (key == "updated") return std::to_string(ts_updated);
      return yes(consistent(*ts));
    }
    if (key == "class") {
      if (!ts) parse_fail(line, "class needs a T-spline scenario");
      return to_string(tmesh_to_collection(*ts).kind);
    }
    if (hb && (key == "count" || key == "rank" || key == "independent")) {
      // Hierarchical functions, truncated or not, rather than their terms.
      const auto fs = hb_functions(*hb, thb_view);
      if (key == "count") return std::to_string(fs.size());
      const auto r = linear_independence(fs);
      return key == "rank" ? std::to_string(r.rank) : yes(r.status == Independence::Independent);
    }
    const SplineCollection c = current();
    if (key == "count" || key == "terms") return std::to_string(c.size());
    if (key == "rank") return std::to_string(linear_independence(c).rank);
    if (key == "independent") return yes(linear_independence(c).status == Independence::Independent);
    if (key == "pou-deviation") return fmt(partition_of_unity(c).max_deviation);
    if (key == "pou-exact") return yes(partition_of_unity(c).exact);
    if (key == "reproduction") {
      const auto r = polynomial_reproduction(c, induced_partition(c));
      return yes(std::all_of(r.begin(), r.end(), [](bool b) { return b; }));
    }
    if (key == "nested") {
      if (step == 0) return "yes";
      const SplineCollection before = collection_of(lr ? lr_prev : std::nullopt, hb ? hb_prev : std::nullopt,
                                                    ts ? ts_prev : std::nullopt);
      return yes(nestedness(before, c).nested);
    }
    parse_fail(line, "unknown key '" + key + "'");
  }

  void expect(const Scenario::Item& it) {
    const std::string& op = it.args[0];
    const std::string& want = it.args[1];
    const std::string got = value(it.name, it.line);
    bool ok = false;
    char* e1 = nullptr;
    char* e2 = nullptr;
    const double g = std::strtod(got.c_str(), &e1);
    const double w = std::strtod(want.c_str(), &e2);
    const bool numeric = !got.empty() && !want.empty() && *e1 == '\0' && *e2 == '\0';
    if (numeric) {
      if (op == "=") ok = g == w;
      else if (op == "<") ok = g < w;
      else if (op == ">") ok = g > w;
      else if (op == "<=") ok = g <= w;
      else ok = g >= w;
    } else {
      if (op != "=") parse_fail(it.line, "only '=' applies to '" + want + "'");
      ok = got == want;
    }
    if (!ok) ++failed;
    out << "  expect " << it.name << ' ' << op << ' ' << want << ": " << (ok ? "ok" : "FAIL") << " (" << got << ")\n";
  }

  ScenarioResult run() {
    start();
    for (const auto& it : sc.items) {
      switch (it.kind) {
        case Scenario::Item::Kind::Step: run_step(it); break;
        case Scenario::Item::Kind::View:
          thb_view = it.args[0] == "thb";
          out << "collection " << it.args[0] << "\n";
          break;
        case Scenario::Item::Kind::Expect: expect(it); break;
      }
    }
    ScenarioResult r;
    if (sc.engine == Scenario::Engine::Growth) out << format_growth(rows);
    else {
      r.document.collection = lifted(current());
      if (lr) r.document.type = SplineType::LRBSpline;
      if (hb) r.document.type = SplineType::HierarchicalBSpline;
      if (ts) {
        const auto kind = tmesh_to_collection(*ts).kind;
        require(kind != TSplineClass::NonStandard, ErrorCode::Validation, "scenario: T-mesh is not standard");
        r.document.type = kind == TSplineClass::Standard ? SplineType::StandardTSpline : SplineType::SemiStandardTSpline;
      }
    }
    out << "result: " << (failed == 0 ? "PASS" : "FAIL") << " (" << failed << " failed)\n";
    r.report = out.str();
    r.failed = failed;
    return r;
  }
};

}  // namespace

ScenarioResult run_scenario(const Scenario& s) { return Runner(s).run(); }

}  // namespace lrkit
