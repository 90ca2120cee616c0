// qaff: stable maps, R-matrix factors, q-characters and verification suites from the command line.

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qaff/modspec.hpp"
#include "qaff/suites.hpp"

using json = nlohmann::ordered_json;
using namespace qaff;

namespace {

const char* kVersion = "1.0.0";

struct Common {
  int depth = 8;
  int buffer = 6;
  int order = 12;
  std::string format = "json";
  std::string output;
  bool timing = false;
};

// "(num)/(den)" in s, u, z -> LaTeX, with s = q^{1/2}.
std::string latex_poly(std::string p) {
  p = std::regex_replace(p, std::regex(R"(\^(-?\d+))"), "^{$1}");
  p = std::regex_replace(p, std::regex(R"(\*)"), " ");
  return p;
}

std::string latex_value(const std::string& canon) {
  static const std::regex frac(R"(^\((.*)\)/\((.*)\)$)");
  std::smatch m;
  if (!std::regex_match(canon, m, frac)) return latex_poly(canon);
  if (m[2] == "1") return latex_poly(m[1]);
  return "\\frac{" + latex_poly(m[1]) + "}{" + latex_poly(m[2]) + "}";
}

template <class F>
std::string canon(const F& x) {
  return canonical(x);
}

template <class F>
json matrix_json(const Module<F>& t, const LinearOp<F>& op, bool trusted_only = true) {
  json basis = json::array();
  for (int i = 0; i < t.dim(); ++i)
    if (!trusted_only || t.is_trusted(i)) basis.push_back(t.labels[i]);
  json entries = json::array();
  for (int c = 0; c < t.dim(); ++c) {
    if (trusted_only && !t.is_trusted(c)) continue;
    auto col = op.col(c);
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [r, v] : col)
      if (!trusted_only || t.is_trusted(r)) entries.push_back({{"row", t.labels[r]}, {"col", t.labels[c]}, {"value", canon(v)}});
  }
  return {{"basis", basis}, {"entries", entries}};
}

// One bmatrix per weight space.
std::string matrix_latex(const json& m, const std::string& title) {
  std::ostringstream out;
  out << "% " << title << ", s = q^{1/2}\n";
  std::map<std::string, int> pos;
  std::vector<std::string> basis = m["basis"].get<std::vector<std::string>>();
  for (size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
  std::vector<std::vector<std::string>> cell(basis.size(), std::vector<std::string>(basis.size(), "0"));
  for (const auto& e : m["entries"]) cell[pos[e["row"]]][pos[e["col"]]] = latex_value(e["value"]);
  out << "\\[\n\\begin{bmatrix}\n";
  for (size_t r = 0; r < basis.size(); ++r) {
    for (size_t c = 0; c < basis.size(); ++c) out << (c ? " & " : "") << cell[r][c];
    out << (r + 1 < basis.size() ? " \\\\\n" : "\n");
  }
  out << "\\end{bmatrix}\n\\]\n% basis: ";
  for (size_t i = 0; i < basis.size(); ++i) out << (i ? ", " : "") << basis[i];
  out << "\n";
  return out.str();
}

json header(const std::string& command, const Common& c, const json& extra) {
  json h = {{"tool", "qaff"}, {"version", kVersion}, {"command", command},
            {"depth", c.depth}, {"buffer", c.buffer}, {"order", c.order}};
  for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  return h;
}

json check_json(const CheckResult& r) {
  return {{"check", r.check}, {"status", status_name(r.status)}, {"witness", r.witness}};
}

int emit(const Common& c, const json& doc, const std::string& latex) {
  const std::string text = doc.dump(2) + "\n";
  const bool want_json = c.format == "json" || c.format == "both";
  const bool want_latex = c.format == "latex" || c.format == "both";
  if (c.output.empty()) {
    if (want_json) std::cout << text;
    if (want_latex) std::cout << latex;
  } else {
    // JSON is always written; LaTeX goes next to it
    std::ofstream(c.output) << text;
    if (want_latex) std::ofstream(c.output + ".tex") << latex;
  }
  bool ok = true;
  if (doc.contains("checks"))
    for (const auto& ch : doc["checks"]) ok = ok && ch["status"] != "fail";
  return ok ? 0 : 1;
}

SpecDefaults defaults(const Common& c) { return {c.depth, c.buffer}; }

int cmd_stable(const Common& c, const std::string& vs, const std::string& ws, int max_m) {
  ModuleSpec v = parse_module_spec(vs, defaults(c)), w = parse_module_spec(ws, defaults(c));
  if (w.formal) throw std::invalid_argument("the second module must be concrete; put u on the first");
  json doc = {{"header", header("stable", c, {{"v", vs}, {"w", ws}, {"max_m", max_m}})}};
  json checks = json::array();
  auto fill = [&](const auto& s) {
    doc["map"] = matrix_json(*s.tensor, s.mat);
    doc["map"]["max_m"] = s.max_m;
    const std::string tri = unitriangular_violation(*s.tensor, s.mat);
    checks.push_back(check_json({"unitriangular", tri.empty() ? Status::pass : Status::fail, tri}));
    std::string det;
    for (const auto& d : block_determinants(*s.tensor, s.mat))
      if (det.empty() && !d.is_one()) det = canon(d);
    checks.push_back(check_json({"block-determinants", det.empty() ? Status::pass : Status::fail, det}));
  };
  if (v.formal)
    fill(stable_map_formal(v.base, w.base, max_m));
  else
    fill(stable_map(v.base, w.base, max_m));
  doc["checks"] = checks;
  return emit(c, doc, matrix_latex(doc["map"], "S_{V,W}"));
}

int cmd_rmatrix(const Common& c, const std::string& vs, const std::string& ws, const std::string& factor) {
  ModuleSpec v = parse_module_spec(vs, defaults(c)), w = parse_module_spec(ws, defaults(c));
  if (!v.formal || w.formal) throw std::invalid_argument("rmatrix needs V(u) (x) W: u on the first module only");
  RFactor r;
  if (factor == "plus") r = r_plus(v.base, w.base, c.order);
  else if (factor == "minus") r = r_minus(v.base, w.base, c.order);
  else if (factor == "zero") r = r_zero(v.base, w.base, c.order);
  else if (factor == "infinity") r = r_infty(v.base, w.base);
  else r = full_r(v.base, w.base, c.order);
  json doc = {{"header", header("rmatrix", c, {{"v", vs}, {"w", ws}, {"factor", factor}})}};
  doc["factor"] = matrix_json(*r.tensor, r.op);
  doc["factor"]["horizon"] = r.horizon;
  doc["factor"]["reconstructed"] = r.reconstructed;
  if (r.scalar_part) {
    json s = json::array();
    for (int m = 0; m <= r.scalar_part->order(); ++m) s.push_back(canon((*r.scalar_part)[m]));
    doc["factor"]["scalar_series"] = s;
  }
  return emit(c, doc, matrix_latex(doc["factor"], "R-factor " + factor));
}

int cmd_qchar(const Common& c, const std::string& ms) {
  ModuleSpec m = parse_module_spec(ms, defaults(c));
  json terms = json::array();
  std::string latex = "% q-character of " + ms + "\n";
  for (const auto& t : qcharacter(*m.base)) {
    const std::string l = m.formal ? lweight_str(u_deform(t.lw)) : lweight_str(t.lw);
    terms.push_back({{"lweight", l}, {"weight", t.lw.weight}, {"mult", t.mult}});
    latex += (t.mult > 1 ? std::to_string(t.mult) + "\\," : "") + std::string("[") + latex_value(l) + "]\n";
  }
  json doc = {{"header", header("qchar", c, {{"module", ms}, {"trusted_only", m.base->truncated()}})}, {"terms", terms}};
  return emit(c, doc, latex);
}

int cmd_verify(const Common& c, std::vector<std::string> names) {
  if (names.empty() || std::find(names.begin(), names.end(), "all") != names.end()) {
    names.clear();
    for (const auto& [n, f] : suite_registry()) names.push_back(n);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  SuiteOptions o;
  o.depth = c.depth;
  o.buffer = c.buffer;
  o.order = c.order;
  auto runs = run_suites(names, o, thread_count());
  json checks = json::array(), suites_j = json::array();
  std::string latex = "\\begin{tabular}{ll}\n";
  for (const auto& r : runs) {
    json s = {{"suite", r.suite}};
    if (c.timing) s["seconds"] = r.seconds;
    suites_j.push_back(s);
    for (const auto& ch : r.checks) {
      checks.push_back(check_json(ch));
      latex += "\\texttt{" + std::regex_replace(ch.check, std::regex("_"), "\\_") + "} & " + status_name(ch.status) + " \\\\\n";
    }
  }
  latex += "\\end{tabular}\n";
  json doc = {{"header", header("verify", c, {{"suites", names}})}, {"suites", suites_j}, {"checks", checks}};
  return emit(c, doc, latex);
}

int cmd_compose(const Common& c, const std::string& a, const std::string& b, const std::string& d) {
  ModuleSpec v1 = parse_module_spec(a, defaults(c)), v2 = parse_module_spec(b, defaults(c)),
             v3 = parse_module_spec(d, defaults(c));
  if (v1.formal || v2.formal || v3.formal)
    throw std::invalid_argument("compose attaches u1, u2 itself; give concrete modules");
  auto r = stable_compose_experiment(v1.base, v2.base, v3.base);
  json orders = json::array();
  std::string latex = "% composition orders against the three-factor map\n";
  for (const auto& [name, ok] : r.orders) {
    orders.push_back({{"order", name}, {"matches", ok}});
    latex += "% " + name + ": " + (ok ? "match" : "no match") + "\n";
  }
  json doc = {{"header", header("compose", c, {{"v1", a}, {"v2", b}, {"v3", d}})},
              {"experiment", {{"any_match", r.any_match}, {"orders", orders}, {"witness", r.witness}}}};
  return emit(c, doc, latex);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable maps and R-matrices for sl2 quantum affine Borel modules"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("--depth", c.depth, "default truncation depth of prefundamental modules")->check(CLI::NonNegativeNumber);
    s->add_option("--buffer", c.buffer, "default buffer rows of prefundamental modules")->check(CLI::PositiveNumber);
    s->add_option("--order", c.order, "series order for R-factors")->check(CLI::Range(2, 64));
    s->add_option("--format", c.format, "json, latex or both")->check(CLI::IsMember({"json", "latex", "both"}));
    s->add_option("-o,--output", c.output, "write JSON here (LaTeX to <path>.tex)");
    s->add_flag("--timing", c.timing, "include wall-clock times (output is then not reproducible)");
  };

  std::string v, w, m, factor = "full", v1, v2, v3;
  int max_m = 0;
  std::vector<std::string> names;

  auto* st = app.add_subcommand("stable", "stable map S_{V,W}");
  st->add_option("--v", v, "first module, e.g. W(k=1,a=u)")->required();
  st->add_option("--w", w, "second module")->required();
  st->add_option("--max-m", max_m, "number of Drinfeld-Cartan operators (0 = automatic)");
  common(st);

  auto* rm = app.add_subcommand("rmatrix", "R-matrix factor on V(u) (x) W");
  rm->add_option("--v", v, "first module, carrying u")->required();
  rm->add_option("--w", w, "second module")->required();
  rm->add_option("--factor", factor, "plus, minus, zero, infinity or full")
      ->check(CLI::IsMember({"plus", "minus", "zero", "infinity", "full"}));
  common(rm);

  auto* qc = app.add_subcommand("qchar", "q-character");
  qc->add_option("--module", m, "module spec")->required();
  common(qc);

  auto* vf = app.add_subcommand("verify", "verification suites");
  std::string suite_help = "suite name or all:";
  for (const auto& [n, f] : suite_registry()) suite_help += " " + n;
  vf->add_option("--suite", names, suite_help);
  common(vf);

  auto* cp = app.add_subcommand("compose", "three-factor composition experiment");
  cp->add_option("--v1", v1)->required();
  cp->add_option("--v2", v2)->required();
  cp->add_option("--v3", v3)->required();
  common(cp);

  CLI11_PARSE(app, argc, argv);
  try {
    if (st->parsed()) return cmd_stable(c, v, w, max_m);
    if (rm->parsed()) return cmd_rmatrix(c, v, w, factor);
    if (qc->parsed()) return cmd_qchar(c, m);
    if (vf->parsed()) return cmd_verify(c, names);
    if (cp->parsed()) return cmd_compose(c, v1, v2, v3);
  } catch (const ParseError& e) {
    std::cerr << "qaff: parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qaff: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
