#include "commands.hpp"

#include <htva/brst.hpp>
#include <htva/conformal.hpp>
#include <htva/parser.hpp>
#include <htva/weyl.hpp>
#include <htva/zhu.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace htva::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string field_error(const std::string& field, const std::string& what) {
  return "field '" + field + "': " + what;
}

long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw InputError(field_error(field, "expected an integer"));
  return v.get<long>();
}

Rational as_rational(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw InputError(field_error(field, "expected a rational string \"p/q\" or an integer"));
  try {
    return parse_rational(v.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(field_error(field, e.what()));
  }
}

RatVec as_rational_vector(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field_error(field, "expected an array"));
  RatVec out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(as_rational(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<size_t, size_t> line_column(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<int> parse_chart(const std::string& s, int N) {
  std::vector<int> J;
  for (const auto& tok : split_list(s)) {
    Rational q = parse_rational(tok);
    if (q.get_den() != 1 || q < 1 || q > N) throw InputError("chart index \"" + tok + "\" out of range 1.." + std::to_string(N));
    J.push_back(static_cast<int>(q.get_num().get_si()) - 1);
  }
  std::sort(J.begin(), J.end());
  if (std::adjacent_find(J.begin(), J.end()) != J.end()) throw InputError("chart has repeated indices");
  return J;
}

RatVec parse_lambda(const std::string& s) {
  RatVec out;
  for (const auto& tok : split_list(s)) out.push_back(parse_rational(tok));
  return out;
}

json rat(const Rational& q) { return to_string(q); }

json rat_vec(const RatVec& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(rat(q));
  return a;
}

json int_vec(const IntVec& v) {
  json a = json::array();
  for (long x : v) a.push_back(x);
  return a;
}

json int_mat(const IntMat& m) {
  json a = json::array();
  for (const auto& r : m) a.push_back(int_vec(r));
  return a;
}

json sites(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

json grading(const FockState& s) {
  Gradings g = gradings(s);
  json o;
  o["homogeneous"] = g.homogeneous;
  if (g.homogeneous) {
    o["conformal"] = g.conf2;
    o["s_weight"] = g.s2;
    o["ghost"] = g.ghost;
  }
  o["doubled"] = true;
  return o;
}

json strings(const std::vector<std::string>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

struct Session {
  const Arguments& args;
  Problem problem;
  bool mismatch = false;

  int w2() const {
    Rational W = Rational(2);
    if (args.max_weight)
      W = parse_rational(*args.max_weight);
    else if (problem.options.max_weight)
      W = *problem.options.max_weight;
    Rational d = 2 * W;
    if (d.get_den() != 1 || d < 0) throw InputError("max weight must be a nonnegative half-integer");
    return static_cast<int>(d.get_num().get_si());
  }

  std::optional<std::vector<int>> chart() const {
    if (args.chart) return parse_chart(*args.chart, problem.input.N);
    return problem.options.localization_chart;
  }

  std::optional<RatVec> lambda() const {
    if (args.lambda) return parse_lambda(*args.lambda);
    return problem.options.lambda_shift;
  }

  void guard(const FockState& s, const std::string& what) const {
    auto g = problem.options.hbar_truncation_guard;
    if (g && s.max_hbar_degree() > *g)
      throw InputError(what + " has hbar degree " + std::to_string(s.max_hbar_degree()) + " above hbar_truncation_guard " +
                       std::to_string(*g));
  }

  FockState element(const std::string& text, const VertexContext& vctx) const {
    FockState s = parse_element(text, vctx);
    guard(s, "element \"" + text + "\"");
    return s;
  }
};

json analyze(Session& s) {
  const HypertoricInput& in = s.problem.input;
  json r;
  r["M"] = in.M;
  r["N"] = in.N;
  ValidationReport v = validate(in);
  r["rank_ok"] = v.rank_ok;
  r["gcd_ok"] = v.gcd_ok;
  r["unimodular"] = v.unimodular;
  json notes = json::array();
  auto attempt = [&](const std::string& key, const std::function<json()>& f) {
    try {
      r[key] = f();
    } catch (const DomainError& e) {
      r[key] = nullptr;
      notes.push_back(key + ": " + e.what());
    }
  };
  attempt("generic", [&] { return json(is_generic(in)); });
  std::vector<Wall> walls;
  attempt("walls", [&] {
    walls = git_walls(in);
    return json(walls.size());
  });
  json wl = json::array();
  for (const auto& w : walls) wl.push_back({{"columns", sites(w.spanning)}, {"normal", int_vec(w.normal)}});
  r["wall_list"] = wl;
  attempt("charts", [&] { return json(enumerate_charts(in).size()); });
  r["gram"] = int_mat(gram_matrix(in));
  attempt("lambda0", [&] { return int_mat(lattice_lambda0(in)); });
  attempt("beta", [&] {
    json b = json::array();
    for (int k = 0; k < in.N; ++k) b.push_back(rat_vec(euler_beta(in, k)));
    return b;
  });
  attempt("weyl_order", [&] { return json(weyl_group(in).size()); });
  r["notes"] = notes;
  return r;
}

json chart_json(const BRSTContext& ctx, const Chart& c, Session& s) {
  json o;
  o["J"] = sites(c.J);
  o["J1"] = sites(c.J1);
  o["J2"] = sites(c.J2);
  o["alpha"] = rat_vec(c.alpha);
  o["lambda"] = int_mat(c.lambda);
  o["t_exponents"] = int_mat(c.t_exponents);
  o["free_sites"] = sites(c.free_sites);
  ChartCheck chk = chart_check(ctx, c);
  json gens = json::array();
  for (const auto& g : generator_candidates(ctx, c)) {
    bool closed = differential(ctx, g.state).is_zero();
    if (!closed) s.mismatch = true;
    gens.push_back({{"name", g.name}, {"element", to_expression(g.state)}, {"closed", closed}});
  }
  o["generators"] = gens;
  o["local_ope_checks"] = chk.ope_checks;
  o["local_ope_ok"] = chk.ok();
  o["mismatches"] = strings(chk.mismatches);
  if (!chk.ok()) s.mismatch = true;
  return o;
}

json charts(Session& s) {
  const HypertoricInput& in = s.problem.input;
  require_unimodular(in);
  BRSTContext ctx = BRSTContext::make(in);
  std::vector<Chart> list;
  if (auto J = s.chart()) {
    if (static_cast<int>(J->size()) != in.M) throw InputError("chart must have M=" + std::to_string(in.M) + " indices");
    list.push_back(chart_for(in, *J));
  } else {
    list = enumerate_charts(in);
  }
  json a = json::array();
  for (const auto& c : list) a.push_back(chart_json(ctx, c, s));
  return {{"count", list.size()}, {"charts", a}};
}

json ope_command(Session& s) {
  if (s.args.elements.size() != 2) throw InputError("ope needs exactly two --element arguments");
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  FockState a = s.element(s.args.elements[0], ctx.vctx);
  FockState b = s.element(s.args.elements[1], ctx.vctx);
  json poles = json::array();
  for (const auto& [order, st] : ope(ctx.vctx, a, b)) {
    s.guard(st, "pole of order " + std::to_string(order));
    poles.push_back({{"order", order}, {"coefficient", to_expression(st)}});
  }
  return {{"a", to_expression(a)}, {"b", to_expression(b)}, {"a_gradings", grading(a)}, {"b_gradings", grading(b)},
          {"poles", poles}};
}

json brst_check(Session& s) {
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  int max_w2 = s.w2();
  int max_m2 = max_w2 + 2;
  ComplexCheck c = complex_check(ctx, max_w2, max_m2);
  bool comoments_commute = true;
  for (int i = 0; i < ctx.input.M; ++i)
    for (int j = 0; j < ctx.input.M; ++j)
      if (!ope(ctx.vctx, ctx.comoments[i], ctx.comoments[j]).empty()) comoments_commute = false;
  json neg = json::array();
  for (const auto& [k, d] : c.negative_ghost_dims)
    neg.push_back({{"w", std::get<0>(k)}, {"m", std::get<1>(k)}, {"g", std::get<2>(k)}, {"dim_H", d}, {"doubled", true}});
  json r;
  r["max_weight"] = {{"w", max_w2}, {"m", max_m2}, {"doubled", true}};
  r["d_squared_zero"] = c.d_squared_zero();
  r["negative_ghost_vanishing"] = c.negative_ghost_vanishing();
  r["charge_consistent"] = c.charge_failures == 0;
  r["double_complex"] = c.split_failures == 0;
  r["classical_consistent"] = c.classical_consistent();
  r["comoment_ope_trivial"] = comoments_commute;
  r["pieces"] = c.pieces;
  r["monomials"] = c.monomials;
  r["negative_ghost_pieces"] = neg;
  r["mismatches"] = strings(c.mismatches);
  if (!c.d_squared_zero() || !c.negative_ghost_vanishing() || !c.quantum_consistent() || !c.classical_consistent() ||
      !comoments_commute)
    s.mismatch = true;
  return r;
}

json cohomology_command(Session& s) {
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  int max_w2 = s.w2();
  int max_m2 = max_w2 + 2;
  json pieces = json::array();
  for (int w2 = 0; w2 <= max_w2; ++w2) {
    int glo = -w2 / 2, ghi = ctx.input.M * (w2 / 2 + 1);
    if (s.args.ghost) glo = ghi = *s.args.ghost;
    for (int g = glo; g <= ghi; ++g)
      for (int m2 = w2 % 2; m2 <= max_m2; m2 += 2) {
        GradedPiece p = basis_of_piece(ctx, w2, m2, g, false);
        if (p.basis.empty()) continue;
        CohomologyResult h = cohomology(ctx, w2, m2, g);
        json o = {{"w", w2}, {"m", m2}, {"g", g}, {"doubled", true}, {"dim", p.basis.size()},
                  {"dim_kernel", h.dim_kernel}, {"dim_image_in", h.dim_image_in}, {"dim_H", h.dim_H}};
        if (s.args.representatives) {
          json reps = json::array();
          for (const auto& st : h.basis_of_H) reps.push_back(to_expression(st));
          o["representatives"] = reps;
        }
        pieces.push_back(o);
      }
  }
  return {{"pieces", pieces}};
}

json virasoro(Session& s) {
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  RatVec lambda = s.lambda().value_or(RatVec(ctx.input.N, Rational(0)));
  if (static_cast<int>(lambda.size()) != ctx.input.N)
    throw InputError("lambda shift has length " + std::to_string(lambda.size()) + ", expected N=" + std::to_string(ctx.input.N));
  ConformalVector w = build_omega(ctx, lambda);
  VirasoroReport v = virasoro_check(ctx.vctx, w.state);
  Rational expected = ratio(-(ctx.input.M + ctx.input.N), 2);
  bool match = v.ok(expected) && v.central_charge == w.central_charge;
  if (!match) s.mismatch = true;
  json r;
  r["central_charge"] = rat(v.central_charge);
  r["quartic"] = rat(v.quartic);
  r["match"] = match;
  r["expected_central_charge"] = rat(w.central_charge);
  r["quartic_scalar"] = v.quartic_scalar;
  r["cubic_zero"] = v.cubic_zero;
  r["quadratic_matches"] = v.quadratic_matches;
  r["linear_matches"] = v.linear_matches;
  r["no_higher_poles"] = v.no_higher_poles;
  r["lambda"] = rat_vec(lambda);
  r["omega"] = to_expression(w.state);
  r["mismatches"] = strings(v.mismatches);
  return r;
}

json dims(const std::map<int, int>& m) {
  json a = json::array();
  for (const auto& [d, n] : m) a.push_back({{"degree", d}, {"dim", n}, {"doubled", true}});
  return a;
}

json zhu_compare(Session& s) {
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  int W2 = s.w2();
  ZhuCompareReport z = compare_zhu_weyl(ctx, W2);
  ZhuSetup setup = zhu_setup(ctx, W2);
  PoissonReport p = c2_poisson_check(setup, 20, 1);
  json comm = json::array();
  for (const auto& c : z.commutators) {
    json o = {{"a", c.a}, {"b", c.b}, {"formula_matches", c.formula_matches}};
    if (c.literal_checked) o["literal_matches"] = c.literal_matches;
    if (c.eigen_checked) o["eigen_matches"] = c.eigen_matches;
    o["bracket"] = c.va;
    o["weyl"] = c.weyl;
    comm.push_back(o);
  }
  json r;
  r["commutators_match"] = z.commutators_ok();
  r["c2_dims_match"] = z.dims_ok();
  r["poisson_match"] = p.ok();
  r["commutators"] = comm;
  r["c2_dims"] = dims(z.c2_dims);
  r["classical_dims"] = dims(z.classical_dims);
  r["invariant_dims"] = dims(z.invariant_dims);
  r["poisson"] = {{"pairs", p.pairs},
                  {"symbol_failures", p.symbol_failures},
                  {"reduced_failures", p.reduced_failures},
                  {"derivative_checks", p.derivative_checks},
                  {"derivative_failures", p.derivative_failures}};
  json mm = strings(z.mismatches);
  for (const auto& m : p.mismatches) mm.push_back(m);
  r["mismatches"] = mm;
  if (!z.commutators_ok() || !z.dims_ok() || !p.ok()) s.mismatch = true;
  return r;
}

json wakimoto(Session& s) {
  if (s.args.elements.empty() || s.args.elements.size() > 2)
    throw InputError("wakimoto needs --element <a> and optionally --element <v>");
  if (!s.args.mode) throw InputError("wakimoto needs --mode <n>");
  BRSTContext ctx = BRSTContext::make(s.problem.input);
  RatVec lambda = s.args.lambda ? parse_lambda(*s.args.lambda) : RatVec(ctx.input.M, Rational(0));
  FockState a = s.element(s.args.elements[0], ctx.vctx);
  FockState v = s.args.elements.size() == 2 ? s.element(s.args.elements[1], ctx.vctx) : FockState::vacuum();
  FockState out = fock_action(ctx.vctx, a, *s.args.mode, lambda, v);
  return {{"a", to_expression(a)}, {"mode", *s.args.mode}, {"highest_weight", rat_vec(lambda)},
          {"vector", to_expression(v)}, {"result", to_expression(out)}};
}

const std::map<std::string, std::function<json(Session&)>>& dispatch_table() {
  static const std::map<std::string, std::function<json(Session&)>> t = {
      {"analyze", analyze},       {"charts", charts},           {"ope", ope_command},
      {"brst-check", brst_check}, {"cohomology", cohomology_command}, {"virasoro", virasoro},
      {"zhu-compare", zhu_compare}, {"wakimoto", wakimoto}};
  return t;
}

json echo(const Arguments& a) {
  json o;
  if (a.max_weight) o["max_weight"] = *a.max_weight;
  if (a.chart) o["chart"] = *a.chart;
  if (a.lambda) o["lambda"] = *a.lambda;
  if (!a.elements.empty()) o["elements"] = strings(a.elements);
  if (a.mode) o["mode"] = *a.mode;
  if (a.ghost) o["ghost"] = *a.ghost;
  if (a.representatives) o["representatives"] = true;
  return o.is_null() ? json::object() : o;
}

}  // namespace

Problem parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    throw InputError("problem file: JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  if (!doc.is_object()) throw InputError("problem file: top level must be an object");
  for (const auto& [k, v] : doc.items())
    if (k != "delta" && k != "stability" && k != "options") throw InputError(field_error(k, "unknown field"));
  if (!doc.contains("delta")) throw InputError(field_error("delta", "missing"));
  if (!doc.contains("stability")) throw InputError(field_error("stability", "missing"));
  const json& d = doc["delta"];
  if (!d.is_array() || d.empty()) throw InputError(field_error("delta", "expected a nonempty array of rows"));
  IntMat delta;
  for (size_t i = 0; i < d.size(); ++i) {
    std::string f = "delta[" + std::to_string(i) + "]";
    if (!d[i].is_array()) throw InputError(field_error(f, "expected an array"));
    IntVec row;
    for (size_t j = 0; j < d[i].size(); ++j) row.push_back(as_integer(d[i][j], f + "[" + std::to_string(j) + "]"));
    delta.push_back(row);
  }
  RatVec stab = as_rational_vector(doc["stability"], "stability");
  Problem p;
  try {
    p.input = HypertoricInput::make(delta, stab);
  } catch (const InputError& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
  if (doc.contains("options")) {
    const json& o = doc["options"];
    if (!o.is_object()) throw InputError(field_error("options", "expected an object"));
    for (const auto& [k, v] : o.items()) {
      std::string f = "options." + k;
      if (k == "max_weight") {
        p.options.max_weight = as_rational(v, f);
      } else if (k == "hbar_truncation_guard") {
        long g = as_integer(v, f);
        if (g < 0) throw InputError(field_error(f, "must be nonnegative"));
        p.options.hbar_truncation_guard = static_cast<int>(g);
      } else if (k == "localization_chart") {
        if (!v.is_array() || static_cast<int>(v.size()) != p.input.M)
          throw InputError(field_error(f, "expected an array of M=" + std::to_string(p.input.M) + " site indices"));
        std::vector<int> J;
        for (size_t i = 0; i < v.size(); ++i) {
          long x = as_integer(v[i], f + "[" + std::to_string(i) + "]");
          if (x < 1 || x > p.input.N) throw InputError(field_error(f + "[" + std::to_string(i) + "]", "site out of range"));
          J.push_back(static_cast<int>(x) - 1);
        }
        std::sort(J.begin(), J.end());
        p.options.localization_chart = J;
      } else if (k == "lambda_shift") {
        RatVec l = as_rational_vector(v, f);
        if (static_cast<int>(l.size()) != p.input.N)
          throw InputError(field_error(f, "expected N=" + std::to_string(p.input.N) + " entries"));
        p.options.lambda_shift = l;
      } else {
        throw InputError(field_error(f, "unknown option"));
      }
    }
  }
  p.hash = fnv1a64(text);
  return p;
}

Problem parse_problem(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read problem file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_problem_text(ss.str());
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze",    "charts",   "ope",         "brst-check",
                                                 "cohomology", "virasoro", "zhu-compare", "wakimoto"};
  return names;
}

int run(const Arguments& args, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  json rep;
  rep["command"] = args.command;
  rep["arguments"] = echo(args);
  rep["version"] = kVersion;
  rep["input_hash"] = nullptr;
  int code = kOk;
  try {
    auto it = dispatch_table().find(args.command);
    if (it == dispatch_table().end()) throw InputError("unknown command " + args.command);
    Session s{args, parse_problem(args.problem)};
    rep["input_hash"] = s.problem.hash;
    json results = it->second(s);
    code = s.mismatch ? kMismatch : kOk;
    rep["status"] = s.mismatch ? "mismatch" : "ok";
    rep["results"] = results;
  } catch (const InputError& e) {
    code = kInputError;
    rep["status"] = "input_error";
    rep["error"] = e.what();
  } catch (const DomainError& e) {
    code = kInputError;
    rep["status"] = "refused";
    rep["error"] = e.what();
  }
  if (code == kInputError) err << "htva: " << rep["error"].get<std::string>() << "\n";
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  rep["timing"] = {{"elapsed_ms", ms}};
  std::string text = rep.dump(2) + "\n";
  out << text;
  if (args.json_out) {
    std::ofstream f(*args.json_out, std::ios::binary);
    if (!f) {
      err << "htva: cannot write " << *args.json_out << "\n";
      return kInputError;
    }
    f << text;
  }
  return code;
}

}  // namespace htva::cli
