#include "autpert/runner.hpp"

#include "autpert/constructions.hpp"
#include "autpert/hausdorff.hpp"
#include "autpert/svg.hpp"
#include "autpert/verify.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace autpert {

using dsl::Expr;
using dsl::ParseError;
using dsl::Pos;
using dsl::Value;

bool RunReport::pass() const {
  for (const auto& c : commands)
    if (c.status != "pass") return false;
  return true;
}

namespace {

/// Names a command binds after it runs.
const std::unordered_map<std::string, std::vector<std::string>>& command_bindings() {
  static const std::unordered_map<std::string, std::vector<std::string>> b = {
      {"zj_perturb", {"out", "gen", "gens"}},
      {"finite_group_perturb", {"out", "gen", "gens"}},
      {"puncture_rigidify", {"out", "gens"}},
      {"example", {"D", "F"}},
  };
  return b;
}

/// Command arguments taken literally as names rather than evaluated.
bool literal_name_arg(const std::string& command, std::size_t k) {
  return (k == 0 && (command == "example" || command == "convergence")) || (k == 2 && command == "torus_rank");
}

void check_expr(const Expr& e, const std::set<std::string>& bound) {
  static const std::set<std::string> constants = {"pi", "phi", "striptodisc", "id", "diag"};
  if (e.kind == Expr::Kind::Ident && !bound.count(e.text) && !constants.count(e.text))
    throw ParseError(e.pos, "unbound name '" + e.text + "'");
  for (std::size_t k = 0; k < e.args.size(); ++k) {
    if (e.kind == Expr::Kind::Call && literal_name_arg(e.text, k)) {
      if (e.args[k].kind != Expr::Kind::Ident) throw ParseError(e.args[k].pos, "expected a name");
      continue;
    }
    check_expr(e.args[k], bound);
  }
}

}  // namespace

void check_bindings(const dsl::Program& p) {
  std::set<std::string> bound;
  for (const auto& s : p.stmts) {
    check_expr(s.expr, bound);
    if (s.kind == dsl::Stmt::Kind::Let) {
      bound.insert(s.name);
    } else {
      const auto it = command_bindings().find(s.expr.text);
      if (it != command_bindings().end()) bound.insert(it->second.begin(), it->second.end());
    }
  }
}

namespace {

struct Context {
  const RunOptions& opt;
  dsl::Env env;
  std::uint64_t seed = 0;
};

struct Call {
  const Expr& e;
  Context& ctx;
  std::vector<Value> vals;

  std::size_t size() const { return e.args.size(); }
  Pos pos(std::size_t k) const { return k < e.args.size() ? e.args[k].pos : e.pos; }
  void arity(std::size_t lo, std::size_t hi) const {
    if (size() < lo || size() > hi) {
      const std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
      throw ParseError(e.pos, e.text + " takes " + want + " arguments, got " + std::to_string(size()));
    }
  }
  const Value& at(std::size_t k) const { return vals[k]; }
  const Region& region(std::size_t k) const { return dsl::as_region(vals[k], pos(k)); }
  ConformalMap map(std::size_t k) const { return dsl::as_map(vals[k], pos(k)); }
  double real(std::size_t k) const { return dsl::as_real(vals[k], pos(k)); }
  int integer(std::size_t k) const { return dsl::as_int(vals[k], pos(k)); }
  std::string name(std::size_t k) const { return e.args[k].text; }
};

double resolution_for(const Region& r, const RunOptions& opt) {
  return r.dim() == 1 ? opt.resolution : std::max(opt.resolution, opt.resolution_nd);
}

void add(CommandReport& rep, const std::string& key, ParamValue v) { rep.params.emplace_back(key, std::move(v)); }

void absorb(CommandReport& rep, const VerificationReport& v) {
  rep.status = v.pass ? "pass" : "fail";
  rep.max_deviation = v.max_deviation;
  rep.tolerance = v.tolerance;
  rep.samples = v.samples;
  if (!v.pass && !v.details.empty()) {
    add(rep, "worstPoint", format_point(v.details.front().point));
    add(rep, "worstCheck", v.details.front().what);
  }
}

void bind_construction(Context& ctx, const ConstructionResult& res, CommandReport& rep) {
  ctx.env["out"] = Value{res.output};
  dsl::List gens;
  for (const auto& g : res.generators) gens.push_back(Value{g});
  if (!res.generators.empty()) ctx.env["gen"] = Value{res.generators.front()};
  ctx.env["gens"] = Value{gens};
  for (const auto& p : res.params) add(rep, p.name, p.value);
  bool ok = true;
  double worst = 0;
  for (const auto& a : res.audits) {
    add(rep, "audit." + a.check, a.pass ? std::string("pass") : std::string("fail"));
    add(rep, "audit." + a.check + ".deviation", a.max_deviation);
    ok = ok && a.pass;
    worst = std::max(worst, a.max_deviation);
  }
  add(rep, "generators", static_cast<double>(res.generators.size()));
  if (!res.punctures.empty()) add(rep, "punctures", static_cast<double>(res.punctures.size()));
  rep.status = ok ? "pass" : "fail";
  add(rep, "output", to_string(res.output));
}

/// Default domain for map checks: an explicit region, else `out` when its
/// dimension fits, else the unit ball of the map's dimension.
Region domain_for(const Call& c, std::size_t k, const ConformalMap& f) {
  if (c.size() > k) return c.region(k);
  const auto it = c.ctx.env.find("out");
  if (it != c.ctx.env.end())
    if (const auto* r = std::get_if<Region>(&it->second.v))
      if (accepts_dim(f, r->dim())) return *r;
  const int n = min_dim(f);
  return n == 1 ? Region::disc(0.0, 1.0) : Region::ball(PointN::Zero(n), 1.0);
}

dsl::Family example_family(const Example& ex) { return dsl::Family{ex.name, ex.family}; }

Example example_by_name(const std::string& name, std::optional<int> j, Pos pos) {
  if (name == "e19") return build_example_19(j);
  if (name == "e211") return build_example_211(j, false);
  if (name == "e211b") return build_example_211(j, true);
  throw ParseError(pos, "unknown example '" + name + "' (e19, e211, e211b)");
}

using Handler = std::function<void(Call&, CommandReport&)>;

const std::unordered_map<std::string, Handler>& handlers() {
  static const std::unordered_map<std::string, Handler> h = {
      {"verify_invariance",
       [](Call& c, CommandReport& rep) {
         c.arity(2, 2);
         const Region& r = c.region(0);
         InvarianceOptions io;
         io.resolution = resolution_for(r, c.ctx.opt);
         absorb(rep, check_invariance(r, c.map(1), c.ctx.opt.samples, c.ctx.opt.tol, c.ctx.seed, io));
         add(rep, "resolution", io.resolution);
       }},
      {"hausdorff",
       [](Call& c, CommandReport& rep) {
         c.arity(2, 2);
         const double h = std::max(resolution_for(c.region(0), c.ctx.opt), resolution_for(c.region(1), c.ctx.opt));
         const HausdorffEstimate est = boundary_hausdorff(c.region(0), c.region(1), h);
         add(rep, "value", est.value);
         add(rep, "errorBound", est.error_bound);
         add(rep, "pointsA", static_cast<double>(est.points_a));
         add(rep, "pointsB", static_cast<double>(est.points_b));
         add(rep, "resolution", h);
       }},
      {"zj_perturb",
       [](Call& c, CommandReport& rep) {
         c.arity(3, 3);
         bind_construction(c.ctx, zj_perturb(c.region(0), c.real(1), c.integer(2)), rep);
       }},
      {"finite_group_perturb",
       [](Call& c, CommandReport& rep) {
         c.arity(3, 3);
         bind_construction(c.ctx, finite_group_perturb(c.region(0), c.integer(1), c.real(2)), rep);
       }},
      {"puncture_rigidify",
       [](Call& c, CommandReport& rep) {
         if (c.size() < 3) throw ParseError(c.e.pos, "puncture_rigidify takes a region, maps and eps");
         std::vector<ConformalMap> gens;
         for (std::size_t k = 1; k + 1 < c.size(); ++k) {
           if (const auto* l = std::get_if<dsl::List>(&c.at(k).v))
             for (const auto& v : *l) gens.push_back(dsl::as_map(v, c.pos(k)));
           else
             gens.push_back(c.map(k));
         }
         const Region& d = c.region(0);
         const auto group = generate_group(gens, d);
         bind_construction(c.ctx, puncture_rigidify(d, group, c.real(c.size() - 1), c.ctx.seed), rep);
       }},
      {"example",
       [](Call& c, CommandReport& rep) {
         c.arity(1, 2);
         std::optional<int> j;
         if (c.size() > 1) j = c.integer(1);
         const Example ex = example_by_name(c.name(0), j, c.pos(0));
         c.ctx.env["D"] = Value{ex.region};
         c.ctx.env["F"] = Value{example_family(ex)};
         add(rep, "name", ex.name);
         add(rep, "dim", static_cast<double>(ex.region.dim()));
         add(rep, "region", to_string(ex.region));
       }},
      {"render",
       [](Call& c, CommandReport& rep) {
         c.arity(2, 3);
         const Region& r = c.region(0);
         const std::string& file = dsl::as_string(c.at(1), c.pos(1));
         std::optional<PointN> fixed;
         if (c.size() > 2) fixed = dsl::as_point(c.at(2), c.pos(2));
         const std::filesystem::path path = std::filesystem::path(c.ctx.opt.out_dir) / file;
         if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
         // Pictures only need a few hundred samples across.
         const double h = std::max(c.ctx.opt.resolution, 2e-3 * sampling_box(r).diagonal());
         const SvgSummary s = write_svg(r, fixed, h, path.string());
         add(rep, "file", file);
         add(rep, "points", static_cast<double>(s.points));
         add(rep, "polylines", static_cast<double>(s.polylines));
         add(rep, "crosses", static_cast<double>(s.crosses));
       }},
      {"check_order",
       [](Call& c, CommandReport& rep) {
         c.arity(2, 3);
         const ConformalMap f = c.map(0);
         const Region dom = domain_for(c, 2, f);
         absorb(rep, check_order(f, c.integer(1), dom, c.ctx.opt.samples, c.ctx.opt.tol, c.ctx.seed));
       }},
      {"check_group_law",
       [](Call& c, CommandReport& rep) {
         c.arity(4, 4);
         const dsl::Family& f = dsl::as_family(c.at(0), c.pos(0));
         absorb(rep, check_group_law(f.f, c.real(1), c.real(2), c.region(3), c.ctx.opt.samples, c.ctx.opt.tol, c.ctx.seed));
       }},
      {"check_commuting",
       [](Call& c, CommandReport& rep) {
         c.arity(3, 3);
         absorb(rep, check_commuting(c.map(0), c.map(1), c.region(2), c.ctx.opt.samples, c.ctx.opt.tol, c.ctx.seed));
       }},
      {"torus_rank",
       [](Call& c, CommandReport& rep) {
         c.arity(2, 3);
         const Region& r = c.region(0);
         const PointN p = dsl::as_point(c.at(1), c.pos(1));
         const int n = r.dim();
         std::vector<MapFamily> fams;
         for (int k = 0; k < n; ++k) fams.push_back([k](double t) { return ConformalMap::rotation(t, k); });
         if (c.size() > 2) {
           if (c.e.args[2].kind != Expr::Kind::Ident || c.e.args[2].text != "dependent")
             throw ParseError(c.pos(2), "expected 'dependent'");
           fams.push_back([n](double t) {
             std::vector<ConformalMap> chain;
             for (int k = 0; k < n; ++k) chain.push_back(ConformalMap::rotation(t, k));
             return ConformalMap::compose(chain);
           });
         }
         const RankWitness w = torus_rank_witness(r, fams, p, c.ctx.opt.samples, c.ctx.seed);
         add(rep, "k", static_cast<double>(w.k));
         add(rep, "n", static_cast<double>(w.n));
         add(rep, "families", static_cast<double>(fams.size()));
         for (std::size_t k = 0; k < w.singular_values.size(); ++k) add(rep, "sigma" + std::to_string(k), w.singular_values[k]);
         rep.status = w.verified && w.k <= w.n ? "pass" : "fail";
       }},
      {"convergence",
       [](Call& c, CommandReport& rep) {
         if (c.size() < 2) throw ParseError(c.e.pos, "convergence takes an example name and indices");
         const std::string name = c.name(0);
         if (name != "e211" && name != "e211b") throw ParseError(c.pos(0), "convergence is defined for e211 and e211b");
         const bool bounded = name == "e211b";
         std::vector<int> js;
         for (std::size_t k = 1; k < c.size(); ++k) {
           if (const auto* l = std::get_if<dsl::List>(&c.at(k).v))
             for (const auto& v : *l) js.push_back(dsl::as_int(v, c.pos(k)));
           else
             js.push_back(c.integer(k));
         }
         for (int j : js)
           if (j < 1) throw ParseError(c.e.pos, "indices must be >= 1");
         const std::vector<double> ts = {0.7, -1.3};
         const Example limit = build_example_211(std::nullopt, bounded);
         const auto pts = interior_sample(limit.region, c.ctx.opt.samples, c.ctx.seed);
         const IndexedFamily seq = [bounded](int j, double t) { return build_example_211(j, bounded).family(t); };
         const auto rows = check_convergence(seq, limit.family, js, ts, pts);
         // G_j -> G at the rate |t| / j.  In the bounded picture the strip map
         // has derivative at most pi/2 on the strip, which bounds the rate.
         double worst = 0;
         for (const auto& row : rows) {
           const std::string key = "j" + std::to_string(row.j) + ".t" + format_double(row.t);
           add(rep, key, row.deviation);
           const double rate = std::abs(row.t) / row.j;
           worst = std::max(worst, bounded ? std::max(0.0, row.deviation - 0.5 * M_PI * rate) : std::abs(row.deviation - rate));
         }
         rep.max_deviation = worst;
         rep.tolerance = 1e-12;
         rep.samples = pts.size();
         rep.status = worst <= 1e-12 ? "pass" : "fail";
       }},
  };
  return h;
}

}  // namespace

RunReport run(const dsl::Program& p, const RunOptions& opt) {
  check_bindings(p);
  RunReport report;
  Context ctx{opt, {}, 0};
  std::uint64_t index = 0;
  for (const auto& s : p.stmts) {
    if (s.kind == dsl::Stmt::Kind::Let) {
      ctx.env[s.name] = dsl::evaluate(s.expr, ctx.env);
      continue;
    }
    CommandReport rep;
    rep.command = dsl::print(s);
    ctx.seed = opt.seed + 0x9E3779B97F4A7C15ull * ++index;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Call call{s.expr, ctx, {}};
      for (std::size_t k = 0; k < s.expr.args.size(); ++k)
        call.vals.push_back(literal_name_arg(s.expr.text, k) ? Value{s.expr.args[k].text}
                                                             : dsl::evaluate(s.expr.args[k], ctx.env));
      handlers().at(s.expr.text)(call, rep);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      rep.status = "error";
      rep.message = e.what();
    }
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.commands.push_back(std::move(rep));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

std::string quoted(const std::string& s) {
  bool plain = !s.empty();
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '=' || c == '\\') plain = false;
  if (plain) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string kv_value(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return quoted(std::get<std::string>(v));
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string to_kv(const RunReport& r, bool timing) {
  std::ostringstream os;
  for (const auto& c : r.commands) {
    os << "command=" << quoted(c.command) << " status=" << c.status;
    if (c.max_deviation) os << " maxDeviation=" << format_double(*c.max_deviation);
    if (c.tolerance) os << " tolerance=" << format_double(*c.tolerance);
    if (c.samples) os << " samples=" << *c.samples;
    if (timing) os << " elapsedMs=" << format_double(std::round(c.elapsed_ms * 1000) / 1000);
    for (const auto& [k, v] : c.params) os << " " << k << "=" << kv_value(v);
    if (!c.message.empty()) os << " message=" << quoted(c.message);
    os << "\n";
  }
  os << "overall=" << (r.pass() ? "pass" : "fail") << " commands=" << r.commands.size() << "\n";
  return os.str();
}

std::string to_json(const RunReport& r, bool timing) {
  nlohmann::ordered_json doc;
  doc["overall"] = r.pass() ? "pass" : "fail";
  doc["commands"] = nlohmann::ordered_json::array();
  for (const auto& c : r.commands) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["status"] = c.status;
    j["maxDeviation"] = c.max_deviation ? json_number(*c.max_deviation) : nlohmann::ordered_json();
    j["tolerance"] = c.tolerance ? json_number(*c.tolerance) : nlohmann::ordered_json();
    j["samples"] = c.samples ? nlohmann::ordered_json(*c.samples) : nlohmann::ordered_json();
    if (timing) j["elapsedMs"] = c.elapsed_ms;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.params) {
      if (const auto* d = std::get_if<double>(&v))
        params[k] = json_number(*d);
      else
        params[k] = std::get<std::string>(v);
    }
    j["params"] = params;
    if (!c.message.empty()) j["message"] = c.message;
    doc["commands"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

}  // namespace autpert
