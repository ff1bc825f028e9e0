#include <doctest.h>

#include "autpert/dsl.hpp"
#include "autpert/runner.hpp"
#include "autpert/svg.hpp"

#include <json.hpp>

#include <random>

using namespace autpert;
using namespace autpert::dsl;

namespace {

Value eval(const std::string& text) {
  const Program p = parse("let x = " + text);
  return evaluate(p.stmts.at(0).expr, {});
}

Pos error_pos(const std::string& text) {
  try {
    const Program p = parse(text);
    run(p);
  } catch (const ParseError& e) {
    return e.pos;
  }
  FAIL("no error for: " << text);
  return {};
}

// Random expression trees for the round-trip property.
Expr random_expr(std::mt19937_64& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 2);
  Expr e;
  switch (pick(gen)) {
    case 0:
      e.kind = Expr::Kind::Number;
      e.number = std::uniform_real_distribution<double>(0, 100)(gen);
      e.imaginary = gen() % 3 == 0;
      break;
    case 1:
      e.kind = Expr::Kind::Ident;
      e.text = std::string(1, static_cast<char>('a' + gen() % 26)) + std::to_string(gen() % 10);
      break;
    case 2:
      e.kind = Expr::Kind::String;
      e.text = gen() % 2 ? "out \"q\".svg" : "x\\y";
      break;
    case 3:
    case 4: {
      e.kind = Expr::Kind::Call;
      e.text = gen() % 2 ? "disc" : "compose";
      const int n = static_cast<int>(gen() % 4);
      for (int k = 0; k < n; ++k) e.args.push_back(random_expr(gen, depth - 1));
      break;
    }
    case 5:
      e.kind = gen() % 2 ? Expr::Kind::List : Expr::Kind::Tuple;
      for (int k = 0; k < 2 + static_cast<int>(gen() % 2); ++k) e.args.push_back(random_expr(gen, depth - 1));
      if (e.kind == Expr::Kind::List && gen() % 4 == 0) e.args.clear();
      break;
    case 6:
      e.kind = Expr::Kind::Neg;
      e.args.push_back(random_expr(gen, depth - 1));
      break;
    default:
      e.kind = Expr::Kind::Binary;
      e.op = "+-*/"[gen() % 4];
      e.args.push_back(random_expr(gen, depth - 1));
      e.args.push_back(random_expr(gen, depth - 1));
      break;
  }
  return e;
}

}  // namespace

TEST_CASE("parsing the grammar examples") {
  const Program p = parse("let d = diff(disc(0,1), disc(0.3,0.1))");
  REQUIRE(p.stmts.size() == 1);
  CHECK(p.stmts[0].kind == Stmt::Kind::Let);
  CHECK(p.stmts[0].name == "d");
  const Region d = as_region(evaluate(p.stmts[0].expr, {}), {});
  CHECK(std::holds_alternative<regions::Difference>(d.node().v));

  const ConformalMap g = as_map(eval("compose(inv(mobius(0.9)), rot(1.2566), mobius(0.9))"), {});
  const auto* chain = std::get_if<maps::Composition>(&g.node().v);
  REQUIRE(chain);
  REQUIRE(chain->chain.size() == 3);
  CHECK(std::holds_alternative<maps::Inverse>(chain->chain[0].node().v));
  CHECK(std::holds_alternative<maps::Rotation>(chain->chain[1].node().v));

  const Region r = as_region(eval("fibered(product(diff(disc(0,1), disc(0,0.5)), inter(halfplane(1i, -1), halfplane(-1i, -1))), "
                                  "diff(disc(0,1), disc(0,0.5)), pj(3), const(0.9375))"),
                             {});
  const auto* f = std::get_if<regions::Fibered>(&r.node().v);
  REQUIRE(f);
  REQUIRE(f->excluded.size() == 2);
  CHECK(std::get<markers::Const>(f->excluded[1]).c == Complex(1.0 - 1.0 / 16, 0));
}

TEST_CASE("complex literals and arithmetic") {
  CHECK(as_complex(eval("-0.2+0.35i"), {}) == Complex(-0.2, 0.35));
  CHECK(as_complex(eval("0.5 \xE2\x88\x92 0.25i"), {}) == Complex(0.5, -0.25));
  CHECK(as_complex(eval("2*pi/4"), {}).real() == doctest::Approx(M_PI / 2));
  CHECK(as_point(eval("(1, 2i, -3)"), {}) == make_point({1.0, Complex(0, 2), -3.0}));
  CHECK(as_complex(eval("1e-3"), {}) == Complex(1e-3, 0));
}

TEST_CASE("comments and layout") {
  const Program p = parse("# header\nlet a = disc(0, 1)  # trailing\n\n  let b = compl(a)\n");
  REQUIRE(p.stmts.size() == 2);
  CHECK(p.stmts[1].pos.line == 4);
  CHECK(p.stmts[1].pos.col == 3);
  CHECK(parse("").stmts.empty());
}

TEST_CASE("print then parse gives the same tree") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 500; ++trial) {
    Program p;
    for (int k = 0; k < 3; ++k) {
      Stmt s;
      s.kind = Stmt::Kind::Let;
      s.name = "v" + std::to_string(k);
      s.expr = random_expr(gen, 4);
      p.stmts.push_back(s);
    }
    Stmt c;
    c.expr.kind = Expr::Kind::Call;
    c.expr.text = "hausdorff";
    c.expr.args = {random_expr(gen, 2), random_expr(gen, 2)};
    p.stmts.push_back(c);
    const std::string text = print(p);
    const Program q = parse(text);
    CHECK_MESSAGE(q == p, text);
    CHECK(print(q) == text);
  }
}

TEST_CASE("region and map spellings evaluate back to the same objects") {
  const std::vector<std::string> regions = {
      "diff(disc(0, 1), union(disc(0.3, 0.1), disc(-0.2+0.35i, 0.15)))",
      "mapped(compose(inv(mobius(0.9)), rot(1.2566370614359172), mobius(0.9)), disc(0, 1))",
      "puncture(disc(0, 1), [0.5, -0.25i])",
      "product(disc(0, 1), inter(halfplane(0+1i, -1), halfplane(0-1i, -1)))",
      "fibered(diff(disc(0, 1), disc(0.5, 0.5)), disc(0, 1), diag)",
      "quad(mapped(prodmap(id, striptodisc), ball((0, 0), 1)))",
      "mapped(unitary(2, 0, 1, 1, 0), ball((0.1, 0), 0.5))",
      "mapped(similarity(2, (1, 0-1i)), compl(ball((0, 0), 1)))",
      "mapped(compose(gj(3, 0.5), rot(1, 2), perm(1, 0, 2), ballshift(0.3, 3)), ball((0, 0, 0), 1))",
      "mapped(extended(discauto(1, 0.5-0.25i)), disc(0, 0.5))",
  };
  for (const auto& text : regions) {
    const Region r = as_region(eval(text), {});
    const std::string spelled = to_string(r);
    CHECK(to_string(as_region(eval(spelled), {})) == spelled);
  }
  CHECK(to_string(as_region(eval(regions[0]), {})) == regions[0]);
}

TEST_CASE("errors carry positions") {
  Pos p = error_pos("let x = disc(0, 1) @");
  CHECK(p.line == 1);
  CHECK(p.col == 20);
  p = error_pos("let x = disc(0, 1\nlet y = x");
  CHECK(p.line == 2);
  p = error_pos("let x = disc(0, 1)\nhausdorff(x, y)");
  CHECK(p.line == 2);
  CHECK(p.col == 14);
  p = error_pos("let x = disc(phi, 1)");
  CHECK(p.col == 14);
  p = error_pos("let x = disc(0, 1)\ncheck_order(x, 2)");
  CHECK(p.line == 2);
  p = error_pos("disc(0, 1)");
  CHECK(p.col == 1);
  p = error_pos("let s = \"open");
  CHECK(p.col == 9);
  p = error_pos("let x = rot(1, 2, 3)");
  CHECK(p.col == 9);
  p = error_pos("let x = 3x");
  CHECK(p.col == 9);
  CHECK_THROWS_AS(run(parse("example(e99)")), ParseError);
}

TEST_CASE("catalog validation errors are reported, not parse errors") {
  const RunReport r = run(parse("let d = diff(disc(0, 1), disc(0.9, 0.5))\nzj_perturb(d, 0.1, 3)"));
  REQUIRE(r.commands.size() == 1);
  CHECK(r.commands[0].status == "error");
  CHECK(r.exit_code() == 1);
  CHECK_THROWS_AS(eval("mobius(1)"), DomainError);
}

TEST_CASE("running programs") {
  const RunReport empty = run(parse(""));
  CHECK(empty.commands.empty());
  CHECK(empty.pass());
  CHECK(empty.exit_code() == 0);
  CHECK(to_kv(empty, false) == "overall=pass commands=0\n");

  RunOptions opt;
  opt.samples = 300;
  const RunReport e19 = run(parse("example(e19)\nverify_invariance(D, F(2.0))"), opt);
  REQUIRE(e19.commands.size() == 2);
  CHECK(e19.commands[1].status == "pass");
  CHECK(e19.pass());

  const RunReport zj = run(parse("let d = diff(disc(0,1), union(disc(0.3,0.1), disc(-0.2+0.35i,0.15)))\n"
                                 "zj_perturb(d, 0.1, 5)\ncheck_order(gen, 5)"),
                           opt);
  REQUIRE(zj.commands.size() == 2);
  CHECK(zj.commands[0].status == "pass");
  CHECK(zj.commands[1].status == "pass");
  CHECK(*zj.commands[1].max_deviation < 1e-9);

  const RunReport bad = run(parse("check_order(rot(2*pi/4), 3)"), opt);
  CHECK(bad.commands[0].status == "fail");
  CHECK(bad.exit_code() == 1);
}

TEST_CASE("reports are deterministic and well formed") {
  const Program p = parse("let d = diff(disc(0,1), disc(0.3,0.1))\nzj_perturb(d, 0.2, 3)\nverify_invariance(out, gen)\n"
                          "hausdorff(d, out)\nlet g = gens\npuncture_rigidify(disc(0,1), rot(pi), 0.3)\nconvergence(e211, [1, 2])");
  RunOptions opt;
  opt.samples = 200;
  const RunReport a = run(p, opt), b = run(p, opt);
  CHECK(to_kv(a, false) == to_kv(b, false));
  CHECK(to_json(a, false) == to_json(b, false));
  CHECK(a.pass());
  const auto doc = nlohmann::json::parse(to_json(a, false));
  CHECK(doc["overall"] == "pass");
  REQUIRE(doc["commands"].size() == 5);
  for (const auto& c : doc["commands"]) {
    for (const char* key : {"command", "status", "maxDeviation", "tolerance", "samples", "params"}) CHECK(c.contains(key));
    CHECK_FALSE(c.contains("elapsedMs"));
  }
  CHECK(nlohmann::json::parse(to_json(a, true))["commands"][0].contains("elapsedMs"));
  CHECK(to_kv(a, true).find("elapsedMs=") != std::string::npos);
  CHECK(doc["commands"][4]["params"]["j2.t-1.3"].get<double>() == doctest::Approx(0.65).epsilon(1e-12));
}

TEST_CASE("svg pictures") {
  SvgSummary s;
  const std::string disc = render_svg(Region::disc(0.0, 1.0), std::nullopt, 0.01, &s);
  CHECK(s.polylines == 1);
  CHECK(s.crosses == 0);
  CHECK(disc.find("viewBox=\"-1.100000 -1.100000 2.200000 2.200000\"") != std::string::npos);
  CHECK(render_svg(Region::disc(0.0, 1.0), std::nullopt, 0.01) == disc);

  const std::string punct = render_svg(Region::punctured(Region::disc(0.0, 1.0), {make_point({0.5})}), std::nullopt, 0.01, &s);
  CHECK(s.polylines == 1);
  CHECK(s.crosses == 1);

  // z = -0.7 slice of the first fibered example: the disc minus w = -0.7.
  const Region e19 = as_region(eval("fibered(diff(disc(0, 1), disc(0.5, 0.5)), disc(0, 1), diag)"), {});
  const std::string slice = render_svg(e19, make_point({-0.7}), 0.01, &s);
  CHECK(s.crosses == 1);
  // The cross is centred on w = -0.7: its first stroke runs from x - arm to x + arm.
  const auto m = slice.find("<path d=\"M");
  REQUIRE(m != std::string::npos);
  const double x0 = std::stod(slice.substr(m + 10)), x1 = std::stod(slice.substr(slice.find(" L", m) + 2));
  CHECK(0.5 * (x0 + x1) == doctest::Approx(-0.7).epsilon(1e-6));
  CHECK(s.points > 300);
  CHECK_THROWS_AS(render_svg(e19, std::nullopt, 0.01), DimensionError);
}
