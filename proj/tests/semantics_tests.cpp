#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "stiso/iso.hpp"
#include "stiso/semantics.hpp"
#include "testutil.hpp"

using namespace stiso;

TEST_CASE("expression evaluation") {
  CHECK(eval_expr(parse_expression("1 == 2")) == Value::boolean(false));
  CHECK(eval_expr(parse_expression("3 + 4")) == Value::integer(7));
  CHECK(eval_expr(parse_expression("()")) == Value::unit());
  CHECK_THROWS_AS(eval_expr(evar("x")), EvalError);
  CHECK_THROWS_AS(
      eval_expr(eadd(elit(Value::integer(std::numeric_limits<std::int64_t>::max())),
                     elit(Value::integer(1)))),
      EvalError);
}

TEST_CASE("canonical parallel lists") {
  ParList xs = canon(parse_process("0 || 0"));
  REQUIRE(xs.size() == 1);
  CHECK(xs[0]->kind == Proc::Kind::Idle);

  xs = canon(ppar(parse_process("l#inl.0"),
                  ppar(parse_process("r#inl.0"), parse_process("0"))));
  CHECK(xs.size() == 3);

  // 0 || P keeps the idle: the congruence has no 0||P = P rule.
  xs = canon(parse_process("0 || r!(1).0"));
  REQUIRE(xs.size() == 2);
  CHECK(xs[0]->kind == Proc::Kind::Idle);

  for (std::uint64_t s = 0; s < 200; ++s) {
    ProcPtr p = testutil::random_process(s);
    CHECK(alpha_eq(canon_process(canon_process(p)), canon_process(p)));
  }
}

TEST_CASE("one-step reduction") {
  StepSet ss = step(parse_process("r!(5).0 || l?(x:int).r!(x).0"));
  REQUIRE(ss.steps.size() == 1);
  CHECK(ss.steps[0].rule == "r-comm 1");
  CHECK(congruent(ss.steps[0].next, parse_process("0 || r!(5).0")));

  ss = step(parse_process("if true then {l#inl.0} else {0}"));
  REQUIRE(ss.steps.size() == 1);
  CHECK(ss.steps[0].rule == "r-cond");
  CHECK(congruent(ss.steps[0].next, parse_process("l#inl.0")));

  ss = step(parse_process("r#inl.0 || case l { inl: 0, inr: r!(1).0 }"));
  REQUIRE(ss.steps.size() == 1);
  CHECK(ss.steps[0].rule == "r-choice 1");
  CHECK(congruent(ss.steps[0].next, parse_process("0 || 0")));
}

TEST_CASE("correctness decision") {
  CHECK(is_correct(pidle()).correct);
  CHECK(is_correct(parse_process("r!(1).0 || l?(x:int).0")).correct);

  // A context that checks the transmitted value: the identity passes, the
  // made-up-value composition jams.
  ProcPtr id_int = id_process(parse_type("!int.end"));
  ProcPtr hatA = parse_process("l?(x:int).0");
  ProcPtr hatB = parse_process("r!(0).0");
  ProcPtr L = parse_process("r!(0+1).0");
  ProcPtr R = parse_process("l?(x:int).if x == 0+1 then {0} else {r!(false).0}");
  CHECK(is_correct(ppar(L, ppar(id_int, R))).correct);

  Correctness c = is_correct(ppar(L, ppar(ppar(hatA, hatB), R)));
  REQUIRE_FALSE(c.correct);
  REQUIRE(c.witness);
  REQUIRE_FALSE(c.witness->entries.empty());
  ParList stuck = canon(c.witness->entries.back().state);
  REQUIRE(stuck.size() == 2);
  CHECK(stuck[0]->kind == Proc::Kind::Idle);
  CHECK(alpha_eq(stuck[1], parse_process("r!(false).0")));
}

TEST_CASE("typed generation inhabits its interface deterministically") {
  for (std::uint64_t s = 0; s < 50; ++s)
    CHECK(alpha_eq(generate_typed({tend(), tend()}, s, 8),
                   generate_typed({tend(), tend()}, s, 8)));
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    TypePtr l = testutil::random_type(rng, 4), r = testutil::random_type(rng, 4);
    ProcPtr p = generate_typed({l, r}, rng(), 10);
    CHECK(checks_at(p, {l, r}));
  }
  ProcPtr p = generate_typed({parse_type("?int.end"), parse_type("!int.end")}, 3, 6);
  CHECK(checks_at(p, {parse_type("?int.end"), parse_type("!int.end")}));
}

TEST_CASE("strong normalization within the size bound") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    ProcPtr p = testutil::random_process(s);
    std::size_t bound = proc_size(p), n = 0;
    ProcPtr cur = p;
    while (true) {
      StepSet ss = step(cur);
      if (ss.steps.empty()) break;
      cur = ss.steps.front().next;
      REQUIRE(++n <= bound);
    }
  }
}

TEST_CASE("subject reduction on generated processes") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 150; ++k) {
    TypePtr l = testutil::random_type(rng, 3), r = testutil::random_type(rng, 3);
    ProcPtr p = generate_typed({l, r}, rng(), 8);
    for (const Step& s : step(p).steps) CHECK(checks_at(s.next, {l, r}));
  }
}

TEST_CASE("equivalence refutation") {
  // Processes performing the same actions in different orders are equivalent.
  ProcPtr p = parse_process("l?(x:int).r!(true).l?(y:unit).0");
  ProcPtr q = parse_process("l?(x:int).l?(y:unit).r!(true).0");
  InterfacePair iface{parse_type("?int.?unit.end"), parse_type("!bool.end")};
  REQUIRE(checks_at(p, iface));
  REQUIRE(checks_at(q, iface));
  CHECK_FALSE(equiv_refute(p, q, iface, 200, 5).has_value());

  // Reflexivity never refutes.
  CHECK_FALSE(equiv_refute(p, p, iface, 100, 6).has_value());

  // The identity is distinguishable from a process making up the value.
  ProcPtr id_int = id_process(parse_type("!int.end"));
  ProcPtr madeup = parse_process("l?(x:int).0 || r!(0).0");
  InterfacePair i2{parse_type("?int.end"), parse_type("!int.end")};
  auto r = equiv_refute(id_int, madeup, i2, 500, 7);
  REQUIRE(r.has_value());
  CHECK(r->p_correct != r->q_correct);
}

TEST_CASE("trace serialization") {
  Correctness c = is_correct(parse_process("r!(false).0"));
  REQUIRE_FALSE(c.correct);
  std::string t = c.witness->text();
  CHECK(t.find("0. r!(false).0") != std::string::npos);
}
