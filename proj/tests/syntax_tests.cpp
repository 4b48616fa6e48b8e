#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stiso/syntax.hpp"
#include "testutil.hpp"

using namespace stiso;

TEST_CASE("parse_type builds the expected trees") {
  TypePtr t = parse_type("end");
  CHECK(t->kind == Type::Kind::End);

  t = parse_type("!int.!bool.end");
  REQUIRE(t->kind == Type::Kind::Out);
  CHECK(t->payload == Base::Int);
  REQUIRE(t->a->kind == Type::Kind::Out);
  CHECK(t->a->payload == Base::Bool);
  CHECK(t->a->a->kind == Type::Kind::End);

  t = parse_type("!int.end (+) ?bool.end");
  REQUIRE(t->kind == Type::Kind::Select);
  CHECK(t->a->kind == Type::Kind::Out);
  CHECK(t->b->kind == Type::Kind::In);
  CHECK(t->b->payload == Base::Bool);
}

TEST_CASE("parse_process builds the expected trees") {
  CHECK(parse_process("0")->kind == Proc::Kind::Idle);

  ProcPtr p = parse_process("l?(x:int).l?(y:bool).r!(y).r!(x).0");
  REQUIRE(p->kind == Proc::Kind::Input);
  CHECK(p->chan == Chan::L);
  CHECK(p->var == "x");
  CHECK(p->base == Base::Int);
  REQUIRE(p->a->kind == Proc::Kind::Input);
  REQUIRE(p->a->a->kind == Proc::Kind::Output);
  CHECK(p->a->a->chan == Chan::R);

  p = parse_process("case l { inl: 0, inr: 0 }");
  REQUIRE(p->kind == Proc::Kind::BranchP);
  CHECK(p->chan == Chan::L);
  CHECK(p->a->kind == Proc::Kind::Idle);
  CHECK(p->b->kind == Proc::Kind::Idle);
}

TEST_CASE("printers produce the documented concrete syntax") {
  CHECK(print_type(tend()) == "end");
  CHECK(print_type(tout(Base::Int, tout(Base::Bool, tend()))) ==
        "!int.!bool.end");
  CHECK(print_process(pbranch(Chan::L, pidle(), pidle())) ==
        "case l { inl: 0, inr: 0 }");
}

TEST_CASE("duality swaps directions and choices") {
  CHECK(type_equal(dual(tend()), tend()));
  CHECK(print_type(dual(parse_type("!int.?bool.end"))) == "?int.!bool.end");
  CHECK(print_type(dual(parse_type("end + end"))) == "end (+) end");
}

TEST_CASE("substitution is capture-avoiding and respects shadowing") {
  ProcPtr p = substitute(parse_process("r!(x).0"), "x", Value::integer(5));
  CHECK(alpha_eq(p, parse_process("r!(5).0")));

  ProcPtr q = parse_process("l?(x:int).r!(x).0");
  CHECK(alpha_eq(substitute(q, "x", Value::integer(5)), q));

  ProcPtr c = substitute(parse_process("if x == 1 then {0} else {r!(x).0}"),
                         "x", Value::integer(1));
  CHECK(alpha_eq(c, parse_process("if 1 == 1 then {0} else {r!(1).0}")));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(parse_process("l?(x:int).r!(x).0"),
                 parse_process("l?(y:int).r!(y).0")));
  CHECK_FALSE(alpha_eq(parse_process("l?(x:int).r!(x).0"),
                       parse_process("l?(x:int).r!(x+1).0")));
  CHECK(alpha_eq(pidle(), pidle()));
}

TEST_CASE("channel involution") {
  CHECK(co(co(Chan::L)) == Chan::L);
  CHECK(co(co(Chan::R)) == Chan::R);
  CHECK(co(Chan::L) == Chan::R);
}

TEST_CASE("dual is an involution on random types") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    TypePtr t = testutil::random_type(rng, 5);
    CHECK(type_equal(dual(dual(t)), t));
  }
}

TEST_CASE("type parse/print round trip on random types") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    TypePtr t = testutil::random_type(rng, 5);
    CHECK(type_equal(parse_type(print_type(t)), t));
  }
}

TEST_CASE("process parse/print round trip on random processes") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    ProcPtr p = testutil::random_process(s);
    CHECK(alpha_eq(parse_process(print_process(p)), p));
  }
}

TEST_CASE("substitute is the identity when the variable is not free") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    ProcPtr p = testutil::random_process(s);
    if (!free_vars(p).count("zz"))
      CHECK(alpha_eq(substitute(p, "zz", Value::integer(3)), p));
  }
}

TEST_CASE("parse errors report position and expectation") {
  CHECK_THROWS_AS(parse_type("!int."), ParseError);
  CHECK_THROWS_AS(parse_type("end (+) end + end"), ParseError);  // mixed level
  CHECK_THROWS_AS(parse_process("l?(x:int)"), ParseError);
  CHECK_THROWS_AS(parse_process("case l { inl: 0 }"), ParseError);
  try {
    parse_type("!int.\nquux");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("normal_key folds unit outputs only when asked") {
  ProcPtr a = parse_process("l?(x:unit).r!(x).0");
  ProcPtr b = parse_process("l?(y:unit).r!(()).0");
  CHECK(normal_key(a) != normal_key(b));
  CHECK(normal_key(a, true) == normal_key(b, true));
}
