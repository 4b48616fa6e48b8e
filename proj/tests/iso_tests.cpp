#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stiso/iso.hpp"
#include "stiso/semantics.hpp"
#include "stiso/symbolic.hpp"
#include "testutil.hpp"

using namespace stiso;

namespace {

bool nf_equal(const TypePtr& a, const TypePtr& b) {
  return type_equal(normalize(a).nf, normalize(b).nf);
}

// Replays each recorded step through apply_axiom_at and checks the snapshots.
void check_replay(const IsoDerivation& d) {
  TypePtr cur = d.from;
  for (const AxiomStep& s : d.steps) {
    REQUIRE(type_equal(cur, s.before));
    auto next = apply_axiom_at(cur, s.path, s.axiom, s.forward);
    REQUIRE(next.has_value());
    REQUIRE(type_equal(*next, s.after));
    cur = *next;
  }
  CHECK(type_equal(cur, d.to));
}

}  // namespace

TEST_CASE("identity processes") {
  CHECK(alpha_eq(id_process(parse_type("end")), pidle()));
  CHECK(alpha_eq(id_process(parse_type("!int.end")),
                 parse_process("l?(x:int).r!(x).0")));
  CHECK(alpha_eq(id_process(parse_type("?bool.end")),
                 parse_process("r?(x:bool).l!(x).0")));
  CHECK(alpha_eq(id_process(parse_type("end (+) end")),
                 parse_process("case l { inl: r#inl.0, inr: r#inr.0 }")));
}

TEST_CASE("normal forms") {
  CHECK(type_equal(normalize(parse_type("!unit.end")).nf, parse_type("end")));
  CHECK(type_equal(normalize(parse_type("!bool.end")).nf,
                   parse_type("end (+) end")));
  CHECK(type_equal(normalize(parse_type("!int.!bool.end")).nf,
                   parse_type("!int.end (+) !int.end")));
  CHECK(type_equal(normalize(parse_type("!bool.!int.end")).nf,
                   parse_type("!int.end (+) !int.end")));
  CHECK(type_equal(normalize(parse_type("?int.!bool.end")).nf,
                   parse_type("?int.(end (+) end)")));
  CHECK(type_equal(normalize(parse_type("!bool.?int.end")).nf,
                   parse_type("?int.end (+) ?int.end")));
}

TEST_CASE("derivability decision") {
  auto d = iso_decide(parse_type("!int.!bool.end"), parse_type("!bool.!int.end"));
  REQUIRE(d.has_value());
  check_replay(*d);

  CHECK_FALSE(iso_decide(parse_type("!int.end"), parse_type("end")).has_value());
  CHECK_FALSE(iso_decide(parse_type("?int.!bool.end"),
                         parse_type("!bool.?int.end")).has_value());
}

TEST_CASE("per-axiom adapter pairs certify") {
  struct Case { int axiom; const char* lhs; const char* rhs; };
  const Case cases[] = {
      {1, "!int.!bool.end", "!bool.!int.end"},
      {2, "?bool.?int.end", "?int.?bool.end"},
      {3, "!int.(end (+) ?bool.end)", "!int.end (+) !int.?bool.end"},
      {4, "?int.(end + !bool.end)", "?int.end + ?int.!bool.end"},
      {5, "!unit.?int.end", "?int.end"},
      {6, "?unit.!int.end", "!int.end"},
      {7, "!bool.end", "end (+) end"},
      {8, "?bool.!int.end", "!int.end + !int.end"},
      {9, "end (+) !int.end", "!int.end (+) end"},
      {10, "end + !int.end", "!int.end + end"},
      {11, "(end (+) !int.end) (+) ?bool.end",
           "end (+) (!int.end (+) ?bool.end)"},
      {12, "(end + !int.end) + ?bool.end", "end + (!int.end + ?bool.end)"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.axiom);
    TypePtr lhs = parse_type(c.lhs), rhs = parse_type(c.rhs);
    AdapterPair ap = axiom_adapters(c.axiom, lhs, rhs);
    CHECK(checks_at(ap.forward, {dual(lhs), rhs}));
    CHECK(checks_at(ap.backward, {dual(rhs), lhs}));
    CertifyOutcome out =
        certify_iso_witnesses(lhs, rhs, ap.forward, ap.backward, 20000);
    CHECK(out.ok);
  }
}

TEST_CASE("adapter lifting through a surrounding context") {
  // A unit-elimination adapter under an int output prefix.
  TypePtr inner_from = parse_type("!unit.end"), inner_to = parse_type("end");
  AdapterPair base = axiom_adapters(5, inner_from, inner_to);
  TypePtr whole_from = parse_type("!int.!unit.end");
  AdapterPair lifted = lift_adapter({0}, whole_from, base);
  CHECK(type_equal(lifted.from, whole_from));
  CHECK(type_equal(lifted.to, parse_type("!int.end")));
  CHECK(checks_at(lifted.forward, {dual(lifted.from), lifted.to}));
  CHECK(checks_at(lifted.backward, {dual(lifted.to), lifted.from}));
  CHECK(certify_iso_witnesses(lifted.from, lifted.to, lifted.forward,
                              lifted.backward, 20000)
            .ok);

  // The empty path is the identity lifting.
  AdapterPair same = lift_adapter({}, inner_from, base);
  CHECK(alpha_eq(same.forward, base.forward));

  // A commutation inside the left branch of a selection.
  TypePtr sub_l = parse_type("end (+) !int.end");
  TypePtr sub_r = parse_type("!int.end (+) end");
  AdapterPair comm = axiom_adapters(9, sub_l, sub_r);
  TypePtr outer = parse_type("(end (+) !int.end) (+) ?bool.end");
  AdapterPair lifted2 = lift_adapter({0}, outer, comm);
  CHECK(checks_at(lifted2.forward, {dual(lifted2.from), lifted2.to}));
  CHECK(certify_iso_witnesses(lifted2.from, lifted2.to, lifted2.forward,
                              lifted2.backward, 20000)
            .ok);
}

TEST_CASE("synthesis") {
  TypePtr t = parse_type("!int.end");
  auto refl = synthesize(t, t);
  REQUIRE(refl.has_value());
  CHECK(normal_key(refl->forward, true) == normal_key(id_process(t), true));
  CHECK(checks_at(refl->forward, {dual(t), t}));

  auto a5 = synthesize(parse_type("!unit.end"), parse_type("end"));
  REQUIRE(a5.has_value());
  CHECK(certify_iso_witnesses(parse_type("!unit.end"), parse_type("end"),
                              a5->forward, a5->backward, 20000)
            .ok);

  TypePtr e1 = parse_type("!int.!bool.end"), e2 = parse_type("!bool.!int.end");
  auto syn = synthesize(e1, e2);
  REQUIRE(syn.has_value());
  CHECK(checks_at(syn->forward, {dual(e1), e2}));
  CHECK(checks_at(syn->backward, {dual(e2), e1}));
  CHECK(certify_iso_witnesses(e1, e2, syn->forward, syn->backward, 20000).ok);

  CHECK_FALSE(synthesize(parse_type("!int.end"), parse_type("end")).has_value());
}

TEST_CASE("brute-force oracle") {
  CHECK(oracle_iso(parse_type("!int.!bool.end"), parse_type("!bool.!int.end"), 12));
  CHECK(oracle_iso(parse_type("!unit.end"), parse_type("end"), 12));
  CHECK_FALSE(oracle_iso(parse_type("!int.end"), parse_type("end"), 12));
  CHECK_FALSE(oracle_iso(parse_type("?int.!bool.end"),
                         parse_type("!bool.?int.end"), 12));
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    TypePtr t = testutil::random_type(rng, 4);
    TypePtr nf = normalize(t).nf;
    CHECK(type_equal(normalize(nf).nf, nf));
  }
}

TEST_CASE("each axiom instance preserves the normal form") {
  std::mt19937_64 rng(11);
  int applied = 0;
  for (int k = 0; k < 4000 && applied < 1000; ++k) {
    TypePtr t = testutil::random_type(rng, 4);
    int axiom = 1 + static_cast<int>(rng() % 12);
    bool fwd = rng() % 2 == 0;
    // Try every path; check the ones where the axiom fires.
    std::vector<Path> stack{{}};
    while (!stack.empty()) {
      Path p = stack.back();
      stack.pop_back();
      TypePtr sub = t;
      bool ok = true;
      for (int d : p) {
        if (sub->kind == Type::Kind::Out || sub->kind == Type::Kind::In) {
          if (d != 0) { ok = false; break; }
          sub = sub->a;
        } else if (sub->kind == Type::Kind::Select ||
                   sub->kind == Type::Kind::Branch) {
          sub = d == 0 ? sub->a : sub->b;
        } else {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (auto next = apply_axiom_at(t, p, axiom, fwd)) {
        CHECK(nf_equal(t, *next));
        ++applied;
      }
      if (sub->kind == Type::Kind::Out || sub->kind == Type::Kind::In) {
        Path q = p; q.push_back(0); stack.push_back(q);
      } else if (sub->kind == Type::Kind::Select ||
                 sub->kind == Type::Kind::Branch) {
        Path q = p; q.push_back(0); stack.push_back(q);
        q.back() = 1; stack.push_back(q);
      }
    }
  }
  CHECK(applied >= 500);
}

TEST_CASE("derivability is an equivalence relation on samples") {
  std::mt19937_64 rng(13);
  std::vector<TypePtr> ts;
  for (int k = 0; k < 20; ++k) ts.push_back(testutil::random_type(rng, 3));
  for (const TypePtr& a : ts) {
    CHECK(iso_decide(a, a).has_value());
    for (const TypePtr& b : ts) {
      CHECK(iso_decide(a, b).has_value() == iso_decide(b, a).has_value());
      for (const TypePtr& c : ts)
        if (iso_decide(a, b) && iso_decide(b, c))
          CHECK(iso_decide(a, c).has_value());
    }
  }
}

TEST_CASE("decision agrees with the oracle on small types") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 60; ++k) {
    TypePtr a = testutil::random_type(rng, 2), b = testutil::random_type(rng, 2);
    if (type_size(a) + type_size(b) > 7) continue;
    CHECK(iso_decide(a, b).has_value() == oracle_iso(a, b, 12));
  }
}

TEST_CASE("derivations replay") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 200; ++k) {
    TypePtr t = testutil::random_type(rng, 4);
    check_replay(normalize(t).derivation);
  }
}
