#include <random>

#include "doctest.h"
#include "ltlgrid/error.hpp"
#include "ltlgrid/ltl.hpp"
#include "support/oracles.hpp"

using namespace ltlgrid;

namespace {
Formula ap(int j, const char* r) { return Formula::atom({j, r}); }
}  // namespace

TEST_CASE("parse basic forms") {
  CHECK(parse_ltl("F p1@l2") == Formula::eventually(ap(1, "l2")));
  CHECK(parse_ltl("G F p1@l1 & G F p1@l2") ==
        Formula::conjunction(Formula::always(Formula::eventually(ap(1, "l1"))),
                             Formula::always(Formula::eventually(ap(1, "l2")))));
  CHECK(parse_ltl("p1@l1 U p1@l2") == Formula::until(ap(1, "l1"), ap(1, "l2")));
  CHECK(parse_ltl("true") == Formula::make_true());
  CHECK(parse_ltl("  false # trailing comment") == Formula::make_false());
}

TEST_CASE("precedence and associativity") {
  auto a = ap(1, "a"), b = ap(1, "b"), c = ap(1, "c");
  CHECK(parse_ltl("p1@a U p1@b R p1@c") == Formula::until(a, Formula::release(b, c)));
  CHECK(parse_ltl("p1@a & p1@b | p1@c") == Formula::disjunction(Formula::conjunction(a, b), c));
  CHECK(parse_ltl("p1@a | p1@b & p1@c") == Formula::disjunction(a, Formula::conjunction(b, c)));
  CHECK(parse_ltl("p1@a & p1@b U p1@c") == Formula::conjunction(a, Formula::until(b, c)));
  CHECK(parse_ltl("!p1@a U p1@b") == Formula::until(Formula::negation(a), b));
  CHECK(parse_ltl("p1@a -> p1@b -> p1@c") ==
        Formula::disjunction(Formula::negation(a), Formula::disjunction(Formula::negation(b), c)));
  CHECK(parse_ltl("X (p1@a | p1@b)") == Formula::next(Formula::disjunction(a, b)));
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_ltl(text);
    } catch (const Error& e) {
      return e.offset().value_or(999);
    }
    return 1000;
  };
  CHECK(offset_of("p1@a &") == 6);
  CHECK(offset_of("p1@a & (p1@b") == 12);
  CHECK(offset_of("p1@a $ p1@b") == 5);
  CHECK(offset_of("F p0@l1") == 2);
  CHECK(offset_of("foo") == 0);
  CHECK_THROWS_AS(parse_ltl("p1@"), Error);
  ParseOptions opts;
  opts.regions = std::set<std::string>{"l1"};
  CHECK_NOTHROW(parse_ltl("F p1@l1 & G !p1@obs", opts));
  try {
    parse_ltl("F p1@l9", opts);
    FAIL("expected unknown region");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("nnf rules") {
  auto p = ap(1, "p"), q = ap(1, "q");
  CHECK(to_nnf(Formula::negation(Formula::eventually(p))) == Formula::release(Formula::make_false(), Formula::negation(p)));
  CHECK(to_nnf(Formula::negation(Formula::negation(p))) == p);
  CHECK(to_nnf(Formula::negation(Formula::until(p, q))) == Formula::release(Formula::negation(p), Formula::negation(q)));
  CHECK(to_nnf(Formula::always(p)) == Formula::release(Formula::make_false(), p));
}

TEST_CASE("atomic predicates") {
  CHECK(atomic_predicates(Formula::make_true()).empty());
  CHECK(atomic_predicates(ap(2, "l3")) == std::set<AtomicPredicate>{{2, "l3"}});
  auto f = parse_ltl("G F (p1@l1 & !p1@obs) & F p1@l2 U p1@l1");
  CHECK(atomic_predicates(f) == std::set<AtomicPredicate>{{1, "l1"}, {1, "l2"}, {1, "obs"}});
}

TEST_CASE("print and parse round trip on random formulas") {
  std::mt19937_64 rng(7);
  std::vector<AtomicPredicate> pool{{1, "a"}, {2, "b"}, {13, "room_4"}};
  for (int i = 0; i < 500; ++i) {
    Formula f = oracle::random_formula(rng, pool, 5);
    INFO(to_string(f));
    CHECK(parse_ltl(to_string(f)) == f);
  }
}

TEST_CASE("lasso evaluators agree and nnf preserves semantics") {
  std::mt19937_64 rng(11);
  std::vector<AtomicPredicate> pool{{1, "a"}, {1, "b"}, {2, "c"}};
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_formula(rng, pool, 4);
    Formula n = to_nnf(f);
    CHECK(n.is_nnf());
    for (int k = 0; k < 20; ++k) {
      auto w = oracle::random_lasso(rng, pool);
      bool v = oracle::evaluate_ltl(f, w);
      INFO(to_string(f));
      CHECK(v == oracle::evaluate_unrolled(f, w));
      CHECK(v == oracle::evaluate_ltl(n, w));
    }
  }
}
