#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ltlgrid/buchi.hpp"
#include "ltlgrid/error.hpp"
#include "support/oracles.hpp"

using namespace ltlgrid;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LassoWord lasso(std::vector<Symbol> prefix, std::vector<Symbol> cycle) { return {std::move(prefix), std::move(cycle)}; }

}  // namespace

TEST_CASE("eventually p has the expected shape") {
  Formula p = Formula::atom({1, "p"});
  Nba a = translate(Formula::eventually(p));
  CHECK(a.num_states() == 2);
  CHECK(a.accepting().size() == 1);
  StateId q0 = a.initial().front();
  StateId qf = a.accepting().front();
  CHECK(q0 != qf);
  REQUIRE(a.self_loop(q0));
  CHECK(*a.self_loop(q0) == Formula::make_true());
  REQUIRE(a.find(q0, qf));
  CHECK(a.find(q0, qf)->guard == p);
  REQUIRE(a.self_loop(qf));
  CHECK(*a.self_loop(qf) == Formula::make_true());
}

TEST_CASE("always p is one accepting state") {
  Formula p = Formula::atom({1, "p"});
  Nba a = translate(Formula::always(p));
  CHECK(a.num_states() == 1);
  CHECK(a.is_accepting(0));
  REQUIRE(a.self_loop(0));
  CHECK(*a.self_loop(0) == p);
}

TEST_CASE("false has an empty language") {
  Nba a = translate(Formula::make_false());
  std::mt19937_64 rng(1);
  std::vector<AtomicPredicate> pool{{1, "p"}};
  for (int i = 0; i < 20; ++i) CHECK_FALSE(accepts_lasso(a, oracle::random_lasso(rng, pool)));
}

TEST_CASE("lasso acceptance examples") {
  Symbol P{{1, "p"}}, Q{{1, "q"}};
  Nba gfp = translate(parse_ltl("G F p1@p"));
  CHECK(accepts_lasso(gfp, lasso({}, {P})));
  CHECK_FALSE(accepts_lasso(gfp, lasso({}, {Symbol{}})));
  Nba until = translate(parse_ltl("p1@p U p1@q"));
  CHECK(accepts_lasso(until, lasso({P, Q}, {Symbol{}})));
  CHECK_FALSE(accepts_lasso(until, lasso({P, Symbol{}}, {Q})));
}

TEST_CASE("successors") {
  Nba a = import_automaton(read_file(std::string(TEST_DATA_DIR) + "/two_regions.nba"));
  CHECK(successors(a, 0, Symbol{}) == std::set<StateId>{0});
  CHECK(successors(a, 0, Symbol{{1, "l1"}}) == std::set<StateId>{0, 1});
  CHECK(successors(a, 2, Symbol{}) == std::set<StateId>{0});
}

TEST_CASE("successors are monotone for negation-free guards") {
  std::mt19937_64 rng(5);
  std::vector<AtomicPredicate> pool{{1, "a"}, {1, "b"}, {2, "c"}};
  for (int i = 0; i < 50; ++i) {
    Formula f = oracle::random_formula(rng, pool, 3);
    Nba a = translate(f);
    for (int k = 0; k < 10; ++k) {
      Symbol s = oracle::random_symbol(rng, pool);
      std::vector<AtomicPredicate> bigger = s.aps();
      bigger.push_back(pool[rng() % pool.size()]);
      Symbol t(bigger);
      for (StateId q = 0; q < a.num_states(); ++q) {
        auto small = successors(a, q, s), large = successors(a, q, t);
        for (StateId r : small) {
          const Formula& g = a.find(q, r)->guard;
          if (to_string(g).find('!') == std::string::npos) CHECK(large.contains(r));
        }
      }
    }
  }
}

TEST_CASE("import and export round trip") {
  std::string text = read_file(std::string(TEST_DATA_DIR) + "/two_regions.nba");
  Nba a = import_automaton(text);
  CHECK(a.num_states() == 3);
  CHECK(a.transitions().size() == 8);
  std::string out = export_automaton(a);
  Nba b = import_automaton(out);
  CHECK(export_automaton(b) == out);
  CHECK_THROWS_AS(import_automaton("states 0\n"), Error);
  CHECK_THROWS_AS(import_automaton("states 1\ninitial 0\nap p1@a\ntrans 0 0 p1@b\n"), Error);
  CHECK_THROWS_AS(import_automaton("states 1\ninitial 0\ntrans 0 3 true\n"), Error);
  CHECK_THROWS_AS(import_automaton("states 1\ninitial 0\ntrans 0 0 F p1@a\n"), Error);
}

TEST_CASE("hand transcribed automaton matches its formula") {
  Nba a = import_automaton(read_file(std::string(TEST_DATA_DIR) + "/two_regions.nba"));
  Formula f = parse_ltl("G F p1@l1 & G F p1@l2");
  std::mt19937_64 rng(9);
  std::vector<AtomicPredicate> pool{{1, "l1"}, {1, "l2"}};
  for (int i = 0; i < 400; ++i) {
    auto w = oracle::random_lasso(rng, pool);
    CHECK(accepts_lasso(a, w) == oracle::evaluate_ltl(f, w));
  }
}

TEST_CASE("translation agrees with the lasso oracle") {
  std::mt19937_64 rng(2024);
  std::vector<AtomicPredicate> pool{{1, "a"}, {1, "b"}, {2, "c"}};
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f = to_nnf(oracle::random_formula(rng, pool, 4));
    auto g = translate_generalized(f);
    Nba a = degeneralize(g);
    for (int k = 0; k < 50; ++k) {
      auto w = oracle::random_lasso(rng, pool);
      bool expect = oracle::evaluate_ltl(f, w);
      bool got = accepts_lasso(a, w);
      bool gen = accepts_lasso(g, w);
      if (got != expect || gen != got) {
        ++failures;
        MESSAGE(to_string(f));
      }
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("state cap") {
  TranslateOptions opts;
  opts.state_cap = 2;
  CHECK_THROWS_AS(translate(parse_ltl("F p1@a & F p1@b & F p1@c"), opts), Error);
}
