#include <doctest.h>

#include <random>
#include <stdexcept>

#include "egsq/predict.hpp"

using egsq::GroupSpec;
using egsq::TreeAut;
using egsq::VerifyOptions;
using egsq::Word;

namespace {

GroupSpec gupta_sidki() {
  return GroupSpec::from_json(R"({"p":3,"spaces":[[],[],[[1,-1]]]})");
}

GroupSpec symmetric_p5() {
  return GroupSpec::from_json(R"({"p":5,"spaces":[[],[],[],[],[[1,4,4,1]]]})");
}

// order by plain repeated multiplication, independent of the p-power ladder
std::uint64_t order_by_multiplication(const TreeAut& g) {
  TreeAut cur = g;
  std::uint64_t k = 1;
  while (!cur.is_identity()) {
    cur = cur.compose(g);
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("predicted exponents") {
  CHECK(egsq::predicted_exponent(gupta_sidki(), 4) == 9);
  CHECK(egsq::predicted_exponent(gupta_sidki(), 1) == 3);
  CHECK(egsq::predicted_exponent(gupta_sidki(), 2) == 3);
  CHECK(egsq::predicted_exponent(gupta_sidki(), 3) == 9);

  const auto np5 =
      GroupSpec::from_json(R"({"p":5,"spaces":[[],[],[],[],[[1,0,0,0]]]})");
  CHECK(egsq::predicted_exponent(np5, 3) == 125);
  CHECK(egsq::predicted_exponent(np5, 1) == 5);
}

TEST_CASE("predicted level-2 orders") {
  CHECK(egsq::predicted_level2_order(gupta_sidki()) == 27);
  const auto full =
      GroupSpec::from_json(R"({"p":3,"spaces":[[],[],[[1,0],[0,1]]]})");
  CHECK(egsq::predicted_level2_order(full) == 81);
  // for periodic specs the closure spans a proper subspace: t <= p-1
  std::uint64_t pp = 1;
  for (std::uint32_t k = 0; k <= 5; ++k) pp *= 5;
  CHECK(pp % egsq::predicted_level2_order(symmetric_p5()) == 0);
}

TEST_CASE("deep witness words have maximal order at shallow depths") {
  const auto np11 =
      GroupSpec::from_json(R"({"p":3,"spaces":[[],[],[[1,1]]]})");
  const Word w = egsq::deep_witness_word(np11, 0);
  CHECK(w.str() == "a^2 c0");
  CHECK(order_by_multiplication(np11.evaluate(w, 1)) == 3);
  CHECK(order_by_multiplication(np11.evaluate(w, 2)) == 9);

  const auto p2 = GroupSpec::from_json(R"({"p":2,"spaces":[[],[[1]]]})");
  const Word w2 = egsq::deep_witness_word(p2, 0);
  CHECK(w2.str() == "a c0");
  CHECK(order_by_multiplication(p2.evaluate(w2, 3)) == 8);

  for (std::uint32_t j = 0; j < 3; ++j)
    CHECK(np11.evaluate(egsq::deep_witness_word(np11, j), 4).order() == 81);

  CHECK_THROWS_AS(egsq::deep_witness_word(gupta_sidki(), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(egsq::deep_witness_word(np11, 3), std::invalid_argument);
}

TEST_CASE("first-section lift reproduces the prescribed section pattern") {
  const auto gs = gupta_sidki();

  CHECK(egsq::first_section_lift(gs, Word::parse("c0")).str() == "c1");
  CHECK(egsq::first_section_lift(gs, Word{}).empty());

  std::mt19937 rng(31);
  const egsq::FpVector& e = gs.ggs_vector();
  for (std::uint32_t n : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t r = 1 + rng() % 4;
      Word h;
      for (std::size_t i = 0; i < r; ++i)
        h.append(Word::conjugated(rng() % 3));
      const Word f1 = egsq::first_section_lift(gs, h);
      const auto parts = gs.evaluate(f1, n).sections();
      CHECK(parts[0] == gs.evaluate(h, n - 1));
      for (std::uint32_t comp = 2; comp < 3; ++comp)
        CHECK(parts[comp - 1] ==
              TreeAut::rooted(3, n - 1)
                  .pow(static_cast<long long>(r) * e[comp - 2]));
    }
  }

  // first entry of the defining vector must be 1
  const auto shifted =
      GroupSpec::from_json(R"({"p":3,"spaces":[[],[],[[2,1]]]})");
  CHECK_THROWS_AS(egsq::first_section_lift(shifted, Word::parse("c0")),
                  std::invalid_argument);
  // and the spec must be periodic
  const auto np = GroupSpec::from_json(R"({"p":3,"spaces":[[],[],[[1,1]]]})");
  CHECK_THROWS_AS(egsq::first_section_lift(np, Word::parse("c0")),
                  std::invalid_argument);
}

TEST_CASE("rebalancing a stabilizer word") {
  const auto sym = symmetric_p5();

  // r=1, subscript sum 0: alpha solves 2*alpha = 1 (mod 5), so alpha = 3
  const Word h = Word::parse("c0");
  const Word adjusted = egsq::rebalance_stabilizer_word(sym, h);
  CHECK(adjusted.str() == "c0^4 c2 c0^4 c2 c0^4 c2 c0");

  // already balanced: nothing prepended
  CHECK(egsq::rebalance_stabilizer_word(sym, Word::parse("c1")).str() == "c1");

  std::mt19937 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    Word random_h;
    const std::size_t r = 1 + rng() % 4;
    std::uint64_t expanded = 0, subscript_sum = 0;
    for (std::size_t i = 0; i < r; ++i)
      random_h.append(Word::conjugated(rng() % 5));
    const Word out = egsq::rebalance_stabilizer_word(sym, random_h);
    for (const auto& t : out.tokens()) {
      const std::uint64_t reps = static_cast<std::uint64_t>(
          ((t.exponent % 5) + 5) % 5);
      expanded += reps;
      subscript_sum += reps * t.shift;
    }
    CHECK(expanded % 5 == subscript_sum % 5);
    for (std::uint32_t n : {2u, 3u}) {
      const auto lhs = sym.evaluate(out, n).sections()[0];
      const auto rhs = sym.evaluate(random_h, n).sections()[0];
      CHECK(lhs == rhs);
    }
  }

  CHECK_THROWS_AS(
      egsq::rebalance_stabilizer_word(gupta_sidki(), Word::parse("c0")),
      std::invalid_argument);  // (1,2) is not symmetric
  const auto p2 = GroupSpec::from_json(R"({"p":2,"spaces":[[],[[1]]]})");
  CHECK_THROWS_AS(egsq::rebalance_stabilizer_word(p2, Word::parse("c0")),
                  std::invalid_argument);
}

TEST_CASE("verification report on the periodic single-vector entry") {
  VerifyOptions options;
  options.max_level = 3;
  const auto report = egsq::verify_exponents(gupta_sidki(), options);

  REQUIRE(report.levels.size() == 3);
  CHECK(report.levels[0].exponent == 3);
  CHECK(report.levels[1].exponent == 3);
  CHECK(report.levels[2].exponent == 9);
  CHECK(report.levels[1].size == 27);
  REQUIRE(report.levels[1].predicted_size.has_value());
  CHECK(*report.levels[1].predicted_size == 27);
  CHECK(report.periodic);
  CHECK(report.family == "GGS");
  CHECK(report.monotone);
  CHECK(report.submultiplicative);
  CHECK(report.witnesses.empty());
  CHECK(report.pass());
}

TEST_CASE("verification report on a non-periodic entry with witnesses") {
  VerifyOptions options;
  options.max_level = 3;
  options.witness_depth = 6;
  const auto spec = GroupSpec::from_json(R"({"p":2,"spaces":[[],[[1]]]})");
  const auto report = egsq::verify_exponents(spec, options);

  REQUIRE(report.levels.size() == 3);
  CHECK(report.levels[0].exponent == 2);
  CHECK(report.levels[1].exponent == 4);
  CHECK(report.levels[2].exponent == 8);
  REQUIRE(report.witnesses.size() == 1);
  CHECK(report.witnesses[0].levels.size() == 6);
  for (const auto& rec : report.witnesses[0].levels) CHECK(rec.match);
  CHECK(report.pass());
}

TEST_CASE("corrupted predictions fail the verdict") {
  VerifyOptions options;
  options.max_level = 2;
  options.corrupt_predictions = true;
  const auto report = egsq::verify_exponents(gupta_sidki(), options);
  CHECK_FALSE(report.pass());
}

TEST_CASE("hitting the cap marks the report instead of escaping") {
  VerifyOptions options;
  options.max_level = 3;
  options.limits.max_elements = 30;
  const auto report = egsq::verify_exponents(gupta_sidki(), options);
  CHECK(report.limit_exceeded);
  CHECK(report.partial_count > 30);
  CHECK(report.levels.size() == 2);  // levels 1 and 2 fit under the cap
  CHECK_FALSE(report.pass());
}

TEST_CASE("submultiplicativity checker") {
  auto mk = [](std::uint32_t level, std::uint64_t exp) {
    egsq::LevelRecord rec;
    rec.level = level;
    rec.exponent = exp;
    return rec;
  };
  CHECK(egsq::check_submultiplicativity({mk(1, 3), mk(2, 3), mk(3, 9)}));
  CHECK(egsq::check_submultiplicativity({mk(1, 2), mk(2, 4), mk(3, 8)}));
  CHECK_FALSE(
      egsq::check_submultiplicativity({mk(1, 2), mk(2, 4), mk(3, 16)}));
}

TEST_CASE("report serialization round trip") {
  VerifyOptions options;
  options.max_level = 2;
  const auto report = egsq::verify_exponents(gupta_sidki(), options);
  const std::string json = report.to_json();
  const auto parsed = egsq::VerificationReport::from_json(json);
  CHECK(parsed.to_json() == json);
  CHECK(parsed.pass() == report.pass());
  CHECK(parsed.levels.size() == report.levels.size());
}
