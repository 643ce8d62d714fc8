#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "invtag/errors.hpp"
#include "invtag/evaluation.hpp"
#include "test_support.hpp"

using namespace invtag;

namespace {

BioSequence tags(const std::string& s) { return split_whitespace(s); }

}  // namespace

TEST_CASE("chunk_f1 basics") {
  const std::vector<BioSequence> g = {tags("B-Time I-Time O")};
  auto r = chunk_f1(g, g);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);

  r = chunk_f1(g, std::vector<BioSequence>{tags("B-Time O O")});
  CHECK(r.correct_chunks == 0);
  CHECK(r.f1 == 0.0);

  r = chunk_f1(std::vector<BioSequence>{tags("B-Time O B-Loc")}, std::vector<BioSequence>{tags("B-Time O O")});
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(chunk_f1(g, std::vector<BioSequence>{}), LengthMismatch);
  CHECK_THROWS_AS(chunk_f1(g, std::vector<BioSequence>{tags("O")}), LengthMismatch);
}

TEST_CASE("zero-denominator conventions") {
  const std::vector<BioSequence> empty = {tags("O O")};
  CHECK(chunk_f1(empty, empty).f1 == 1.0);
  CHECK(chunk_f1(empty, empty, EmptyEpisodePolicy::Zero).f1 == 0.0);
  // No predictions against gold chunks: precision 0 like conlleval.
  const auto r = chunk_f1(std::vector<BioSequence>{tags("B-X O")}, empty);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
  const auto spurious = chunk_f1(empty, std::vector<BioSequence>{tags("B-X O")});
  CHECK(spurious.precision == 0.0);
  CHECK(spurious.f1 == 0.0);
}

TEST_CASE("conlleval parity corpus") {
  std::ifstream pairs(std::string(INVTAG_FIXTURE_DIR) + "/conlleval/pairs.txt");
  std::ifstream expected(std::string(INVTAG_FIXTURE_DIR) + "/conlleval/expected.tsv");
  REQUIRE(pairs);
  REQUIRE(expected);
  std::vector<BioSequence> g, p;
  std::string line;
  while (std::getline(pairs, line)) {
    auto f = split_whitespace(line);
    if (f.empty()) continue;
    const auto kind = f.front();
    f.erase(f.begin());
    (kind == "gold" ? g : p).push_back(f);
  }
  REQUIRE(g.size() >= 50);
  REQUIRE(g.size() == p.size());
  std::size_t i = 0;
  while (std::getline(expected, line)) {
    std::istringstream row(line);
    std::string id;
    std::size_t gold, found, correct;
    double prec, rec, f1;
    row >> id >> gold >> found >> correct >> prec >> rec >> f1;
    EvalReport r;
    if (id == "overall") {
      r = chunk_f1(g, p);
    } else {
      r = chunk_f1(std::span(g).subspan(i, 1), std::span(p).subspan(i, 1));
      ++i;
    }
    INFO("pair " << id);
    CHECK(r.gold_chunks == gold);
    CHECK(r.pred_chunks == found);
    CHECK(r.correct_chunks == correct);
    CHECK(std::abs(r.precision - prec) < 5e-5);
    CHECK(std::abs(r.recall - rec) < 5e-5);
    CHECK(std::abs(r.f1 - f1) < 5e-5);
  }
  CHECK(i == g.size());
}

TEST_CASE("episodes") {
  Episode ep;
  ep.domain_name = "d";
  ep.support.push_back({Sentence::from_text("a b"), tags("B-X O")});
  ep.query.push_back({Sentence::from_text("c d"), tags("O B-X")});
  CHECK(evaluate_episode(ep, std::vector<BioSequence>{tags("O B-X")}).f1 == 1.0);
  CHECK(evaluate_episode(ep, std::vector<BioSequence>{tags("O O")}).f1 == 0.0);
  CHECK_THROWS_AS(evaluate_episode(ep, std::vector<BioSequence>{}), MissingPrediction);
  // Support sentences never count.
  ep.support.push_back({Sentence::from_text("e"), tags("B-Y")});
  CHECK(evaluate_episode(ep, std::vector<BioSequence>{tags("O B-X")}).gold_chunks == 1);

  // Hand-scored two-query episode: gold {X(0,1)}, {Y(1,1)}; pred {X(0,0)}, {Y(1,1)}.
  Episode two;
  two.query.push_back({Sentence::from_text("a b"), tags("B-X I-X")});
  two.query.push_back({Sentence::from_text("c d"), tags("O B-Y")});
  const auto r = evaluate_episode(two, std::vector<BioSequence>{tags("B-X O"), tags("O I-Y")});
  CHECK(r.correct_chunks == 1);
  CHECK(r.f1 == doctest::Approx(0.5));
}

TEST_CASE("aggregate") {
  EvalReport a, b;
  a.f1 = a.precision = a.recall = 1.0;
  b.f1 = b.precision = b.recall = 0.0;
  CHECK(aggregate(std::vector<EvalReport>{a, b}).f1 == 0.5);
  CHECK(aggregate(std::vector<EvalReport>(10, a)).f1 == 1.0);
  CHECK_THROWS_AS(aggregate(std::vector<EvalReport>{}), EmptyInput);
  std::vector<EvalReport> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i].f1 = i / 100.0;
  const auto s = aggregate(hundred);
  CHECK(s.count == 100);
  CHECK(s.f1 == doctest::Approx(0.495));
}

TEST_CASE("efficiency report") {
  auto r = efficiency_report(10, 4, false);
  CHECK(r.normal_span_count == 55);
  CHECK(r.normal_prompt_count == 220);
  CHECK(r.inverse_prompt_count == 4);
  CHECK(r.inverse_prompt_upper == 4);
  CHECK(efficiency_report(10, 4, true).inverse_prompt_upper == 8);
  r = efficiency_report(1, 1, false);
  CHECK(r.normal_span_count == 1);
  CHECK(r.inverse_prompt_count == 1);
  for (std::size_t n = 1; n <= 60; ++n)
    for (std::size_t m = 1; m <= 5; ++m) {
      const auto e = efficiency_report(n, m, true);
      CHECK(e.normal_prompt_count == e.inverse_prompt_count * n * (n + 1) / 2);
      if (n > 1) CHECK(e.normal_prompt_count > efficiency_report(n - 1, m, true).normal_prompt_count);
    }

  const Sentence s(testing::fig2_tokens());
  std::vector<DecodeTrace> trace(3);
  trace[0].result.steps_used = 2;
  trace[2].result.steps_used = 5;
  const auto t = efficiency_report(s, testing::fig2_mapping(), true, &trace);
  CHECK(t.n == 10);
  CHECK(*t.decode_calls == 3);
  CHECK(*t.decode_steps == 7);
}

TEST_CASE("report serialization") {
  const auto r = make_report(1, 2, 2);
  const auto json = to_json(r);
  CHECK(json == R"({"precision":0.5,"recall":0.5,"f1":0.5,"gold_chunks":2,"pred_chunks":2,"correct_chunks":1})");
  CHECK(to_text(r).find("0.5000") != std::string::npos);
  CHECK(to_json(efficiency_report(10, 4, false)).find("\"normal_complexity_class\":\"O(n^2*m)\"") !=
        std::string::npos);
}

TEST_CASE("property: F stays in [0, 1] and identity scores 1") {
  std::mt19937_64 rng(23);
  const std::vector<std::string> pool = {"O", "B-A", "I-A", "B-B", "I-B"};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    BioSequence g, p;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(pool[rng() % pool.size()]);
      p.push_back(pool[rng() % pool.size()]);
    }
    const auto r = chunk_f1(std::vector<BioSequence>{g}, std::vector<BioSequence>{p});
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= 1.0);
    CHECK(chunk_f1(std::vector<BioSequence>{g}, std::vector<BioSequence>{g}).f1 == 1.0);
  }
}
