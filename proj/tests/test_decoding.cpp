#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "invtag/decoding.hpp"
#include "invtag/errors.hpp"
#include "test_support.hpp"

using namespace invtag;
using invtag::testing::fig2_tokens;

TEST_CASE("allowed tokens") {
  const Sentence s(fig2_tokens());
  const auto allowed = allowed_tokens(s);
  // Ten distinct words plus none ; .
  CHECK(allowed.size() == 13);
  CHECK(allowed.tokens().front() == "book");
  CHECK(allowed.tokens()[10] == "none");
  CHECK(allowed.tokens()[11] == ";");
  CHECK(allowed.tokens()[12] == ".");

  const auto with_none = allowed_tokens(Sentence::from_text("a b c d e f g h none j"));
  CHECK(with_none.size() == 12);
  CHECK(allowed_tokens(Sentence(Tokens{"x"})).size() == 4);
  CHECK(allowed_tokens(Sentence::from_text("to to to")).size() == 4);
}

TEST_CASE("decode follows an oracle scorer to END") {
  const Sentence s(fig2_tokens());
  const std::vector<std::string> words = {"departure"};
  const auto prompt = build_inverse_prompts(s, words).front();
  ReferenceLm lm;
  const Tokens answer = {"beijing", "."};
  lm.add_continuation(prompt.tokens, answer);
  const auto r = decode_constrained(lm, prompt, allowed_tokens(s));
  CHECK(r.generated_tokens == answer);
  CHECK(r.terminated_by_end);
  CHECK(r.steps_used == 2);
  CHECK(parse_generation(r) == SlotValues{{"beijing"}});
}

TEST_CASE("decode stops at the cap") {
  const Sentence s = Sentence::from_text("x y z");
  const auto prompt = build_inverse_prompts(s, std::vector<std::string>{"w"}).front();
  // END always scores lowest.
  testing::RawScorer never_end([](std::size_t n) {
    std::vector<double> v(n, 1.0);
    v.back() = -1.0;
    return v;
  });
  const auto r = decode_constrained(never_end, prompt, allowed_tokens(s));
  CHECK(r.steps_used == 40);
  CHECK_FALSE(r.terminated_by_end);

  DecodeConfig small;
  small.max_generated_tokens = 3;
  CHECK(decode_constrained(never_end, prompt, allowed_tokens(s), small).steps_used == 3);
  small.max_generated_tokens = 0;
  CHECK_THROWS_AS(decode_constrained(never_end, prompt, allowed_tokens(s), small), InvalidArgument);
}

TEST_CASE("uniform scores resolve by canonical order") {
  // Allowed order for "c b a": c b a none ; . -> every step picks "c".
  const Sentence s = Sentence::from_text("c b a");
  const auto prompt = build_inverse_prompts(s, std::vector<std::string>{"w"}).front();
  testing::ConstantScorer uniform;
  const auto r = decode_constrained(uniform, prompt, allowed_tokens(s));
  CHECK(r.generated_tokens == Tokens(40, "c"));

  // Ties between the last two: the earlier one (";") wins over ".".
  testing::RawScorer tail_tie([](std::size_t n) {
    std::vector<double> v(n, 0.0);
    v[n - 2] = v[n - 1] = 2.0;
    return v;
  });
  const auto t = decode_constrained(tail_tie, prompt, allowed_tokens(s), {3});
  CHECK(t.generated_tokens == Tokens{";", ";", ";"});
}

TEST_CASE("decode preconditions and scorer contract") {
  const Sentence s = Sentence::from_text("a b");
  const auto prompt = build_inverse_prompts(s, std::vector<std::string>{"w"}).front();
  testing::ConstantScorer uniform;
  CHECK_THROWS_AS(decode_constrained(uniform, prompt, AllowedTokens{}), EmptyAllowedSet);
  const auto answered = build_answered_prompt(s, "w", {});
  CHECK_THROWS_AS(decode_constrained(uniform, answered, allowed_tokens(s)), InvalidArgument);

  testing::RawScorer short_scores([](std::size_t n) { return std::vector<double>(n - 1, 0.0); });
  CHECK_THROWS_AS(decode_constrained(short_scores, prompt, allowed_tokens(s)), ScorerFailure);
  testing::RawScorer nan_scores([](std::size_t n) {
    return std::vector<double>(n, std::numeric_limits<double>::quiet_NaN());
  });
  CHECK_THROWS_AS(decode_constrained(nan_scores, prompt, allowed_tokens(s)), ScorerFailure);
  testing::FailingScorer failing;
  CHECK_THROWS_AS(decode_constrained(failing, prompt, allowed_tokens(s)), ScorerFailure);
}

TEST_CASE("parse_generation") {
  auto parse = [](const std::string& text) { return parse_answer(split_whitespace(text)); };
  CHECK(parse("new york ; boston .") == SlotValues{{"new", "york"}, {"boston"}});
  CHECK(parse("none .").empty());
  CHECK(parse("").empty());
  CHECK(parse(".").empty());
  CHECK(parse("; ; beijing ; .") == SlotValues{{"beijing"}});
  // Mixed none segments are dropped.
  CHECK(parse("beijing ; none .") == SlotValues{{"beijing"}});
  // Unterminated output is kept as-is.
  CHECK(parse("new york ; bos") == SlotValues{{"new", "york"}, {"bos"}});
  // Only one trailing END is stripped.
  CHECK(parse("a . .") == SlotValues{{"a", "."}});
  // none inside a longer value is an ordinary word.
  CHECK(parse("none left .") == SlotValues{{"none", "left"}});

  GenerationResult r{{"x", ";", "y", "."}, true, 4};
  CHECK(parse_generation(r) == SlotValues{{"x"}, {"y"}});
}

TEST_CASE("property: closure, step bound and determinism under random scorers") {
  std::mt19937_64 rng(5);
  const auto mapping = testing::synthetic_mapping();
  for (int trial = 0; trial < 300; ++trial) {
    const auto ts = testing::random_tagged_sentence(rng, mapping);
    testing::HashScorer scorer(rng());
    DecodeConfig config;
    config.max_generated_tokens = 1 + rng() % 40;
    const auto allowed = allowed_tokens(ts.sentence);
    const auto prompt = build_inverse_prompts(ts.sentence, std::vector<std::string>{"time"}).front();
    const auto r = decode_constrained(scorer, prompt, allowed, config);
    CHECK(r.steps_used == r.generated_tokens.size());
    CHECK(r.steps_used <= config.max_generated_tokens);
    for (const auto& t : r.generated_tokens) CHECK(allowed.contains(t));
    CHECK(r == decode_constrained(scorer, prompt, allowed, config));
    if (r.terminated_by_end) CHECK(r.generated_tokens.back() == ".");
  }
}
