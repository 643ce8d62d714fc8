#include "invtag/decoding.hpp"

#include <algorithm>

#include "invtag/errors.hpp"

namespace invtag {

AllowedTokens::AllowedTokens(std::vector<std::string> ordered) {
  for (auto& t : ordered)
    if (!contains(t)) tokens_.push_back(std::move(t));
}

bool AllowedTokens::contains(std::string_view token) const {
  return std::find(tokens_.begin(), tokens_.end(), token) != tokens_.end();
}

AllowedTokens allowed_tokens(const Sentence& sentence,
                             const ControlTokens& control) {
  std::vector<std::string> ordered = sentence.tokens();
  ordered.push_back(control.none_token);
  ordered.push_back(control.sep_token);
  ordered.push_back(control.end_token);
  return AllowedTokens(std::move(ordered));
}

void DecodeConfig::validate() const {
  if (max_generated_tokens < 1)
    throw InvalidArgument("max_generated_tokens must be >= 1");
  control.validate();
}

GenerationResult decode_constrained(const LmScorer& scorer, const Prompt& prompt,
                                    const AllowedTokens& allowed,
                                    const DecodeConfig& config) {
  config.validate();
  if (allowed.empty()) throw EmptyAllowedSet();
  if (prompt.answered())
    throw InvalidArgument("decode_constrained needs an unanswered prompt");

  GenerationResult result;
  Tokens prefix = prompt.tokens;
  const auto& candidates = allowed.tokens();
  while (result.steps_used < config.max_generated_tokens) {
    const auto scores = scorer.score_next(prefix, candidates);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    const std::string& token = candidates[best];
    prefix.push_back(token);
    result.generated_tokens.push_back(token);
    ++result.steps_used;
    if (token == config.control.end_token) {
      result.terminated_by_end = true;
      break;
    }
  }
  return result;
}

SlotValues parse_answer(std::span<const std::string> tokens,
                        const ControlTokens& control) {
  if (!tokens.empty() && tokens.back() == control.end_token)
    tokens = tokens.first(tokens.size() - 1);
  SlotValues values;
  Tokens current;
  auto flush = [&] {
    const bool is_none = current.size() == 1 && current[0] == control.none_token;
    if (!current.empty() && !is_none) values.push_back(std::move(current));
    current.clear();
  };
  for (const auto& t : tokens) {
    if (t == control.sep_token)
      flush();
    else
      current.push_back(t);
  }
  flush();
  return values;
}

}  // namespace invtag
