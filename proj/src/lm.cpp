#include "invtag/lm.hpp"

#include <cmath>

#include "invtag/errors.hpp"

namespace invtag {

std::vector<double> LmScorer::score_next(
    std::span<const std::string> prefix,
    std::span<const std::string> candidates) const {
  if (candidates.empty()) throw InvalidArgument("score_next: no candidates");
  auto scores = do_score_next(prefix, candidates);
  if (scores.size() != candidates.size())
    throw ScorerFailure("scorer returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(candidates.size()) +
                        " candidates");
  for (double s : scores)
    if (!std::isfinite(s)) throw ScorerFailure("scorer returned a non-finite score");
  return scores;
}

ReferenceLm::ReferenceLm(double fallback_score) : fallback_(fallback_score) {
  if (!std::isfinite(fallback_score))
    throw InvalidArgument("fallback score must be finite");
}

std::string ReferenceLm::context_key(std::span<const std::string> prefix) {
  // Unit separator: cannot occur inside a token read from text files.
  return join(prefix, "\x1f");
}

void ReferenceLm::add(std::span<const std::string> prefix, Distribution next) {
  auto key = context_key(prefix);
  auto [it, inserted] = table_.try_emplace(std::move(key), next);
  if (!inserted && it->second != next)
    throw ConflictingGold("conflicting continuations after: " + join(prefix));
}

void ReferenceLm::add_continuation(std::span<const std::string> context,
                                   std::span<const std::string> answer) {
  Tokens prefix(context.begin(), context.end());
  for (const auto& token : answer) {
    add(prefix, {{token, fallback_ + 1.0}});
    prefix.push_back(token);
  }
}

std::vector<double> ReferenceLm::do_score_next(
    std::span<const std::string> prefix,
    std::span<const std::string> candidates) const {
  std::vector<double> scores(candidates.size(), fallback_);
  const auto it = table_.find(context_key(prefix));
  if (it == table_.end()) return scores;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto hit = it->second.find(candidates[i]);
    if (hit != it->second.end()) scores[i] = hit->second;
  }
  return scores;
}

ReferenceLm reference_from_gold(std::span<const GoldExample> examples,
                                const LabelMapping& mapping,
                                const ControlTokens& control,
                                double fallback_score) {
  ReferenceLm lm(fallback_score);
  for (const auto& ex : examples) {
    const auto grouped = group_by_label(ex.annotation, mapping);
    std::vector<KnownPair> known;
    for (const auto& pair : grouped) {
      const auto p = build_answered_prompt(ex.sentence, pair.label_word,
                                           pair.values, control);
      lm.add_continuation(p.context(), p.answer());
      if (!pair.values.empty()) known.push_back(pair);
    }
    // Revision prompts at inference time see only the recognized pairs.
    for (const auto& pair : grouped) {
      if (!pair.values.empty()) continue;
      const auto p = build_answered_second_round_prompt(
          ex.sentence, known, pair.label_word, pair.values, control);
      lm.add_continuation(p.context(), p.answer());
    }
  }
  return lm;
}

}  // namespace invtag
