#include "invtag/pipeline.hpp"

#include "invtag/errors.hpp"

namespace invtag {

const char* to_string(Resolution r) {
  switch (r) {
    case Resolution::First: return "first";
    case Resolution::Second: return "second";
    case Resolution::Unresolved: return "unresolved";
  }
  return "unresolved";
}

namespace {

// Decodes one prompt into `label`; returns false on a tolerated failure.
bool run_decode(const LmScorer& scorer, const Prompt& prompt,
                const AllowedTokens& allowed, const TagConfig& config,
                std::size_t round, LabelPrediction& label, SlotPrediction& out) {
  try {
    auto result = decode_constrained(scorer, prompt, allowed, config.decode);
    label.values = parse_generation(result, config.decode.control);
    label.generation = result;
    label.error.clear();
    out.trace.push_back({prompt, std::move(result), round});
    return true;
  } catch (const ScorerFailure& e) {
    if (config.strict) throw;
    label.values.clear();
    label.generation = {};
    label.error = e.what();
    ++out.failures;
    out.trace.push_back({prompt, {}, round});
    return false;
  }
}

}  // namespace

SlotPrediction tag_sentence(const LmScorer& scorer, const Sentence& sentence,
                            const LabelMapping& mapping, const TagConfig& config) {
  if (mapping.empty()) throw InvalidArgument("tag_sentence: empty label mapping");
  config.decode.validate();
  const auto allowed = allowed_tokens(sentence, config.decode.control);

  SlotPrediction out;
  out.per_label.reserve(mapping.size());
  for (const auto& e : mapping.entries())
    out.per_label.push_back({e.raw_label, e.label_word, {}, Resolution::Unresolved, {}, {}});

  std::vector<std::string> words;
  for (const auto& e : mapping.entries()) words.push_back(e.label_word);
  const auto prompts = build_inverse_prompts(sentence, words);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    auto& label = out.per_label[i];
    if (run_decode(scorer, prompts[i], allowed, config, 1, label, out))
      label.round_resolved = Resolution::First;
  }
  if (!config.iterative) return out;

  for (std::size_t round = 2; round < 2 + config.iterations; ++round) {
    // Context is frozen for the whole round: revisions within a round do not
    // see each other.
    std::vector<KnownPair> known;
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < out.per_label.size(); ++i) {
      const auto& label = out.per_label[i];
      if (label.values.empty())
        pending.push_back(i);
      else
        known.push_back({label.label_word, label.values});
    }
    if (pending.empty()) break;
    for (std::size_t i : pending) {
      auto& label = out.per_label[i];
      const auto prompt = build_second_round_prompt(
          sentence, known, label.label_word, config.decode.control);
      run_decode(scorer, prompt, allowed, config, round, label, out);
      if (!label.values.empty()) label.round_resolved = Resolution::Second;
    }
  }
  for (auto& label : out.per_label)
    if (label.values.empty()) label.round_resolved = Resolution::Unresolved;
  return out;
}

DecodeCallCount count_decode_calls(std::size_t label_count, bool iterative) {
  return {label_count, iterative ? label_count : 0};
}

}  // namespace invtag
