#include "invtag/prompting.hpp"

#include <random>

#include "invtag/errors.hpp"
#include "random.hpp"

namespace invtag {

namespace {

constexpr const char* kRefers = "refers";
constexpr const char* kTo = "to";

void append(Tokens& out, std::span<const std::string> tokens) {
  out.insert(out.end(), tokens.begin(), tokens.end());
}

Tokens quoted(const Sentence& sentence) {
  Tokens out;
  out.reserve(sentence.size() + 8);
  out.emplace_back(kOpenQuote);
  append(out, sentence.tokens());
  out.emplace_back(kCloseQuote);
  return out;
}

void append_query(Tokens& out, const std::string& label_word) {
  append(out, split_whitespace(label_word));
  out.emplace_back(kRefers);
  out.emplace_back(kTo);
}

}  // namespace

std::string Prompt::render() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool glue = i == 1 || (sentence_length > 0 && i == sentence_length + 1);
    if (i > 0 && !glue) out += ' ';
    out += tokens[i];
  }
  return out;
}

Tokens render_answer(const SlotValues& values, const ControlTokens& control) {
  Tokens out;
  if (values.empty()) {
    out.push_back(control.none_token);
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out.push_back(control.sep_token);
      append(out, values[i]);
    }
  }
  out.push_back(control.end_token);
  return out;
}

std::vector<Prompt> build_inverse_prompts(
    const Sentence& sentence, std::span<const std::string> label_words) {
  std::vector<Prompt> prompts;
  prompts.reserve(label_words.size());
  for (const auto& word : label_words) {
    Prompt p;
    p.tokens = quoted(sentence);
    append_query(p.tokens, word);
    p.answer_start = p.tokens.size();
    p.round = Round::First;
    p.target_label_word = word;
    p.sentence_length = sentence.size();
    prompts.push_back(std::move(p));
  }
  return prompts;
}

Prompt build_answered_prompt(const Sentence& sentence,
                             const std::string& label_word,
                             const SlotValues& values,
                             const ControlTokens& control) {
  const std::string words[] = {label_word};
  Prompt p = std::move(build_inverse_prompts(sentence, words).front());
  append(p.tokens, render_answer(values, control));
  return p;
}

Prompt build_second_round_prompt(const Sentence& sentence,
                                 std::span<const KnownPair> known,
                                 const std::string& target_label_word,
                                 const ControlTokens& control) {
  Prompt p;
  p.tokens = quoted(sentence);
  for (const auto& pair : known) {
    if (pair.label_word == target_label_word)
      throw DuplicateTarget(target_label_word);
    append_query(p.tokens, pair.label_word);
    append(p.tokens, render_answer(pair.values, control));
  }
  append_query(p.tokens, target_label_word);
  p.answer_start = p.tokens.size();
  p.round = Round::Second;
  p.target_label_word = target_label_word;
  p.sentence_length = sentence.size();
  return p;
}

Prompt build_answered_second_round_prompt(const Sentence& sentence,
                                          std::span<const KnownPair> known,
                                          const std::string& target_label_word,
                                          const SlotValues& values,
                                          const ControlTokens& control) {
  Prompt p = build_second_round_prompt(sentence, known, target_label_word, control);
  append(p.tokens, render_answer(values, control));
  return p;
}

std::uint64_t normal_prompt_count(std::size_t n, std::size_t m,
                                  NormalPromptMode mode) {
  const std::uint64_t spans = static_cast<std::uint64_t>(n) * (n + 1) / 2;
  return mode == NormalPromptMode::Span ? spans : spans * m;
}

std::vector<SpanPrompt> build_normal_prompts(
    const Sentence& sentence, std::span<const std::string> label_words,
    NormalPromptMode mode) {
  std::vector<SpanPrompt> out;
  const auto& x = sentence.tokens();
  const std::size_t n = x.size();
  out.reserve(normal_prompt_count(n, label_words.size(), mode));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Tokens base = quoted(sentence);
      base.insert(base.end(), x.begin() + i, x.begin() + j + 1);
      base.emplace_back("is");
      base.emplace_back("a");
      if (mode == NormalPromptMode::Span) {
        out.push_back({i, j, std::nullopt, std::move(base)});
        continue;
      }
      for (std::size_t l = 0; l < label_words.size(); ++l) {
        Tokens t = base;
        append(t, split_whitespace(label_words[l]));
        t.emplace_back("entity");
        out.push_back({i, j, l, std::move(t)});
      }
    }
  }
  return out;
}

TrainingExample to_training_example(const Prompt& prompt) {
  TrainingExample ex;
  ex.tokens = prompt.tokens;
  ex.answer_start = prompt.answer_start;
  ex.loss_mask.assign(prompt.tokens.size(), false);
  for (std::size_t i = prompt.answer_start; i < prompt.tokens.size(); ++i)
    ex.loss_mask[i] = true;
  ex.round = prompt.round;
  ex.target_label_word = prompt.target_label_word;
  return ex;
}

std::vector<KnownPair> group_by_label(const SlotAnnotation& annotation,
                                      const LabelMapping& mapping) {
  std::vector<KnownPair> grouped;
  grouped.reserve(mapping.size());
  for (const auto& e : mapping.entries()) grouped.push_back({e.label_word, {}});
  for (const auto& pair : annotation.pairs) {
    bool found = false;
    for (std::size_t i = 0; i < mapping.size(); ++i) {
      if (mapping.entries()[i].raw_label == pair.raw_label) {
        grouped[i].values.push_back(pair.value_tokens);
        found = true;
        break;
      }
    }
    if (!found) throw UnknownLabel(pair.raw_label);
  }
  return grouped;
}

std::vector<TrainingExample> emit_training_examples(
    const Sentence& sentence, const SlotAnnotation& annotation,
    const LabelMapping& mapping, const ControlTokens& control,
    const TrainingOptions& options) {
  if (!(options.withhold_prob >= 0.0 && options.withhold_prob <= 1.0))
    throw InvalidArgument("withhold_prob must lie in [0, 1]");
  const auto grouped = group_by_label(annotation, mapping);

  std::vector<TrainingExample> out;
  for (const auto& pair : grouped)
    out.push_back(to_training_example(
        build_answered_prompt(sentence, pair.label_word, pair.values, control)));

  // One draw per occurred label, in mapping order.
  std::mt19937_64 rng(options.seed);
  std::vector<bool> withheld(grouped.size(), false);
  for (std::size_t i = 0; i < grouped.size(); ++i) {
    if (grouped[i].values.empty()) continue;
    withheld[i] = detail::uniform01(rng) < options.withhold_prob;
  }

  std::vector<KnownPair> context;
  for (std::size_t i = 0; i < grouped.size(); ++i)
    if (!withheld[i]) context.push_back(grouped[i]);

  for (std::size_t i = 0; i < grouped.size(); ++i) {
    if (!withheld[i]) continue;
    Prompt p = build_answered_second_round_prompt(
        sentence, context, grouped[i].label_word, grouped[i].values, control);
    out.push_back(to_training_example(p));
  }
  return out;
}

}  // namespace invtag
