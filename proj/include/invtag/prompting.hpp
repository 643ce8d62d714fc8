#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invtag/types.hpp"

namespace invtag {

enum class Round { First, Second };

inline constexpr const char* kOpenQuote = "\"";
inline constexpr const char* kCloseQuote = "\"";

// A rendered prompt. tokens[0] is the open quote, tokens[1..sentence_length]
// the sentence and tokens[sentence_length + 1] the close quote. Everything
// from answer_start on is the answer region; unanswered prompts have
// answer_start == tokens.size().
struct Prompt {
  Tokens tokens;
  std::size_t answer_start = 0;
  Round round = Round::First;
  std::string target_label_word;
  std::size_t sentence_length = 0;

  bool answered() const { return answer_start < tokens.size(); }
  std::span<const std::string> context() const {
    return std::span(tokens).first(answer_start);
  }
  std::span<const std::string> answer() const {
    return std::span(tokens).subspan(answer_start);
  }
  // Space-joined text with the quotes glued to the sentence, e.g.
  // "book a flight" departure refers to
  std::string render() const;

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

struct SlotPair {
  std::string raw_label;
  Tokens value_tokens;
  friend bool operator==(const SlotPair&, const SlotPair&) = default;
};

struct SlotAnnotation {
  std::vector<SlotPair> pairs;
  friend bool operator==(const SlotAnnotation&, const SlotAnnotation&) = default;
};

// A label word together with its (possibly empty) values.
struct KnownPair {
  std::string label_word;
  SlotValues values;
};

// Answer region tokens: values joined by SEP and closed by END, or NONE END.
Tokens render_answer(const SlotValues& values, const ControlTokens& control);

std::vector<Prompt> build_inverse_prompts(const Sentence& sentence,
                                          std::span<const std::string> label_words);

Prompt build_answered_prompt(const Sentence& sentence,
                             const std::string& label_word,
                             const SlotValues& values,
                             const ControlTokens& control = {});

// Throws DuplicateTarget if target_label_word is among the known pairs.
Prompt build_second_round_prompt(const Sentence& sentence,
                                 std::span<const KnownPair> known,
                                 const std::string& target_label_word,
                                 const ControlTokens& control = {});

// Same as build_second_round_prompt followed by the target's answer region.
Prompt build_answered_second_round_prompt(const Sentence& sentence,
                                          std::span<const KnownPair> known,
                                          const std::string& target_label_word,
                                          const SlotValues& values,
                                          const ControlTokens& control = {});

// Span-enumeration baseline ("[x] [span] is a [z] entity").
enum class NormalPromptMode { Span, PerLabel };

struct SpanPrompt {
  std::size_t start = 0;  // inclusive token index
  std::size_t end = 0;    // inclusive token index
  std::optional<std::size_t> label_index;
  Tokens tokens;
};

// n(n+1)/2 spans, times m in per-label mode.
std::uint64_t normal_prompt_count(std::size_t n, std::size_t m,
                                  NormalPromptMode mode);

std::vector<SpanPrompt> build_normal_prompts(const Sentence& sentence,
                                             std::span<const std::string> label_words,
                                             NormalPromptMode mode);

// One prompt tokens/loss-mask pair for an external trainer. The loss covers
// exactly the positions >= answer_start.
struct TrainingExample {
  Tokens tokens;
  std::vector<bool> loss_mask;
  std::size_t answer_start = 0;
  Round round = Round::First;
  std::string target_label_word;
};

struct TrainingOptions {
  std::uint64_t seed = 0;
  double withhold_prob = 0.5;
};

// Groups the annotation's values by label in mapping order; absent labels get
// no values. Throws UnknownLabel.
std::vector<KnownPair> group_by_label(const SlotAnnotation& annotation,
                                      const LabelMapping& mapping);

std::vector<TrainingExample> emit_training_examples(
    const Sentence& sentence, const SlotAnnotation& annotation,
    const LabelMapping& mapping, const ControlTokens& control,
    const TrainingOptions& options);

TrainingExample to_training_example(const Prompt& prompt);

}  // namespace invtag
