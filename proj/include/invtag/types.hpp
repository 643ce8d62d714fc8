#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invtag {

using Tokens = std::vector<std::string>;
// Slot values for one label: each value is a nonempty token list.
using SlotValues = std::vector<Tokens>;

// Splits on ASCII whitespace, dropping empty pieces.
Tokens split_whitespace(std::string_view text);
std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

// Reserved output words: NONE pads an empty slot, SEP separates multiple
// values of one slot, END terminates a generation.
struct ControlTokens {
  std::string none_token = "none";
  std::string sep_token = ";";
  std::string end_token = ".";

  // Throws InvalidArgument unless all three are nonempty and distinct.
  void validate() const;
  bool is_control(std::string_view token) const {
    return token == none_token || token == sep_token || token == end_token;
  }
};

// A tokenized utterance. Tokens are nonempty and whitespace-free.
class Sentence {
 public:
  explicit Sentence(Tokens tokens);
  static Sentence from_text(std::string_view text);

  const Tokens& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  std::string raw_text() const { return join(tokens_); }

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  Tokens tokens_;
};

struct LabelEntry {
  std::string raw_label;
  std::string label_word;
  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

// One-to-one map from raw labels (e.g. "from.Loc") to natural-language label
// words (e.g. "departure"). Entry order is significant: prompts, predictions
// and training examples all follow it.
class LabelMapping {
 public:
  LabelMapping() = default;
  explicit LabelMapping(std::vector<LabelEntry> entries,
                        const ControlTokens& control = {});

  // Reads a UTF-8 JSON object {raw_label: label_word}; file key order is kept.
  static LabelMapping load_json(const std::string& path,
                                const ControlTokens& control = {});
  static LabelMapping parse_json(std::string_view text,
                                 const ControlTokens& control = {});

  const std::vector<LabelEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::optional<std::string> find_word(std::string_view raw_label) const;
  // Throws UnknownLabel.
  const std::string& word_for(std::string_view raw_label) const;
  bool contains(std::string_view raw_label) const {
    return find_word(raw_label).has_value();
  }

 private:
  std::vector<LabelEntry> entries_;
};

// Converts raw labels to label words, preserving order. Throws UnknownLabel.
std::vector<std::string> map_labels(std::span<const std::string> labels,
                                    const LabelMapping& mapping);

}  // namespace invtag
