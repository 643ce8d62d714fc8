#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invtag/lm.hpp"
#include "invtag/prompting.hpp"
#include "invtag/types.hpp"

namespace invtag {

// Ordered set of decodable words. The order is the tie-break order: sentence
// words by first occurrence, then none, sep, end (duplicates collapsed).
class AllowedTokens {
 public:
  AllowedTokens() = default;
  explicit AllowedTokens(std::vector<std::string> ordered);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  bool contains(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
};

AllowedTokens allowed_tokens(const Sentence& sentence,
                             const ControlTokens& control = {});

struct DecodeConfig {
  std::size_t max_generated_tokens = 40;
  ControlTokens control;

  void validate() const;
};

struct GenerationResult {
  Tokens generated_tokens;
  bool terminated_by_end = false;
  std::size_t steps_used = 0;

  friend bool operator==(const GenerationResult&, const GenerationResult&) = default;
};

// Greedy argmax decoding restricted to `allowed`; the first maximal
// candidate in allowed order wins ties. Stops after END or at the cap.
GenerationResult decode_constrained(const LmScorer& scorer, const Prompt& prompt,
                                    const AllowedTokens& allowed,
                                    const DecodeConfig& config = {});

// Splits an answer region into slot values. Strips one trailing END, splits
// on SEP, drops empty and NONE segments.
SlotValues parse_answer(std::span<const std::string> tokens,
                        const ControlTokens& control = {});

inline SlotValues parse_generation(const GenerationResult& result,
                                   const ControlTokens& control = {}) {
  return parse_answer(result.generated_tokens, control);
}

}  // namespace invtag
