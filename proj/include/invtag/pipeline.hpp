#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "invtag/decoding.hpp"
#include "invtag/lm.hpp"
#include "invtag/prompting.hpp"
#include "invtag/types.hpp"

namespace invtag {

enum class Resolution { First, Second, Unresolved };

const char* to_string(Resolution r);

struct LabelPrediction {
  std::string raw_label;
  std::string label_word;
  SlotValues values;  // empty means none
  Resolution round_resolved = Resolution::Unresolved;
  // Generation that produced `values` (the last one issued for this label).
  GenerationResult generation;
  std::string error;  // scorer failure message, if any
};

struct DecodeTrace {
  Prompt prompt;
  GenerationResult result;
  std::size_t round = 1;
};

struct SlotPrediction {
  std::vector<LabelPrediction> per_label;  // mapping order
  std::vector<DecodeTrace> trace;          // every decode call, in issue order
  std::size_t failures = 0;

  std::size_t decode_calls() const { return trace.size(); }
};

struct TagConfig {
  DecodeConfig decode;
  bool iterative = true;
  std::size_t iterations = 1;  // revision rounds when iterative
  bool strict = false;         // rethrow scorer failures
};

// First round: one inverse prompt per label. Revision rounds re-query only
// labels that are still empty, conditioning on every label found so far.
SlotPrediction tag_sentence(const LmScorer& scorer, const Sentence& sentence,
                            const LabelMapping& mapping,
                            const TagConfig& config = {});

struct DecodeCallCount {
  std::size_t first_round = 0;
  std::size_t second_round_max = 0;
  friend bool operator==(const DecodeCallCount&, const DecodeCallCount&) = default;
};

DecodeCallCount count_decode_calls(std::size_t label_count, bool iterative);
inline DecodeCallCount count_decode_calls(const Sentence&, const LabelMapping& mapping,
                                          bool iterative) {
  return count_decode_calls(mapping.size(), iterative);
}

}  // namespace invtag
