#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "invtag/pipeline.hpp"
#include "invtag/prompting.hpp"
#include "invtag/types.hpp"

namespace invtag {

// Per-token tags over {O, B-label, I-label}. Not required to be well formed.
using BioSequence = std::vector<std::string>;

struct Chunk {
  std::string raw_label;
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  friend auto operator<=>(const Chunk&, const Chunk&) = default;
};

// Whether every non-conflicting occurrence of a value is labeled, or only
// the leftmost one.
enum class OccurrencePolicy { All, FirstOnly };

struct LabeledValue {
  std::string raw_label;
  SlotValues values;
};

// Maps generated values back onto the sentence. A value labels only exact
// contiguous matches, never a token that an earlier value already claimed;
// spans are written as B- then I- tags, everything else is O.
BioSequence apply_reverse_labeling(const Sentence& sentence,
                                   const std::vector<LabeledValue>& prediction,
                                   OccurrencePolicy policy = OccurrencePolicy::All);
BioSequence apply_reverse_labeling(const Sentence& sentence,
                                   const SlotPrediction& prediction,
                                   OccurrencePolicy policy = OccurrencePolicy::All);

// conlleval segmentation: a chunk opens at B-x, or at I-x after O, after a
// different type, or at the sequence start; it extends over following I-x.
// Sorted by start.
std::vector<Chunk> chunks_from_bio(const BioSequence& bio);

// Throws LengthMismatch.
SlotAnnotation bio_to_annotation(const Sentence& sentence, const BioSequence& bio);

// Tag shape check: "O", or "B-"/"I-" followed by a nonempty label.
bool is_bio_tag(std::string_view tag);

}  // namespace invtag
