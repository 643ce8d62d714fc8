#include "invtag/labeling.hpp"

#include <algorithm>

#include "invtag/errors.hpp"

namespace invtag {

namespace {

struct ParsedTag {
  char prefix;  // 'B', 'I' or 'O' (anything unrecognized counts as O)
  std::string_view type;
};

ParsedTag parse_tag(std::string_view tag) {
  if (tag.size() > 2 && tag[1] == '-' && (tag[0] == 'B' || tag[0] == 'I'))
    return {tag[0], tag.substr(2)};
  return {'O', {}};
}

}  // namespace

bool is_bio_tag(std::string_view tag) {
  return tag == "O" || parse_tag(tag).prefix != 'O';
}

BioSequence apply_reverse_labeling(const Sentence& sentence,
                                   const std::vector<LabeledValue>& prediction,
                                   OccurrencePolicy policy) {
  const auto& x = sentence.tokens();
  const std::size_t n = x.size();
  BioSequence tags(n, "O");
  std::vector<bool> claimed(n, false);

  for (const auto& label : prediction) {
    for (const auto& value : label.values) {
      const std::size_t len = value.size();
      if (len == 0 || len > n) continue;
      for (std::size_t start = 0; start + len <= n; ++start) {
        if (!std::equal(value.begin(), value.end(), x.begin() + start)) continue;
        const bool free = std::none_of(claimed.begin() + start,
                                       claimed.begin() + start + len,
                                       [](bool c) { return c; });
        if (!free) continue;
        for (std::size_t i = start; i < start + len; ++i) {
          claimed[i] = true;
          tags[i] = (i == start ? "B-" : "I-") + label.raw_label;
        }
        if (policy == OccurrencePolicy::FirstOnly) break;
        start += len - 1;
      }
    }
  }
  return tags;
}

BioSequence apply_reverse_labeling(const Sentence& sentence,
                                   const SlotPrediction& prediction,
                                   OccurrencePolicy policy) {
  std::vector<LabeledValue> values;
  values.reserve(prediction.per_label.size());
  for (const auto& l : prediction.per_label) values.push_back({l.raw_label, l.values});
  return apply_reverse_labeling(sentence, values, policy);
}

std::vector<Chunk> chunks_from_bio(const BioSequence& bio) {
  std::vector<Chunk> chunks;
  bool open = false;
  std::string_view open_type;
  for (std::size_t i = 0; i < bio.size(); ++i) {
    const auto tag = parse_tag(bio[i]);
    const bool continues = open && tag.prefix == 'I' && tag.type == open_type;
    if (continues) {
      chunks.back().end = i;
      continue;
    }
    open = tag.prefix != 'O';
    if (open) {
      open_type = tag.type;
      chunks.push_back({std::string(tag.type), i, i});
    }
  }
  return chunks;
}

SlotAnnotation bio_to_annotation(const Sentence& sentence, const BioSequence& bio) {
  if (bio.size() != sentence.size()) throw LengthMismatch(sentence.size(), bio.size());
  SlotAnnotation out;
  const auto& x = sentence.tokens();
  for (const auto& c : chunks_from_bio(bio))
    out.pairs.push_back(
        {c.raw_label, Tokens(x.begin() + c.start, x.begin() + c.end + 1)});
  return out;
}

}  // namespace invtag
