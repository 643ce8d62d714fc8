#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "invtag/labeling.hpp"
#include "invtag/prompting.hpp"
#include "invtag/types.hpp"

namespace invtag {

struct TaggedSentence {
  Sentence sentence;
  BioSequence tags;
};

struct Dataset {
  std::vector<TaggedSentence> examples;
  std::set<std::string> label_inventory;

  // Rebuilds label_inventory from the tags.
  void index_labels();
};

struct LoadOptions {
  bool lowercase = false;
};

// One "token<TAB>tag" (or "token tag") per line, blank line between
// sentences. Throws ParseError naming the line.
Dataset parse_conll(std::string_view text, const LoadOptions& options = {},
                    const std::string& source = "<input>");
Dataset load_conll(const std::string& path, const LoadOptions& options = {});
std::string to_conll(std::span<const TaggedSentence> examples);
void write_conll(const std::string& path, std::span<const TaggedSentence> examples);

// Reads either CoNLL or JSON lines with "tokens" and "tags" fields (the
// format written by the tag command); the first non-blank character decides.
std::vector<TaggedSentence> load_tagged(const std::string& path,
                                        const LoadOptions& options = {});

struct Episode {
  std::vector<TaggedSentence> support;
  std::vector<TaggedSentence> query;
  std::string domain_name;
};

// {"domain": s, "episodes": [{"support": [{"tokens": [...], "tags": [...]}],
//                              "query": [...]}]}
// Throws ParseError carrying the JSON path of the offending node.
std::vector<Episode> parse_episodes(std::string_view text,
                                    const LoadOptions& options = {});
std::vector<Episode> load_episodes(const std::string& path,
                                   const LoadOptions& options = {});

struct SampleOptions {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::size_t num_sets = 10;
};

// Chunk-occurrence counts per label.
std::vector<std::pair<std::string, std::size_t>> label_counts(
    std::span<const TaggedSentence> examples);

// True when every label of `inventory` has >= k chunk occurrences.
bool covers_k_shot(std::span<const TaggedSentence> support,
                   const std::set<std::string>& inventory, std::size_t k);

// Minimum-inclusion greedy K-shot sampling. Each set is seeded from
// (seed, set index); examples are returned in corpus order. Throws
// SupportInfeasible(label) when the corpus has fewer than k instances.
std::vector<std::vector<TaggedSentence>> sample_k_shot(const Dataset& dataset,
                                                       const SampleOptions& options);

struct GoldPair {
  std::string raw_label;
  std::string label_word;
  SlotValues values;
};

// One entry per mapping label, mapping order; values in sentence order.
// Throws UnknownLabel, LengthMismatch.
std::vector<GoldPair> extract_gold_pairs(const Sentence& sentence,
                                         const BioSequence& bio,
                                         const LabelMapping& mapping);

}  // namespace invtag
