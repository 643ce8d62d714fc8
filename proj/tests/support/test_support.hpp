#pragma once

// Helpers shared by the unit and acceptance tests: a synthetic slot corpus
// with uniquely matching values and a few scripted scorers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "invtag/data.hpp"
#include "invtag/errors.hpp"
#include "invtag/lm.hpp"

namespace invtag::testing {

inline const Tokens& fig2_tokens() {
  static const Tokens t = split_whitespace("book a flight from beijing to new york tomorrow morning");
  return t;
}

inline BioSequence fig2_tags() {
  return {"O", "O", "O", "O", "B-from.Loc", "O", "B-to.Loc", "I-to.Loc", "B-Time", "I-Time"};
}

inline LabelMapping fig2_mapping() {
  return LabelMapping({{"from.Loc", "departure"},
                       {"to.Loc", "arrival"},
                       {"Time", "time"},
                       {"Price", "price"}});
}

inline LabelMapping synthetic_mapping() {
  return LabelMapping({{"from.Loc", "departure"},
                       {"to.Loc", "arrival"},
                       {"Time", "time"},
                       {"Price", "price"},
                       {"Airline", "airline"},
                       {"Class", "cabin"}});
}

// Number of places `value` occurs as a contiguous run of `tokens`.
inline std::size_t count_occurrences(const Tokens& tokens, const Tokens& value) {
  std::size_t hits = 0;
  for (std::size_t s = 0; s + value.size() <= tokens.size(); ++s)
    if (std::equal(value.begin(), value.end(), tokens.begin() + s)) ++hits;
  return hits;
}

// Random sentence whose chunks do not overlap and whose every value matches
// exactly one span of the sentence.
inline TaggedSentence random_tagged_sentence(std::mt19937_64& rng, const LabelMapping& mapping,
                                             std::size_t max_chunks = 4) {
  static const std::vector<std::string> fillers = {
      "please", "book", "a",   "flight", "show", "me",  "the",  "cheapest", "want",
      "i",      "need", "for", "on",     "with", "and", "from", "to",       "at"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  while (true) {
    const std::size_t chunks = pick(max_chunks + 1);
    Tokens tokens;
    BioSequence tags;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    auto add_fillers = [&](std::size_t upto) {
      const std::size_t k = pick(upto + 1);
      for (std::size_t i = 0; i < k; ++i) {
        tokens.push_back(fillers[pick(fillers.size())]);
        tags.emplace_back("O");
      }
    };
    add_fillers(3);
    for (std::size_t c = 0; c < chunks; ++c) {
      const auto& entry = mapping.entries()[pick(mapping.size())];
      const auto& label = entry.raw_label;
      const std::size_t len = 1 + pick(3);
      spans.push_back({tokens.size(), tokens.size() + len});
      for (std::size_t i = 0; i < len; ++i) {
        // Label-specific vocabulary keeps values apart from fillers.
        tokens.push_back(entry.label_word + std::to_string(pick(6)));
        tags.push_back((i == 0 ? "B-" : "I-") + label);
      }
      add_fillers(2);
    }
    if (tokens.empty()) continue;
    bool unique = true;
    for (const auto& [b, e] : spans) {
      const Tokens value(tokens.begin() + b, tokens.begin() + e);
      if (count_occurrences(tokens, value) != 1) unique = false;
    }
    if (!unique) continue;
    return {Sentence(std::move(tokens)), std::move(tags)};
  }
}

inline std::vector<TaggedSentence> synthetic_corpus(std::uint64_t seed, std::size_t count,
                                                    const LabelMapping& mapping = synthetic_mapping()) {
  std::mt19937_64 rng(seed);
  std::vector<TaggedSentence> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_tagged_sentence(rng, mapping));
  return out;
}

inline std::vector<GoldExample> to_gold(std::span<const TaggedSentence> data) {
  std::vector<GoldExample> out;
  for (const auto& ex : data) out.push_back({ex.sentence, bio_to_annotation(ex.sentence, ex.tags)});
  return out;
}

// Deterministic pseudo-random scores from (seed, prefix, candidate).
class HashScorer final : public LmScorer {
 public:
  explicit HashScorer(std::uint64_t seed) : seed_(seed) {}
  bool concurrent_calls_allowed() const override { return true; }

 protected:
  std::vector<double> do_score_next(std::span<const std::string> prefix,
                                    std::span<const std::string> candidates) const override {
    std::uint64_t h = seed_ * 0x9e3779b97f4a7c15ULL + prefix.size();
    for (const auto& t : prefix) h = h * 1099511628211ULL ^ std::hash<std::string>{}(t);
    std::vector<double> scores;
    for (const auto& c : candidates) {
      std::uint64_t x = h ^ std::hash<std::string>{}(c);
      x ^= x >> 33;
      x *= 0xff51afd7ed558ccdULL;
      x ^= x >> 33;
      scores.push_back(static_cast<double>(x % 1000) / 10.0);
    }
    return scores;
  }

 private:
  std::uint64_t seed_;
};

class ConstantScorer final : public LmScorer {
 public:
  bool concurrent_calls_allowed() const override { return true; }

 protected:
  std::vector<double> do_score_next(std::span<const std::string>,
                                    std::span<const std::string> candidates) const override {
    return std::vector<double>(candidates.size(), 0.5);
  }
};

class FailingScorer final : public LmScorer {
 public:
  bool concurrent_calls_allowed() const override { return true; }

 protected:
  std::vector<double> do_score_next(std::span<const std::string>,
                                    std::span<const std::string>) const override {
    throw ScorerFailure("scripted failure");
  }
};

// Returns a caller-chosen score vector, e.g. a wrong length or NaN.
class RawScorer final : public LmScorer {
 public:
  explicit RawScorer(std::function<std::vector<double>(std::size_t)> f) : f_(std::move(f)) {}
  bool concurrent_calls_allowed() const override { return false; }

 protected:
  std::vector<double> do_score_next(std::span<const std::string>,
                                    std::span<const std::string> candidates) const override {
    return f_(candidates.size());
  }

 private:
  std::function<std::vector<double>(std::size_t)> f_;
};

inline std::filesystem::path temp_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("invtag_" + name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string mapping_json(const LabelMapping& mapping) {
  std::string out = "{";
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + mapping.entries()[i].raw_label + "\": \"" + mapping.entries()[i].label_word + "\"";
  }
  return out + "}";
}

}  // namespace invtag::testing
