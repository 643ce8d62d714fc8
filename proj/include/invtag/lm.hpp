#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "invtag/prompting.hpp"
#include "invtag/types.hpp"

namespace invtag {

// Next-word scorer over a whole-word candidate list. Implementations override
// do_score_next; score_next checks the contract on both sides of the call.
class LmScorer {
 public:
  virtual ~LmScorer() = default;

  // One finite score per candidate, in candidate order. Throws
  // InvalidArgument for an empty candidate list and ScorerFailure when the
  // implementation breaks the contract or fails.
  std::vector<double> score_next(std::span<const std::string> prefix,
                                 std::span<const std::string> candidates) const;

  virtual bool concurrent_calls_allowed() const = 0;

 protected:
  virtual std::vector<double> do_score_next(
      std::span<const std::string> prefix,
      std::span<const std::string> candidates) const = 0;
};

// Exact-match lookup table keyed by the full token prefix. Immutable after
// construction, so concurrent calls are fine.
class ReferenceLm final : public LmScorer {
 public:
  using Distribution = std::unordered_map<std::string, double>;

  explicit ReferenceLm(double fallback_score = 0.0);

  // Throws ConflictingGold if the key already holds a different distribution.
  void add(std::span<const std::string> prefix, Distribution next);
  // Records a gold continuation: every answer position scores its gold token
  // above the fallback. Throws ConflictingGold on a contradicting entry.
  void add_continuation(std::span<const std::string> context,
                        std::span<const std::string> answer);

  double fallback_score() const { return fallback_; }
  std::size_t size() const { return table_.size(); }
  bool concurrent_calls_allowed() const override { return true; }

  static std::string context_key(std::span<const std::string> prefix);

 protected:
  std::vector<double> do_score_next(
      std::span<const std::string> prefix,
      std::span<const std::string> candidates) const override;

 private:
  std::unordered_map<std::string, Distribution> table_;
  double fallback_;
};

struct GoldExample {
  Sentence sentence;
  SlotAnnotation annotation;
};

// Builds a scorer that regenerates the gold answer region of every
// first-round prompt (and of the inference-time second-round prompt of every
// gold-none label). Throws ConflictingGold.
ReferenceLm reference_from_gold(std::span<const GoldExample> examples,
                                const LabelMapping& mapping,
                                const ControlTokens& control = {},
                                double fallback_score = 0.0);

struct RemoteLmOptions {
  std::string endpoint;  // e.g. http://127.0.0.1:8080 or http://host/base
  std::chrono::milliseconds timeout{10000};
  int retry_limit = 2;
  std::chrono::milliseconds backoff{50};
  std::ptrdiff_t max_in_flight = 8;
};

// Client for the JSON-over-HTTP scoring protocol:
//   POST <endpoint>/score  {"prefix": [...], "candidates": [...]}
//   200                    {"scores": [...]}  same length and order
class RemoteLm final : public LmScorer {
 public:
  explicit RemoteLm(RemoteLmOptions options);
  ~RemoteLm() override;

  bool concurrent_calls_allowed() const override { return true; }
  const RemoteLmOptions& options() const { return options_; }

 protected:
  std::vector<double> do_score_next(
      std::span<const std::string> prefix,
      std::span<const std::string> candidates) const override;

 private:
  RemoteLmOptions options_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // base path + "/score"
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

// Wire helpers, shared with stub servers in tests.
std::string encode_score_request(std::span<const std::string> prefix,
                                 std::span<const std::string> candidates);
// Throws ScorerFailure when the body is malformed or the length is wrong.
std::vector<double> decode_score_response(const std::string& body,
                                          std::size_t expected);

}  // namespace invtag
