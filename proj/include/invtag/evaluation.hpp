#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invtag/data.hpp"
#include "invtag/labeling.hpp"
#include "invtag/pipeline.hpp"

namespace invtag {

// Score assigned when an evaluation has neither gold nor predicted chunks.
enum class EmptyEpisodePolicy { Perfect, Zero };

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold_chunks = 0;
  std::size_t pred_chunks = 0;
  std::size_t correct_chunks = 0;
};

EvalReport make_report(std::size_t correct, std::size_t pred, std::size_t gold,
                       EmptyEpisodePolicy policy = EmptyEpisodePolicy::Perfect);

// Micro-averaged chunk P/R/F over parallel sequence lists; a chunk is
// correct when (label, start, end) match within the same sequence.
// Throws LengthMismatch.
EvalReport chunk_f1(std::span<const BioSequence> gold,
                    std::span<const BioSequence> pred,
                    EmptyEpisodePolicy policy = EmptyEpisodePolicy::Perfect);

// Scores the query set only. Throws MissingPrediction when fewer
// predictions than query sentences are given.
EvalReport evaluate_episode(const Episode& episode,
                            std::span<const BioSequence> predictions,
                            EmptyEpisodePolicy policy = EmptyEpisodePolicy::Perfect);

struct AggregateSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t count = 0;
};

// Unweighted mean over reports. Throws EmptyInput.
AggregateSummary aggregate(std::span<const EvalReport> reports);

struct EfficiencyReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t normal_span_count = 0;    // n(n+1)/2
  std::uint64_t normal_prompt_count = 0;  // n(n+1)/2 * m
  std::uint64_t inverse_prompt_count = 0; // m
  std::uint64_t inverse_prompt_upper = 0; // 2m with revision, else m
  std::string normal_complexity_class = "O(n^2*m)";
  std::string inverse_complexity_class = "O(n*m)";
  std::optional<std::size_t> decode_calls;
  std::optional<std::size_t> decode_steps;
};

EfficiencyReport efficiency_report(std::size_t n, std::size_t m, bool iterative);
EfficiencyReport efficiency_report(const Sentence& sentence,
                                   const LabelMapping& mapping, bool iterative,
                                   const std::vector<DecodeTrace>* trace = nullptr);

std::string to_json(const EvalReport& report);
std::string to_json(const AggregateSummary& summary);
std::string to_json(const EfficiencyReport& report);
std::string to_text(const EvalReport& report);

}  // namespace invtag
