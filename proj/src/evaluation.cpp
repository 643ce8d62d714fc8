#include "invtag/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>

#include "invtag/errors.hpp"
#include "json.hpp"

namespace invtag {

EvalReport make_report(std::size_t correct, std::size_t pred, std::size_t gold,
                       EmptyEpisodePolicy policy) {
  EvalReport r;
  r.correct_chunks = correct;
  r.pred_chunks = pred;
  r.gold_chunks = gold;
  if (gold == 0 && pred == 0) {
    const double v = policy == EmptyEpisodePolicy::Perfect ? 1.0 : 0.0;
    r.precision = r.recall = r.f1 = v;
    return r;
  }
  r.precision = pred ? static_cast<double>(correct) / pred : 0.0;
  r.recall = gold ? static_cast<double>(correct) / gold : 0.0;
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0 ? 2 * r.precision * r.recall / sum : 0.0;
  return r;
}

EvalReport chunk_f1(std::span<const BioSequence> gold,
                    std::span<const BioSequence> pred, EmptyEpisodePolicy policy) {
  if (gold.size() != pred.size()) throw LengthMismatch(gold.size(), pred.size());
  std::size_t correct = 0, n_pred = 0, n_gold = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size())
      throw LengthMismatch(gold[i].size(), pred[i].size());
    auto g = chunks_from_bio(gold[i]);
    auto p = chunks_from_bio(pred[i]);
    std::sort(g.begin(), g.end());
    std::sort(p.begin(), p.end());
    std::vector<Chunk> both;
    std::set_intersection(g.begin(), g.end(), p.begin(), p.end(),
                          std::back_inserter(both));
    correct += both.size();
    n_gold += g.size();
    n_pred += p.size();
  }
  return make_report(correct, n_pred, n_gold, policy);
}

EvalReport evaluate_episode(const Episode& episode,
                            std::span<const BioSequence> predictions,
                            EmptyEpisodePolicy policy) {
  if (predictions.size() < episode.query.size())
    throw MissingPrediction("episode has " + std::to_string(episode.query.size()) +
                            " query sentences but " +
                            std::to_string(predictions.size()) + " predictions");
  if (predictions.size() > episode.query.size())
    throw LengthMismatch(episode.query.size(), predictions.size());
  std::vector<BioSequence> gold;
  gold.reserve(episode.query.size());
  for (const auto& q : episode.query) gold.push_back(q.tags);
  return chunk_f1(gold, predictions, policy);
}

AggregateSummary aggregate(std::span<const EvalReport> reports) {
  if (reports.empty()) throw EmptyInput("aggregate: no reports");
  AggregateSummary s;
  for (const auto& r : reports) {
    s.precision += r.precision;
    s.recall += r.recall;
    s.f1 += r.f1;
  }
  const double n = static_cast<double>(reports.size());
  s.precision /= n;
  s.recall /= n;
  s.f1 /= n;
  s.count = reports.size();
  return s;
}

EfficiencyReport efficiency_report(std::size_t n, std::size_t m, bool iterative) {
  EfficiencyReport r;
  r.n = n;
  r.m = m;
  r.normal_span_count = normal_prompt_count(n, m, NormalPromptMode::Span);
  r.normal_prompt_count = normal_prompt_count(n, m, NormalPromptMode::PerLabel);
  const auto calls = count_decode_calls(m, iterative);
  r.inverse_prompt_count = calls.first_round;
  r.inverse_prompt_upper = calls.first_round + calls.second_round_max;
  return r;
}

EfficiencyReport efficiency_report(const Sentence& sentence,
                                   const LabelMapping& mapping, bool iterative,
                                   const std::vector<DecodeTrace>* trace) {
  auto r = efficiency_report(sentence.size(), mapping.size(), iterative);
  if (trace) {
    std::size_t steps = 0;
    for (const auto& t : *trace) steps += t.result.steps_used;
    r.decode_calls = trace->size();
    r.decode_steps = steps;
  }
  return r;
}

std::string to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["gold_chunks"] = r.gold_chunks;
  j["pred_chunks"] = r.pred_chunks;
  j["correct_chunks"] = r.correct_chunks;
  return j.dump();
}

std::string to_json(const AggregateSummary& s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  j["count"] = s.count;
  return j.dump();
}

std::string to_json(const EfficiencyReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["normal_span_count"] = r.normal_span_count;
  j["normal_prompt_count"] = r.normal_prompt_count;
  j["inverse_prompt_count"] = r.inverse_prompt_count;
  j["inverse_prompt_upper"] = r.inverse_prompt_upper;
  j["normal_complexity_class"] = r.normal_complexity_class;
  j["inverse_complexity_class"] = r.inverse_complexity_class;
  if (r.decode_calls) j["decode_calls"] = *r.decode_calls;
  if (r.decode_steps) j["decode_steps"] = *r.decode_steps;
  return j.dump();
}

std::string to_text(const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-10s %-10s %-10s %6s %6s %8s\n"
                "%-10.4f %-10.4f %-10.4f %6zu %6zu %8zu\n",
                "precision", "recall", "f1", "gold", "pred", "correct",
                r.precision, r.recall, r.f1, r.gold_chunks, r.pred_chunks,
                r.correct_chunks);
  return buf;
}

}  // namespace invtag
