#include "invtag/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invtag/data.hpp"
#include "invtag/errors.hpp"
#include "invtag/evaluation.hpp"
#include "invtag/lm.hpp"
#include "invtag/pipeline.hpp"
#include "json.hpp"

namespace invtag {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> label_words(const LabelMapping& mapping) {
  std::vector<std::string> words;
  for (const auto& e : mapping.entries()) words.push_back(e.label_word);
  return words;
}

std::string replay_inverse_prompts(const fs::path& dir, const Json& in) {
  const auto data = load_conll((dir / in.at("data").get<std::string>()).string());
  const auto mapping = LabelMapping::load_json((dir / in.at("mapping").get<std::string>()).string());
  std::string out;
  for (const auto& ex : data.examples)
    for (const auto& p : build_inverse_prompts(ex.sentence, label_words(mapping)))
      out += p.render() + "\n";
  return out;
}

std::string replay_answered_prompts(const fs::path& dir, const Json& in) {
  const auto data = load_conll((dir / in.at("data").get<std::string>()).string());
  const auto mapping = LabelMapping::load_json((dir / in.at("mapping").get<std::string>()).string());
  std::string out;
  for (const auto& ex : data.examples)
    for (const auto& g : extract_gold_pairs(ex.sentence, ex.tags, mapping))
      out += build_answered_prompt(ex.sentence, g.label_word, g.values).render() + "\n";
  return out;
}

// The first round is given as {label_word: [[value tokens]...]}; one
// revision prompt is rendered per empty label.
std::string replay_second_round_inference(const fs::path&, const Json& in) {
  const auto sentence = Sentence::from_text(in.at("sentence").get<std::string>());
  std::vector<KnownPair> known;
  std::vector<std::string> pending;
  for (const auto& [word, values] : in.at("first_round").items()) {
    auto parsed = values.get<SlotValues>();
    if (parsed.empty())
      pending.push_back(word);
    else
      known.push_back({word, std::move(parsed)});
  }
  std::string out;
  for (const auto& word : pending)
    out += build_second_round_prompt(sentence, known, word).render() + "\n";
  return out;
}

std::string replay_second_round_training(const fs::path& dir, const Json& in) {
  const auto data = load_conll((dir / in.at("data").get<std::string>()).string());
  const auto mapping = LabelMapping::load_json((dir / in.at("mapping").get<std::string>()).string());
  const auto withheld = in.at("withheld").get<std::vector<std::string>>();
  auto is_withheld = [&](const std::string& raw) {
    return std::find(withheld.begin(), withheld.end(), raw) != withheld.end();
  };
  std::string out;
  for (const auto& ex : data.examples) {
    const auto gold = extract_gold_pairs(ex.sentence, ex.tags, mapping);
    std::vector<KnownPair> context;
    for (const auto& g : gold)
      if (!is_withheld(g.raw_label)) context.push_back({g.label_word, g.values});
    for (const auto& g : gold)
      if (is_withheld(g.raw_label))
        out += build_answered_second_round_prompt(ex.sentence, context, g.label_word,
                                                  g.values)
                   .render() +
               "\n";
  }
  return out;
}

std::string replay_tag_reference(const fs::path& dir, const Json& in) {
  const auto data = load_conll((dir / in.at("data").get<std::string>()).string());
  const auto mapping = LabelMapping::load_json((dir / in.at("mapping").get<std::string>()).string());
  std::vector<GoldExample> gold;
  for (const auto& ex : data.examples)
    gold.push_back({ex.sentence, bio_to_annotation(ex.sentence, ex.tags)});
  const auto lm = reference_from_gold(gold, mapping);
  TagConfig config;
  config.iterative = in.value("iterative", true);
  config.strict = true;
  std::vector<TaggedSentence> tagged;
  for (const auto& ex : data.examples) {
    const auto prediction = tag_sentence(lm, ex.sentence, mapping, config);
    tagged.push_back({ex.sentence, apply_reverse_labeling(ex.sentence, prediction)});
  }
  return to_conll(tagged);
}

// Pairs file: blocks of "gold <tags>" / "pred <tags>" lines separated by blank
// lines. Output: one line per pair plus a corpus-level "overall" line.
std::string replay_conlleval(const fs::path& dir, const Json& in) {
  std::istringstream pairs(slurp(dir / in.at("pairs").get<std::string>()));
  std::vector<BioSequence> gold, pred;
  std::string line;
  while (std::getline(pairs, line)) {
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    const std::string kind = fields.front();
    fields.erase(fields.begin());
    if (kind == "gold")
      gold.push_back(fields);
    else if (kind == "pred")
      pred.push_back(fields);
    else
      throw Error("bad pairs line: " + line);
  }
  if (gold.size() != pred.size()) throw LengthMismatch(gold.size(), pred.size());
  std::string out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto r = chunk_f1(std::span(gold).subspan(i, 1), std::span(pred).subspan(i, 1));
    out += format_conlleval_line(std::to_string(i), r.gold_chunks, r.pred_chunks,
                                 r.correct_chunks, r.precision, r.recall, r.f1) + "\n";
  }
  const auto all = chunk_f1(gold, pred);
  out += format_conlleval_line("overall", all.gold_chunks, all.pred_chunks,
                               all.correct_chunks, all.precision, all.recall, all.f1) + "\n";
  return out;
}

std::string replay(const fs::path& dir, const std::string& kind, const Json& inputs) {
  if (kind == "inverse_prompts") return replay_inverse_prompts(dir, inputs);
  if (kind == "answered_prompts") return replay_answered_prompts(dir, inputs);
  if (kind == "second_round_inference") return replay_second_round_inference(dir, inputs);
  if (kind == "second_round_training") return replay_second_round_training(dir, inputs);
  if (kind == "tag_reference") return replay_tag_reference(dir, inputs);
  if (kind == "conlleval") return replay_conlleval(dir, inputs);
  throw Error("unknown fixture kind: " + kind);
}

}  // namespace

std::string format_conlleval_line(const std::string& id, std::size_t gold,
                                  std::size_t pred, std::size_t correct,
                                  double precision, double recall, double f1) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s\t%zu\t%zu\t%zu\t%.4f\t%.4f\t%.4f", id.c_str(),
                gold, pred, correct, precision, recall, f1);
  return buf;
}

std::vector<FixtureResult> verify_fixtures(const std::string& dir) {
  const fs::path root(dir);
  Json manifest;
  try {
    manifest = Json::parse(slurp(root / "manifest.json"));
  } catch (const Json::parse_error& e) {
    throw ParseError((root / "manifest.json").string(), e.what());
  }
  std::vector<FixtureResult> results;
  for (const auto& c : manifest.at("cases")) {
    FixtureResult r;
    r.name = c.at("name").get<std::string>();
    r.provenance = c.value("provenance", "");
    try {
      const auto actual = replay(root, c.at("kind").get<std::string>(), c.at("inputs"));
      const auto expected = slurp(root / c.at("expected").get<std::string>());
      r.passed = actual == expected;
      if (!r.passed) r.detail = "output differs from " + c.at("expected").get<std::string>();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

void require_fixtures(const std::string& dir) {
  for (const auto& r : verify_fixtures(dir))
    if (!r.passed) throw FixtureMismatch(r.name, r.detail);
}

}  // namespace invtag
