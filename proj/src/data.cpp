#include "invtag/data.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "invtag/errors.hpp"
#include "json.hpp"
#include "random.hpp"

namespace invtag {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string lower_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

std::vector<std::string_view> split_on(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

void Dataset::index_labels() {
  label_inventory.clear();
  for (const auto& ex : examples)
    for (const auto& c : chunks_from_bio(ex.tags)) label_inventory.insert(c.raw_label);
}

Dataset parse_conll(std::string_view text, const LoadOptions& options,
                    const std::string& source) {
  Dataset ds;
  Tokens tokens;
  BioSequence tags;
  auto flush = [&] {
    if (tokens.empty()) return;
    ds.examples.push_back({Sentence(std::move(tokens)), std::move(tags)});
    tokens.clear();
    tags.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (blank(line)) {
      flush();
      continue;
    }
    const auto where = source + ":" + std::to_string(line_no);
    const auto fields =
        split_on(line, line.find('\t') != std::string_view::npos ? '\t' : ' ');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError(where, "expected 'token<TAB>tag', got '" + std::string(line) + "'");
    if (fields[0].find_first_of(" \t\r\f\v") != std::string_view::npos)
      throw ParseError(where, "token contains whitespace");
    if (!is_bio_tag(fields[1]))
      throw ParseError(where, "not a BIO tag: '" + std::string(fields[1]) + "'");
    std::string token(fields[0]);
    tokens.push_back(options.lowercase ? lower_ascii(std::move(token)) : std::move(token));
    tags.emplace_back(fields[1]);
  }
  flush();
  ds.index_labels();
  return ds;
}

Dataset load_conll(const std::string& path, const LoadOptions& options) {
  return parse_conll(read_file(path), options, path);
}

std::string to_conll(std::span<const TaggedSentence> examples) {
  std::string out;
  for (std::size_t e = 0; e < examples.size(); ++e) {
    if (e) out += '\n';
    const auto& ex = examples[e];
    for (std::size_t i = 0; i < ex.sentence.size(); ++i) {
      out += ex.sentence[i];
      out += '\t';
      out += ex.tags[i];
      out += '\n';
    }
  }
  return out;
}

void write_conll(const std::string& path, std::span<const TaggedSentence> examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_conll(examples);
}

namespace {

using Json = nlohmann::json;

const Json& require(const Json& node, const char* key, const std::string& path) {
  if (!node.is_object() || !node.contains(key))
    throw ParseError(path + "." + key, "missing field");
  return node.at(key);
}

std::vector<std::string> string_array(const Json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string())
      throw ParseError(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(node[i].get<std::string>());
  }
  return out;
}

std::vector<TaggedSentence> parse_examples(const Json& node, const std::string& path,
                                           const LoadOptions& options) {
  if (!node.is_array()) throw ParseError(path, "expected an array");
  if (node.empty()) throw ParseError(path, "must not be empty");
  std::vector<TaggedSentence> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto item_path = path + "[" + std::to_string(i) + "]";
    auto tokens = string_array(require(node[i], "tokens", item_path), item_path + ".tokens");
    auto tags = string_array(require(node[i], "tags", item_path), item_path + ".tags");
    if (tokens.size() != tags.size())
      throw ParseError(item_path, "tokens and tags differ in length");
    for (std::size_t t = 0; t < tags.size(); ++t)
      if (!is_bio_tag(tags[t]))
        throw ParseError(item_path + ".tags[" + std::to_string(t) + "]",
                         "not a BIO tag: '" + tags[t] + "'");
    if (options.lowercase)
      for (auto& t : tokens) t = lower_ascii(std::move(t));
    try {
      out.push_back({Sentence(std::move(tokens)), std::move(tags)});
    } catch (const InvalidArgument& e) {
      throw ParseError(item_path + ".tokens", e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<TaggedSentence> load_tagged(const std::string& path,
                                        const LoadOptions& options) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{')
    return parse_conll(text, options, path).examples;

  std::vector<TaggedSentence> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (blank(line)) continue;
    const auto where = path + ":" + std::to_string(line_no);
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(where, e.what());
    }
    const Json wrapped = Json::array({record});
    auto parsed = parse_examples(wrapped, where, options);
    out.push_back(std::move(parsed.front()));
  }
  return out;
}

std::vector<Episode> parse_episodes(std::string_view text, const LoadOptions& options) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  const auto& domain = require(doc, "domain", "$");
  if (!domain.is_string()) throw ParseError("$.domain", "expected a string");
  const auto& episodes = require(doc, "episodes", "$");
  if (!episodes.is_array()) throw ParseError("$.episodes", "expected an array");
  std::vector<Episode> out;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto path = "$.episodes[" + std::to_string(i) + "]";
    Episode ep;
    ep.domain_name = domain.get<std::string>();
    ep.support = parse_examples(require(episodes[i], "support", path), path + ".support", options);
    ep.query = parse_examples(require(episodes[i], "query", path), path + ".query", options);
    out.push_back(std::move(ep));
  }
  return out;
}

std::vector<Episode> load_episodes(const std::string& path, const LoadOptions& options) {
  return parse_episodes(read_file(path), options);
}

std::vector<std::pair<std::string, std::size_t>> label_counts(
    std::span<const TaggedSentence> examples) {
  std::map<std::string, std::size_t> counts;
  for (const auto& ex : examples)
    for (const auto& c : chunks_from_bio(ex.tags)) ++counts[c.raw_label];
  return {counts.begin(), counts.end()};
}

bool covers_k_shot(std::span<const TaggedSentence> support,
                   const std::set<std::string>& inventory, std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const auto& [label, n] : label_counts(support)) counts[label] = n;
  return std::all_of(inventory.begin(), inventory.end(),
                     [&](const std::string& l) { return counts[l] >= k; });
}

std::vector<std::vector<TaggedSentence>> sample_k_shot(const Dataset& dataset,
                                                       const SampleOptions& options) {
  if (options.k < 1) throw InvalidArgument("k must be >= 1");
  const std::vector<std::string> labels(dataset.label_inventory.begin(),
                                        dataset.label_inventory.end());
  const std::size_t num_labels = labels.size();
  auto label_index = [&](const std::string& l) {
    return static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
  };

  // Per-sentence instance counts, indexed like `labels`.
  std::vector<std::vector<std::size_t>> per_sentence(dataset.examples.size(),
                                                     std::vector<std::size_t>(num_labels, 0));
  std::vector<std::size_t> totals(num_labels, 0);
  for (std::size_t s = 0; s < dataset.examples.size(); ++s) {
    for (const auto& c : chunks_from_bio(dataset.examples[s].tags)) {
      const auto li = label_index(c.raw_label);
      if (li == num_labels || labels[li] != c.raw_label)
        throw InvalidArgument("label outside inventory: " + c.raw_label);
      ++per_sentence[s][li];
      ++totals[li];
    }
  }
  for (std::size_t l = 0; l < num_labels; ++l)
    if (totals[l] < options.k) throw SupportInfeasible(labels[l], totals[l], options.k);

  std::vector<std::vector<TaggedSentence>> sets;
  sets.reserve(options.num_sets);
  for (std::size_t set = 0; set < options.num_sets; ++set) {
    std::mt19937_64 rng(detail::splitmix64(options.seed ^ detail::splitmix64(set)));
    std::vector<std::size_t> order(dataset.examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    detail::shuffle(order, rng);

    std::vector<std::size_t> have(num_labels, 0);
    std::vector<bool> taken(dataset.examples.size(), false);
    std::vector<std::size_t> chosen;
    while (true) {
      // Most-deficient label; ties go to the earlier label.
      std::size_t target = num_labels, worst = 0;
      for (std::size_t l = 0; l < num_labels; ++l) {
        const std::size_t deficit = have[l] < options.k ? options.k - have[l] : 0;
        if (deficit > worst) {
          worst = deficit;
          target = l;
        }
      }
      if (target == num_labels) break;

      std::size_t best = order.size();
      std::size_t best_surplus = std::numeric_limits<std::size_t>::max();
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t s = order[pos];
        if (taken[s] || per_sentence[s][target] == 0) continue;
        std::size_t surplus = 0;
        for (std::size_t l = 0; l < num_labels; ++l) {
          const std::size_t after = have[l] + per_sentence[s][l];
          const std::size_t before_excess = have[l] > options.k ? have[l] - options.k : 0;
          const std::size_t after_excess = after > options.k ? after - options.k : 0;
          surplus += after_excess - before_excess;
        }
        if (surplus < best_surplus) {
          best_surplus = surplus;
          best = pos;
        }
      }
      // Unreachable given the feasibility check above.
      if (best == order.size()) throw SupportInfeasible(labels[target], have[target], options.k);
      const std::size_t s = order[best];
      taken[s] = true;
      chosen.push_back(s);
      for (std::size_t l = 0; l < num_labels; ++l) have[l] += per_sentence[s][l];
    }

    std::sort(chosen.begin(), chosen.end());
    std::vector<TaggedSentence> support;
    support.reserve(chosen.size());
    for (std::size_t s : chosen) support.push_back(dataset.examples[s]);
    sets.push_back(std::move(support));
  }
  return sets;
}

std::vector<GoldPair> extract_gold_pairs(const Sentence& sentence,
                                         const BioSequence& bio,
                                         const LabelMapping& mapping) {
  const auto annotation = bio_to_annotation(sentence, bio);
  std::vector<GoldPair> out;
  out.reserve(mapping.size());
  for (const auto& e : mapping.entries()) out.push_back({e.raw_label, e.label_word, {}});
  for (const auto& pair : annotation.pairs) {
    auto it = std::find_if(out.begin(), out.end(), [&](const GoldPair& g) {
      return g.raw_label == pair.raw_label;
    });
    if (it == out.end()) throw UnknownLabel(pair.raw_label);
    it->values.push_back(pair.value_tokens);
  }
  return out;
}

}  // namespace invtag
