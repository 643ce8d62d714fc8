#include <fstream>
#include <set>
#include <sstream>

#include "invtag/errors.hpp"
#include "invtag/types.hpp"
#include "json.hpp"

namespace invtag {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

Tokens split_whitespace(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

void ControlTokens::validate() const {
  if (none_token.empty() || sep_token.empty() || end_token.empty())
    throw InvalidArgument("control tokens must be nonempty");
  if (none_token == sep_token || none_token == end_token ||
      sep_token == end_token)
    throw InvalidArgument("control tokens must be pairwise distinct");
}

Sentence::Sentence(Tokens tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw InvalidArgument("sentence has no tokens");
  for (const auto& t : tokens_) {
    if (t.empty()) throw InvalidArgument("sentence contains an empty token");
    for (char c : t)
      if (is_space(c))
        throw InvalidArgument("sentence token contains whitespace: '" + t +
                              "'");
  }
}

Sentence Sentence::from_text(std::string_view text) {
  return Sentence(split_whitespace(text));
}

LabelMapping::LabelMapping(std::vector<LabelEntry> entries,
                           const ControlTokens& control)
    : entries_(std::move(entries)) {
  std::set<std::string_view> raws, words;
  for (const auto& e : entries_) {
    if (e.raw_label.empty()) throw InvalidArgument("empty raw label");
    const auto pieces = split_whitespace(e.label_word);
    if (pieces.empty())
      throw InvalidArgument("empty label word for " + e.raw_label);
    for (const auto& p : pieces)
      if (control.is_control(p))
        throw InvalidArgument("label word '" + e.label_word +
                              "' contains control token '" + p + "'");
    if (!raws.insert(e.raw_label).second)
      throw InvalidArgument("duplicate raw label: " + e.raw_label);
    if (!words.insert(e.label_word).second)
      throw InvalidArgument("duplicate label word: " + e.label_word);
  }
}

LabelMapping LabelMapping::parse_json(std::string_view text,
                                      const ControlTokens& control) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "label mapping must be an object");
  std::vector<LabelEntry> entries;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string())
      throw ParseError("$." + key, "label word must be a string");
    entries.push_back({key, value.get<std::string>()});
  }
  return LabelMapping(std::move(entries), control);
}

LabelMapping LabelMapping::load_json(const std::string& path,
                                     const ControlTokens& control) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), control);
}

std::optional<std::string> LabelMapping::find_word(
    std::string_view raw_label) const {
  for (const auto& e : entries_)
    if (e.raw_label == raw_label) return e.label_word;
  return std::nullopt;
}

const std::string& LabelMapping::word_for(std::string_view raw_label) const {
  for (const auto& e : entries_)
    if (e.raw_label == raw_label) return e.label_word;
  throw UnknownLabel(std::string(raw_label));
}

std::vector<std::string> map_labels(std::span<const std::string> labels,
                                    const LabelMapping& mapping) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(mapping.word_for(l));
  return out;
}

}  // namespace invtag
