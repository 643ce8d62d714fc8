#include "invtag/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "invtag/data.hpp"
#include "invtag/errors.hpp"
#include "invtag/evaluation.hpp"
#include "invtag/fixtures.hpp"
#include "invtag/lm.hpp"
#include "invtag/pipeline.hpp"
#include "json.hpp"

namespace invtag::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Maps library errors to exit codes; `body` does the work.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ScorerFailure& e) {
    err << "error: " << e.what() << "\n";
    return kScorerFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

LoadOptions load_options(bool lowercase) { return LoadOptions{lowercase}; }

std::vector<GoldExample> gold_examples(std::span<const TaggedSentence> data) {
  std::vector<GoldExample> out;
  out.reserve(data.size());
  for (const auto& ex : data)
    out.push_back({ex.sentence, bio_to_annotation(ex.sentence, ex.tags)});
  return out;
}

Json prediction_record(const TaggedSentence& input, const BioSequence& tags,
                       const SlotPrediction& prediction) {
  Json rec;
  rec["tokens"] = input.sentence.tokens();
  rec["tags"] = tags;
  Json gens = Json::array();
  for (const auto& l : prediction.per_label) {
    Json g;
    g["label"] = l.raw_label;
    g["label_word"] = l.label_word;
    g["generated"] = l.generation.generated_tokens;
    g["values"] = l.values;
    g["round"] = to_string(l.round_resolved);
    if (!l.error.empty()) g["error"] = l.error;
    gens.push_back(std::move(g));
  }
  rec["generations"] = std::move(gens);
  return rec;
}

}  // namespace

int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto dataset = load_conll(args.input, load_options(args.lowercase));
    const auto sets = sample_k_shot(dataset, {args.k, args.seed, args.num_sets});
    fs::create_directories(args.out_dir);
    const int width = std::max<int>(
        2, static_cast<int>(std::to_string(sets.empty() ? 0 : sets.size() - 1).size()));
    for (std::size_t i = 0; i < sets.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "set_%0*zu.conll", width, i);
      const auto path = (fs::path(args.out_dir) / name).string();
      write_conll(path, sets[i]);
      out << path << "\t" << sets[i].size() << " sentences\n";
    }
    return kOk;
  });
}

int cmd_emit_train(const EmitTrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto data = load_conll(args.support, load_options(args.lowercase));
    const auto mapping = LabelMapping::load_json(args.mapping);
    auto file = open_out(args.out);
    std::size_t first = 0, second = 0;
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
      const auto& ex = data.examples[i];
      // Per-sentence seeds keep each sentence's draws independent of the
      // rest of the file.
      TrainingOptions options{args.seed + i, args.withhold_prob};
      for (const auto& t : emit_training_examples(
               ex.sentence, bio_to_annotation(ex.sentence, ex.tags), mapping, {}, options)) {
        Json rec;
        rec["tokens"] = t.tokens;
        rec["loss_mask"] = t.loss_mask;
        rec["round"] = t.round == Round::First ? 1 : 2;
        file << rec.dump() << "\n";
        ++(t.round == Round::First ? first : second);
      }
    }
    out << "wrote " << first << " round-1 and " << second << " round-2 examples to "
        << args.out << "\n";
    return kOk;
  });
}

int cmd_tag(const TagArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto opts = load_options(args.lowercase);
    const auto input = load_tagged(args.input, opts);
    const auto mapping = LabelMapping::load_json(args.mapping);

    std::unique_ptr<LmScorer> scorer;
    if (args.scorer == "reference") {
      const auto gold = args.support.empty() ? input : load_tagged(args.support, opts);
      scorer = std::make_unique<ReferenceLm>(reference_from_gold(gold_examples(gold), mapping));
    } else if (args.scorer == "remote") {
      std::string endpoint = args.endpoint;
      if (endpoint.empty()) {
        if (const char* env = std::getenv("INVTAG_ENDPOINT")) endpoint = env;
      }
      if (endpoint.empty())
        throw InvalidArgument("remote scorer needs --endpoint or INVTAG_ENDPOINT");
      RemoteLmOptions ro;
      ro.endpoint = endpoint;
      ro.timeout = std::chrono::milliseconds(args.timeout_ms);
      ro.retry_limit = args.retries;
      scorer = std::make_unique<RemoteLm>(ro);
    } else {
      throw InvalidArgument("unknown scorer: " + args.scorer);
    }

    TagConfig config;
    config.decode.max_generated_tokens = args.max_gen;
    config.iterative = args.iterative;
    config.strict = args.strict;
    config.decode.validate();

    const std::size_t n = input.size();
    std::vector<SlotPrediction> predictions(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t threads = args.threads ? args.threads
                                       : std::min<std::size_t>(8, std::thread::hardware_concurrency());
    if (!scorer->concurrent_calls_allowed()) threads = 1;
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          predictions[i] = tag_sentence(*scorer, input[i].sentence, mapping, config);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
      worker();
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!args.out.empty()) {
      file = open_out(args.out);
      sink = &file;
    }
    std::size_t failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto tags = apply_reverse_labeling(input[i].sentence, predictions[i]);
      *sink << prediction_record(input[i], tags, predictions[i]).dump() << "\n";
      failures += predictions[i].failures;
    }
    if (failures > 0)
      err << "warning: " << failures << " scorer failures; affected labels left unresolved\n";
    if (!args.out.empty()) out << "tagged " << n << " sentences -> " << args.out << "\n";
    return kOk;
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto opts = load_options(args.lowercase);
    const auto gold = load_tagged(args.gold, opts);
    const auto pred = load_tagged(args.pred, opts);
    if (gold.size() != pred.size()) throw LengthMismatch(gold.size(), pred.size());
    std::vector<BioSequence> g, p;
    for (const auto& ex : gold) g.push_back(ex.tags);
    for (const auto& ex : pred) p.push_back(ex.tags);
    const auto report = chunk_f1(g, p);
    out << to_text(report) << to_json(report) << "\n";
    if (!args.out.empty()) open_out(args.out) << to_json(report) << "\n";
    return kOk;
  });
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto data = load_tagged(args.input, load_options(args.lowercase));
    const auto mapping = LabelMapping::load_json(args.mapping);
    std::map<std::size_t, std::size_t> lengths;  // n -> sentence count
    for (const auto& ex : data) ++lengths[ex.sentence.size()];

    char line[256];
    std::snprintf(line, sizeof line, "%6s %4s %9s %12s %14s %15s %13s %10s\n", "n", "m",
                  "sentences", "normal_spans", "normal_prompts", "inverse_prompts",
                  "inverse_upper", "ratio");
    out << line;
    std::ofstream file;
    if (!args.out.empty()) file = open_out(args.out);
    for (const auto& [n, count] : lengths) {
      const auto r = efficiency_report(n, mapping.size(), args.iterative);
      const double ratio = r.inverse_prompt_count
                               ? static_cast<double>(r.normal_prompt_count) / r.inverse_prompt_count
                               : 0.0;
      std::snprintf(line, sizeof line, "%6zu %4zu %9zu %12llu %14llu %15llu %13llu %10.1f\n", n,
                    r.m, count, static_cast<unsigned long long>(r.normal_span_count),
                    static_cast<unsigned long long>(r.normal_prompt_count),
                    static_cast<unsigned long long>(r.inverse_prompt_count),
                    static_cast<unsigned long long>(r.inverse_prompt_upper), ratio);
      out << line;
      if (file) file << to_json(r) << "\n";
    }
    return kOk;
  });
}

int cmd_verify_fixtures(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto results = verify_fixtures(args.input);
    std::size_t failed = 0;
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << r.provenance << "]";
      if (!r.passed) out << ": " << r.detail;
      out << "\n";
      failed += !r.passed;
    }
    out << results.size() - failed << "/" << results.size() << " fixtures passed\n";
    return failed ? kDataError : kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse-prompt slot tagging toolkit"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Sample K-shot support sets from a CoNLL corpus");
  s->add_option("--input", sample.input, "CoNLL corpus")->required();
  s->add_option("--k", sample.k, "Instances per label")->check(CLI::PositiveNumber);
  s->add_option("--seed", sample.seed, "Sampling seed");
  s->add_option("--num-sets", sample.num_sets, "Number of support sets")->check(CLI::PositiveNumber);
  s->add_option("--out", sample.out_dir, "Output directory")->required();
  s->add_flag("--lowercase", sample.lowercase, "Lowercase tokens on load");

  EmitTrainArgs emit;
  auto* e = app.add_subcommand("emit-train", "Write masked training prompts as JSON lines");
  e->add_option("--support", emit.support, "CoNLL support set")->required();
  e->add_option("--mapping", emit.mapping, "Label mapping JSON")->required();
  e->add_option("--seed", emit.seed, "Withholding seed");
  e->add_option("--withhold-prob", emit.withhold_prob, "Probability of withholding an occurred label")
      ->check(CLI::Range(0.0, 1.0));
  e->add_option("--out", emit.out, "Output JSON-lines file")->required();
  e->add_flag("--lowercase", emit.lowercase, "Lowercase tokens on load");

  TagArgs tag;
  auto* t = app.add_subcommand("tag", "Tag sentences with inverse prompts");
  t->add_option("--input", tag.input, "CoNLL or JSON-lines sentences")->required();
  t->add_option("--support", tag.support, "Gold data for the reference scorer (default: --input)");
  t->add_option("--mapping", tag.mapping, "Label mapping JSON")->required();
  t->add_option("--out", tag.out, "Output JSON-lines file (default: stdout)");
  t->add_flag("--iterative", tag.iterative, "Run the second-round revision pass");
  t->add_option("--max-gen", tag.max_gen, "Maximum generated tokens per prompt")
      ->check(CLI::PositiveNumber);
  t->add_option("--scorer", tag.scorer, "Scorer backend")
      ->check(CLI::IsMember({"reference", "remote"}));
  t->add_option("--endpoint", tag.endpoint, "Remote scorer URL (fallback: $INVTAG_ENDPOINT)");
  t->add_flag("--strict", tag.strict, "Abort on the first scorer failure");
  t->add_flag("--lowercase", tag.lowercase, "Lowercase tokens on load");
  t->add_option("--timeout-ms", tag.timeout_ms, "Remote request timeout")->check(CLI::PositiveNumber);
  t->add_option("--retries", tag.retries, "Remote retry limit")->check(CLI::NonNegativeNumber);
  t->add_option("--threads", tag.threads, "Worker threads (0: automatic)");

  EvalArgs eval;
  auto* v = app.add_subcommand("eval", "Chunk-level precision/recall/F1");
  v->add_option("--gold", eval.gold, "Gold CoNLL or JSON lines")->required();
  v->add_option("--pred", eval.pred, "Predicted CoNLL or JSON lines")->required();
  v->add_option("--out", eval.out, "Write the JSON report here as well");
  v->add_flag("--lowercase", eval.lowercase, "Lowercase tokens on load");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Prompt counts: span enumeration vs inverse prompts");
  b->add_option("--input", bench.input, "CoNLL or JSON-lines corpus")->required();
  b->add_option("--mapping", bench.mapping, "Label mapping JSON")->required();
  b->add_option("--out", bench.out, "Write JSON-lines rows here as well");
  b->add_flag("--iterative", bench.iterative, "Count the revision upper bound");
  b->add_flag("--lowercase", bench.lowercase, "Lowercase tokens on load");

  VerifyArgs verify;
  auto* f = app.add_subcommand("verify-fixtures", "Replay the frozen fixture corpus");
  f->add_option("--input", verify.input, "Fixture directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kUsageError;
  }

  if (*s) return cmd_sample(sample, out, err);
  if (*e) return cmd_emit_train(emit, out, err);
  if (*t) return cmd_tag(tag, out, err);
  if (*v) return cmd_eval(eval, out, err);
  if (*b) return cmd_bench(bench, out, err);
  if (*f) return cmd_verify_fixtures(verify, out, err);
  return kUsageError;
}

}  // namespace invtag::cli
