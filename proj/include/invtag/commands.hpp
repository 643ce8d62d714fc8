#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace invtag::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kDataError = 2,
  kScorerFailure = 3,
};

struct SampleArgs {
  std::string input;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::size_t num_sets = 10;
  std::string out_dir;
  bool lowercase = false;
};

struct EmitTrainArgs {
  std::string support;
  std::string mapping;
  std::uint64_t seed = 0;
  double withhold_prob = 0.5;
  std::string out;
  bool lowercase = false;
};

struct TagArgs {
  std::string input;
  std::string support;  // gold for the reference scorer; defaults to input
  std::string mapping;
  std::string out;
  bool iterative = false;
  std::size_t max_gen = 40;
  std::string scorer = "reference";
  std::string endpoint;  // falls back to $INVTAG_ENDPOINT
  bool strict = false;
  bool lowercase = false;
  int timeout_ms = 10000;
  int retries = 2;
  std::size_t threads = 0;  // 0: pick automatically
};

struct EvalArgs {
  std::string gold;
  std::string pred;
  std::string out;
  bool lowercase = false;
};

struct BenchArgs {
  std::string input;
  std::string mapping;
  std::string out;
  bool iterative = false;
  bool lowercase = false;
};

struct VerifyArgs {
  std::string input;
};

// Each command reports to `out`/`err` and returns an ExitCode.
int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err);
int cmd_emit_train(const EmitTrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_tag(const TagArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify_fixtures(const VerifyArgs& args, std::ostream& out, std::ostream& err);

// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invtag::cli
