#pragma once

#include <string>
#include <vector>

namespace invtag {

struct FixtureResult {
  std::string name;
  std::string provenance;  // PAPER, TRIVIAL or DERIVED
  bool passed = false;
  std::string detail;
};

// Replays every case of <dir>/manifest.json through the public API and
// compares the produced text byte for byte with the case's expected file.
std::vector<FixtureResult> verify_fixtures(const std::string& dir);

// Throws FixtureMismatch for the first failing case.
void require_fixtures(const std::string& dir);

// Output formats the fixtures freeze.
std::string format_conlleval_line(const std::string& id, std::size_t gold,
                                  std::size_t pred, std::size_t correct,
                                  double precision, double recall, double f1);

}  // namespace invtag
