#include <cmath>
#include <thread>

#include "httplib.h"
#include "invtag/errors.hpp"
#include "invtag/lm.hpp"
#include "json.hpp"

namespace invtag {

namespace {

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  std::counting_semaphore<>& sem;
};

}  // namespace

std::string encode_score_request(std::span<const std::string> prefix,
                                 std::span<const std::string> candidates) {
  nlohmann::json body;
  body["prefix"] = std::vector<std::string>(prefix.begin(), prefix.end());
  body["candidates"] =
      std::vector<std::string>(candidates.begin(), candidates.end());
  return body.dump();
}

std::vector<double> decode_score_response(const std::string& body,
                                          std::size_t expected) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScorerFailure(std::string("malformed score response: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("scores") || !doc["scores"].is_array())
    throw ScorerFailure("score response lacks a \"scores\" array");
  const auto& arr = doc["scores"];
  if (arr.size() != expected)
    throw ScorerFailure("score response has " + std::to_string(arr.size()) +
                        " scores, expected " + std::to_string(expected));
  std::vector<double> scores;
  scores.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw ScorerFailure("non-numeric score in response");
    const double s = v.get<double>();
    if (!std::isfinite(s)) throw ScorerFailure("non-finite score in response");
    scores.push_back(s);
  }
  return scores;
}

RemoteLm::RemoteLm(RemoteLmOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) throw InvalidArgument("remote scorer needs an endpoint");
  if (options_.retry_limit < 0) throw InvalidArgument("retry_limit must be >= 0");
  if (options_.max_in_flight < 1) throw InvalidArgument("max_in_flight must be >= 1");
  std::string url = options_.endpoint;
  if (url.find("://") == std::string::npos) url = "http://" + url;
  const auto authority = url.find("://") + 3;
  const auto slash = url.find('/', authority);
  host_ = url.substr(0, slash);
  std::string base = slash == std::string::npos ? "" : url.substr(slash);
  while (!base.empty() && base.back() == '/') base.pop_back();
  path_ = base + "/score";
  in_flight_ = std::make_unique<std::counting_semaphore<>>(options_.max_in_flight);
}

RemoteLm::~RemoteLm() = default;

std::vector<double> RemoteLm::do_score_next(
    std::span<const std::string> prefix,
    std::span<const std::string> candidates) const {
  SemaphoreGuard guard(*in_flight_);
  const std::string body = encode_score_request(prefix, candidates);
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retry_limit; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(options_.backoff * (1 << std::min(attempt - 1, 6)));
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw ScorerFailure("score request failed with status " +
                          std::to_string(res->status));
    return decode_score_response(res->body, candidates.size());
  }
  throw ScorerFailure(last_error + " (after " +
                      std::to_string(options_.retry_limit + 1) + " attempts to " +
                      host_ + path_ + ")");
}

}  // namespace invtag
