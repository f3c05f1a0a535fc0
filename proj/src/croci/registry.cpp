#include "croci/registry.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "croci/error.hpp"

namespace croci {

namespace {

using nlohmann::json;

class HttpTransport final : public RegistryTransport {
 public:
  HttpTransport(const std::string& base_url, std::chrono::seconds timeout)
      : timeout_(timeout) {
    auto scheme = base_url.find("://");
    auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
    auto path_start = base_url.find('/', host_start);
    if (path_start == std::string::npos) {
      origin_ = base_url;
    } else {
      origin_ = base_url.substr(0, path_start);
      prefix_ = base_url.substr(path_start);
      while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
  }

  HttpReply get(const std::string& path) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_url_encode(false);
    auto result = client.Get(prefix_ + path);
    if (!result) {
      throw std::runtime_error("registry request failed: " +
                               httplib::to_string(result.error()));
    }
    return HttpReply{result->status, result->body};
  }

 private:
  std::string origin_;
  std::string prefix_;
  std::chrono::seconds timeout_;
};

class FixtureTransport final : public RegistryTransport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

  HttpReply get(const std::string& path) override {
    std::filesystem::path file;
    if (path.starts_with("/works/")) {
      file = dir_ / "works" / (percent_encode(percent_decode(path.substr(7))) + ".json");
    } else if (path.starts_with("/prefixes/")) {
      file = dir_ / "prefixes" / (percent_decode(path.substr(10)) + ".json");
    } else {
      return HttpReply{404, ""};
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) return HttpReply{404, ""};
    std::ostringstream body;
    body << in.rdbuf();
    return HttpReply{200, body.str()};
  }

 private:
  std::filesystem::path dir_;
};

bool transient(int status) { return status == 429 || status >= 500; }

std::optional<PartialDate> issued_from(const json& message) {
  auto issued = message.find("issued");
  if (issued == message.end() || !issued->is_object()) return std::nullopt;
  auto parts = issued->find("date-parts");
  if (parts == issued->end() || !parts->is_array() || parts->empty()) return std::nullopt;
  const json& first = (*parts)[0];
  if (!first.is_array() || first.empty() || !first[0].is_number_integer()) {
    return std::nullopt;
  }
  std::optional<int> month, day;
  if (first.size() > 1 && first[1].is_number_integer()) month = first[1].get<int>();
  if (month && first.size() > 2 && first[2].is_number_integer()) day = first[2].get<int>();
  try {
    return PartialDate::from_parts(first[0].get<int>(), month, day);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::unique_ptr<RegistryTransport> make_http_transport(const std::string& base_url,
                                                       std::chrono::seconds timeout) {
  return std::make_unique<HttpTransport>(base_url, timeout);
}

std::unique_ptr<RegistryTransport> make_fixture_transport(std::filesystem::path dir) {
  return std::make_unique<FixtureTransport>(std::move(dir));
}

std::string fixture_file_name(const Doi& doi) {
  return percent_encode(doi.canonical()) + ".json";
}

std::string works_path(const Doi& doi) { return "/works/" + percent_encode(doi.canonical()); }

std::string prefixes_path(const PrefixId& prefix) { return "/prefixes/" + prefix.value(); }

std::optional<EntityMetadata> parse_works_body(const Doi& doi, const std::string& body,
                                               const TypeCategoryMap& types) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  const json& message = doc.contains("message") ? doc["message"] : doc;
  if (!message.is_object()) return std::nullopt;

  EntityMetadata meta{doi, "", Category::kOther, std::nullopt, 0, doi_prefix(doi),
                      std::nullopt};
  if (auto t = message.find("type"); t != message.end() && t->is_string()) {
    meta.raw_type = t->get<std::string>();
  }
  meta.category = types.map(meta.raw_type);
  meta.issued = issued_from(message);
  if (auto n = message.find("is-referenced-by-count"); n != message.end()) {
    if (!n->is_number_integer() || n->get<std::int64_t>() < 0) return std::nullopt;
    meta.referenced_by_count = n->get<std::uint64_t>();
  }
  if (auto p = message.find("publisher"); p != message.end() && p->is_string()) {
    meta.publisher_name = p->get<std::string>();
  }
  return meta;
}

RegistryClient::RegistryClient(std::unique_ptr<RegistryTransport> transport,
                               RegistryOptions options, TypeCategoryMap types,
                               std::shared_ptr<Clock> clock)
    : transport_(std::move(transport)),
      options_(options),
      types_(std::move(types)),
      clock_(std::move(clock)),
      throttle_(*clock_, options.rate_per_second) {}

std::size_t RegistryClient::request_count() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

RegistryClient::Outcome RegistryClient::fetch_with_retries(const std::string& path) {
  auto backoff = std::chrono::duration_cast<Clock::Duration>(options_.initial_backoff);
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    throttle_.acquire();
    {
      std::lock_guard lock(mutex_);
      ++requests_;
    }
    try {
      HttpReply reply = transport_->get(path);
      if (reply.status == 200) return Outcome{LookupStatus::kFound, std::move(reply.body)};
      if (!transient(reply.status)) return Outcome{LookupStatus::kMiss, {}};
    } catch (const std::exception&) {
      // network failure: retry
    }
    if (attempt < options_.max_attempts) {
      clock_->sleep_for(backoff);
      backoff *= 2;
    }
  }
  return Outcome{LookupStatus::kUnavailable, {}};
}

RegistryClient::Outcome RegistryClient::get(const std::string& path) {
  std::promise<Outcome> promise;
  {
    std::unique_lock lock(mutex_);
    if (auto it = cache_.find(path); it != cache_.end()) {
      if (clock_->now() < it->second.expires) return it->second.outcome;
      cache_.erase(it);
    }
    if (auto it = in_flight_.find(path); it != in_flight_.end()) {
      auto pending = it->second;
      lock.unlock();
      return pending.get();
    }
    in_flight_.emplace(path, promise.get_future().share());
  }

  Outcome outcome = fetch_with_retries(path);
  {
    std::lock_guard lock(mutex_);
    if (outcome.status != LookupStatus::kUnavailable) {
      auto ttl = outcome.status == LookupStatus::kFound ? options_.positive_ttl
                                                        : options_.negative_ttl;
      cache_[path] = CacheEntry{outcome, clock_->now() + ttl};
    }
    in_flight_.erase(path);
  }
  promise.set_value(outcome);
  return outcome;
}

Lookup<EntityMetadata> RegistryClient::fetch_entity_metadata(const Doi& doi) {
  Outcome outcome = get(works_path(doi));
  if (outcome.status != LookupStatus::kFound) return {outcome.status, std::nullopt};
  auto meta = parse_works_body(doi, outcome.body, types_);
  if (!meta) return {LookupStatus::kUnavailable, std::nullopt};
  return {LookupStatus::kFound, std::move(meta)};
}

Lookup<std::string> RegistryClient::lookup_publisher(const PrefixId& prefix) {
  Outcome outcome = get(prefixes_path(prefix));
  if (outcome.status != LookupStatus::kFound) return {outcome.status, std::nullopt};
  json doc = json::parse(outcome.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return {LookupStatus::kUnavailable, std::nullopt};
  const json& message = doc.contains("message") ? doc["message"] : doc;
  auto name = message.is_object() ? message.find("name") : message.end();
  if (!message.is_object() || name == message.end() || !name->is_string()) {
    return {LookupStatus::kUnavailable, std::nullopt};
  }
  return {LookupStatus::kFound, name->get<std::string>()};
}

std::optional<PartialDate> RegistryDateSource::issued_date(const Doi& doi) {
  auto result = client_.fetch_entity_metadata(doi);
  if (result.status == LookupStatus::kUnavailable) {
    throw Error(ErrorCode::kRegistryUnavailable,
                "registry unavailable for " + doi.canonical());
  }
  return result.found() ? result.value->issued : std::nullopt;
}

}  // namespace croci
