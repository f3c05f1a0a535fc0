#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "croci/category.hpp"
#include "croci/citation_index.hpp"
#include "croci/clock.hpp"
#include "croci/doi.hpp"
#include "croci/partial_date.hpp"

namespace croci {

struct EntityMetadata {
  Doi doi;
  std::string raw_type;
  Category category = Category::kOther;
  std::optional<PartialDate> issued;
  std::uint64_t referenced_by_count = 0;
  PrefixId prefix;
  std::optional<std::string> publisher_name;
};

enum class LookupStatus { kFound, kMiss, kUnavailable };

template <typename T>
struct Lookup {
  LookupStatus status = LookupStatus::kMiss;
  std::optional<T> value;

  bool found() const { return status == LookupStatus::kFound; }
};

struct HttpReply {
  int status = 0;
  std::string body;
};

/// GET against the registry. Network failures throw; HTTP errors come back
/// as a status code.
class RegistryTransport {
 public:
  virtual ~RegistryTransport() = default;
  virtual HttpReply get(const std::string& path) = 0;
};

/// Live registry over HTTP. `base_url` is "http://host[:port][/prefix]".
std::unique_ptr<RegistryTransport> make_http_transport(const std::string& base_url,
                                                       std::chrono::seconds timeout =
                                                           std::chrono::seconds(10));

/// Offline registry backed by a directory:
///   <dir>/works/<fixture_file_name(doi)>   registry body for GET /works/{doi}
///   <dir>/prefixes/<prefix>.json           registry body for GET /prefixes/{prefix}
/// Anything absent answers 404.
std::unique_ptr<RegistryTransport> make_fixture_transport(std::filesystem::path dir);

std::string fixture_file_name(const Doi& doi);
std::string works_path(const Doi& doi);
std::string prefixes_path(const PrefixId& prefix);

struct RegistryOptions {
  double rate_per_second = 10.0;  // <= 0 disables throttling
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::seconds positive_ttl{std::chrono::hours(24)};
  std::chrono::seconds negative_ttl{std::chrono::hours(1)};
};

/// Crossref-shaped metadata client with caching, throttling, retries and
/// in-flight de-duplication. Safe to share across threads.
class RegistryClient {
 public:
  RegistryClient(std::unique_ptr<RegistryTransport> transport,
                 RegistryOptions options = {},
                 TypeCategoryMap types = TypeCategoryMap::defaults(),
                 std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

  Lookup<EntityMetadata> fetch_entity_metadata(const Doi& doi);
  Lookup<std::string> lookup_publisher(const PrefixId& prefix);

  /// Requests actually sent to the transport (cache hits excluded).
  std::size_t request_count() const;
  const TypeCategoryMap& types() const { return types_; }

 private:
  struct Outcome {
    LookupStatus status = LookupStatus::kMiss;
    std::string body;
  };
  struct CacheEntry {
    Outcome outcome;
    Clock::TimePoint expires;
  };

  Outcome get(const std::string& path);
  Outcome fetch_with_retries(const std::string& path);

  std::unique_ptr<RegistryTransport> transport_;
  RegistryOptions options_;
  TypeCategoryMap types_;
  std::shared_ptr<Clock> clock_;
  TokenBucket throttle_;

  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry> cache_;
  std::map<std::string, std::shared_future<Outcome>> in_flight_;
  std::size_t requests_ = 0;
};

/// Adapts a RegistryClient to the index's date-completion hook.
class RegistryDateSource final : public IssuedDateSource {
 public:
  explicit RegistryDateSource(RegistryClient& client) : client_(client) {}
  std::optional<PartialDate> issued_date(const Doi& doi) override;

 private:
  RegistryClient& client_;
};

/// Builds EntityMetadata from a registry /works body. Returns nullopt when
/// the body is not a usable works record.
std::optional<EntityMetadata> parse_works_body(const Doi& doi, const std::string& body,
                                               const TypeCategoryMap& types);

}  // namespace croci
