#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "croci/citation_index.hpp"

namespace httplib {
class Server;
}

namespace croci {

struct ServiceOptions {
  std::size_t max_upload_bytes = 64 * 1024 * 1024;
  std::size_t default_limit = 1000;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// REST front end over a CitationIndex.
///
///   GET  /citations/{doi}        incoming citations
///   GET  /references/{doi}       outgoing citations
///   GET  /citation-count/{doi}   {"count": n}
///   GET  /reference-count/{doi}  {"count": n}
///   POST /submissions?orcid=..&archive_ref=..&format=csv|scholix  (body = file)
///
/// DOIs in paths may use any supported surface form, percent-encoded.
class Service {
 public:
  explicit Service(CitationIndex& index, ServiceOptions options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Dispatches on a raw (still percent-encoded) request target.
  ServiceResponse handle_get(std::string_view target) const;
  ServiceResponse handle_post(std::string_view target, std::string_view body);

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws Error(kInvalidArgument) if binding fails.
  int start(const std::string& host, int port);
  void stop();

 private:
  CitationIndex& index_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace croci
