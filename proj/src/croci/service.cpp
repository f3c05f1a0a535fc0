#include "croci/service.hpp"

#include <map>

#include <httplib.h>
#include <json.hpp>

#include "croci/error.hpp"
#include "croci/views.hpp"

namespace croci {

namespace {

using nlohmann::json;

ServiceResponse json_response(int status, const json& body) {
  return ServiceResponse{status, body.dump(), "application/json"};
}

ServiceResponse error_response(int status, ErrorCode code, const std::string& message) {
  return json_response(status, error_view(code, message));
}

std::map<std::string, std::string> parse_query(std::string_view query) {
  std::map<std::string, std::string> params;
  while (!query.empty()) {
    auto amp = query.find('&');
    std::string_view pair = query.substr(0, amp);
    query.remove_prefix(amp == std::string_view::npos ? query.size() : amp + 1);
    if (pair.empty()) continue;
    auto eq = pair.find('=');
    std::string key = percent_decode(pair.substr(0, eq));
    std::string value =
        eq == std::string_view::npos ? std::string() : percent_decode(pair.substr(eq + 1));
    params.emplace(std::move(key), std::move(value));
  }
  return params;
}

std::optional<std::size_t> parse_size(const std::map<std::string, std::string>& params,
                                      const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  if (it->second.empty() ||
      it->second.find_first_not_of("0123456789") != std::string::npos ||
      it->second.size() > 12) {
    throw Error(ErrorCode::kInvalidArgument, "invalid " + key + " '" + it->second + "'");
  }
  return std::stoull(it->second);
}

std::vector<StoredCitation> page(std::vector<StoredCitation> all, std::size_t offset,
                                 std::size_t limit) {
  if (offset >= all.size()) return {};
  auto first = all.begin() + static_cast<std::ptrdiff_t>(offset);
  auto last = all.size() - offset > limit ? first + static_cast<std::ptrdiff_t>(limit)
                                          : all.end();
  return {std::make_move_iterator(first), std::make_move_iterator(last)};
}

}  // namespace

Service::Service(CitationIndex& index, ServiceOptions options)
    : index_(index), options_(options) {}

Service::~Service() { stop(); }

ServiceResponse Service::handle_get(std::string_view target) const {
  auto q = target.find('?');
  std::string_view path = target.substr(0, q);
  auto params = parse_query(q == std::string_view::npos ? "" : target.substr(q + 1));

  enum class Route { kCitations, kReferences, kCitationCount, kReferenceCount };
  static constexpr std::pair<std::string_view, Route> kRoutes[] = {
      {"/citations/", Route::kCitations},
      {"/references/", Route::kReferences},
      {"/citation-count/", Route::kCitationCount},
      {"/reference-count/", Route::kReferenceCount},
  };

  for (const auto& [prefix, route] : kRoutes) {
    if (!path.starts_with(prefix)) continue;
    try {
      NormalizeOptions decoded;
      decoded.percent_decode = false;  // decoded once here
      Doi doi = normalize_doi(percent_decode(path.substr(prefix.size())), decoded);
      switch (route) {
        case Route::kCitationCount:
          return json_response(200, json{{"count", index_.citation_count(doi)}});
        case Route::kReferenceCount:
          return json_response(200, json{{"count", index_.reference_count(doi)}});
        case Route::kCitations:
        case Route::kReferences: {
          std::size_t offset = parse_size(params, "offset").value_or(0);
          std::size_t limit = parse_size(params, "limit").value_or(options_.default_limit);
          auto list = route == Route::kCitations ? index_.get_citations(doi)
                                                 : index_.get_references(doi);
          return json_response(200, citation_list_view(page(std::move(list), offset, limit)));
        }
      }
    } catch (const Error& e) {
      int status = (e.code() == ErrorCode::kMalformedDoi ||
                    e.code() == ErrorCode::kInvalidArgument)
                       ? 400
                       : 500;
      return error_response(status, e.code(), e.what());
    } catch (const std::exception& e) {
      return error_response(500, ErrorCode::kStorageFailure, e.what());
    }
  }
  return json_response(404, json{{"error", "NotFound"}, {"message", std::string(path)}});
}

ServiceResponse Service::handle_post(std::string_view target, std::string_view body) {
  auto q = target.find('?');
  if (target.substr(0, q) != "/submissions") {
    return json_response(404, json{{"error", "NotFound"}, {"message", std::string(target)}});
  }
  if (body.size() > options_.max_upload_bytes) {
    return error_response(413, ErrorCode::kInvalidArgument,
                          "payload exceeds " + std::to_string(options_.max_upload_bytes) +
                              " bytes");
  }
  auto params = parse_query(q == std::string_view::npos ? "" : target.substr(q + 1));

  std::optional<Orcid> submitter;
  std::string archive_ref;
  SourceFormat format = SourceFormat::kCsv;
  try {
    auto orcid = params.find("orcid");
    if (orcid == params.end()) {
      throw Error(ErrorCode::kMalformedOrcid, "missing orcid parameter");
    }
    submitter = validate_orcid(orcid->second);
    if (auto it = params.find("archive_ref"); it != params.end()) archive_ref = it->second;
    if (archive_ref.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "missing archive_ref parameter");
    }
    if (auto it = params.find("format"); it != params.end()) {
      format = parse_source_format(it->second);
    }
  } catch (const Error& e) {
    return error_response(400, e.code(), e.what());
  }

  SubmissionBatch batch{{}, *submitter, archive_ref, now_utc(), format, {}};
  try {
    batch = parse_submission(body, format, *submitter, archive_ref, now_utc());
  } catch (const Error& e) {
    return error_response(422, e.code(), e.what());
  }
  try {
    return json_response(201, ingest_report_view(index_.ingest_batch(batch)));
  } catch (const Error& e) {
    return error_response(500, e.code(), e.what());
  }
}

int Service::start(const std::string& host, int port) {
  stop();
  server_ = std::make_unique<httplib::Server>();
  server_->set_payload_max_length(options_.max_upload_bytes);
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->Get(R"(/.*)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_get(req.target));
  });
  server_->Post(R"(/.*)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_post(req.target, req.body));
  });

  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    server_.reset();
    throw Error(ErrorCode::kInvalidArgument,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([server = server_.get()] { server->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

}  // namespace croci
