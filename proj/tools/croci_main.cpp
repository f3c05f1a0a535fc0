// croci: command-line front end to the citation index engine.
//
// Exit codes: 0 success, 1 validation failure (row diagnostics on stderr),
// 2 operational error.

#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "croci/croci.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitOperational = 2;

struct Failure {
  int exit_code;
  std::string message;
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

bool is_validation_status(croci_status s) {
  switch (s) {
    case CROCI_E_MALFORMED_DOI:
    case CROCI_E_MALFORMED_DATE:
    case CROCI_E_MALFORMED_ORCID:
    case CROCI_E_ORCID_CHECKSUM:
    case CROCI_E_MISSING_HEADER:
    case CROCI_E_WRONG_COLUMN_COUNT:
    case CROCI_E_SELF_CITATION:
    case CROCI_E_MALFORMED_DOCUMENT:
    case CROCI_E_MISSING_DOI_IDENTIFIER:
    case CROCI_E_UNSUPPORTED_RELATION:
    case CROCI_E_MALFORMED_ENTRY:
    case CROCI_E_INVALID_COUNTS:
      return true;
    default:
      return false;
  }
}

void check(croci_status s) {
  if (s == CROCI_OK) return;
  throw Failure{is_validation_status(s) ? kExitValidation : kExitOperational,
                std::string(croci_status_name(s)) + ": " + croci_last_error()};
}

// Takes ownership of a library-allocated string.
std::string take(char* s) {
  std::string out = s ? s : "";
  croci_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitOperational, "cannot read '" + path + "'"};
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

croci_format format_for(const std::string& flag, const std::string& path) {
  std::string f = flag;
  if (f.empty()) {
    auto ext = std::filesystem::path(path).extension().string();
    f = (ext == ".json" || ext == ".scholix") ? "scholix" : "csv";
  }
  if (f == "csv") return CROCI_FORMAT_CSV;
  if (f == "scholix") return CROCI_FORMAT_SCHOLIX;
  throw Failure{kExitOperational, "unknown format '" + flag + "'"};
}

void print_row_errors(const json& report) {
  for (const auto& e : report.value("row_errors", json::array())) {
    std::cerr << "row " << e["row"].get<std::size_t>();
    if (e["line"].get<std::size_t>() > 0) std::cerr << " (line " << e["line"] << ")";
    std::cerr << ": " << e["code"].get<std::string>() << ": "
              << e["message"].get<std::string>() << "\n";
  }
}

struct IndexHandle {
  croci_index* ptr = nullptr;
  explicit IndexHandle(const std::string& path) { check(croci_index_open(path.c_str(), &ptr)); }
  ~IndexHandle() { croci_index_close(ptr); }
};

struct RegistryHandle {
  croci_registry* ptr = nullptr;
  ~RegistryHandle() { croci_registry_close(ptr); }
};

std::unique_ptr<RegistryHandle> open_registry(const std::string& fixtures,
                                              const std::string& url, double rate,
                                              const std::string& type_map) {
  auto handle = std::make_unique<RegistryHandle>();
  const char* types = type_map.empty() ? nullptr : type_map.c_str();
  if (!fixtures.empty()) {
    check(croci_registry_open_fixtures(fixtures.c_str(), types, &handle->ptr));
  } else if (!url.empty()) {
    check(croci_registry_open_http(url.c_str(), rate, types, &handle->ptr));
  } else {
    throw Failure{kExitOperational,
                  "no registry configured: pass --fixtures or --registry-url "
                  "(or set CROCI_FIXTURES / CROCI_REGISTRY_URL)"};
  }
  return handle;
}

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"croci: crowdsourced open-citation index"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string index_path = env_or("CROCI_INDEX", "croci.db");
  std::string fixtures = env_or("CROCI_FIXTURES", "");
  std::string registry_url = env_or("CROCI_REGISTRY_URL", "");
  double rate = std::stod(env_or("CROCI_RATE", "10"));
  std::string type_map;
  app.add_option("--index", index_path, "Index path (\":memory:\" for a throwaway index)")
      ->capture_default_str();

  auto add_registry_options = [&](CLI::App* cmd) {
    cmd->add_option("--fixtures", fixtures, "Offline registry fixture directory");
    cmd->add_option("--registry-url", registry_url, "Registry base URL");
    cmd->add_option("--rate", rate, "Registry request ceiling per second");
    cmd->add_option("--type-map", type_map, "type,category CSV overriding the built-in map");
  };

  // validate
  auto* validate = app.add_subcommand("validate", "Check a submission file without storing it");
  std::string validate_file, validate_format;
  validate->add_option("file", validate_file)->required();
  validate->add_option("--format", validate_format)->check(CLI::IsMember({"csv", "scholix"}));

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse and store a submission");
  std::string ingest_file, ingest_format, orcid, archive_ref;
  bool complete_dates = false;
  ingest->add_option("file", ingest_file)->required();
  ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"csv", "scholix"}));
  ingest->add_option("--orcid", orcid, "Submitter ORCID")->required();
  ingest->add_option("--archive-ref", archive_ref, "Deposit DOI or URL")->required();
  ingest->add_flag("--complete-dates", complete_dates,
                   "Fill missing dates from the registry after ingesting");
  add_registry_options(ingest);

  // query
  auto* query = app.add_subcommand("query", "Look up citations of a DOI");
  std::string query_doi;
  bool q_citations = false, q_references = false, q_count = false, q_ref_count = false;
  bool q_json = false;
  auto* mode = query->add_option_group("mode");
  mode->add_flag("--citations", q_citations, "Incoming citations");
  mode->add_flag("--references", q_references, "Outgoing references");
  mode->add_flag("--count", q_count, "Number of incoming citations");
  mode->add_flag("--reference-count", q_ref_count, "Number of outgoing references");
  mode->require_option(1);
  query->add_flag("--json", q_json, "JSON output instead of CSV");
  query->add_option("doi", query_doi)->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Open vs closed coverage analysis");
  std::string corpus, out_dir, participation;
  std::uint32_t top_n = 20;
  analyze->add_option("--corpus", corpus, "Newline-delimited DOI list")->required();
  analyze->add_option("--out", out_dir, "Output directory")->required();
  analyze->add_option("--participation", participation,
                      "Per-publisher deposit counts (default: <fixtures>/participation.csv)");
  analyze->add_option("--top", top_n, "Publishers in the ranking")->capture_default_str();
  add_registry_options(analyze);

  // export / import
  auto* export_cmd = app.add_subcommand("export", "Write the CC0 citation dump");
  std::string export_out;
  export_cmd->add_option("--out", export_out)->required();
  auto* import_cmd = app.add_subcommand("import-dump", "Load a dump written by export");
  std::string import_file;
  import_cmd->add_option("file", import_file)->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the REST service");
  std::string addr = "127.0.0.1:8080";
  std::uint64_t max_upload = std::stoull(env_or("CROCI_MAX_UPLOAD", "67108864"));
  serve->add_option("--addr", addr, "host:port")->capture_default_str();
  serve->add_option("--max-upload", max_upload, "Upload size cap in bytes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitOperational;
  }

  try {
    if (*validate) {
      std::string data = read_file(validate_file);
      char* out = nullptr;
      check(croci_validate_submission(data.data(), data.size(),
                                      format_for(validate_format, validate_file), &out));
      json report = json::parse(take(out));
      print_row_errors(report);
      std::cout << report["records"] << " records, " << report["errors"] << " errors\n";
      return report["errors"].get<std::size_t>() == 0 ? kExitOk : kExitValidation;
    }

    if (*ingest) {
      std::string data = read_file(ingest_file);
      IndexHandle index(index_path);
      char* out = nullptr;
      check(croci_index_ingest(index.ptr, data.data(), data.size(),
                               format_for(ingest_format, ingest_file), orcid.c_str(),
                               archive_ref.c_str(), 0, &out));
      json report = json::parse(take(out));
      print_row_errors(report);
      std::cout << "added " << report["added"] << ", duplicates_ignored "
                << report["duplicates_ignored"] << ", errors " << report["errors"] << "\n";
      if (complete_dates) {
        auto registry = open_registry(fixtures, registry_url, rate, type_map);
        char* summary = nullptr;
        check(croci_index_complete_dates(index.ptr, registry->ptr, nullptr, &summary));
        json s = json::parse(take(summary));
        std::cout << "dates: examined " << s["examined"] << ", updated " << s["updated"]
                  << ", still incomplete " << s["incomplete"] << "\n";
      }
      return report["errors"].get<std::size_t>() == 0 ? kExitOk : kExitValidation;
    }

    if (*query) {
      IndexHandle index(index_path);
      if (q_count || q_ref_count) {
        std::uint64_t n = 0;
        check(croci_index_count(index.ptr, query_doi.c_str(),
                                q_count ? CROCI_CITATIONS : CROCI_REFERENCES, &n));
        if (q_json) {
          std::cout << json{{"count", n}}.dump() << "\n";
        } else {
          std::cout << n << "\n";
        }
        return kExitOk;
      }
      char* out = nullptr;
      check(croci_index_list(index.ptr, query_doi.c_str(),
                             q_citations ? CROCI_CITATIONS : CROCI_REFERENCES, &out));
      json list = json::parse(take(out));
      if (q_json) {
        std::cout << list.dump(2) << "\n";
        return kExitOk;
      }
      std::cout << "citing,cited,citing_date,cited_date,timespan,submitter,archive_ref\n";
      for (const auto& c : list) {
        auto cell = [&](const char* key) {
          const json& v = c[key];
          std::string s = v.is_null() ? "" : v.get<std::string>();
          if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char ch : s) {
              if (ch == '"') quoted += '"';
              quoted += ch;
            }
            return quoted + "\"";
          }
          return s;
        };
        std::cout << cell("citing") << ',' << cell("cited") << ',' << cell("citing_date")
                  << ',' << cell("cited_date") << ',' << cell("timespan") << ','
                  << cell("submitter") << ',' << cell("archive_ref") << "\n";
      }
      return kExitOk;
    }

    if (*analyze) {
      IndexHandle index(index_path);
      auto registry = open_registry(fixtures, registry_url, rate, type_map);
      if (participation.empty() && !fixtures.empty() &&
          std::filesystem::exists(std::filesystem::path(fixtures) / "participation.csv")) {
        participation = (std::filesystem::path(fixtures) / "participation.csv").string();
      }
      char* out = nullptr;
      check(croci_analyze(index.ptr, registry->ptr, corpus.c_str(),
                          participation.empty() ? nullptr : participation.c_str(),
                          out_dir.c_str(), top_n, &out));
      std::cout << json::parse(take(out)).dump(2) << "\n";
      return kExitOk;
    }

    if (*export_cmd) {
      IndexHandle index(index_path);
      std::uint64_t rows = 0;
      check(croci_index_export(index.ptr, export_out.c_str(), &rows));
      std::cout << rows << " citations written to " << export_out << "\n";
      return kExitOk;
    }

    if (*import_cmd) {
      IndexHandle index(index_path);
      char* out = nullptr;
      check(croci_index_import_dump(index.ptr, import_file.c_str(), &out));
      json report = json::parse(take(out));
      print_row_errors(report);
      std::cout << "added " << report["added"] << ", duplicates_ignored "
                << report["duplicates_ignored"] << ", errors " << report["errors"] << "\n";
      return report["errors"].get<std::size_t>() == 0 ? kExitOk : kExitValidation;
    }

    if (*serve) {
      auto colon = addr.rfind(':');
      if (colon == std::string::npos) throw Failure{kExitOperational, "--addr must be host:port"};
      std::string host = addr.substr(0, colon);
      int port = std::stoi(addr.substr(colon + 1));
      IndexHandle index(index_path);
      croci_service* service = nullptr;
      check(croci_service_start(index.ptr, host.c_str(), port, max_upload, &service));
      std::cout << "serving on " << host << ":" << croci_service_port(service) << std::endl;
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
      croci_service_stop(service);
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "croci: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "croci: " << e.what() << "\n";
    return kExitOperational;
  }
  return kExitOk;
}
