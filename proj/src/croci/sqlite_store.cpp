#include <sqlite3.h>

#include <mutex>

#include "croci/error.hpp"
#include "croci/store.hpp"

namespace croci {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS citation (
  citing TEXT NOT NULL,
  cited TEXT NOT NULL,
  citing_date TEXT,
  cited_date TEXT,
  timespan TEXT,
  PRIMARY KEY (citing, cited)
) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS citation_by_cited ON citation (cited, citing);
CREATE TABLE IF NOT EXISTS provenance (
  citing TEXT NOT NULL,
  cited TEXT NOT NULL,
  seq INTEGER NOT NULL,
  submitter TEXT NOT NULL,
  archive_ref TEXT NOT NULL,
  received_at INTEGER NOT NULL,
  PRIMARY KEY (citing, cited, seq)
) WITHOUT ROWID;
)sql";

constexpr const char* kColumns = "citing, cited, citing_date, cited_date";

class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(ErrorCode::kStorageFailure,
                  std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int index, const std::string& text) {
    sqlite3_bind_text(stmt_, index, text.data(), static_cast<int>(text.size()),
                      SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int index, const std::optional<std::string>& text) {
    if (text) return bind(index, *text);
    sqlite3_bind_null(stmt_, index);
    return *this;
  }
  Statement& bind(int index, std::int64_t value) {
    sqlite3_bind_int64(stmt_, index, value);
    return *this;
  }

  // True while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorCode::kStorageFailure,
                std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
  }
  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  std::optional<std::string> text(int column) const {
    if (sqlite3_column_type(stmt_, column) == SQLITE_NULL) return std::nullopt;
    auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, column));
    return std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, column)));
  }
  std::int64_t integer(int column) const { return sqlite3_column_int64(stmt_, column); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

std::optional<std::string> date_text(const std::optional<PartialDate>& date) {
  if (!date) return std::nullopt;
  return date->to_string();
}

std::optional<PartialDate> date_from(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  return parse_partial_date(*text);
}

class SqliteStore final : public Store {
 public:
  explicit SqliteStore(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_,
                        SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                            SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
      std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error(ErrorCode::kStorageFailure,
                  "cannot open index '" + path + "': " + message);
    }
    exec(kSchema);
  }
  ~SqliteStore() override { sqlite3_close(db_); }

  std::optional<StoredCitation> find(const CitationKey& key) const override {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, std::string("SELECT ") + kColumns +
                            " FROM citation WHERE citing = ?1 AND cited = ?2");
    stmt.bind(1, key.citing.canonical()).bind(2, key.cited.canonical());
    if (!stmt.step()) return std::nullopt;
    return load(stmt);
  }

  std::vector<StoredCitation> outgoing(const Doi& citing) const override {
    return select(std::string("SELECT ") + kColumns +
                      " FROM citation WHERE citing = ?1 ORDER BY cited",
                  citing.canonical());
  }

  std::vector<StoredCitation> incoming(const Doi& cited) const override {
    return select(std::string("SELECT ") + kColumns +
                      " FROM citation INDEXED BY citation_by_cited"
                      " WHERE cited = ?1 ORDER BY citing",
                  cited.canonical());
  }

  std::size_t count_outgoing(const Doi& citing) const override {
    return scalar("SELECT COUNT(*) FROM citation WHERE citing = ?1", citing.canonical());
  }
  std::size_t count_incoming(const Doi& cited) const override {
    return scalar("SELECT COUNT(*) FROM citation WHERE cited = ?1", cited.canonical());
  }
  std::size_t size() const override {
    return scalar("SELECT COUNT(*) FROM citation", std::nullopt);
  }
  std::size_t distinct_citing() const override {
    return scalar("SELECT COUNT(DISTINCT citing) FROM citation", std::nullopt);
  }

  void for_each(const std::function<void(const StoredCitation&)>& fn) const override {
    for (const auto& citation :
         select(std::string("SELECT ") + kColumns +
                    " FROM citation ORDER BY citing, cited",
                std::nullopt)) {
      fn(citation);
    }
  }

  void commit(const std::vector<StoredCitation>& upserts) override {
    std::lock_guard lock(mutex_);
    exec("BEGIN IMMEDIATE");
    try {
      Statement put(db_,
                    "INSERT OR REPLACE INTO citation (citing, cited, citing_date, "
                    "cited_date, timespan) VALUES (?1, ?2, ?3, ?4, ?5)");
      Statement clear(db_, "DELETE FROM provenance WHERE citing = ?1 AND cited = ?2");
      Statement add(db_,
                    "INSERT INTO provenance (citing, cited, seq, submitter, "
                    "archive_ref, received_at) VALUES (?1, ?2, ?3, ?4, ?5, ?6)");
      for (const auto& c : upserts) {
        if (c.provenance.empty()) {
          throw Error(ErrorCode::kStorageFailure, "citation without provenance");
        }
        const auto& citing = c.key.citing.canonical();
        const auto& cited = c.key.cited.canonical();
        std::optional<std::string> span;
        if (c.timespan) span = c.timespan->to_iso8601();
        put.bind(1, citing).bind(2, cited).bind(3, date_text(c.citing_date));
        put.bind(4, date_text(c.cited_date)).bind(5, span);
        put.step();
        put.reset();
        clear.bind(1, citing).bind(2, cited);
        clear.step();
        clear.reset();
        for (std::size_t i = 0; i < c.provenance.size(); ++i) {
          const auto& p = c.provenance[i];
          add.bind(1, citing).bind(2, cited).bind(3, static_cast<std::int64_t>(i));
          add.bind(4, p.submitter.value()).bind(5, p.archive_ref);
          add.bind(6, static_cast<std::int64_t>(p.received_at.time_since_epoch().count()));
          add.step();
          add.reset();
        }
      }
      exec("COMMIT");
    } catch (...) {
      sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
      throw;
    }
  }

 private:
  void exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string message = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error(ErrorCode::kStorageFailure, "sqlite: " + message);
    }
  }

  std::size_t scalar(const char* sql, const std::optional<std::string>& arg) const {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, sql);
    if (arg) stmt.bind(1, *arg);
    stmt.step();
    return static_cast<std::size_t>(stmt.integer(0));
  }

  std::vector<StoredCitation> select(const std::string& sql,
                                     const std::optional<std::string>& arg) const {
    std::lock_guard lock(mutex_);
    Statement stmt(db_, sql);
    if (arg) stmt.bind(1, *arg);
    std::vector<StoredCitation> out;
    while (stmt.step()) out.push_back(load(stmt));
    return out;
  }

  // Caller holds mutex_.
  StoredCitation load(const Statement& row) const {
    StoredCitation c{CitationKey{normalize_doi(*row.text(0)), normalize_doi(*row.text(1))},
                     date_from(row.text(2)), date_from(row.text(3)), std::nullopt, {}};
    refresh_timespan(c);
    Statement prov(db_,
                   "SELECT submitter, archive_ref, received_at FROM provenance "
                   "WHERE citing = ?1 AND cited = ?2 ORDER BY seq");
    prov.bind(1, c.key.citing.canonical()).bind(2, c.key.cited.canonical());
    while (prov.step()) {
      c.provenance.push_back(Provenance{validate_orcid(*prov.text(0)), *prov.text(1),
                                        Timestamp(std::chrono::seconds(prov.integer(2)))});
    }
    return c;
  }

  sqlite3* db_ = nullptr;
  mutable std::recursive_mutex mutex_;
};

}  // namespace

std::unique_ptr<Store> make_sqlite_store(const std::string& path) {
  return std::make_unique<SqliteStore>(path);
}

}  // namespace croci
