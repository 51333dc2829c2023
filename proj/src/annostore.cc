// Copyright 2026 The Shade Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shade/annostore.h"

#include <sqlite3.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "shade/error.h"
#include "shade/wikitext.h"
#include "text_util.h"

namespace shade {

namespace {

constexpr const char *kSchema = R"sql(
CREATE TABLE IF NOT EXISTS annotator (
  id    INTEGER PRIMARY KEY AUTOINCREMENT,
  name  TEXT NOT NULL UNIQUE,
  token TEXT NOT NULL UNIQUE
);
CREATE TABLE IF NOT EXISTS entity_page (
  id              INTEGER PRIMARY KEY AUTOINCREMENT,
  entity_name     TEXT NOT NULL UNIQUE,
  first_paragraph TEXT NOT NULL,
  links_list      TEXT NOT NULL,
  noun_list       TEXT NOT NULL,
  wikitext        TEXT NOT NULL,
  assignee        INTEGER REFERENCES annotator(id),
  completed       INTEGER NOT NULL DEFAULT 0,
  skipped         INTEGER NOT NULL DEFAULT 0,
  CHECK (NOT (completed AND skipped)),
  CHECK (assignee IS NOT NULL OR (completed = 0 AND skipped = 0))
);
CREATE INDEX IF NOT EXISTS entity_page_assignee ON entity_page(assignee);
CREATE TABLE IF NOT EXISTS annotation (
  id           INTEGER PRIMARY KEY AUTOINCREMENT,
  entity_id    INTEGER NOT NULL UNIQUE REFERENCES entity_page(id),
  annotator_id INTEGER NOT NULL REFERENCES annotator(id),
  label_text   TEXT NOT NULL CHECK (length(label_text) > 0),
  source       TEXT NOT NULL
               CHECK (source IN ('LINKS', 'NOUN_PHRASES', 'MANUAL')),
  weight       INTEGER NOT NULL CHECK (weight = CASE source
                 WHEN 'LINKS' THEN 1
                 WHEN 'NOUN_PHRASES' THEN 2
                 WHEN 'MANUAL' THEN 3 END),
  created_at   TEXT NOT NULL
);
)sql";

constexpr const char *kEntityColumns =
    "id, entity_name, first_paragraph, links_list, noun_list, wikitext, "
    "assignee, completed, skipped";

std::string NowIso8601() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string NewToken() {
  std::random_device rd;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string token;
  for (int i = 0; i < 8; ++i) {
    uint32_t word = rd();
    for (int k = 0; k < 8; ++k) {
      token += kHex[word & 0xF];
      word >>= 4;
    }
  }
  return token;
}

std::string ListToJson(const std::vector<std::string> &list) {
  return nlohmann::json(list).dump();
}

std::vector<std::string> ListFromJson(const std::string &json) {
  return nlohmann::json::parse(json).get<std::vector<std::string>>();
}

std::string TsvField(std::string_view value) {
  std::string out(value);
  for (char &c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

const char *SourceName(Source source) {
  switch (source) {
    case Source::kLinks: return "LINKS";
    case Source::kNounPhrases: return "NOUN_PHRASES";
    case Source::kManual: return "MANUAL";
  }
  return "?";
}

std::optional<Source> ParseSource(std::string_view name) {
  for (Source s : {Source::kLinks, Source::kNounPhrases, Source::kManual}) {
    if (name == SourceName(s)) return s;
  }
  return std::nullopt;
}

// Thin RAII layer over the SQLite C API.
class Store::Db {
 public:
  class Statement {
   public:
    // Borrows a cached statement; it is reset when this wrapper goes away.
    Statement(sqlite3 *db, sqlite3_stmt *stmt) : db_(db), stmt_(stmt) {}
    ~Statement() {
      sqlite3_reset(stmt_);
      sqlite3_clear_bindings(stmt_);
    }
    Statement(const Statement &) = delete;
    Statement &operator=(const Statement &) = delete;

    Statement &Bind(int index, int64_t value) {
      Check(sqlite3_bind_int64(stmt_, index, value));
      return *this;
    }
    Statement &Bind(int index, std::string_view value) {
      Check(sqlite3_bind_text(stmt_, index, value.data(),
                              static_cast<int>(value.size()),
                              SQLITE_TRANSIENT));
      return *this;
    }
    Statement &BindNull(int index) {
      Check(sqlite3_bind_null(stmt_, index));
      return *this;
    }

    // True while rows are available.
    bool Step() {
      int rc = sqlite3_step(stmt_);
      if (rc == SQLITE_ROW) return true;
      if (rc == SQLITE_DONE) return false;
      throw Error(ErrorCode::kStorage,
                  std::string("step failed: ") + sqlite3_errmsg(db_));
    }

    int64_t Int(int col) const { return sqlite3_column_int64(stmt_, col); }
    bool IsNull(int col) const {
      return sqlite3_column_type(stmt_, col) == SQLITE_NULL;
    }
    std::string Text(int col) const {
      const auto *data =
          reinterpret_cast<const char *>(sqlite3_column_text(stmt_, col));
      int size = sqlite3_column_bytes(stmt_, col);
      return data ? std::string(data, size) : std::string();
    }

   private:
    void Check(int rc) {
      if (rc != SQLITE_OK) {
        throw Error(ErrorCode::kStorage,
                    std::string("bind failed: ") + sqlite3_errmsg(db_));
      }
    }

    sqlite3 *db_;
    sqlite3_stmt *stmt_ = nullptr;
  };

  // Commits on Commit(), rolls back if destroyed first.
  class Transaction {
   public:
    explicit Transaction(Db &db) : db_(db) { db_.Exec("BEGIN IMMEDIATE"); }
    ~Transaction() {
      if (!done_) sqlite3_exec(db_.handle(), "ROLLBACK", nullptr, nullptr, nullptr);
    }
    void Commit() {
      db_.Exec("COMMIT");
      done_ = true;
    }

   private:
    Db &db_;
    bool done_ = false;
  };

  explicit Db(const std::filesystem::path &path) {
    int rc = sqlite3_open_v2(path.c_str(), &db_,
                             SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                                 SQLITE_OPEN_FULLMUTEX,
                             nullptr);
    if (rc != SQLITE_OK) {
      std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error(ErrorCode::kIoError,
                  "cannot open store " + path.string() + ": " + message);
    }
    sqlite3_busy_timeout(db_, 5000);
    Exec("PRAGMA foreign_keys = ON");
    if (path != ":memory:") {
      Exec("PRAGMA journal_mode = WAL");
      Exec("PRAGMA synchronous = NORMAL");
    }
    Exec(kSchema);
  }
  ~Db() {
    for (auto &[sql, stmt] : cache_) sqlite3_finalize(stmt);
    sqlite3_close(db_);
  }

  void Exec(const char *sql) {
    char *err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string message = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error(ErrorCode::kStorage, message);
    }
  }

  sqlite3 *handle() { return db_; }

  // Statements are compiled once per connection. Callers hold the store
  // mutex and never keep two wrappers for the same SQL alive at once.
  Statement Prepare(const std::string &sql) {
    sqlite3_stmt *&stmt = cache_[sql];
    if (!stmt && sqlite3_prepare_v3(db_, sql.c_str(), -1,
                                    SQLITE_PREPARE_PERSISTENT, &stmt,
                                    nullptr) != SQLITE_OK) {
      std::string message = sqlite3_errmsg(db_);
      cache_.erase(sql);
      throw Error(ErrorCode::kStorage, "prepare failed: " + message);
    }
    return Statement(db_, stmt);
  }

  EntityPage ReadEntity(const Statement &row) {
    EntityPage page;
    page.id = row.Int(0);
    page.entity_name = row.Text(1);
    page.first_paragraph = row.Text(2);
    page.links_list = ListFromJson(row.Text(3));
    page.noun_list = ListFromJson(row.Text(4));
    page.wikitext = row.Text(5);
    if (!row.IsNull(6)) page.assignee = row.Int(6);
    page.completed = row.Int(7) != 0;
    page.skipped = row.Int(8) != 0;
    return page;
  }

  std::optional<EntityPage> QueryEntity(const std::string &where,
                                        std::optional<int64_t> arg) {
    Statement stmt = Prepare(std::string("SELECT ") + kEntityColumns +
                             " FROM entity_page WHERE " + where);
    if (arg) stmt.Bind(1, *arg);
    if (!stmt.Step()) return std::nullopt;
    return ReadEntity(stmt);
  }

  std::optional<Annotator> QueryAnnotator(const char *column,
                                          std::string_view value) {
    Statement stmt = Prepare(std::string("SELECT id, name, token FROM "
                                         "annotator WHERE ") +
                             column + " = ?");
    stmt.Bind(1, value);
    if (!stmt.Step()) return std::nullopt;
    return Annotator{stmt.Int(0), stmt.Text(1), stmt.Text(2)};
  }

  void RequireAnnotator(AnnotatorId id) {
    Statement stmt = Prepare("SELECT 1 FROM annotator WHERE id = ?");
    stmt.Bind(1, id);
    if (!stmt.Step()) {
      throw Error(ErrorCode::kUnknownAnnotator,
                  "unknown annotator " + std::to_string(id));
    }
  }

  std::optional<EntityPage> PendingFor(AnnotatorId annotator) {
    return QueryEntity(
        "assignee = ? AND completed = 0 AND skipped = 0 ORDER BY id LIMIT 1",
        annotator);
  }

  // Loads an entity that the annotator is about to finish, enforcing the
  // assignment and flag preconditions.
  EntityPage RequirePending(EntityId entity, AnnotatorId annotator) {
    std::optional<EntityPage> page = QueryEntity("id = ?", entity);
    if (!page) {
      throw Error(ErrorCode::kUnknownEntity,
                  "unknown entity " + std::to_string(entity));
    }
    if (page->assignee != annotator) {
      throw Error(ErrorCode::kNotAssignee,
                  "entity " + std::to_string(entity) +
                      " is not assigned to annotator " +
                      std::to_string(annotator));
    }
    if (page->completed) {
      throw Error(ErrorCode::kAlreadyCompleted,
                  "entity " + std::to_string(entity) + " is already completed");
    }
    if (page->skipped) {
      throw Error(ErrorCode::kAlreadySkipped,
                  "entity " + std::to_string(entity) + " is already skipped");
    }
    return *page;
  }

 private:
  sqlite3 *db_ = nullptr;
  std::unordered_map<std::string, sqlite3_stmt *> cache_;
};

Store::Store(const std::filesystem::path &path)
    : db_(std::make_unique<Db>(path)) {}

Store::~Store() = default;

Annotator Store::AddAnnotator(std::string_view name) {
  std::string trimmed(text::Trim(name));
  if (trimmed.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "annotator name is empty");
  }
  std::lock_guard lock(mu_);
  Db::Transaction txn(*db_);
  if (db_->QueryAnnotator("name", trimmed)) {
    throw Error(ErrorCode::kDuplicateAnnotator,
                "annotator '" + trimmed + "' already exists");
  }
  Annotator annotator{0, trimmed, NewToken()};
  db_->Prepare("INSERT INTO annotator(name, token) VALUES (?, ?)")
      .Bind(1, annotator.name)
      .Bind(2, annotator.token)
      .Step();
  annotator.id = sqlite3_last_insert_rowid(db_->handle());
  txn.Commit();
  return annotator;
}

std::optional<Annotator> Store::FindAnnotator(AnnotatorId id) {
  std::lock_guard lock(mu_);
  auto stmt = db_->Prepare("SELECT id, name, token FROM annotator WHERE id = ?");
  stmt.Bind(1, id);
  if (!stmt.Step()) return std::nullopt;
  return Annotator{stmt.Int(0), stmt.Text(1), stmt.Text(2)};
}

std::optional<Annotator> Store::FindAnnotatorByName(std::string_view name) {
  std::lock_guard lock(mu_);
  return db_->QueryAnnotator("name", text::Trim(name));
}

std::optional<Annotator> Store::FindAnnotatorByToken(std::string_view token) {
  if (token.empty()) return std::nullopt;
  std::lock_guard lock(mu_);
  return db_->QueryAnnotator("token", token);
}

std::vector<Annotator> Store::ListAnnotators() {
  std::lock_guard lock(mu_);
  std::vector<Annotator> result;
  auto stmt = db_->Prepare("SELECT id, name, token FROM annotator ORDER BY id");
  while (stmt.Step()) result.push_back({stmt.Int(0), stmt.Text(1), stmt.Text(2)});
  return result;
}

std::pair<EntityId, bool> Store::AddEntity(const EntityPage &page) {
  std::lock_guard lock(mu_);
  Db::Transaction txn(*db_);
  auto existing = db_->Prepare("SELECT id FROM entity_page WHERE entity_name = ?");
  existing.Bind(1, page.entity_name);
  if (existing.Step()) return {existing.Int(0), false};

  db_->Prepare(
         "INSERT INTO entity_page(entity_name, first_paragraph, links_list, "
         "noun_list, wikitext) VALUES (?, ?, ?, ?, ?)")
      .Bind(1, page.entity_name)
      .Bind(2, page.first_paragraph)
      .Bind(3, ListToJson(page.links_list))
      .Bind(4, ListToJson(page.noun_list))
      .Bind(5, page.wikitext)
      .Step();
  EntityId id = sqlite3_last_insert_rowid(db_->handle());
  txn.Commit();
  return {id, true};
}

std::optional<EntityPage> Store::GetEntity(EntityId id) {
  std::lock_guard lock(mu_);
  return db_->QueryEntity("id = ?", id);
}

int64_t Store::EntityCount() {
  std::lock_guard lock(mu_);
  auto stmt = db_->Prepare("SELECT COUNT(*) FROM entity_page");
  stmt.Step();
  return stmt.Int(0);
}

std::optional<EntityPage> Store::AssignNext(AnnotatorId annotator) {
  std::lock_guard lock(mu_);
  Db::Transaction txn(*db_);
  db_->RequireAnnotator(annotator);
  if (auto pending = db_->PendingFor(annotator)) return pending;

  std::optional<EntityPage> next =
      db_->QueryEntity("assignee IS NULL ORDER BY id LIMIT 1", std::nullopt);
  if (!next) return std::nullopt;
  db_->Prepare(
         "UPDATE entity_page SET assignee = ? WHERE id = ? AND assignee IS NULL")
      .Bind(1, annotator)
      .Bind(2, next->id)
      .Step();
  if (sqlite3_changes(db_->handle()) != 1) {
    throw Error(ErrorCode::kStorage, "assignment claim lost");
  }
  txn.Commit();
  next->assignee = annotator;
  return next;
}

std::optional<EntityPage> Store::CurrentTask(AnnotatorId annotator) {
  {
    std::lock_guard lock(mu_);
    db_->RequireAnnotator(annotator);
    if (auto pending = db_->PendingFor(annotator)) return pending;
  }
  return AssignNext(annotator);
}

Annotation Store::SaveAnnotation(EntityId entity, AnnotatorId annotator,
                                 std::string_view label_text, Source source) {
  std::lock_guard lock(mu_);
  Db::Transaction txn(*db_);
  db_->RequireAnnotator(annotator);
  db_->RequirePending(entity, annotator);
  std::string label(text::Trim(label_text));
  if (label.empty()) {
    throw Error(ErrorCode::kEmptyLabel, "label text is empty");
  }

  Annotation annotation;
  annotation.entity_id = entity;
  annotation.annotator_id = annotator;
  annotation.label_text = std::move(label);
  annotation.source = source;
  annotation.weight = WeightOf(source);
  annotation.created_at = NowIso8601();

  db_->Prepare(
         "INSERT INTO annotation(entity_id, annotator_id, label_text, source, "
         "weight, created_at) VALUES (?, ?, ?, ?, ?, ?)")
      .Bind(1, entity)
      .Bind(2, annotator)
      .Bind(3, annotation.label_text)
      .Bind(4, SourceName(source))
      .Bind(5, annotation.weight)
      .Bind(6, annotation.created_at)
      .Step();
  annotation.id = sqlite3_last_insert_rowid(db_->handle());
  db_->Prepare("UPDATE entity_page SET completed = 1 WHERE id = ?")
      .Bind(1, entity)
      .Step();
  txn.Commit();
  return annotation;
}

void Store::MarkSkipped(EntityId entity, AnnotatorId annotator) {
  std::lock_guard lock(mu_);
  Db::Transaction txn(*db_);
  db_->RequireAnnotator(annotator);
  db_->RequirePending(entity, annotator);
  db_->Prepare("UPDATE entity_page SET skipped = 1 WHERE id = ?")
      .Bind(1, entity)
      .Step();
  txn.Commit();
}

std::vector<EntityPage> Store::SkippedEntities() {
  std::lock_guard lock(mu_);
  std::vector<EntityPage> result;
  auto stmt = db_->Prepare(std::string("SELECT ") + kEntityColumns +
                           " FROM entity_page WHERE skipped = 1 ORDER BY id");
  while (stmt.Step()) result.push_back(db_->ReadEntity(stmt));
  return result;
}

int64_t Store::SkippedCount() {
  std::lock_guard lock(mu_);
  auto stmt = db_->Prepare("SELECT COUNT(*) FROM entity_page WHERE skipped = 1");
  stmt.Step();
  return stmt.Int(0);
}

std::vector<Annotation> Store::ListAnnotations() {
  std::lock_guard lock(mu_);
  std::vector<Annotation> result;
  auto stmt = db_->Prepare(
      "SELECT id, entity_id, annotator_id, label_text, source, weight, "
      "created_at FROM annotation ORDER BY entity_id");
  while (stmt.Step()) {
    Annotation a;
    a.id = stmt.Int(0);
    a.entity_id = stmt.Int(1);
    a.annotator_id = stmt.Int(2);
    a.label_text = stmt.Text(3);
    std::optional<Source> source = ParseSource(stmt.Text(4));
    if (!source) throw Error(ErrorCode::kStorage, "bad source column");
    a.source = *source;
    a.weight = static_cast<int>(stmt.Int(5));
    a.created_at = stmt.Text(6);
    result.push_back(std::move(a));
  }
  return result;
}

SourceBreakdown Store::BreakdownBySource() {
  std::lock_guard lock(mu_);
  SourceBreakdown breakdown;
  auto stmt =
      db_->Prepare("SELECT source, COUNT(*) FROM annotation GROUP BY source");
  while (stmt.Step()) {
    int64_t count = stmt.Int(1);
    switch (ParseSource(stmt.Text(0)).value_or(Source::kManual)) {
      case Source::kLinks: breakdown.links = count; break;
      case Source::kNounPhrases: breakdown.noun_phrases = count; break;
      case Source::kManual: breakdown.manual = count; break;
    }
  }
  breakdown.total = breakdown.links + breakdown.noun_phrases + breakdown.manual;
  return breakdown;
}

std::optional<double> Store::FirstLinkAgreement() {
  std::vector<std::pair<std::string, std::string>> rows;
  {
    std::lock_guard lock(mu_);
    auto stmt = db_->Prepare(
        "SELECT e.wikitext, a.label_text FROM annotation a "
        "JOIN entity_page e ON e.id = a.entity_id WHERE e.completed = 1");
    while (stmt.Step()) rows.emplace_back(stmt.Text(0), stmt.Text(1));
  }
  if (rows.empty()) return std::nullopt;
  int64_t agree = 0;
  for (const auto &[wikitext, label] : rows) {
    std::optional<wikitext::LinkTarget> first = wikitext::FirstLink(wikitext);
    if (first && text::EqualsIgnoreCase(first->target, label)) ++agree;
  }
  return static_cast<double>(agree) / rows.size();
}

int64_t Store::ExportAnnotations(std::ostream &out) {
  std::lock_guard lock(mu_);
  out << "entity_name\tlabel\tsource\tweight\tannotator\tcreated_at\n";
  auto stmt = db_->Prepare(
      "SELECT e.entity_name, a.label_text, a.source, a.weight, n.name, "
      "a.created_at FROM annotation a "
      "JOIN entity_page e ON e.id = a.entity_id "
      "JOIN annotator n ON n.id = a.annotator_id ORDER BY e.id");
  int64_t rows = 0;
  while (stmt.Step()) {
    out << TsvField(stmt.Text(0)) << '\t' << TsvField(stmt.Text(1)) << '\t'
        << stmt.Text(2) << '\t' << stmt.Int(3) << '\t'
        << TsvField(stmt.Text(4)) << '\t' << stmt.Text(5) << '\n';
    ++rows;
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing export");
  return rows;
}

int64_t Store::ExportAnnotations(const std::filesystem::path &destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot open " + destination.string() + " for writing");
  }
  int64_t rows = ExportAnnotations(out);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoError, "failed writing " + destination.string());
  }
  return rows;
}

}  // namespace shade
