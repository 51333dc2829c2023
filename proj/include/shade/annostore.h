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

// Persistent annotation store backed by a single SQLite file.
//
// Schema (one row per entity, annotator, annotation):
//
//   entity_page(id, entity_name UNIQUE, first_paragraph, links_list,
//               noun_list, wikitext, assignee -> annotator, completed, skipped)
//   annotator(id, name UNIQUE, token UNIQUE)
//   annotation(id, entity_id UNIQUE -> entity_page, annotator_id, label_text,
//              source, weight, created_at)
//
// Candidate lists are stored as JSON arrays. The schema carries CHECK
// constraints for the flag and weight invariants, so a violation is rejected
// by the database as well as by the code paths here.
//
// All operations on one Store go through a single connection guarded by a
// mutex; every mutation runs in its own IMMEDIATE transaction.

#ifndef SHADE_ANNOSTORE_H_
#define SHADE_ANNOSTORE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace shade {

using EntityId = int64_t;
using AnnotatorId = int64_t;

// Where a label came from. The order is the workflow order.
enum class Source { kLinks, kNounPhrases, kManual };

// 1 for links, 2 for noun phrases, 3 for manual input.
constexpr int WeightOf(Source source) {
  switch (source) {
    case Source::kLinks: return 1;
    case Source::kNounPhrases: return 2;
    case Source::kManual: return 3;
  }
  return 0;
}

// "LINKS", "NOUN_PHRASES", "MANUAL".
const char *SourceName(Source source);
std::optional<Source> ParseSource(std::string_view name);

struct EntityPage {
  EntityId id = 0;  // 0 until persisted
  std::string entity_name;
  std::string first_paragraph;
  std::vector<std::string> links_list;
  std::vector<std::string> noun_list;
  std::string wikitext;  // raw article body, kept for first-link statistics
  std::optional<AnnotatorId> assignee;
  bool completed = false;
  bool skipped = false;
};

struct Annotator {
  AnnotatorId id = 0;
  std::string name;
  std::string token;
};

struct Annotation {
  int64_t id = 0;
  EntityId entity_id = 0;
  AnnotatorId annotator_id = 0;
  std::string label_text;
  Source source = Source::kManual;
  int weight = 0;
  std::string created_at;  // ISO 8601 UTC, e.g. 2026-10-15T09:30:00Z
};

struct SourceBreakdown {
  int64_t links = 0;
  int64_t noun_phrases = 0;
  int64_t manual = 0;
  int64_t total = 0;

  // Share of labels picked from one of the two lists; nullopt when empty.
  std::optional<double> ListFraction() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(links + noun_phrases) / total;
  }
};

class Store {
 public:
  // Opens (creating if needed) the store at path. ":memory:" gives a private
  // in-memory store.
  explicit Store(const std::filesystem::path &path);
  ~Store();

  Store(const Store &) = delete;
  Store &operator=(const Store &) = delete;

  // Annotators.
  Annotator AddAnnotator(std::string_view name);  // kDuplicateAnnotator
  std::optional<Annotator> FindAnnotator(AnnotatorId id);
  std::optional<Annotator> FindAnnotatorByName(std::string_view name);
  std::optional<Annotator> FindAnnotatorByToken(std::string_view token);
  std::vector<Annotator> ListAnnotators();

  // Inserts the entity unless one with the same name exists. Returns the id
  // and whether a row was inserted. Assignment and flags of the argument are
  // ignored; new entities always start unassigned and pending.
  std::pair<EntityId, bool> AddEntity(const EntityPage &page);
  std::optional<EntityPage> GetEntity(EntityId id);
  int64_t EntityCount();

  // Returns the annotator's pending entity if there is one, else atomically
  // claims the unassigned entity with the lowest id. nullopt when nothing is
  // left. Throws kUnknownAnnotator.
  std::optional<EntityPage> AssignNext(AnnotatorId annotator);

  // Lowest-id entity assigned to the annotator that is neither completed nor
  // skipped; falls through to AssignNext when there is none.
  std::optional<EntityPage> CurrentTask(AnnotatorId annotator);

  // Records the single annotation of an entity and marks it completed.
  // Throws kUnknownEntity, kNotAssignee, kAlreadyCompleted, kAlreadySkipped,
  // kEmptyLabel. The label is stored with surrounding whitespace trimmed.
  Annotation SaveAnnotation(EntityId entity, AnnotatorId annotator,
                            std::string_view label_text, Source source);

  // Marks a pending entity skipped. Throws kUnknownEntity, kNotAssignee,
  // kAlreadyCompleted, kAlreadySkipped.
  void MarkSkipped(EntityId entity, AnnotatorId annotator);

  std::vector<EntityPage> SkippedEntities();
  int64_t SkippedCount();
  std::vector<Annotation> ListAnnotations();  // ordered by entity id

  SourceBreakdown BreakdownBySource();

  // Fraction of completed entities whose label equals, ignoring ASCII case,
  // the target of the first link in the article lead. nullopt when nothing
  // is completed.
  std::optional<double> FirstLinkAgreement();

  // Writes all annotations as TSV with the header
  //   entity_name\tlabel\tsource\tweight\tannotator\tcreated_at
  // sorted by entity id. Tabs, CR and LF inside fields become single
  // spaces. Returns the number of data rows.
  int64_t ExportAnnotations(std::ostream &out);
  int64_t ExportAnnotations(const std::filesystem::path &destination);

 private:
  class Db;

  std::mutex mu_;
  std::unique_ptr<Db> db_;
};

}  // namespace shade

#endif  // SHADE_ANNOSTORE_H_
