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

// Three-stage labeling workflow. An annotator first sees the links list; the
// noun-phrase list opens only after rejecting the links ("Not in this list"),
// and free-text input opens only after rejecting the noun phrases too. Empty
// lists are passed over. Re-opening the task always starts again at the
// earliest non-empty stage, which is how an annotator goes back a list.
//
// Sessions live in memory only. Losing them (restart, reload) never changes
// stored state: an entity is skipped only through SkipTask.

#ifndef SHADE_WORKFLOW_H_
#define SHADE_WORKFLOW_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shade/annostore.h"

namespace shade {

// A workflow stage is named after the label source it produces.
using Stage = Source;

struct AnnotationSession {
  AnnotatorId annotator_id = 0;
  EntityId entity_id = 0;
  Stage stage = Stage::kLinks;

  bool operator==(const AnnotationSession &other) const = default;
};

struct Task {
  EntityPage entity;
  AnnotationSession session;
};

class Workflow {
 public:
  explicit Workflow(Store &store) : store_(store) {}

  // LINKS if the links list is non-empty, else NOUN_PHRASES if the noun
  // list is non-empty, else MANUAL.
  static Stage EarliestStage(const EntityPage &entity);

  // Labels offered at a stage; empty for MANUAL.
  static const std::vector<std::string> &LabelsFor(const EntityPage &entity,
                                                   Stage stage);

  // Fetches the annotator's current task and (re)starts its session at the
  // earliest non-empty stage. nullopt when no entity is left.
  std::optional<Task> OpenTask(AnnotatorId annotator);

  // "Not in this list": LINKS -> NOUN_PHRASES -> MANUAL, passing over an
  // empty noun list. Throws kAlreadyManual at MANUAL.
  Task RejectList(AnnotatorId annotator, EntityId entity);

  // At a list stage the label must be the list element at selection_index
  // (kLabelNotInList otherwise) and free text without an index is refused
  // with kManualLocked. At MANUAL any non-empty text is accepted. The source
  // of the stored annotation is the current stage.
  Annotation SubmitLabel(AnnotatorId annotator, EntityId entity,
                         std::string_view label_text,
                         std::optional<size_t> selection_index);

  void SkipTask(AnnotatorId annotator, EntityId entity);

  std::optional<AnnotationSession> ActiveSession(AnnotatorId annotator);

 private:
  struct Slot {
    std::mutex mu;
    std::optional<AnnotationSession> session;
  };

  Slot &SlotFor(AnnotatorId annotator);

  // The session for entity, creating one at the earliest stage when the
  // entity is the annotator's pending task but no session is held. Throws
  // kStaleTask if the entity is not the annotator's pending task. Called with
  // slot.mu held.
  Task Resume(Slot &slot, AnnotatorId annotator, EntityId entity);

  Store &store_;
  std::mutex slots_mu_;
  std::map<AnnotatorId, std::unique_ptr<Slot>> slots_;
};

}  // namespace shade

#endif  // SHADE_WORKFLOW_H_
