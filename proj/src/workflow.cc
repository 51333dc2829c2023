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

#include "shade/workflow.h"

#include "shade/error.h"

namespace shade {

Stage Workflow::EarliestStage(const EntityPage &entity) {
  if (!entity.links_list.empty()) return Stage::kLinks;
  if (!entity.noun_list.empty()) return Stage::kNounPhrases;
  return Stage::kManual;
}

const std::vector<std::string> &Workflow::LabelsFor(const EntityPage &entity,
                                                    Stage stage) {
  static const std::vector<std::string> kNone;
  switch (stage) {
    case Stage::kLinks: return entity.links_list;
    case Stage::kNounPhrases: return entity.noun_list;
    case Stage::kManual: return kNone;
  }
  return kNone;
}

Workflow::Slot &Workflow::SlotFor(AnnotatorId annotator) {
  std::lock_guard lock(slots_mu_);
  std::unique_ptr<Slot> &slot = slots_[annotator];
  if (!slot) slot = std::make_unique<Slot>();
  return *slot;
}

std::optional<Task> Workflow::OpenTask(AnnotatorId annotator) {
  Slot &slot = SlotFor(annotator);
  std::lock_guard lock(slot.mu);
  std::optional<EntityPage> entity = store_.CurrentTask(annotator);
  if (!entity) {
    slot.session.reset();
    return std::nullopt;
  }
  slot.session =
      AnnotationSession{annotator, entity->id, EarliestStage(*entity)};
  return Task{std::move(*entity), *slot.session};
}

Task Workflow::Resume(Slot &slot, AnnotatorId annotator, EntityId entity) {
  if (!store_.FindAnnotator(annotator)) {
    throw Error(ErrorCode::kUnknownAnnotator,
                "unknown annotator " + std::to_string(annotator));
  }
  std::optional<EntityPage> page = store_.GetEntity(entity);
  if (page && page->assignee == annotator) {
    if (page->completed) {
      slot.session.reset();
      throw Error(ErrorCode::kAlreadyCompleted,
                  "entity " + std::to_string(entity) + " is already completed");
    }
    if (page->skipped) {
      slot.session.reset();
      throw Error(ErrorCode::kAlreadySkipped,
                  "entity " + std::to_string(entity) + " is already skipped");
    }
    if (!slot.session || slot.session->entity_id != entity) {
      slot.session = AnnotationSession{annotator, entity, EarliestStage(*page)};
    }
    return Task{std::move(*page), *slot.session};
  }
  throw Error(ErrorCode::kStaleTask, "entity " + std::to_string(entity) +
                                         " is not the current task");
}

Task Workflow::RejectList(AnnotatorId annotator, EntityId entity) {
  Slot &slot = SlotFor(annotator);
  std::lock_guard lock(slot.mu);
  Task task = Resume(slot, annotator, entity);
  switch (task.session.stage) {
    case Stage::kLinks:
      task.session.stage = task.entity.noun_list.empty() ? Stage::kManual
                                                         : Stage::kNounPhrases;
      break;
    case Stage::kNounPhrases:
      task.session.stage = Stage::kManual;
      break;
    case Stage::kManual:
      throw Error(ErrorCode::kAlreadyManual,
                  "manual input is already unlocked; no list left to reject");
  }
  slot.session = task.session;
  return task;
}

Annotation Workflow::SubmitLabel(AnnotatorId annotator, EntityId entity,
                                 std::string_view label_text,
                                 std::optional<size_t> selection_index) {
  Slot &slot = SlotFor(annotator);
  std::lock_guard lock(slot.mu);
  Task task = Resume(slot, annotator, entity);
  Stage stage = task.session.stage;
  if (stage != Stage::kManual) {
    if (!selection_index) {
      throw Error(ErrorCode::kManualLocked,
                  "free-text labels are locked until both lists are rejected");
    }
    const std::vector<std::string> &labels = LabelsFor(task.entity, stage);
    if (*selection_index >= labels.size() ||
        labels[*selection_index] != label_text) {
      throw Error(ErrorCode::kLabelNotInList,
                  "label does not match the selected list entry");
    }
  }
  Annotation annotation =
      store_.SaveAnnotation(entity, annotator, label_text, stage);
  slot.session.reset();
  return annotation;
}

void Workflow::SkipTask(AnnotatorId annotator, EntityId entity) {
  Slot &slot = SlotFor(annotator);
  std::lock_guard lock(slot.mu);
  Resume(slot, annotator, entity);
  store_.MarkSkipped(entity, annotator);
  slot.session.reset();
}

std::optional<AnnotationSession> Workflow::ActiveSession(AnnotatorId annotator) {
  Slot &slot = SlotFor(annotator);
  std::lock_guard lock(slot.mu);
  return slot.session;
}

}  // namespace shade
