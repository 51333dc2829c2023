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

#include "shade/error.h"

namespace shade {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyArticle: return "EmptyArticle";
    case ErrorCode::kMalformedXml: return "MalformedXml";
    case ErrorCode::kMissingTitle: return "MissingTitle";
    case ErrorCode::kHttpError: return "HttpError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTooManyRetries: return "TooManyRetries";
    case ErrorCode::kUnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kDuplicateAnnotator: return "DuplicateAnnotator";
    case ErrorCode::kNotAssignee: return "NotAssignee";
    case ErrorCode::kAlreadyCompleted: return "AlreadyCompleted";
    case ErrorCode::kAlreadySkipped: return "AlreadySkipped";
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kAlreadyManual: return "AlreadyManual";
    case ErrorCode::kLabelNotInList: return "LabelNotInList";
    case ErrorCode::kManualLocked: return "ManualLocked";
    case ErrorCode::kStaleTask: return "StaleTask";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kStorage: return "Storage";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace shade
