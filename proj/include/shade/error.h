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

#ifndef SHADE_ERROR_H_
#define SHADE_ERROR_H_

#include <stdexcept>
#include <string>

namespace shade {

// Every failure raised by the library carries one of these codes. The HTTP
// service maps them onto status codes, so the set is closed.
enum class ErrorCode {
  // wikitext
  kEmptyArticle,
  // ingest
  kMalformedXml,
  kMissingTitle,
  kHttpError,
  kTimeout,
  kTooManyRetries,
  // annostore
  kUnknownAnnotator,
  kUnknownEntity,
  kDuplicateAnnotator,
  kNotAssignee,
  kAlreadyCompleted,
  kAlreadySkipped,
  kEmptyLabel,
  // workflow
  kAlreadyManual,
  kLabelNotInList,
  kManualLocked,
  kStaleTask,
  // plumbing
  kIoError,
  kStorage,
  kInvalidArgument,
};

// Stable, wire-visible name of an error code (e.g. "ManualLocked").
const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shade

#endif  // SHADE_ERROR_H_
