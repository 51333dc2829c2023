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

// HTTP/JSON front end of the annotation workflow.
//
//   POST /api/session                {name}                -> {token}
//   GET  /api/task                                         -> TaskView | 204
//   POST /api/task/{id}/reject                             -> TaskView
//   POST /api/task/{id}/annotate     {label_text, selection_index?}
//                                                          -> {weight, source}
//   POST /api/task/{id}/skip                               -> {entity_id, skipped}
//   GET  /api/stats                                        -> breakdown
//
// Everything except /api/session needs "Authorization: Bearer <token>".
// TaskView is {entity_id, entity_name, first_paragraph, stage, labels}.
// Errors are {error, message} with error one of the ErrorCodeName() values:
//   400 malformed request, 401 missing or bad token, 403 unknown name,
//   404 unknown route, 409 stale or finished task, 422 workflow rule broken.

#ifndef SHADE_SERVICE_H_
#define SHADE_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "shade/annostore.h"
#include "shade/error.h"
#include "shade/workflow.h"

namespace shade {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON, empty for 204
};

// HTTP status for a library error.
int HttpStatusFor(ErrorCode code);

class Service {
 public:
  Service(Store &store, Workflow &workflow);
  ~Service();

  // Transport-independent request handling. authorization is the raw value
  // of the Authorization header (may be empty).
  HttpResponse Dispatch(std::string_view method, std::string_view path,
                        std::string_view authorization, std::string_view body);

  // Serves until Stop(). Returns false if the address cannot be bound.
  bool Listen(const std::string &host, int port);

  // Binds an ephemeral port and returns it (or -1); follow with
  // ListenAfterBind() on a serving thread.
  int BindToAnyPort(const std::string &host);
  bool ListenAfterBind();

  void WaitUntilReady();
  void Stop();

 private:
  class Transport;

  HttpResponse CreateSession(std::string_view body);
  HttpResponse GetTask(const Annotator &annotator);
  HttpResponse TaskAction(const Annotator &annotator, EntityId entity,
                          std::string_view action, std::string_view body);
  HttpResponse GetStats();

  Store &store_;
  Workflow &workflow_;
  std::unique_ptr<Transport> transport_;
};

}  // namespace shade

#endif  // SHADE_SERVICE_H_
