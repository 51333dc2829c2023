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

#include "shade/service.h"

#include <charconv>

#include "httplib.h"
#include "json.hpp"
#include "text_util.h"

namespace shade {

using nlohmann::json;

namespace {

HttpResponse Json(int status, const json &body) {
  return {status, body.dump()};
}

HttpResponse ErrorResponse(int status, std::string_view code,
                           std::string_view message) {
  return Json(status, {{"error", code}, {"message", message}});
}

HttpResponse ErrorResponse(const Error &error) {
  return ErrorResponse(HttpStatusFor(error.code()), ErrorCodeName(error.code()),
                       error.what());
}

json TaskView(const Task &task) {
  return {
      {"entity_id", task.entity.id},
      {"entity_name", task.entity.entity_name},
      {"first_paragraph", task.entity.first_paragraph},
      {"stage", SourceName(task.session.stage)},
      {"labels", Workflow::LabelsFor(task.entity, task.session.stage)},
  };
}

json OptionalNumber(std::optional<double> value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<json> ParseBody(std::string_view body) {
  json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return parsed;
}

std::vector<std::string_view> SplitPath(std::string_view path) {
  std::vector<std::string_view> parts;
  size_t query = path.find('?');
  if (query != std::string_view::npos) path = path.substr(0, query);
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    size_t slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

std::optional<EntityId> ParseId(std::string_view s) {
  EntityId id = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec != std::errc() || end != s.data() + s.size() || id <= 0) {
    return std::nullopt;
  }
  return id;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kUnknownAnnotator:
      return 403;
    case ErrorCode::kStaleTask:
    case ErrorCode::kUnknownEntity:
    case ErrorCode::kNotAssignee:
    case ErrorCode::kAlreadyCompleted:
    case ErrorCode::kAlreadySkipped:
      return 409;
    case ErrorCode::kAlreadyManual:
    case ErrorCode::kLabelNotInList:
    case ErrorCode::kManualLocked:
    case ErrorCode::kEmptyLabel:
      return 422;
    default:
      return 500;
  }
}

class Service::Transport {
 public:
  httplib::Server server;
};

Service::Service(Store &store, Workflow &workflow)
    : store_(store),
      workflow_(workflow),
      transport_(std::make_unique<Transport>()) {
  httplib::Server &server = transport_->server;
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    HttpResponse response = Dispatch(
        req.method, req.path, req.get_header_value("Authorization"), req.body);
    res.status = response.status;
    if (response.status != 204) {
      res.set_content(response.body, "application/json; charset=utf-8");
    }
  };
  // All routing happens in Dispatch; the transport only forwards.
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
  server.Patch(".*", handler);
}

Service::~Service() { Stop(); }

HttpResponse Service::Dispatch(std::string_view method, std::string_view path,
                               std::string_view authorization,
                               std::string_view body) {
  std::vector<std::string_view> parts = SplitPath(path);
  bool is_session = parts.size() == 2 && parts[0] == "api" &&
                    parts[1] == "session";
  bool is_task = parts.size() == 2 && parts[0] == "api" && parts[1] == "task";
  bool is_stats = parts.size() == 2 && parts[0] == "api" && parts[1] == "stats";
  bool is_action = parts.size() == 4 && parts[0] == "api" &&
                   parts[1] == "task" &&
                   (parts[3] == "reject" || parts[3] == "annotate" ||
                    parts[3] == "skip");
  if (!is_session && !is_task && !is_stats && !is_action) {
    return ErrorResponse(404, "NotFound", "no such route");
  }
  std::string_view expected = (is_task || is_stats) ? "GET" : "POST";
  if (method != expected) {
    return ErrorResponse(405, "MethodNotAllowed",
                         "use " + std::string(expected));
  }

  try {
    if (is_session) return CreateSession(body);

    std::string_view token = text::Trim(authorization);
    if (!text::StartsWithIgnoreCase(token, "bearer ")) {
      return ErrorResponse(401, "Unauthorized", "missing bearer token");
    }
    std::optional<Annotator> annotator =
        store_.FindAnnotatorByToken(text::Trim(token.substr(7)));
    if (!annotator) {
      return ErrorResponse(401, "Unauthorized", "invalid bearer token");
    }

    if (is_task) return GetTask(*annotator);
    if (is_stats) return GetStats();
    std::optional<EntityId> id = ParseId(parts[2]);
    if (!id) return ErrorResponse(404, "NotFound", "bad task id");
    return TaskAction(*annotator, *id, parts[3], body);
  } catch (const Error &e) {
    return ErrorResponse(e);
  } catch (const std::exception &e) {
    return ErrorResponse(500, "Internal", e.what());
  }
}

HttpResponse Service::CreateSession(std::string_view body) {
  std::optional<json> request = ParseBody(body);
  if (!request || !request->contains("name") ||
      !(*request)["name"].is_string()) {
    return ErrorResponse(400, "InvalidArgument", "body must be {\"name\": ...}");
  }
  std::optional<Annotator> annotator =
      store_.FindAnnotatorByName((*request)["name"].get<std::string>());
  if (!annotator) {
    return ErrorResponse(403, ErrorCodeName(ErrorCode::kUnknownAnnotator),
                         "unknown annotator name");
  }
  return Json(200, {{"token", annotator->token}});
}

HttpResponse Service::GetTask(const Annotator &annotator) {
  std::optional<Task> task = workflow_.OpenTask(annotator.id);
  if (!task) return {204, ""};
  return Json(200, TaskView(*task));
}

HttpResponse Service::TaskAction(const Annotator &annotator, EntityId entity,
                                 std::string_view action,
                                 std::string_view body) {
  if (action == "reject") {
    return Json(200, TaskView(workflow_.RejectList(annotator.id, entity)));
  }
  if (action == "skip") {
    workflow_.SkipTask(annotator.id, entity);
    return Json(200, {{"entity_id", entity}, {"skipped", true}});
  }

  std::optional<json> request = ParseBody(body);
  if (!request || !request->contains("label_text") ||
      !(*request)["label_text"].is_string()) {
    return ErrorResponse(400, "InvalidArgument",
                         "body must be {\"label_text\": ..., "
                         "\"selection_index\": ...}");
  }
  std::optional<size_t> index;
  if (auto it = request->find("selection_index");
      it != request->end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      return ErrorResponse(400, "InvalidArgument",
                           "selection_index must be an integer");
    }
    int64_t value = it->get<int64_t>();
    // Negative indices can never match a list entry.
    index = value < 0 ? SIZE_MAX : static_cast<size_t>(value);
  }
  Annotation annotation = workflow_.SubmitLabel(
      annotator.id, entity, (*request)["label_text"].get<std::string>(), index);
  return Json(200, {{"entity_id", annotation.entity_id},
                    {"label_text", annotation.label_text},
                    {"weight", annotation.weight},
                    {"source", SourceName(annotation.source)}});
}

HttpResponse Service::GetStats() {
  SourceBreakdown breakdown = store_.BreakdownBySource();
  return Json(200, {
                       {"LINKS", breakdown.links},
                       {"NOUN_PHRASES", breakdown.noun_phrases},
                       {"MANUAL", breakdown.manual},
                       {"total", breakdown.total},
                       {"list_fraction", OptionalNumber(breakdown.ListFraction())},
                       {"first_link_agreement",
                        OptionalNumber(store_.FirstLinkAgreement())},
                       {"skipped", store_.SkippedCount()},
                   });
}

bool Service::Listen(const std::string &host, int port) {
  return transport_->server.listen(host, port);
}

int Service::BindToAnyPort(const std::string &host) {
  return transport_->server.bind_to_any_port(host);
}

bool Service::ListenAfterBind() { return transport_->server.listen_after_bind(); }

void Service::WaitUntilReady() { transport_->server.wait_until_ready(); }

void Service::Stop() {
  if (transport_) transport_->server.stop();
}

}  // namespace shade
