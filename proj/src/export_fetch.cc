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

#include <thread>

#include "httplib.h"
#include "shade/error.h"
#include "shade/ingest.h"

namespace shade::ingest {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /w/api.php
};

Endpoint SplitEndpoint(std::string_view url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must be an absolute URL: " + std::string(url));
  }
  size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) {
    return {std::string(url), "/"};
  }
  return {std::string(url.substr(0, path_start)),
          std::string(url.substr(path_start))};
}

bool Retryable(int status) { return status == 429 || status >= 500; }

std::string FetchBatch(httplib::Client &client, const std::string &path,
                       const std::vector<std::string> &titles,
                       const FetchOptions &options) {
  std::string joined;
  for (const std::string &title : titles) {
    if (!joined.empty()) joined += '|';
    joined += title;
  }
  httplib::Params params{{"action", "query"},
                         {"export", "1"},
                         {"exportnowrap", "1"},
                         {"titles", joined}};

  std::chrono::milliseconds backoff = options.initial_backoff;
  std::string last_error;
  int attempts = std::max(options.max_attempts, 1);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result result = client.Post(path, params);
    if (!result) {
      httplib::Error error = result.error();
      bool timeout = error == httplib::Error::ConnectionTimeout ||
                     error == httplib::Error::Read;
      last_error = (timeout ? "timeout: " : "transport error: ") +
                   httplib::to_string(error);
      if (attempts == 1) {
        throw Error(timeout ? ErrorCode::kTimeout : ErrorCode::kHttpError,
                    last_error);
      }
      continue;
    }
    if (result->status == 200) return result->body;
    last_error = "HTTP status " + std::to_string(result->status);
    if (!Retryable(result->status) || attempts == 1) {
      throw Error(ErrorCode::kHttpError, last_error);
    }
  }
  throw Error(ErrorCode::kTooManyRetries,
              "export request failed after " + std::to_string(attempts) +
                  " attempts: " + last_error);
}

}  // namespace

std::string FetchExport(const std::vector<std::string> &titles,
                        std::string_view endpoint,
                        const FetchOptions &options) {
  Endpoint target = SplitEndpoint(endpoint);
  httplib::Client client(target.origin);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);
  client.set_follow_location(true);

  size_t batch_size = std::max<size_t>(options.batch_size, 1);
  std::vector<std::string> documents;
  for (size_t begin = 0; begin < titles.size(); begin += batch_size) {
    if (begin > 0) std::this_thread::sleep_for(options.batch_delay);
    size_t end = std::min(begin + batch_size, titles.size());
    std::vector<std::string> batch(titles.begin() + begin, titles.begin() + end);
    documents.push_back(FetchBatch(client, target.path, batch, options));
  }
  return MergeExportDocuments(documents);
}

}  // namespace shade::ingest
