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

// MediaWiki export ingestion: XML parsing, batched fetching from an export
// endpoint, and turning articles into annotation-ready entity pages.

#ifndef SHADE_INGEST_H_
#define SHADE_INGEST_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shade/annostore.h"

namespace shade::ingest {

struct WikiArticle {
  std::string title;
  std::optional<std::string> redirect_target;
  std::string wikitext;
  std::optional<std::string> revision_id;

  bool operator==(const WikiArticle &other) const = default;
};

// Parses a MediaWiki export document (<mediawiki><page><title/><redirect/>
// <revision><id/><text/></revision></page>...</mediawiki>). For pages with
// several revisions the last one wins. Throws kMalformedXml (with the byte
// offset in the message) and kMissingTitle.
std::vector<WikiArticle> ParseExportXml(std::string_view xml);

// Inverse of ParseExportXml for the fields it reads.
std::string SerializeExportXml(const std::vector<WikiArticle> &articles);

// If wikitext is a "#REDIRECT [[Target]]" page, returns Target.
std::optional<std::string> RedirectTargetFromBody(std::string_view wikitext);

struct FetchOptions {
  size_t batch_size = 50;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};  // doubles per retry
  std::chrono::milliseconds batch_delay{1000};     // between batches
  std::chrono::seconds timeout{30};
};

// Fetches the export XML of the given titles from a MediaWiki api.php
// endpoint (action=query&export&exportnowrap), one POST per batch, batches
// strictly sequential. The pages of all batches are merged into a single
// document. Throws kHttpError for non-retryable statuses and kTooManyRetries
// once max_attempts consecutive attempts failed on a batch.
std::string FetchExport(const std::vector<std::string> &titles,
                        std::string_view endpoint,
                        const FetchOptions &options = {});

// Merges several export documents into one. The root element of the first
// document is kept; the page elements of all documents are copied verbatim.
std::string MergeExportDocuments(const std::vector<std::string> &documents);

enum class SkipReason { kRedirect, kEmpty };

struct Skipped {
  SkipReason reason;
};

// Builds an unsaved entity page (id 0, unassigned, pending) from an article:
// the isolated lead in plain text, the lead's link targets and the noun
// phrases of the plain lead. Redirects and articles without a lead are
// skipped.
std::variant<EntityPage, Skipped> BuildEntityPage(const WikiArticle &article);

}  // namespace shade::ingest

#endif  // SHADE_INGEST_H_
