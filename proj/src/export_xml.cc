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

#include <expat.h>

#include <cstring>
#include <memory>

#include "shade/error.h"
#include "shade/ingest.h"
#include "text_util.h"

namespace shade::ingest {

namespace {

struct ParserDeleter {
  void operator()(XML_Parser parser) const { XML_ParserFree(parser); }
};
using ParserPtr = std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter>;

ParserPtr NewParser() {
  ParserPtr parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error(ErrorCode::kStorage, "cannot allocate XML parser");
  return parser;
}

// Runs the parser over the whole input; throws kMalformedXml on failure.
void RunParser(XML_Parser parser, std::string_view xml,
               const std::optional<Error> &handler_error) {
  // Expat takes an int length; feed large inputs in chunks.
  constexpr size_t kChunk = 1 << 30;
  size_t offset = 0;
  do {
    size_t n = std::min(kChunk, xml.size() - offset);
    bool last = offset + n == xml.size();
    XML_Status status =
        XML_Parse(parser, xml.data() + offset, static_cast<int>(n), last);
    if (handler_error) throw *handler_error;
    if (status != XML_STATUS_OK) {
      throw Error(ErrorCode::kMalformedXml,
                  std::string("malformed export XML at byte ") +
                      std::to_string(XML_GetCurrentByteIndex(parser)) + ": " +
                      XML_ErrorString(XML_GetErrorCode(parser)));
    }
    offset += n;
  } while (offset < xml.size());
}

const char *FindAttribute(const XML_Char **attrs, const char *name) {
  for (int i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

struct ExportReader {
  XML_Parser parser = nullptr;
  std::vector<WikiArticle> articles;
  std::vector<std::string> path;  // open element names

  // Current page state.
  bool in_page = false;
  bool has_title = false;
  bool has_redirect = false;
  std::optional<std::string> redirect_attr;
  WikiArticle page;
  std::string *capture = nullptr;
  std::string revision_id;
  bool has_revision_id = false;

  std::optional<Error> error;

  bool ParentIs(const char *name) const {
    return path.size() >= 2 && path[path.size() - 2] == name;
  }

  static void OnStart(void *data, const XML_Char *name, const XML_Char **attrs) {
    auto *self = static_cast<ExportReader *>(data);
    self->path.emplace_back(name);
    std::string_view element = name;
    if (element == "page") {
      self->in_page = true;
      self->has_title = false;
      self->has_redirect = false;
      self->redirect_attr.reset();
      self->page = WikiArticle();
    } else if (!self->in_page) {
      return;
    } else if (element == "title" && self->ParentIs("page")) {
      self->has_title = true;
      self->page.title.clear();
      self->capture = &self->page.title;
    } else if (element == "redirect" && self->ParentIs("page")) {
      self->has_redirect = true;
      if (const char *title = FindAttribute(attrs, "title")) {
        self->redirect_attr = title;
      }
    } else if (element == "revision" && self->ParentIs("page")) {
      self->page.wikitext.clear();
      self->has_revision_id = false;
      self->revision_id.clear();
    } else if (element == "id" && self->ParentIs("revision")) {
      self->has_revision_id = true;
      self->revision_id.clear();
      self->capture = &self->revision_id;
    } else if (element == "text" && self->ParentIs("revision")) {
      self->page.wikitext.clear();
      self->capture = &self->page.wikitext;
    }
  }

  static void OnEnd(void *data, const XML_Char *name) {
    auto *self = static_cast<ExportReader *>(data);
    std::string_view element = name;
    self->capture = nullptr;
    if (element == "revision" && self->in_page && self->ParentIs("page")) {
      if (self->has_revision_id) {
        self->page.revision_id = self->revision_id;
      } else {
        self->page.revision_id.reset();
      }
    } else if (element == "page" && self->in_page) {
      self->FinishPage();
    }
    self->path.pop_back();
  }

  static void OnText(void *data, const XML_Char *s, int len) {
    auto *self = static_cast<ExportReader *>(data);
    if (self->capture) self->capture->append(s, len);
  }

  void FinishPage() {
    in_page = false;
    if (!has_title || text::Trim(page.title).empty()) {
      error = Error(ErrorCode::kMissingTitle,
                    "page without title ending at byte " +
                        std::to_string(XML_GetCurrentByteIndex(parser)));
      XML_StopParser(parser, XML_FALSE);
      return;
    }
    if (has_redirect) {
      if (redirect_attr) {
        page.redirect_target = *redirect_attr;
      } else {
        page.redirect_target =
            RedirectTargetFromBody(page.wikitext).value_or(std::string());
      }
    } else {
      page.redirect_target = RedirectTargetFromBody(page.wikitext);
    }
    articles.push_back(std::move(page));
    page = WikiArticle();
  }
};

void AppendEscaped(std::string &out, std::string_view value, bool attribute) {
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      // Parsers normalize raw CR and attribute whitespace; keep them exact.
      case '\r': out += "&#13;"; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      default: out += c;
    }
  }
}

}  // namespace

std::optional<std::string> RedirectTargetFromBody(std::string_view wikitext) {
  std::string_view body = text::TrimLeft(wikitext);
  if (!text::StartsWithIgnoreCase(body, "#redirect")) return std::nullopt;
  size_t open = body.find("[[");
  if (open == std::string_view::npos) return std::nullopt;
  size_t close = body.find("]]", open + 2);
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view target = body.substr(open + 2, close - open - 2);
  target = target.substr(0, target.find('|'));
  target = target.substr(0, target.find('#'));
  return std::string(text::Trim(target));
}

std::vector<WikiArticle> ParseExportXml(std::string_view xml) {
  ParserPtr parser = NewParser();
  ExportReader reader;
  reader.parser = parser.get();
  XML_SetUserData(parser.get(), &reader);
  XML_SetElementHandler(parser.get(), &ExportReader::OnStart,
                        &ExportReader::OnEnd);
  XML_SetCharacterDataHandler(parser.get(), &ExportReader::OnText);
  RunParser(parser.get(), xml, reader.error);
  return std::move(reader.articles);
}

std::string SerializeExportXml(const std::vector<WikiArticle> &articles) {
  std::string out =
      "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.11/\" "
      "version=\"0.11\" xml:lang=\"en\">\n";
  for (const WikiArticle &article : articles) {
    out += "  <page>\n    <title>";
    AppendEscaped(out, article.title, false);
    out += "</title>\n    <ns>0</ns>\n";
    if (article.redirect_target) {
      out += "    <redirect title=\"";
      AppendEscaped(out, *article.redirect_target, true);
      out += "\" />\n";
    }
    out += "    <revision>\n";
    if (article.revision_id) {
      out += "      <id>";
      AppendEscaped(out, *article.revision_id, false);
      out += "</id>\n";
    }
    out += "      <text xml:space=\"preserve\">";
    AppendEscaped(out, article.wikitext, false);
    out += "</text>\n    </revision>\n  </page>\n";
  }
  out += "</mediawiki>\n";
  return out;
}

namespace {

// Byte ranges of the root start tag and of each top-level <page> element.
struct PageSlicer {
  XML_Parser parser = nullptr;
  int depth = 0;
  std::string root_name;
  std::string root_open;
  size_t page_start = 0;
  size_t page_open_len = 0;
  std::string_view source;
  std::vector<std::string_view> pages;

  static void OnStart(void *data, const XML_Char *name, const XML_Char **) {
    auto *self = static_cast<PageSlicer *>(data);
    size_t index = XML_GetCurrentByteIndex(self->parser);
    size_t count = XML_GetCurrentByteCount(self->parser);
    if (self->depth == 0) {
      self->root_name = name;
      self->root_open = std::string(self->source.substr(index, count));
      if (self->root_open.ends_with("/>")) {
        self->root_open.erase(self->root_open.size() - 2);
        self->root_open += '>';
      }
    } else if (self->depth == 1 && std::strcmp(name, "page") == 0) {
      self->page_start = index;
      self->page_open_len = count;
    }
    ++self->depth;
  }

  static void OnEnd(void *data, const XML_Char *name) {
    auto *self = static_cast<PageSlicer *>(data);
    --self->depth;
    if (self->depth == 1 && std::strcmp(name, "page") == 0) {
      size_t index = XML_GetCurrentByteIndex(self->parser);
      size_t count = XML_GetCurrentByteCount(self->parser);
      // Empty elements report no end tag of their own.
      size_t end = count == 0 ? self->page_start + self->page_open_len
                              : index + count;
      self->pages.push_back(
          self->source.substr(self->page_start, end - self->page_start));
    }
  }
};

}  // namespace

std::string MergeExportDocuments(const std::vector<std::string> &documents) {
  std::string root_open;
  std::string root_name;
  std::string body;
  for (const std::string &document : documents) {
    ParserPtr parser = NewParser();
    PageSlicer slicer;
    slicer.parser = parser.get();
    slicer.source = document;
    XML_SetUserData(parser.get(), &slicer);
    XML_SetElementHandler(parser.get(), &PageSlicer::OnStart,
                          &PageSlicer::OnEnd);
    RunParser(parser.get(), document, std::nullopt);
    if (root_open.empty()) {
      root_open = slicer.root_open;
      root_name = slicer.root_name;
    }
    for (std::string_view page : slicer.pages) {
      body += "  ";
      body += page;
      body += '\n';
    }
  }
  if (root_open.empty()) {
    root_open = "<mediawiki>";
    root_name = "mediawiki";
  }
  return root_open + "\n" + body + "</" + root_name + ">\n";
}

}  // namespace shade::ingest
