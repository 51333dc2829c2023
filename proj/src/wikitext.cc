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

#include "shade/wikitext.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "shade/error.h"
#include "text_util.h"

namespace shade::wikitext {

namespace {

constexpr size_t npos = std::string_view::npos;

bool PairAt(std::string_view text, size_t i, char c) {
  return i + 1 < text.size() && text[i] == c && text[i + 1] == c;
}

// Given text[pos..] starting with "{{", returns the offset just past the
// matching "}}", or npos if the structure never closes.
size_t MatchBraces(std::string_view text, size_t pos) {
  int depth = 0;
  size_t i = pos;
  while (i + 1 < text.size()) {
    if (PairAt(text, i, '{')) {
      ++depth;
      i += 2;
    } else if (PairAt(text, i, '}')) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return npos;
}

// Same for "[[ ... ]]", allowing nested links (file captions).
size_t MatchLink(std::string_view text, size_t pos) {
  int depth = 0;
  size_t i = pos;
  while (i + 1 < text.size()) {
    if (PairAt(text, i, '[')) {
      ++depth;
      i += 2;
    } else if (PairAt(text, i, ']')) {
      --depth;
      i += 2;
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return npos;
}

enum class LinkKind { kArticle, kNamespaced, kInvalid };

struct ParsedLink {
  LinkKind kind = LinkKind::kInvalid;
  bool visible = true;  // false for [[File:..]] / [[Category:..]] without ':'
  LinkTarget link;
};

bool HasNamespacePrefix(std::string_view target) {
  static constexpr std::string_view kPrefixes[] = {"file:", "image:",
                                                   "category:"};
  for (std::string_view prefix : kPrefixes) {
    if (text::StartsWithIgnoreCase(target, prefix)) return true;
  }
  return false;
}

ParsedLink ParseLink(std::string_view inner) {
  ParsedLink parsed;
  size_t pipe = inner.find('|');
  std::string_view raw_target = text::Trim(inner.substr(0, pipe));
  bool leading_colon = !raw_target.empty() && raw_target.front() == ':';
  if (leading_colon) raw_target = text::Trim(raw_target.substr(1));

  std::string_view target = raw_target;
  size_t hash = target.find('#');
  if (hash != npos) target = text::Trim(target.substr(0, hash));

  if (raw_target.empty() ||
      raw_target.find_first_of("[]{}<>|\n") != npos) {
    return parsed;
  }

  std::string display;
  if (pipe != npos) {
    display = std::string(text::Trim(inner.substr(pipe + 1)));
    if (display.empty()) display = std::string(target);
  } else {
    display = std::string(raw_target);
  }

  parsed.link.target = std::string(target);
  parsed.link.display = std::move(display);
  if (HasNamespacePrefix(target)) {
    parsed.kind = LinkKind::kNamespaced;
    parsed.visible = leading_colon;
  } else if (target.empty()) {
    // Same-page section link such as [[#History]].
    parsed.kind = LinkKind::kNamespaced;
  } else {
    parsed.kind = LinkKind::kArticle;
  }
  return parsed;
}

bool IsUrlStart(std::string_view text, size_t pos) {
  static constexpr std::string_view kSchemes[] = {
      "http://", "https://", "ftp://", "//", "mailto:"};
  std::string_view rest = text.substr(pos);
  for (std::string_view scheme : kSchemes) {
    if (text::StartsWithIgnoreCase(rest, scheme)) return true;
  }
  return false;
}

// Length of an HTML-ish tag "<name ...>" or "</name>" at pos, or 0.
size_t HtmlTagLength(std::string_view text, size_t pos) {
  size_t i = pos + 1;
  if (i < text.size() && text[i] == '/') ++i;
  if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) {
    return 0;
  }
  while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  while (i < text.size() && text[i] != '>' && text[i] != '<' &&
         text[i] != '\n') {
    ++i;
  }
  if (i >= text.size() || text[i] != '>') return 0;
  return i + 1 - pos;
}

bool IsRefOpen(std::string_view text, size_t pos) {
  if (!text::StartsWithIgnoreCase(text.substr(pos), "<ref")) return false;
  if (pos + 4 >= text.size()) return true;
  char next = text[pos + 4];
  return next == '>' || next == '/' || std::isspace(static_cast<unsigned char>(next));
}

// Skips a <ref ...>...</ref> or <ref .../> at pos; returns the offset after.
size_t SkipRef(std::string_view text, size_t pos) {
  size_t close = text.find('>', pos);
  if (close == npos) return text.size();
  if (close > pos && text[close - 1] == '/') return close + 1;
  size_t end = text::FindIgnoreCase(text, "</ref", close + 1);
  if (end == npos) return text.size();
  size_t gt = text.find('>', end);
  return gt == npos ? text.size() : gt + 1;
}

// Magic words like __NOTOC__.
size_t MagicWordLength(std::string_view text, size_t pos) {
  if (!PairAt(text, pos, '_')) return 0;
  size_t i = pos + 2;
  while (i < text.size() && std::isupper(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  if (i == pos + 2 || !PairAt(text, i, '_')) return 0;
  return i + 2 - pos;
}

struct Entity {
  std::string_view name;
  std::string_view value;
};
constexpr Entity kEntities[] = {
    {"&nbsp;", " "},   {"&ndash;", "–"}, {"&mdash;", "—"},
    {"&amp;", "&"},    {"&quot;", "\""},      {"&#39;", "'"},
};

// One rewriting pass. Every rule that fires shortens the text, so iterating
// to a fixed point terminates.
std::string StripOnce(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (c == '<') {
      if (in.substr(i).starts_with("<!--")) {
        size_t end = in.find("-->", i + 4);
        i = end == npos ? in.size() : end + 3;
        continue;
      }
      if (IsRefOpen(in, i)) {
        i = SkipRef(in, i);
        continue;
      }
      if (size_t len = HtmlTagLength(in, i); len > 0) {
        out += ' ';
        i += len;
        continue;
      }
    } else if (c == '{' && PairAt(in, i, '{')) {
      size_t end = MatchBraces(in, i);
      i = end == npos ? in.size() : end;
      continue;
    } else if (c == '}' && PairAt(in, i, '}')) {
      i += 2;
      continue;
    } else if (c == '[' && PairAt(in, i, '[')) {
      size_t end = MatchLink(in, i);
      if (end == npos) {
        i += 2;
        continue;
      }
      ParsedLink parsed = ParseLink(in.substr(i + 2, end - i - 4));
      if (parsed.kind == LinkKind::kInvalid) {
        // Drop one bracket so "[[[A]]" still renders the inner link.
        i += 1;
        continue;
      }
      if (parsed.visible) out += parsed.link.display;
      i = end;
      continue;
    } else if (c == ']' && PairAt(in, i, ']')) {
      i += 2;
      continue;
    } else if (c == '[' && IsUrlStart(in, i + 1)) {
      size_t close = in.find_first_of("]\n", i + 1);
      if (close != npos && in[close] == ']') {
        std::string_view inner = in.substr(i + 1, close - i - 1);
        size_t space = inner.find(' ');
        if (space != npos) out += text::Trim(inner.substr(space + 1));
        i = close + 1;
        continue;
      }
    } else if (c == '\'' && PairAt(in, i, '\'')) {
      while (i < in.size() && in[i] == '\'') ++i;
      continue;
    } else if (c == '_') {
      if (size_t len = MagicWordLength(in, i); len > 0) {
        i += len;
        continue;
      }
    } else if (c == '&') {
      bool replaced = false;
      for (const Entity &entity : kEntities) {
        if (in.substr(i).starts_with(entity.name)) {
          out += entity.value;
          i += entity.name.size();
          replaced = true;
          break;
        }
      }
      if (replaced) continue;
    } else if (c == ' ' || c == '\t') {
      size_t j = i;
      while (j < in.size() && (in[j] == ' ' || in[j] == '\t')) ++j;
      if (out.empty() || j == in.size()) {
        // Leading and trailing blanks are dropped.
      } else {
        out += ' ';
      }
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

bool IsBlank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Skips blank space, balanced "{{...}}" structures and HTML comments starting
// at pos. Updates structures_end for every structure skipped.
size_t SkipLeadingStructures(std::string_view text, size_t pos,
                             size_t *structures_end) {
  while (pos < text.size()) {
    if (IsBlank(text[pos])) {
      ++pos;
    } else if (PairAt(text, pos, '{')) {
      size_t end = MatchBraces(text, pos);
      if (end == npos) break;
      *structures_end = end - 1;
      pos = end;
    } else if (text.substr(pos).starts_with("<!--")) {
      size_t end = text.find("-->", pos + 4);
      pos = end == npos ? text.size() : end + 3;
    } else {
      break;
    }
  }
  return pos;
}

bool IsHeading(std::string_view line) {
  return line.starts_with("==") ||
         (line.size() >= 2 && line.front() == '=' && line.back() == '=');
}

bool IsTableLine(std::string_view line) {
  return line.starts_with("{|") || line.starts_with("|") ||
         line.starts_with("!");
}

}  // namespace

EscapeResult EscapeStructures(std::string_view text) {
  size_t opening = 0;
  size_t closing = 0;
  size_t last_close = 0;
  size_t i = 0;
  while (i + 1 < text.size()) {
    if (PairAt(text, i, '{')) {
      ++opening;
      i += 2;
    } else if (PairAt(text, i, '}')) {
      ++closing;
      last_close = i + 1;
      i += 2;
    } else if (PairAt(text, i, '[') && opening == closing) {
      return {text.substr(i), last_close};
    } else {
      ++i;
    }
  }
  return {text, last_close};
}

std::vector<LinkTarget> ExtractInternalLinks(std::string_view lead_wikitext) {
  std::vector<LinkTarget> links;
  std::unordered_set<std::string> seen;
  size_t i = 0;
  while (i + 1 < lead_wikitext.size()) {
    if (!PairAt(lead_wikitext, i, '[')) {
      ++i;
      continue;
    }
    size_t end = MatchLink(lead_wikitext, i);
    if (end == npos) {
      i += 2;
      continue;
    }
    ParsedLink parsed = ParseLink(lead_wikitext.substr(i + 2, end - i - 4));
    if (parsed.kind == LinkKind::kInvalid) {
      ++i;
      continue;
    }
    if (parsed.kind == LinkKind::kArticle &&
        seen.insert(parsed.link.target).second) {
      links.push_back(std::move(parsed.link));
    }
    i = end;
  }
  return links;
}

std::string StripMarkup(std::string_view wikitext) {
  std::string current = StripOnce(wikitext);
  for (;;) {
    std::string next = StripOnce(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

LeadExtract IsolateLead(std::string_view text) {
  LeadExtract lead;
  size_t pos = SkipLeadingStructures(text, 0, &lead.structures_end);
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    size_t next = eol == npos ? text.size() : eol + 1;
    std::string_view line = text::TrimRight(
        text.substr(pos, (eol == npos ? text.size() : eol) - pos));
    if (IsHeading(line) || IsTableLine(line) || StripMarkup(line).empty()) {
      pos = SkipLeadingStructures(text, next, &lead.structures_end);
      continue;
    }
    lead.lead_wikitext = std::string(line);
    lead.links = ExtractInternalLinks(line);
    lead.lead_plain = StripMarkup(line);
    return lead;
  }
  throw Error(ErrorCode::kEmptyArticle, "article has no lead paragraph");
}

std::optional<LinkTarget> FirstLink(std::string_view text) {
  try {
    LeadExtract lead = IsolateLead(text);
    if (lead.links.empty()) return std::nullopt;
    return lead.links.front();
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kEmptyArticle) throw;
    return std::nullopt;
  }
}

}  // namespace shade::wikitext
