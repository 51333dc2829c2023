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

// Lightweight MediaWiki markup handling for lead-section extraction. This is
// not a full wikitext parser: templates are never expanded, tables are not
// parsed. The functions only know enough to find where the article prose
// starts, which internal links it carries, and what it reads like once the
// markup is gone.
//
// All offsets are byte offsets into the UTF-8 input. The delimiters the
// scanner cares about are ASCII, so multi-byte characters pass through
// untouched.

#ifndef SHADE_WIKITEXT_H_
#define SHADE_WIKITEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shade::wikitext {

// An internal link. For [[A|B]] target is "A" and display is "B"; for [[A]]
// both are "A".
struct LinkTarget {
  std::string target;
  std::string display;

  bool operator==(const LinkTarget &other) const = default;
};

// Result of skipping the double-brace structures (infoboxes, DEFAULTSORT,
// navigation templates) at the top of an article.
struct EscapeResult {
  // Suffix of the input starting at the first "[[" that lies outside every
  // structure, or the whole input if there is none.
  std::string_view remainder;
  // Offset of the second '}' of the last "}}" seen before that link; 0 if
  // no structure was closed.
  size_t structures_end = 0;
};

// The isolated lead section of an article.
struct LeadExtract {
  std::string lead_wikitext;  // single line, markup intact
  std::string lead_plain;     // StripMarkup(lead_wikitext)
  std::vector<LinkTarget> links;
  size_t structures_end = 0;
};

// Scans for the first internal link outside of "{{...}}" structures.
//
// Brace pairs are counted without overlap: once "{{" or "}}" matches, both
// characters are consumed, so "}}}}" closes exactly two structures. The scan
// stops at the first "[[" seen while the number of opened structures equals
// the number of closed ones.
EscapeResult EscapeStructures(std::string_view text);

// Isolates the lead paragraph. Leading structures, comments and blank lines
// are skipped; the lead is the first line after them. Headings, table rows and
// lines that are nothing but markup (a lone [[File:...]], __NOTOC__) are
// passed over, so an article that opens with a section heading falls back to
// the first paragraph of that section. A trailing '\r' is trimmed.
//
// Throws Error(kEmptyArticle) when no prose line exists.
LeadExtract IsolateLead(std::string_view text);

// Internal links of a single line of wikitext, in order of appearance.
// File:, Image: and Category: links are dropped, "#fragment" suffixes are
// removed from targets, and duplicate targets keep their first occurrence.
// Unterminated "[[" spans are skipped.
std::vector<LinkTarget> ExtractInternalLinks(std::string_view lead_wikitext);

// Reduces wikitext to readable plain text: links become their display text,
// templates, references, comments and HTML tags are removed, bold/italic
// quotes are unwrapped, external links keep their label, and runs of spaces
// collapse to one. The result is a fixed point: StripMarkup(StripMarkup(x))
// == StripMarkup(x).
std::string StripMarkup(std::string_view wikitext);

// First link of the isolated lead, or nullopt when the lead has no links or
// the article is empty.
std::optional<LinkTarget> FirstLink(std::string_view text);

}  // namespace shade::wikitext

#endif  // SHADE_WIKITEXT_H_
