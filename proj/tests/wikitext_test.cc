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

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "shade/error.h"
#include "structure_oracle.h"

namespace shade::wikitext {
namespace {

std::string ReadFixture(const std::string &name) {
  std::ifstream in(std::string(SHADE_FIXTURE_DIR) + "/" + name,
                   std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> Targets(const std::vector<LinkTarget> &links) {
  std::vector<std::string> out;
  for (const auto &link : links) out.push_back(link.target);
  return out;
}

const std::vector<std::string> kTiamatLinks = {
    "lawful evil",        "dragon",           "evil dragons",
    "greater gods",       "Bane",             "Asmodeus",
    "Faerûnian pantheon", "Draconic pantheon", "Untheric pantheon"};

TEST_CASE("EscapeStructures examples") {
  EscapeResult r = EscapeStructures("{{Box|a=1}}[[Dragon]] roars");
  CHECK(r.remainder == "[[Dragon]] roars");
  CHECK(r.structures_end == 10);

  r = EscapeStructures("[[Dragon]] roars");
  CHECK(r.remainder == "[[Dragon]] roars");
  CHECK(r.structures_end == 0);

  // Adjacent closers count as two pairs, not three.
  r = EscapeStructures("{{A{{B}}}}[[X]]");
  CHECK(r.remainder == "[[X]]");
  CHECK(r.structures_end == 9);
}

TEST_CASE("EscapeStructures degenerate input returns the whole string") {
  CHECK(EscapeStructures("").remainder == "");
  CHECK(EscapeStructures("").structures_end == 0);
  CHECK(EscapeStructures("no links").remainder == "no links");
  EscapeResult r = EscapeStructures("{{Box|[[Inside]]}} tail");
  CHECK(r.remainder == "{{Box|[[Inside]]}} tail");
  CHECK(r.structures_end == 17);
  // Never closed: a link inside is not outside every structure.
  CHECK(EscapeStructures("{{open [[X]]").remainder == "{{open [[X]]");
}

TEST_CASE("EscapeStructures agrees with the bracket-matching oracle") {
  testing::DocumentGenerator generator(20260415);
  for (int n = 0; n < 2000; ++n) {
    testing::GeneratedDocument doc = generator.Next();
    EscapeResult r = EscapeStructures(doc.text);
    testing::OracleResult oracle = testing::BracketMatchingOracle(doc.text);
    INFO(doc.text);
    REQUIRE(oracle.remainder_start == doc.link_start);
    REQUIRE(oracle.structures_end == doc.structures_end);
    CHECK(r.remainder == std::string_view(doc.text).substr(doc.link_start));
    CHECK(r.structures_end == doc.structures_end);
    CHECK(r.remainder.size() <= doc.text.size());
    CHECK(r.structures_end < doc.text.size());
  }
}

TEST_CASE("ExtractInternalLinks") {
  auto links = ExtractInternalLinks(
      "Languages, such as [[Druidic language|Druidic]].");
  REQUIRE(links.size() == 1);
  CHECK(links[0].target == "Druidic language");
  CHECK(links[0].display == "Druidic");

  CHECK(ExtractInternalLinks("plain text only").empty());

  links = ExtractInternalLinks("[[Dragon]]");
  REQUIRE(links.size() == 1);
  CHECK(links[0] == LinkTarget{"Dragon", "Dragon"});
}

TEST_CASE("ExtractInternalLinks filters, strips fragments and de-duplicates") {
  auto links = ExtractInternalLinks(
      "[[File:X.png|thumb|a [[Nested]] caption]] [[Category:Deities]] "
      "[[Image:Y.jpg]] [[Dragon#Chromatic|dragons]] [[Dragon]] [[#Local]] "
      "[[ Bane ]] [[Unterminated and [[Asmodeus]]");
  CHECK(Targets(links) == std::vector<std::string>{"Dragon", "Bane", "Asmodeus"});
  CHECK(links[0].display == "dragons");
  for (const auto &link : links) {
    CHECK(link.target.find_first_of("|[]") == std::string::npos);
  }
}

TEST_CASE("Tiamat lead links in order") {
  std::string wiki = ReadFixture("tiamat.wiki");
  LeadExtract lead = IsolateLead(wiki);
  CHECK(Targets(lead.links) == kTiamatLinks);
  std::optional<LinkTarget> first = FirstLink(wiki);
  REQUIRE(first);
  CHECK(first->target == "lawful evil");
  CHECK(lead.lead_plain ==
        "Tiamat was the lawful evil dragon goddess of greed, queen of evil "
        "dragons and, for a time, reluctant servant of the greater gods Bane "
        "and later Asmodeus. Before entering the Faerûnian pantheon, she was a "
        "member of the Draconic pantheon, and for some time she was also a "
        "member of the Untheric pantheon.");
  // The infobox ends with "}}" on the line before the lead.
  CHECK(wiki.substr(lead.structures_end - 1, 3) == "}}\n");
}

TEST_CASE("IsolateLead examples") {
  LeadExtract lead = IsolateLead(
      "{{Infobox}}\nTiamat was the [[lawful evil]] [[dragon]] goddess…\n"
      "Second para");
  CHECK(lead.lead_wikitext ==
        "Tiamat was the [[lawful evil]] [[dragon]] goddess…");
  CHECK(lead.structures_end == 10);

  lead = IsolateLead("No structures, no links.");
  CHECK(lead.lead_wikitext == "No structures, no links.");
  CHECK(lead.links.empty());
  CHECK(lead.structures_end == 0);

  lead = IsolateLead("{{Box}}\n==History==\nBorn in [[Avernus]].");
  CHECK(lead.lead_wikitext == "Born in [[Avernus]].");
  CHECK(Targets(lead.links) == std::vector<std::string>{"Avernus"});
}

TEST_CASE("IsolateLead trims carriage returns and skips markup-only lines") {
  LeadExtract lead = IsolateLead(
      "{{Box}}\r\n<!-- note -->\n[[File:A.png|thumb]]\n__NOTOC__\n"
      "A [[goblin]] camp.\r\nMore.");
  CHECK(lead.lead_wikitext == "A [[goblin]] camp.");
  CHECK(lead.lead_plain == "A goblin camp.");
}

TEST_CASE("IsolateLead on a linkless lead keeps the structure end before it") {
  LeadExtract lead =
      IsolateLead("{{Box}}\nA plain lead {{small|aside}} here.\n{{Nav}}");
  CHECK(lead.lead_wikitext == "A plain lead {{small|aside}} here.");
  CHECK(lead.lead_plain == "A plain lead here.");
  CHECK(lead.structures_end == 6);
}

TEST_CASE("IsolateLead rejects empty articles") {
  for (std::string_view text :
       {"", "   \n\n", "{{Infobox|a=[[B]]}}", "{{A}}\n==H==\n\n==I==\n"}) {
    INFO(text);
    try {
      IsolateLead(text);
      FAIL("expected EmptyArticle");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kEmptyArticle);
    }
  }
}

TEST_CASE("StripMarkup examples") {
  CHECK(StripMarkup("Languages, such as [[Druidic language|Druidic]].") ==
        "Languages, such as Druidic.");
  CHECK(StripMarkup("'''Tiamat''' was a [[dragon]].") == "Tiamat was a dragon.");
  CHECK(StripMarkup("") == "");
}

TEST_CASE("StripMarkup rules") {
  CHECK(StripMarkup("a<ref>x [[y]]</ref> b<ref name=\"n\" /> c") == "a b c");
  CHECK(StripMarkup("a <!-- hidden --> b") == "a b");
  CHECK(StripMarkup("see [https://example.org the site] or [http://x.org]") ==
        "see the site or");
  CHECK(StripMarkup("''italic'' and '''''both'''''") == "italic and both");
  CHECK(StripMarkup("x {{T|{{U}}}} y") == "x y");
  CHECK(StripMarkup("[[dragon]]s") == "dragons");
  CHECK(StripMarkup("[[File:A.png|thumb|a [[b]]]] text") == "text");
  CHECK(StripMarkup("a &amp; b&nbsp;c") == "a & b c");
  CHECK(StripMarkup("line<br />break") == "line break");
  CHECK(StripMarkup("stray ]] and {{ unclosed") == "stray and");
  CHECK(StripMarkup("unclosed <ref>tail") == "unclosed");
}

TEST_CASE("StripMarkup is idempotent and leaves no markup behind") {
  static const char *kPieces[] = {
      "[[", "]]", "{{", "}}", "'''", "''", "<ref>", "</ref>", "<ref/>",
      "<!--", "-->", "[[A|B]]", "[[File:x]]", "{{T|a}}", "[http://a b]",
      "text", " ", "  ", "|", "[", "]", "{", "}", "'", "&amp;", "<br>",
      "Faerûn", "\t", "&amp;amp;", "__NOTOC__", "<", ">"};
  std::mt19937 rng(7);
  std::uniform_int_distribution<size_t> pick(0, std::size(kPieces) - 1);
  std::uniform_int_distribution<int> len(0, 14);
  for (int n = 0; n < 3000; ++n) {
    std::string input;
    for (int k = len(rng); k > 0; --k) input += kPieces[pick(rng)];
    std::string once = StripMarkup(input);
    INFO(input);
    CHECK(StripMarkup(once) == once);
    for (std::string_view banned : {"[[", "]]", "{{", "}}", "'''", "<ref"}) {
      CHECK(once.find(banned) == std::string::npos);
    }
  }
}

TEST_CASE("LeadExtract invariants on generated articles") {
  testing::DocumentGenerator generator(99);
  for (int n = 0; n < 500; ++n) {
    std::string text = generator.Next().text + "\nSecond paragraph.";
    LeadExtract lead;
    try {
      lead = IsolateLead(text);
    } catch (const Error &) {
      continue;
    }
    INFO(text);
    CHECK(lead.lead_wikitext.find('\n') == std::string::npos);
    CHECK(lead.lead_plain == StripMarkup(lead.lead_wikitext));
    size_t pos = 0;
    for (const auto &link : lead.links) {
      size_t at = lead.lead_wikitext.find(link.target, pos);
      CHECK(at != std::string::npos);
      pos = at;
    }
  }
}

TEST_CASE("FirstLink") {
  CHECK(FirstLink("{{Box}}\n[[A]] then [[B]]")->target == "A");
  CHECK_FALSE(FirstLink("{{Box|[[Hidden]]}}\nNo links in this lead.\n[[Later]]"));
  CHECK_FALSE(FirstLink(""));
}

}  // namespace
}  // namespace shade::wikitext
