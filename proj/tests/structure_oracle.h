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

// Test-only generator of documents shaped like "structures, then a link",
// and an independent stack-based bracket matcher to check the structure
// scanner against.

#ifndef SHADE_TESTS_STRUCTURE_ORACLE_H_
#define SHADE_TESTS_STRUCTURE_ORACLE_H_

#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace shade::testing {

struct GeneratedDocument {
  std::string text;
  size_t link_start = 0;      // offset of the first "[[" outside structures
  size_t structures_end = 0;  // second '}' of the last top-level "}}" or 0
};

class DocumentGenerator {
 public:
  explicit DocumentGenerator(uint32_t seed) : rng_(seed) {}

  // text = S + L + T: S is zero or more top-level {{...}} blocks (nested up to
  // four deep, bodies may contain links) separated by blank space, L starts
  // with "[[", T is arbitrary tail markup.
  GeneratedDocument Next() {
    GeneratedDocument doc;
    int blocks = Uniform(0, 4);
    for (int b = 0; b < blocks; ++b) {
      if (b > 0) doc.text += Pick({"", "\n", " ", "\n\n"});
      Block(doc.text, 0);
      doc.structures_end = doc.text.size() - 1;
    }
    if (blocks > 0) doc.text += Pick({"", "\n", " "});
    doc.link_start = doc.text.size();
    doc.text += "[[" + Pick({"Dragon", "Faerûn", "Bane|the god", "Lawful evil"}) +
                "]]";
    doc.text += Pick({"", " roars.", " is {{cite|x}} here [[Y]].",
                      " {{unclosed", " and [[Z|z]] }}"});
    return doc;
  }

 private:
  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  std::string Pick(std::vector<std::string> options) {
    return options[Uniform(0, static_cast<int>(options.size()) - 1)];
  }

  void Block(std::string &out, int depth) {
    out += "{{";
    out += Pick({"Infobox", "DEFAULTSORT:Tiamat", "Grid", "Cite book", "Box"});
    int items = Uniform(0, 5);
    for (int i = 0; i < items; ++i) {
      switch (Uniform(0, 4)) {
        case 0:
          if (depth < 3) {
            out += "|";
            Block(out, depth + 1);
            break;
          }
          [[fallthrough]];
        case 1:
          out += "|" + Pick({"name = Tiamat", "alignment=evil", "x", "\n| a = b",
                             " [single] ", "ûñî"});
          break;
        case 2:
          out += "|" + Pick({"[[Lawful evil]]", "[[File:T.png|thumb]]",
                             "[[Dragon|dragons]]", "[[A]] and [[B]]"});
          break;
        case 3:
          out += Pick({"\n", " ", "=", "'''bold'''"});
          break;
        default:
          out += "|[[Broken";  // unterminated link inside a structure
          break;
      }
    }
    out += "}}";
  }

  std::mt19937 rng_;
};

struct OracleResult {
  size_t remainder_start = 0;
  size_t structures_end = 0;
};

// Matches "{{" / "}}" pairs with an explicit stack and returns the first
// "[[" at stack depth zero along with the end of the last structure closed
// before it. Pairs never overlap: a matched pair consumes both characters.
inline OracleResult BracketMatchingOracle(std::string_view text) {
  OracleResult result;
  std::vector<size_t> open;
  size_t i = 0;
  while (i + 1 < text.size()) {
    std::string_view pair = text.substr(i, 2);
    if (pair == "{{") {
      open.push_back(i);
      i += 2;
    } else if (pair == "}}") {
      if (!open.empty()) open.pop_back();
      result.structures_end = i + 1;
      i += 2;
    } else if (pair == "[[" && open.empty()) {
      result.remainder_start = i;
      return result;
    } else {
      ++i;
    }
  }
  result.remainder_start = 0;  // no link: whole text
  return result;
}

}  // namespace shade::testing

#endif  // SHADE_TESTS_STRUCTURE_ORACLE_H_
