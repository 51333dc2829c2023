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

// Rule-based noun-phrase chunking over plain lead text.
//
// Tagging is context free: a word always receives the same tag. Closed-class
// words come from lexicon files (one word per line, UTF-8), words with an
// adjective or adverb suffix are tagged by suffix, and everything else is a
// noun. Noun phrases are maximal runs of adjectives and nouns that end in a
// noun.

#ifndef SHADE_NPCHUNK_H_
#define SHADE_NPCHUNK_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace shade::npchunk {

enum class Tag { kDet, kPrep, kConj, kPron, kAux, kAdv, kAdj, kNoun, kPunct };

const char *TagName(Tag tag);

struct TaggedToken {
  std::string surface;
  Tag tag;
};

// Splits on whitespace. Punctuation becomes separate tokens, except hyphens
// and apostrophes between two word characters ("half-elf", "Tiamat's").
std::vector<std::string> Tokenize(std::string_view plain);

// True if the token consists of punctuation only.
bool IsPunctuation(std::string_view token);

class Tagger {
 public:
  // Lexicon files expected in a directory. Each maps to one tag;
  // noun_exceptions.txt lists nouns that merely look like adjectives or
  // adverbs ("animal", "cleric", "family") and bypass the suffix rules.
  static constexpr struct {
    const char *file;
    Tag tag;
  } kLexiconFiles[] = {
      {"determiners.txt", Tag::kDet},   {"prepositions.txt", Tag::kPrep},
      {"conjunctions.txt", Tag::kConj}, {"pronouns.txt", Tag::kPron},
      {"auxiliaries.txt", Tag::kAux},   {"function_words.txt", Tag::kAdv},
  };
  static constexpr const char *kNounExceptionsFile = "noun_exceptions.txt";

  // Loads all lexicons from dir. Throws Error(kIoError) if a file is missing.
  static Tagger LoadFromDirectory(const std::filesystem::path &dir);

  // Process-wide tagger, loaded once from $SHADE_LEXICON_DIR or the bundled
  // lexicon directory.
  static const Tagger &Default();

  // Directory Default() loads from.
  static std::filesystem::path DefaultLexiconDir();

  Tag TagWord(std::string_view word) const;
  std::vector<TaggedToken> PosTag(const std::vector<std::string> &tokens) const;

 private:
  std::unordered_map<std::string, Tag> closed_class_;
  std::unordered_set<std::string> noun_exceptions_;
};

// Candidate labels from plain text: every noun phrase, followed by its head
// noun when the phrase has more than one word. First occurrence wins under
// case-insensitive comparison; surface casing is kept.
std::vector<std::string> ExtractNounPhrases(std::string_view plain,
                                            const Tagger &tagger);
std::vector<std::string> ExtractNounPhrases(std::string_view plain);

}  // namespace shade::npchunk

#endif  // SHADE_NPCHUNK_H_
