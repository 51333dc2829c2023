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

#include "shade/npchunk.h"

#include <cstdlib>
#include <fstream>

#include "shade/error.h"
#include "text_util.h"

#ifndef SHADE_LEXICON_DIR
#define SHADE_LEXICON_DIR "lexicons"
#endif

namespace shade::npchunk {

namespace {

// Decodes one UTF-8 code point starting at s[i]; sets len to its byte length.
// Malformed sequences decode as U+FFFD with length 1.
char32_t DecodeUtf8(std::string_view s, size_t i, size_t *len) {
  constexpr char32_t kReplacement = 0xFFFD;
  unsigned char c = s[i];
  *len = 1;
  if (c < 0x80) return c;
  int extra;
  char32_t cp;
  if (c >= 0xF0 && c < 0xF8) {
    extra = 3;
    cp = c & 0x07;
  } else if (c >= 0xE0 && c < 0xF0) {
    extra = 2;
    cp = c & 0x0F;
  } else if (c >= 0xC0 && c < 0xE0) {
    extra = 1;
    cp = c & 0x1F;
  } else {
    return kReplacement;
  }
  if (i + extra >= s.size()) return kReplacement;
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = s[i + k];
    if ((cc & 0xC0) != 0x80) return kReplacement;
    cp = (cp << 6) | (cc & 0x3F);
  }
  *len = extra + 1;
  return cp;
}

bool IsSpaceCp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x202F || cp == 0x3000;
}

bool IsPunctCp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  return cp == 0xA1 || cp == 0xA7 || cp == 0xAB || cp == 0xB6 || cp == 0xB7 ||
         cp == 0xBB || cp == 0xBF || (cp >= 0x2010 && cp <= 0x2027) ||
         (cp >= 0x2030 && cp <= 0x205E);
}

bool IsJoinerCp(char32_t cp) {
  return cp == '-' || cp == '\'' || cp == 0x2010 || cp == 0x2011 ||
         cp == 0x2019;
}

bool IsWordCp(char32_t cp) { return !IsSpaceCp(cp) && !IsPunctCp(cp); }

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char *TagName(Tag tag) {
  switch (tag) {
    case Tag::kDet: return "DET";
    case Tag::kPrep: return "PREP";
    case Tag::kConj: return "CONJ";
    case Tag::kPron: return "PRON";
    case Tag::kAux: return "AUX";
    case Tag::kAdv: return "ADV";
    case Tag::kAdj: return "ADJ";
    case Tag::kNoun: return "NOUN";
    case Tag::kPunct: return "PUNCT";
  }
  return "?";
}

std::vector<std::string> Tokenize(std::string_view plain) {
  struct Cp {
    char32_t cp;
    size_t pos;
    size_t len;
  };
  std::vector<Cp> cps;
  for (size_t i = 0; i < plain.size();) {
    size_t len;
    char32_t cp = DecodeUtf8(plain, i, &len);
    cps.push_back({cp, i, len});
    i += len;
  }

  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (size_t k = 0; k < cps.size(); ++k) {
    const Cp &c = cps[k];
    std::string_view bytes = plain.substr(c.pos, c.len);
    if (IsSpaceCp(c.cp)) {
      flush();
    } else if (IsPunctCp(c.cp)) {
      bool internal = IsJoinerCp(c.cp) && !word.empty() &&
                      k + 1 < cps.size() && IsWordCp(cps[k + 1].cp);
      if (internal) {
        word += bytes;
      } else {
        flush();
        tokens.emplace_back(bytes);
      }
    } else {
      word += bytes;
    }
  }
  flush();
  return tokens;
}

bool IsPunctuation(std::string_view token) {
  if (token.empty()) return false;
  for (size_t i = 0; i < token.size();) {
    size_t len;
    if (!IsPunctCp(DecodeUtf8(token, i, &len))) return false;
    i += len;
  }
  return true;
}

Tagger Tagger::LoadFromDirectory(const std::filesystem::path &dir) {
  auto read_words = [&](const char *name, auto &&sink) {
    std::filesystem::path path = dir / name;
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorCode::kIoError,
                  "cannot open lexicon " + path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
      std::string_view word = text::Trim(line);
      if (word.empty() || word.front() == '#') continue;
      sink(text::ToLowerAscii(word));
    }
  };

  Tagger tagger;
  for (const auto &lexicon : kLexiconFiles) {
    // A word listed in several classes keeps the first one in file order.
    read_words(lexicon.file, [&](std::string word) {
      tagger.closed_class_.emplace(std::move(word), lexicon.tag);
    });
  }
  read_words(kNounExceptionsFile, [&](std::string word) {
    tagger.noun_exceptions_.insert(std::move(word));
  });
  return tagger;
}

std::filesystem::path Tagger::DefaultLexiconDir() {
  if (const char *env = std::getenv("SHADE_LEXICON_DIR"); env && *env) {
    return env;
  }
  return SHADE_LEXICON_DIR;
}

const Tagger &Tagger::Default() {
  static const Tagger tagger = LoadFromDirectory(DefaultLexiconDir());
  return tagger;
}

Tag Tagger::TagWord(std::string_view word) const {
  if (word.empty()) return Tag::kNoun;
  if (IsPunctuation(word)) return Tag::kPunct;
  std::string lower = text::ToLowerAscii(word);
  if (auto it = closed_class_.find(lower); it != closed_class_.end()) {
    return it->second;
  }
  // Numerals act as quantifiers, never as labels.
  if (lower.front() >= '0' && lower.front() <= '9') return Tag::kDet;
  if (noun_exceptions_.contains(lower)) return Tag::kNoun;

  if (lower.size() >= 4 && EndsWith(lower, "ly")) return Tag::kAdv;
  static constexpr std::string_view kAdjSuffixes[] = {"ous", "ful", "ic",
                                                      "al",  "ish", "ive"};
  for (std::string_view suffix : kAdjSuffixes) {
    if (lower.size() >= suffix.size() + 2 && EndsWith(lower, suffix)) {
      return Tag::kAdj;
    }
  }
  return Tag::kNoun;
}

std::vector<TaggedToken> Tagger::PosTag(
    const std::vector<std::string> &tokens) const {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());
  for (const std::string &token : tokens) {
    tagged.push_back({token, TagWord(token)});
  }
  return tagged;
}

std::vector<std::string> ExtractNounPhrases(std::string_view plain,
                                            const Tagger &tagger) {
  std::vector<TaggedToken> tagged = tagger.PosTag(Tokenize(plain));

  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  auto emit = [&](const std::string &label) {
    if (seen.insert(text::ToLowerAscii(label)).second) labels.push_back(label);
  };

  size_t i = 0;
  while (i < tagged.size()) {
    if (tagged[i].tag != Tag::kAdj && tagged[i].tag != Tag::kNoun) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < tagged.size() &&
           (tagged[i].tag == Tag::kAdj || tagged[i].tag == Tag::kNoun)) {
      ++i;
    }
    size_t end = i;
    while (end > begin && tagged[end - 1].tag != Tag::kNoun) --end;
    if (end == begin) continue;

    std::string phrase = tagged[begin].surface;
    for (size_t k = begin + 1; k < end; ++k) {
      phrase += ' ';
      phrase += tagged[k].surface;
    }
    emit(phrase);
    if (end - begin > 1) emit(tagged[end - 1].surface);
  }
  return labels;
}

std::vector<std::string> ExtractNounPhrases(std::string_view plain) {
  return ExtractNounPhrases(plain, Tagger::Default());
}

}  // namespace shade::npchunk
