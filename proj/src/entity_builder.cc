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

#include "shade/error.h"
#include "shade/ingest.h"
#include "shade/npchunk.h"
#include "shade/wikitext.h"

namespace shade::ingest {

std::variant<EntityPage, Skipped> BuildEntityPage(const WikiArticle &article) {
  if (article.redirect_target) return Skipped{SkipReason::kRedirect};

  wikitext::LeadExtract lead;
  try {
    lead = wikitext::IsolateLead(article.wikitext);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kEmptyArticle) throw;
    return Skipped{SkipReason::kEmpty};
  }

  EntityPage page;
  page.entity_name = article.title;
  page.first_paragraph = lead.lead_plain;
  for (const wikitext::LinkTarget &link : lead.links) {
    page.links_list.push_back(link.target);
  }
  page.noun_list = npchunk::ExtractNounPhrases(lead.lead_plain);
  page.wikitext = article.wikitext;
  return page;
}

}  // namespace shade::ingest
