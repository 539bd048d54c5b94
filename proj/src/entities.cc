//
// Copyright 2026 The AVEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "avec/entities.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace avec {

std::string_view CategoryName(EntityCategory category) {
  switch (category) {
    case EntityCategory::kName:
      return "Name";
    case EntityCategory::kIdentifier:
      return "Identifier";
    case EntityCategory::kDate:
      return "Date";
    case EntityCategory::kOther:
      return "Other";
  }
  return "?";
}

absl::StatusOr<EntityCategory> ParseCategory(std::string_view name) {
  for (EntityCategory c : {EntityCategory::kName, EntityCategory::kIdentifier,
                           EntityCategory::kDate, EntityCategory::kOther}) {
    if (CategoryName(c) == name) return c;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown entity category '", std::string(name), "'"));
}

std::vector<EntityPattern> DefaultEntityPatterns() {
  return {
      {EntityCategory::kOther,
       R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})"},
      {EntityCategory::kDate, R"(\b\d{4}-\d{2}-\d{2}\b)"},
      {EntityCategory::kDate, R"(\b\d{1,2}/\d{1,2}/\d{4}\b)"},
      {EntityCategory::kIdentifier, R"(\b\d{6,}\b)"},
      {EntityCategory::kName, R"(\b[A-Z][a-z]+ [A-Z][a-z]+\b)"},
  };
}

absl::StatusOr<EntityDetector> EntityDetector::Create(
    std::vector<EntityPattern> patterns) {
  EntityDetector detector;
  for (const EntityPattern& p : patterns) {
    try {
      detector.compiled_.emplace_back(p.regex, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad entity pattern '", p.regex, "': ", e.what()));
    }
  }
  detector.patterns_ = std::move(patterns);
  return detector;
}

const EntityDetector& EntityDetector::Default() {
  static const EntityDetector* const detector =
      new EntityDetector(*Create(DefaultEntityPatterns()));
  return *detector;
}

std::vector<Entity> EntityDetector::Detect(std::string_view text) const {
  struct Candidate {
    size_t begin;
    size_t length;
    size_t pattern;
  };
  std::vector<Candidate> candidates;
  const std::string owned(text);
  for (size_t p = 0; p < compiled_.size(); ++p) {
    for (auto it = std::sregex_iterator(owned.begin(), owned.end(),
                                        compiled_[p]);
         it != std::sregex_iterator(); ++it) {
      if (it->length(0) == 0) continue;
      candidates.push_back({static_cast<size_t>(it->position(0)),
                            static_cast<size_t>(it->length(0)), p});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              if (a.length != b.length) return a.length > b.length;
              return a.pattern < b.pattern;
            });
  std::vector<Entity> out;
  size_t covered_until = 0;
  for (const Candidate& c : candidates) {
    if (!out.empty() && c.begin < covered_until) continue;
    Entity e;
    e.category = patterns_[c.pattern].category;
    e.begin = c.begin;
    e.end = c.begin + c.length;
    e.surface = owned.substr(c.begin, c.length);
    covered_until = e.end;
    out.push_back(std::move(e));
  }
  return out;
}

uint32_t Fnv1a32(std::string_view s) {
  uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

Vocabulary Vocabulary::Build(EntityCategory category,
                             std::vector<std::string> surfaces,
                             uint32_t min_size, uint32_t max_size) {
  Vocabulary v;
  v.category_ = category;
  std::sort(surfaces.begin(), surfaces.end());
  surfaces.erase(std::unique(surfaces.begin(), surfaces.end()),
                 surfaces.end());
  if (surfaces.size() > max_size) surfaces.resize(max_size);
  for (uint32_t i = 0; surfaces.size() < min_size; ++i) {
    surfaces.push_back(absl::StrFormat("<%s_%02d>", std::string(CategoryName(category)), i));
  }
  v.tokens_ = std::move(surfaces);
  for (uint32_t i = 0; i < v.tokens_.size(); ++i) v.index_[v.tokens_[i]] = i;
  return v;
}

uint32_t Vocabulary::IdOf(std::string_view surface) const {
  if (auto it = index_.find(std::string(surface)); it != index_.end()) {
    return it->second;
  }
  return Fnv1a32(surface) % size();
}

VocabularySet VocabularySet::Build(std::span<const Entity> all_entities,
                                   uint32_t min_size, uint32_t max_size) {
  std::array<std::vector<std::string>, kNumEntityCategories> by_category;
  for (const Entity& e : all_entities) {
    by_category[static_cast<size_t>(e.category)].push_back(e.surface);
  }
  VocabularySet set;
  for (size_t c = 0; c < kNumEntityCategories; ++c) {
    set.vocabularies_[c] =
        Vocabulary::Build(static_cast<EntityCategory>(c),
                          std::move(by_category[c]), min_size, max_size);
  }
  return set;
}

uint32_t VocabularySet::MinSize() const {
  uint32_t m = vocabularies_[0].size();
  for (const Vocabulary& v : vocabularies_) m = std::min(m, v.size());
  return m;
}

void VocabularySet::AssignIds(std::span<Entity> entities) const {
  for (Entity& e : entities) e.vocab_id = For(e.category).IdOf(e.surface);
}

}  // namespace avec
