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

#ifndef AVEC_ENTITIES_H_
#define AVEC_ENTITIES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace avec {

enum class EntityCategory : uint8_t { kName, kIdentifier, kDate, kOther };
inline constexpr size_t kNumEntityCategories = 4;

std::string_view CategoryName(EntityCategory category);
absl::StatusOr<EntityCategory> ParseCategory(std::string_view name);

struct Entity {
  EntityCategory category = EntityCategory::kOther;
  size_t begin = 0;  // byte offsets into the query, [begin, end)
  size_t end = 0;
  std::string surface;
  uint32_t vocab_id = 0;
};

struct EntityPattern {
  EntityCategory category;
  std::string regex;  // ECMAScript syntax
};

// Capitalized-bigram names, ISO and slash dates, digit-run identifiers of six
// or more digits, and email-shaped tokens (category Other). Earlier patterns
// win ties on the same start offset.
std::vector<EntityPattern> DefaultEntityPatterns();

class EntityDetector {
 public:
  static absl::StatusOr<EntityDetector> Create(
      std::vector<EntityPattern> patterns);
  static const EntityDetector& Default();

  // Non-overlapping matches in left-to-right order. Overlaps resolve to the
  // earliest start, then the longest match, then pattern order.
  std::vector<Entity> Detect(std::string_view text) const;

  const std::vector<EntityPattern>& patterns() const { return patterns_; }

 private:
  std::vector<EntityPattern> patterns_;
  std::vector<std::regex> compiled_;
};

// The public token list for one entity category.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Unique sorted surfaces, padded with `<CATEGORY_nn>` fillers up to
  // min_size and truncated to max_size. Surfaces cut by truncation (and any
  // surface never seen) map to FNV-1a(surface) mod size().
  static Vocabulary Build(EntityCategory category,
                          std::vector<std::string> surfaces, uint32_t min_size,
                          uint32_t max_size);

  uint32_t size() const { return static_cast<uint32_t>(tokens_.size()); }
  const std::string& token(uint32_t id) const { return tokens_[id]; }
  uint32_t IdOf(std::string_view surface) const;
  EntityCategory category() const { return category_; }

 private:
  EntityCategory category_ = EntityCategory::kOther;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t> index_;
};

class VocabularySet {
 public:
  VocabularySet() = default;
  // Builds one vocabulary per category from every entity surface seen.
  static VocabularySet Build(std::span<const Entity> all_entities,
                             uint32_t min_size, uint32_t max_size);

  const Vocabulary& For(EntityCategory category) const {
    return vocabularies_[static_cast<size_t>(category)];
  }
  uint32_t MinSize() const;
  // Assigns vocab_id on each entity from its category's vocabulary.
  void AssignIds(std::span<Entity> entities) const;

 private:
  std::array<Vocabulary, kNumEntityCategories> vocabularies_;
};

uint32_t Fnv1a32(std::string_view s);

}  // namespace avec

#endif  // AVEC_ENTITIES_H_
