#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triplesim/similarity.hpp"

namespace triplesim {

/// Compared approaches, in canonical reporting order.
enum class MethodId { N1, N2, SiLi, Jaccard };

constexpr std::array<MethodId, 4> kAllMethods = {MethodId::N1, MethodId::N2, MethodId::SiLi,
                                                 MethodId::Jaccard};

std::string method_name(MethodId method);
std::optional<MethodId> method_from_name(std::string_view name);

/// |intersection| / |union| over exact triple equality; two empty graphs
/// score 1.
double jaccard(const EntityGraph& g1, const EntityGraph& g2);

/// Derived engine configuration of the subject-blind baseline: zero
/// subject weight, predicate and object channels averaged over two
/// components.
SimilarityConfig sili_config(const SimilarityConfig& cfg);

/// Subject-blind variant of the set-level similarity.
Score sili(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
           const SimilarityConfig& cfg, const PredicateRanges* ranges = nullptr);

}  // namespace triplesim
