#include "triplesim/baselines.hpp"

#include <algorithm>

namespace triplesim {

std::string method_name(MethodId method) {
    switch (method) {
        case MethodId::N1: return "n1";
        case MethodId::N2: return "n2";
        case MethodId::SiLi: return "sili";
        case MethodId::Jaccard: return "jaccard";
    }
    return "unknown";
}

std::optional<MethodId> method_from_name(std::string_view name) {
    for (MethodId m : kAllMethods)
        if (method_name(m) == name) return m;
    return std::nullopt;
}

double jaccard(const EntityGraph& g1, const EntityGraph& g2) {
    const std::vector<Triple>& a = g1.triples();  // already sorted and deduplicated
    const std::vector<Triple>& b = g2.triples();
    if (a.empty() && b.empty()) return 1.0;

    std::size_t common = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common, ++i, ++j;
        } else if (canonical_less(a[i], b[j])) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t unioned = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(unioned);
}

SimilarityConfig sili_config(const SimilarityConfig& cfg) {
    SimilarityConfig derived = cfg;
    derived.alpha = 0.0;
    derived.component_count = 2;
    return derived;
}

Score sili(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
           const SimilarityConfig& cfg, const PredicateRanges* ranges) {
    return sim_graphs(g1, g2, vec, sili_config(cfg), ranges);
}

}  // namespace triplesim
