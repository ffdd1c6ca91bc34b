#include "triplesim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "triplesim/errors.hpp"

namespace triplesim {

void SimilarityConfig::validate() const {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw std::invalid_argument("similarity weights must be non-negative");
    if (alpha == 0.0 && beta == 0.0 && gamma == 0.0)
        throw std::invalid_argument("at least one similarity weight must be positive");
    if (component_count <= 0)
        throw std::invalid_argument("component count must be positive");
}

namespace {

template <typename Enum>
Enum enum_from_string(const std::string& s,
                      std::initializer_list<std::pair<const char*, Enum>> table,
                      const char* what) {
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

}  // namespace

SimilarityConfig config_from_json(const nlohmann::json& j) {
    SimilarityConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.clamp_negative_cosine = j.value("clamp_negative_cosine", cfg.clamp_negative_cosine);
    if (j.contains("numeric_normalization"))
        cfg.numeric_normalization = enum_from_string<NumericNormalization>(
            j.at("numeric_normalization").get<std::string>(),
            {{"literal", NumericNormalization::Literal},
             {"range", NumericNormalization::RangeScaled}},
            "numeric_normalization");
    if (j.contains("alignment"))
        cfg.alignment = enum_from_string<AlignmentStrategy>(
            j.at("alignment").get<std::string>(),
            {{"predicate", AlignmentStrategy::ByPredicate},
             {"best_match", AlignmentStrategy::BestMatch}},
            "alignment");
    if (j.contains("combine"))
        cfg.combine = enum_from_string<CombineMode>(
            j.at("combine").get<std::string>(),
            {{"literal", CombineMode::Literal}, {"normalized", CombineMode::Normalized}},
            "combine");
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const SimilarityConfig& cfg) {
    return nlohmann::json{
        {"alpha", cfg.alpha},
        {"beta", cfg.beta},
        {"gamma", cfg.gamma},
        {"clamp_negative_cosine", cfg.clamp_negative_cosine},
        {"numeric_normalization",
         cfg.numeric_normalization == NumericNormalization::Literal ? "literal" : "range"},
        {"alignment", cfg.alignment == AlignmentStrategy::ByPredicate ? "predicate" : "best_match"},
        {"combine", cfg.combine == CombineMode::Literal ? "literal" : "normalized"},
    };
}

PredicateRanges collect_predicate_ranges(const Dataset& dataset) {
    PredicateRanges ranges;
    for (const EntityGraph& g : dataset.entities()) {
        for (const Triple& t : g.quantitative()) {
            const auto value = numeric_value(t.object);
            if (!value) continue;
            auto [it, inserted] =
                ranges.try_emplace(t.predicate.value(), ValueRange{*value, *value});
            if (!inserted) {
                it->second.min = std::min(it->second.min, *value);
                it->second.max = std::max(it->second.max, *value);
            }
        }
    }
    return ranges;
}

double sim_word_pair(const std::string& w1, const std::string& w2, const Vectorizer& vec,
                     const SimilarityConfig& cfg) {
    const Eigen::VectorXd* v1 = vec.lookup(w1);
    const Eigen::VectorXd* v2 = vec.lookup(w2);
    if (v1 == nullptr || v2 == nullptr) return w1 == w2 ? 1.0 : 0.0;
    const double c = cosine(*v1, *v2);
    return cfg.clamp_negative_cosine ? std::clamp(c, 0.0, 1.0) : c;
}

double sim_word_to_qspo(const std::string& word, const WordList& qspo, const Vectorizer& vec,
                        const SimilarityConfig& cfg) {
    double best = 0.0;
    bool first = true;
    for (const std::string& candidate : qspo) {
        const double s = sim_word_pair(word, candidate, vec, cfg);
        if (first || s > best) best = s, first = false;
    }
    return best;
}

double sim_qualitative(const WordList& q1, const WordList& q2, const Vectorizer& vec,
                       const SimilarityConfig& cfg) {
    if (q1.empty() && q2.empty()) return 1.0;
    if (q1.empty() || q2.empty()) return 0.0;
    double sum = 0.0;
    for (const std::string& w : q1) sum += sim_word_to_qspo(w, q2, vec, cfg);
    for (const std::string& w : q2) sum += sim_word_to_qspo(w, q1, vec, cfg);
    return sum / static_cast<double>(q1.size() + q2.size());
}

double sim_quantitative(const Eigen::VectorXd& o1, const Eigen::VectorXd& o2,
                        const SimilarityConfig& cfg, const Eigen::VectorXd* scale) {
    if (o1.size() != o2.size())
        throw LengthMismatch("numeric objects have lengths " + std::to_string(o1.size()) +
                             " vs " + std::to_string(o2.size()));
    double sum_sq = 0.0;
    const bool scaled =
        cfg.numeric_normalization == NumericNormalization::RangeScaled && scale != nullptr;
    for (Eigen::Index i = 0; i < o1.size(); ++i) {
        double diff = o1[i] - o2[i];
        if (scaled && i < scale->size() && (*scale)[i] > 0.0) diff /= (*scale)[i];
        sum_sq += diff * diff;
    }
    return 1.0 / (1.0 + std::sqrt(sum_sq));
}

namespace {

double weighted_triple_score(const Triple& a1, const Triple& a2, double object_sim,
                             const Vectorizer& vec, const SimilarityConfig& cfg,
                             TripleBreakdown& breakdown) {
    const double n = static_cast<double>(cfg.component_count);
    breakdown.subject =
        cfg.alpha == 0.0
            ? 0.0
            : cfg.alpha * sim_qualitative(tokenize(a1.subject), tokenize(a2.subject), vec, cfg) / n;
    breakdown.predicate =
        cfg.beta == 0.0
            ? 0.0
            : cfg.beta * sim_qualitative(tokenize(a1.predicate), tokenize(a2.predicate), vec, cfg) /
                  n;
    breakdown.object = cfg.gamma == 0.0 ? 0.0 : cfg.gamma * object_sim / n;
    return breakdown.subject + breakdown.predicate + breakdown.object;
}

// Shared per-component scale for a quantitative pair. Cross-predicate
// pairs (possible under BestMatch) take the larger observed span so that
// equal values still score exactly 1.
Eigen::VectorXd pair_scale(const Triple& a1, const Triple& a2, const PredicateRanges& ranges) {
    double span = 0.0;
    if (const auto it = ranges.find(a1.predicate.value()); it != ranges.end())
        span = it->second.span();
    if (!(a1.predicate == a2.predicate))
        if (const auto it = ranges.find(a2.predicate.value()); it != ranges.end())
            span = std::max(span, it->second.span());
    return Eigen::VectorXd::Constant(1, span);
}

}  // namespace

Score sim_triple_qualitative(const Triple& a1, const Triple& a2, const Vectorizer& vec,
                             const SimilarityConfig& cfg) {
    if (classify_object(a1.object) != ObjectKind::Qualitative ||
        classify_object(a2.object) != ObjectKind::Qualitative)
        throw KindMismatch("qualitative triple similarity on a quantitative object");
    Score score;
    TripleBreakdown breakdown;
    const double object_sim =
        cfg.gamma == 0.0 ? 0.0
                         : sim_qualitative(tokenize(a1.object), tokenize(a2.object), vec, cfg);
    score.value = weighted_triple_score(a1, a2, object_sim, vec, cfg, breakdown);
    score.components = breakdown;
    return score;
}

Score sim_triple_quantitative(const Triple& a1, const Triple& a2, const Vectorizer& vec,
                              const SimilarityConfig& cfg, const PredicateRanges* ranges) {
    if (classify_object(a1.object) != ObjectKind::Quantitative ||
        classify_object(a2.object) != ObjectKind::Quantitative)
        throw KindMismatch("quantitative triple similarity on a qualitative object");
    Score score;
    TripleBreakdown breakdown;

    Eigen::VectorXd o1 = Eigen::VectorXd::Constant(1, numeric_value(a1.object).value_or(0.0));
    Eigen::VectorXd o2 = Eigen::VectorXd::Constant(1, numeric_value(a2.object).value_or(0.0));
    double object_sim;
    if (cfg.numeric_normalization == NumericNormalization::RangeScaled && ranges != nullptr) {
        const Eigen::VectorXd scale = pair_scale(a1, a2, *ranges);
        object_sim = sim_quantitative(o1, o2, cfg, &scale);
    } else {
        object_sim = sim_quantitative(o1, o2, cfg);
    }

    score.value = weighted_triple_score(a1, a2, object_sim, vec, cfg, breakdown);
    score.components = breakdown;
    return score;
}

namespace {

struct Candidate {
    std::size_t left;   // index into the left group
    std::size_t right;  // index into the right group
    double score;
    // Unordered serialization pair keeps candidate order mirror-symmetric;
    // the ordered pair makes the sort total.
    std::string key_lo;
    std::string key_hi;
    bool left_is_lo;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto key = [](const Candidate& c) {
        return std::tie(c.key_lo, c.key_hi, c.left_is_lo ? c.key_lo : c.key_hi);
    };
    return key(a) < key(b);
}

struct KindAlignmentInput {
    std::vector<const Triple*> left;
    std::vector<const Triple*> right;
    ObjectKind kind;
};

double pair_score(const Triple& a, const Triple& b, ObjectKind kind, const Vectorizer& vec,
                  const SimilarityConfig& cfg, const PredicateRanges* ranges) {
    return kind == ObjectKind::Qualitative
               ? sim_triple_qualitative(a, b, vec, cfg).value
               : sim_triple_quantitative(a, b, vec, cfg, ranges).value;
}

// Greedy pass over the given cross pairs; consumed triples are flagged in
// used_left/used_right and matched pairs are appended to out.
void greedy_consume(const std::vector<const Triple*>& left,
                    const std::vector<const Triple*>& right,
                    const std::vector<std::pair<std::size_t, std::size_t>>& cross,
                    ObjectKind kind, const Vectorizer& vec, const SimilarityConfig& cfg,
                    const PredicateRanges* ranges, std::vector<bool>& used_left,
                    std::vector<bool>& used_right, std::vector<AlignedPair>& out) {
    std::vector<Candidate> candidates;
    candidates.reserve(cross.size());
    for (const auto& [li, ri] : cross) {
        Candidate c;
        c.left = li;
        c.right = ri;
        c.score = pair_score(*left[li], *right[ri], kind, vec, cfg, ranges);
        std::string ls = serialize_triple(*left[li]);
        std::string rs = serialize_triple(*right[ri]);
        c.left_is_lo = ls <= rs;
        if (c.left_is_lo) {
            c.key_lo = std::move(ls);
            c.key_hi = std::move(rs);
        } else {
            c.key_lo = std::move(rs);
            c.key_hi = std::move(ls);
        }
        candidates.push_back(std::move(c));
    }
    std::sort(candidates.begin(), candidates.end(), candidate_less);
    for (const Candidate& c : candidates) {
        if (used_left[c.left] || used_right[c.right]) continue;
        used_left[c.left] = true;
        used_right[c.right] = true;
        out.push_back(AlignedPair{*left[c.left], *right[c.right], kind, c.score});
    }
}

void align_kind(const KindAlignmentInput& input, const Vectorizer& vec,
                const SimilarityConfig& cfg, const PredicateRanges* ranges,
                std::vector<AlignedPair>& pairs, std::vector<UnmatchedTriple>& unmatched) {
    std::vector<bool> used_left(input.left.size(), false);
    std::vector<bool> used_right(input.right.size(), false);

    // First pass: greedy matching inside shared predicate groups.
    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < input.left.size(); ++i)
        groups[input.left[i]->predicate.value()].first.push_back(i);
    for (std::size_t i = 0; i < input.right.size(); ++i)
        groups[input.right[i]->predicate.value()].second.push_back(i);

    for (const auto& [predicate, group] : groups) {
        if (group.first.empty() || group.second.empty()) continue;
        std::vector<std::pair<std::size_t, std::size_t>> cross;
        cross.reserve(group.first.size() * group.second.size());
        for (std::size_t li : group.first)
            for (std::size_t ri : group.second) cross.emplace_back(li, ri);
        greedy_consume(input.left, input.right, cross, input.kind, vec, cfg, ranges, used_left,
                       used_right, pairs);
    }

    // Second pass: BestMatch lets the leftovers pair across predicates.
    if (cfg.alignment == AlignmentStrategy::BestMatch) {
        std::vector<std::pair<std::size_t, std::size_t>> cross;
        for (std::size_t li = 0; li < input.left.size(); ++li) {
            if (used_left[li]) continue;
            for (std::size_t ri = 0; ri < input.right.size(); ++ri)
                if (!used_right[ri]) cross.emplace_back(li, ri);
        }
        greedy_consume(input.left, input.right, cross, input.kind, vec, cfg, ranges, used_left,
                       used_right, pairs);
    }

    for (std::size_t i = 0; i < input.left.size(); ++i)
        if (!used_left[i]) unmatched.push_back({*input.left[i], Side::Left, input.kind});
    for (std::size_t i = 0; i < input.right.size(); ++i)
        if (!used_right[i]) unmatched.push_back({*input.right[i], Side::Right, input.kind});
}

std::vector<const Triple*> triple_pointers(const std::vector<Triple>& triples) {
    std::vector<const Triple*> out;
    out.reserve(triples.size());
    for (const Triple& t : triples) out.push_back(&t);
    return out;
}

}  // namespace

Alignment align_triples(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
                        const SimilarityConfig& cfg, const PredicateRanges* ranges) {
    cfg.validate();
    Alignment alignment;
    align_kind({triple_pointers(g1.qualitative()), triple_pointers(g2.qualitative()),
                ObjectKind::Qualitative},
               vec, cfg, ranges, alignment.pairs, alignment.unmatched);
    align_kind({triple_pointers(g1.quantitative()), triple_pointers(g2.quantitative()),
                ObjectKind::Quantitative},
               vec, cfg, ranges, alignment.pairs, alignment.unmatched);
    return alignment;
}

Score sim_graphs(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
                 const SimilarityConfig& cfg, const PredicateRanges* ranges) {
    if (g1.empty() && g2.empty()) throw BothEmpty("both entity graphs are empty");

    const Alignment alignment = align_triples(g1, g2, vec, cfg, ranges);

    double qual_sum = 0.0;
    double quant_sum = 0.0;
    std::size_t qual_count = 0;
    std::size_t quant_count = 0;
    for (const AlignedPair& p : alignment.pairs) {
        if (p.kind == ObjectKind::Qualitative) {
            qual_sum += p.score;
            ++qual_count;
        } else {
            quant_sum += p.score;
            ++quant_count;
        }
    }
    // Unmatched triples widen the denominators and contribute 0.
    for (const UnmatchedTriple& u : alignment.unmatched)
        (u.kind == ObjectKind::Qualitative ? qual_count : quant_count) += 1;

    GraphBreakdown breakdown;
    breakdown.qualitative_count = qual_count;
    breakdown.quantitative_count = quant_count;
    breakdown.matched_pairs = alignment.pairs.size();
    breakdown.unmatched_count = alignment.unmatched.size();
    breakdown.qualitative_term =
        qual_count == 0 ? 0.0 : qual_sum / static_cast<double>(qual_count);
    breakdown.quantitative_term =
        quant_count == 0 ? 0.0 : quant_sum / static_cast<double>(quant_count);

    Score score;
    score.value = cfg.combine == CombineMode::Literal
                      ? breakdown.qualitative_term + breakdown.quantitative_term
                      : (qual_sum + quant_sum) / static_cast<double>(qual_count + quant_count);
    score.graph = breakdown;
    return score;
}

}  // namespace triplesim
