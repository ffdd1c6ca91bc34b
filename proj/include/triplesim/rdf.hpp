#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triplesim {

enum class TermKind { Iri, Blank, Literal };

/// One RDF node: an IRI, a blank node, or a literal with optional
/// datatype IRI or language tag (never both).
class Term {
public:
    static Term iri(std::string value);
    static Term blank(std::string label);
    static Term literal(std::string lexical, std::string datatype = "", std::string language = "");

    TermKind kind() const { return kind_; }
    bool is_iri() const { return kind_ == TermKind::Iri; }
    bool is_blank() const { return kind_ == TermKind::Blank; }
    bool is_literal() const { return kind_ == TermKind::Literal; }

    /// IRI string, blank-node label, or literal lexical form.
    const std::string& value() const { return value_; }
    const std::string& datatype() const { return datatype_; }
    const std::string& language() const { return language_; }

    bool operator==(const Term&) const = default;
    std::strong_ordering operator<=>(const Term&) const = default;

private:
    Term(TermKind kind, std::string value, std::string datatype, std::string language);

    TermKind kind_;
    std::string value_;
    std::string datatype_;
    std::string language_;
};

/// A subject/predicate/object statement. Subjects are IRIs or blank
/// nodes, predicates are IRIs, objects may be any term.
struct Triple {
    Triple(Term subject, Term predicate, Term object);

    Term subject;
    Term predicate;
    Term object;

    bool operator==(const Triple&) const = default;
};

enum class ObjectKind { Qualitative, Quantitative };

/// Quantitative iff the object is a literal with an XSD numeric datatype,
/// or an untyped literal whose whole lexical form is a decimal number.
/// IRIs, blank nodes and language-tagged literals are always qualitative.
ObjectKind classify_object(const Term& object);

/// Numeric value of a quantitative object's lexical form, when it parses.
std::optional<double> numeric_value(const Term& object);

std::string serialize_term(const Term& term);
std::string serialize_triple(const Triple& triple);

/// Canonical order: lexicographic over (serialized subject, predicate, object).
bool canonical_less(const Triple& a, const Triple& b);

/// Parses the N-Triples subset. Comment lines (leading '#') and blank
/// lines are skipped; triples are returned in file order.
/// Throws MalformedLine with the 1-based line number on grammar errors.
std::vector<Triple> parse_ntriples(std::string_view text);

/// One triple per line, canonically sorted; parse/serialize round-trips
/// to term-identical triples.
std::string serialize_ntriples(std::vector<Triple> triples);

/// The set of triples describing one entity: a single root subject, the
/// deduplicated canonically-sorted triple list, and its partition into
/// qualitative and quantitative triples.
class EntityGraph {
public:
    EntityGraph(Term subject, std::vector<Triple> triples);

    /// Raw IRI string for IRI subjects, "_:label" for blank subjects.
    const std::string& id() const { return id_; }
    const Term& subject() const { return subject_; }
    const std::vector<Triple>& triples() const { return triples_; }
    const std::vector<Triple>& qualitative() const { return qualitative_; }
    const std::vector<Triple>& quantitative() const { return quantitative_; }
    bool empty() const { return triples_.empty(); }

private:
    Term subject_;
    std::string id_;
    std::vector<Triple> triples_;
    std::vector<Triple> qualitative_;
    std::vector<Triple> quantitative_;
};

/// A corpus of entity graphs with unique ids, iterated in id order.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<EntityGraph> entities);

    const std::vector<EntityGraph>& entities() const { return entities_; }
    std::size_t size() const { return entities_.size(); }
    bool empty() const { return entities_.empty(); }

    const EntityGraph* find(std::string_view id) const;

private:
    std::vector<EntityGraph> entities_;
};

/// One EntityGraph per distinct subject; an empty input yields an empty Dataset.
Dataset group_by_subject(const std::vector<Triple>& triples);

}  // namespace triplesim
