#include "triplesim/rdf.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "triplesim/errors.hpp"

namespace triplesim {

namespace {

constexpr std::string_view kXsdPrefix = "http://www.w3.org/2001/XMLSchema#";

constexpr std::array<std::string_view, 13> kXsdNumericLocal = {
    "integer", "decimal", "double",   "float",          "long",
    "int",     "short",   "byte",     "nonNegativeInteger",
    "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte",
};

bool is_xsd_numeric(std::string_view datatype) {
    if (!datatype.starts_with(kXsdPrefix)) return false;
    const std::string_view local = datatype.substr(kXsdPrefix.size());
    return std::find(kXsdNumericLocal.begin(), kXsdNumericLocal.end(), local) !=
           kXsdNumericLocal.end();
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Optional sign, digits, optional single dot followed by digits.
bool is_decimal_number(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && is_ascii_digit(s[i])) ++i, ++digits;
    if (digits == 0) return false;
    if (i == s.size()) return true;
    if (s[i] != '.') return false;
    ++i;
    digits = 0;
    while (i < s.size() && is_ascii_digit(s[i])) ++i, ++digits;
    return digits > 0 && i == s.size();
}

bool contains_whitespace(std::string_view s) {
    return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

}  // namespace

Term::Term(TermKind kind, std::string value, std::string datatype, std::string language)
    : kind_(kind),
      value_(std::move(value)),
      datatype_(std::move(datatype)),
      language_(std::move(language)) {}

Term Term::iri(std::string value) {
    if (value.empty()) throw std::invalid_argument("IRI must be non-empty");
    if (contains_whitespace(value)) throw std::invalid_argument("IRI must not contain whitespace");
    return Term(TermKind::Iri, std::move(value), "", "");
}

Term Term::blank(std::string label) {
    if (label.empty()) throw std::invalid_argument("blank node label must be non-empty");
    return Term(TermKind::Blank, std::move(label), "", "");
}

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
    if (!datatype.empty() && !language.empty())
        throw std::invalid_argument("literal may carry a datatype or a language tag, not both");
    return Term(TermKind::Literal, std::move(lexical), std::move(datatype), std::move(language));
}

Triple::Triple(Term subject_in, Term predicate_in, Term object_in)
    : subject(std::move(subject_in)),
      predicate(std::move(predicate_in)),
      object(std::move(object_in)) {
    if (subject.is_literal()) throw std::invalid_argument("triple subject must not be a literal");
    if (!predicate.is_iri()) throw std::invalid_argument("triple predicate must be an IRI");
}

ObjectKind classify_object(const Term& object) {
    if (!object.is_literal()) return ObjectKind::Qualitative;
    if (!object.datatype().empty())
        return is_xsd_numeric(object.datatype()) ? ObjectKind::Quantitative
                                                 : ObjectKind::Qualitative;
    if (!object.language().empty()) return ObjectKind::Qualitative;
    return is_decimal_number(object.value()) ? ObjectKind::Quantitative : ObjectKind::Qualitative;
}

std::optional<double> numeric_value(const Term& object) {
    if (!object.is_literal()) return std::nullopt;
    const std::string& lex = object.value();
    double out = 0.0;
    const char* first = lex.data();
    const char* last = lex.data() + lex.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects a leading plus
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return out;
}

namespace {

void append_escaped(std::string& out, const std::string& lexical) {
    for (char c : lexical) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
}

}  // namespace

std::string serialize_term(const Term& term) {
    std::string out;
    switch (term.kind()) {
        case TermKind::Iri:
            out = "<" + term.value() + ">";
            break;
        case TermKind::Blank:
            out = "_:" + term.value();
            break;
        case TermKind::Literal:
            out = "\"";
            append_escaped(out, term.value());
            out += "\"";
            if (!term.datatype().empty()) out += "^^<" + term.datatype() + ">";
            if (!term.language().empty()) out += "@" + term.language();
            break;
    }
    return out;
}

std::string serialize_triple(const Triple& triple) {
    return serialize_term(triple.subject) + " " + serialize_term(triple.predicate) + " " +
           serialize_term(triple.object) + " .";
}

bool canonical_less(const Triple& a, const Triple& b) {
    const auto key = [](const Triple& t) {
        return std::make_tuple(serialize_term(t.subject), serialize_term(t.predicate),
                               serialize_term(t.object));
    };
    return key(a) < key(b);
}

namespace {

// Single-line scanner for the N-Triples subset.
class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    Term parse_subject() {
        const Term t = parse_term();
        if (t.is_literal()) fail("literal in subject position");
        return t;
    }

    Term parse_predicate() {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '<') fail("non-IRI predicate");
        return parse_term();
    }

    Term parse_object() { return parse_term(); }

    void expect_terminator() {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '.') fail("missing terminator");
        ++pos_;
        skip_ws();
        if (pos_ < line_.size()) fail("content after terminator");
    }

private:
    [[noreturn]] void fail(const std::string& reason) { throw MalformedLine(line_no_, reason); }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    Term parse_term() {
        skip_ws();
        if (pos_ >= line_.size()) fail("unexpected end of line");
        const char c = line_[pos_];
        if (c == '<') return parse_iri();
        if (c == '_') return parse_blank();
        if (c == '"') return parse_literal();
        fail(std::string("unexpected character '") + c + "'");
    }

    Term parse_iri() {
        ++pos_;  // consume '<'
        const std::size_t end = line_.find('>', pos_);
        if (end == std::string_view::npos) fail("unbalanced angle brackets");
        const std::string_view body = line_.substr(pos_, end - pos_);
        if (body.empty()) fail("empty IRI");
        if (contains_whitespace(body)) fail("whitespace inside IRI");
        pos_ = end + 1;
        return Term::iri(std::string(body));
    }

    Term parse_blank() {
        if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != ':') fail("malformed blank node");
        pos_ += 2;
        const std::size_t start = pos_;
        while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
                                       line_[pos_] == '_' || line_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) fail("empty blank node label");
        return Term::blank(std::string(line_.substr(start, pos_ - start)));
    }

    Term parse_literal() {
        ++pos_;  // consume opening quote
        std::string lexical;
        bool closed = false;
        while (pos_ < line_.size()) {
            const char c = line_[pos_];
            if (c == '"') {
                closed = true;
                ++pos_;
                break;
            }
            if (c == '\\') {
                if (pos_ + 1 >= line_.size()) fail("dangling escape");
                const char e = line_[pos_ + 1];
                switch (e) {
                    case '"': lexical += '"'; break;
                    case '\\': lexical += '\\'; break;
                    case 'n': lexical += '\n'; break;
                    case 't': lexical += '\t'; break;
                    case 'r': lexical += '\r'; break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
                pos_ += 2;
                continue;
            }
            lexical += c;
            ++pos_;
        }
        if (!closed) fail("unbalanced quotes");

        std::string datatype;
        std::string language;
        if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
            pos_ += 2;
            if (pos_ >= line_.size() || line_[pos_] != '<') fail("datatype must be an IRI");
            const Term dt = parse_iri();
            datatype = dt.value();
        } else if (pos_ < line_.size() && line_[pos_] == '@') {
            ++pos_;
            const std::size_t start = pos_;
            while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
                                           line_[pos_] == '-'))
                ++pos_;
            if (pos_ == start) fail("empty language tag");
            language = std::string(line_.substr(start, pos_ - start));
        }
        return Term::literal(std::move(lexical), std::move(datatype), std::move(language));
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

std::string_view trim_left(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    return s.substr(i);
}

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
    std::vector<Triple> triples;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++line_no;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;

        const std::string_view body = trim_left(line);
        if (body.empty() || body.front() == '#') {
            if (eol == text.size()) break;
            continue;
        }

        LineScanner scanner(line, line_no);
        Term subject = scanner.parse_subject();
        Term predicate = scanner.parse_predicate();
        Term object = scanner.parse_object();
        scanner.expect_terminator();
        triples.emplace_back(std::move(subject), std::move(predicate), std::move(object));
        if (eol == text.size()) break;
    }
    return triples;
}

std::string serialize_ntriples(std::vector<Triple> triples) {
    std::sort(triples.begin(), triples.end(), canonical_less);
    std::string out;
    for (const Triple& t : triples) {
        out += serialize_triple(t);
        out += '\n';
    }
    return out;
}

EntityGraph::EntityGraph(Term subject, std::vector<Triple> triples)
    : subject_(std::move(subject)) {
    if (subject_.is_literal()) throw std::invalid_argument("entity subject must not be a literal");
    id_ = subject_.is_blank() ? "_:" + subject_.value() : subject_.value();
    for (const Triple& t : triples)
        if (!(t.subject == subject_))
            throw std::invalid_argument("entity graph is flat: all triples share the root subject");

    std::sort(triples.begin(), triples.end(), canonical_less);
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    triples_ = std::move(triples);

    for (const Triple& t : triples_) {
        (classify_object(t.object) == ObjectKind::Qualitative ? qualitative_ : quantitative_)
            .push_back(t);
    }
}

Dataset::Dataset(std::vector<EntityGraph> entities) : entities_(std::move(entities)) {
    std::sort(entities_.begin(), entities_.end(),
              [](const EntityGraph& a, const EntityGraph& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < entities_.size(); ++i)
        if (entities_[i].id() == entities_[i - 1].id())
            throw std::invalid_argument("dataset entity ids must be unique: " + entities_[i].id());
}

const EntityGraph* Dataset::find(std::string_view id) const {
    const auto it = std::lower_bound(
        entities_.begin(), entities_.end(), id,
        [](const EntityGraph& g, std::string_view key) { return g.id() < key; });
    if (it == entities_.end() || it->id() != id) return nullptr;
    return &*it;
}

Dataset group_by_subject(const std::vector<Triple>& triples) {
    std::map<std::string, std::pair<Term, std::vector<Triple>>> groups;
    for (const Triple& t : triples) {
        auto [it, inserted] =
            groups.try_emplace(serialize_term(t.subject), t.subject, std::vector<Triple>{});
        it->second.second.push_back(t);
    }
    std::vector<EntityGraph> entities;
    entities.reserve(groups.size());
    for (auto& [key, group] : groups)
        entities.emplace_back(std::move(group.first), std::move(group.second));
    return Dataset(std::move(entities));
}

}  // namespace triplesim
