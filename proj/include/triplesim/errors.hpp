#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace triplesim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A line of an N-Triples document violates the grammar.
class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

    std::size_t line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

/// An embedding file row cannot be parsed.
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

    std::size_t line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

/// An embedding row's vector length disagrees with the header dimension.
class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Two vectors passed to a pairwise operation differ in length.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// A triple-level similarity was invoked on objects of the wrong kind.
class KindMismatch : public Error {
public:
    using Error::Error;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("tf-idf corpus is empty") {}
};

class EmptyLexicon : public Error {
public:
    EmptyLexicon() : Error("embedding lexicon is empty") {}
};

/// Both entity graphs passed to a set-level similarity are empty.
class BothEmpty : public Error {
public:
    using Error::Error;
};

/// Matrices passed to an aggregate operation disagree in ids or shape.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class UnknownEntity : public Error {
public:
    explicit UnknownEntity(const std::string& id) : Error("unknown entity: " + id) {}
};

}  // namespace triplesim
