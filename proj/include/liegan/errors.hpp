#pragma once

#include <stdexcept>
#include <string>

namespace liegan {

/// Dimension or field mismatch between operands.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Cosine similarity requested for a zero-norm operand.
class UndefinedSimilarityError : public std::domain_error {
public:
    explicit UndefinedSimilarityError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed input file; carries the 1-based row where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long row)
        : std::runtime_error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};

/// Iterative solver failed to converge or diverged.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Training loop hit a non-finite loss; reports epoch and the offending term.
class TrainingDivergence : public std::runtime_error {
public:
    TrainingDivergence(int epoch, const std::string& term)
        : std::runtime_error("non-finite " + term + " at epoch " + std::to_string(epoch)),
          epoch_(epoch), term_(term) {}
    int epoch() const { return epoch_; }
    const std::string& term() const { return term_; }

private:
    int epoch_;
    std::string term_;
};

} // namespace liegan
