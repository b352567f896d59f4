#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace covsmooth {

/// Base class for all covsmooth errors. `code()` is a short stable
/// identifier; the CLI prepends it to its machine-parseable error line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Input too small or structurally empty for the requested operation.
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& what) : Error("degenerate-input", what) {}
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& what) : Error("dimension-mismatch", what) {}
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error("invalid-argument", what) {}
};

/// Two nodes at the exact same position; 1/D terms are undefined.
class SingularDistanceError : public Error {
public:
    explicit SingularDistanceError(const std::string& what) : Error("singular-distance", what) {}
};

/// Logistic response is all edges or all non-edges.
class DegenerateResponseError : public Error {
public:
    explicit DegenerateResponseError(const std::string& what) : Error("degenerate-response", what) {}
};

/// Quasi-complete separation detected while fitting (coefficients diverging).
class SeparationError : public Error {
public:
    explicit SeparationError(const std::string& what) : Error("separation", what) {}
};

/// Singular Fisher information (e.g. duplicated design columns).
class CollinearityError : public Error {
public:
    explicit CollinearityError(const std::string& what) : Error("collinearity", what) {}
};

/// Zero-variance vector handed to standardize().
class DegenerateVectorError : public Error {
public:
    explicit DegenerateVectorError(const std::string& what) : Error("degenerate-vector", what) {}
};

/// Too many failed layout cells to form a reliable median.
class SelectionError : public Error {
public:
    explicit SelectionError(const std::string& what) : Error("selection", what) {}
};

/// Design implies a linkage probability outside [0, 1].
class InfeasibleDesignError : public Error {
public:
    explicit InfeasibleDesignError(const std::string& what) : Error("infeasible-design", what) {}
};

/// Root-finding bracket does not contain a sign change.
class RootBracketError : public Error {
public:
    explicit RootBracketError(const std::string& what) : Error("root-bracket", what) {}
};

/// Text-format error; carries "file:line: message" in what().
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error("parse", file + ":" + std::to_string(line) + ": " + what) {}
    explicit ParseError(const std::string& what) : Error("parse", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

} // namespace covsmooth
