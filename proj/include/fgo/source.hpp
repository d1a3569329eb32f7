#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fgo {

struct SourcePos {
    int line = 0;
    int col = 0;
};

/// A located message naming the violated rule, rendered as
/// `file:line:col: rule: message`.
struct Diagnostic {
    std::string file;
    SourcePos pos;
    std::string rule;
    std::string message;

    std::string str() const;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(Diagnostic d);
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

class SyntaxError : public Error {
public:
    using Error::Error;
};

/// A failed typing premise inside a single judgement.
class TypeError : public Error {
public:
    using Error::Error;
};

/// Raised when an invariant the theory guarantees does not hold.
class InternalError : public Error {
public:
    using Error::Error;
};

[[noreturn]] void type_error(SourcePos pos, std::string rule, std::string message);

} // namespace fgo
