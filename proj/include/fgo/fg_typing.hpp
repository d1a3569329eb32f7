#pragma once

#include "fgo/ast.hpp"

#include <unordered_map>
#include <vector>

namespace fgo::fg {

/// Γ for FG: variables paired with type names.
using Env = std::vector<std::pair<std::string, std::string>>;

/// A standalone checker for FG programs. It shares no judgement code with
/// the FGG checker, so the two can serve as oracles for each other.
class Checker {
public:
    explicit Checker(const Program& p);

    bool declared(const std::string& t) const;
    bool is_struct(const std::string& t) const;
    bool is_interface(const std::string& t) const;

    std::vector<Field> fields(const std::string& ts) const;
    MethodSet methods(const std::string& t) const;
    bool implements(const std::string& t, const std::string& u) const;

    std::string type_expr(const Env& gamma, const Expr& e, bool allow_stupid) const;

    std::vector<Diagnostic> check() const;

private:
    std::string name_of(const Type& t, SourcePos pos) const;
    void type_ok(const std::string& t, SourcePos pos) const;
    void check_decl(const Decl& d) const;

    const Program& p_;
    std::unordered_map<std::string, const TypeDecl*> types_;
    std::unordered_map<std::string, std::vector<const MethodDecl*>> methods_;
};

std::vector<Diagnostic> check_program_fg(const Program& p);

} // namespace fgo::fg
