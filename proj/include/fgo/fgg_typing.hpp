#pragma once

#include "fgo/ast.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace fgo {

/// Δ: type parameters paired with their bounds.
using TypeEnv = TypeFormals;
/// Γ: variables paired with their types.
using ValueEnv = std::vector<std::pair<std::string, Type>>;

/// `(x : τ_S, x̄ : σ̄).e` after θ has been applied.
struct MethodBody {
    std::string receiver;
    Type receiver_type;
    std::vector<ValueParam> params;
    Expr body;
};

/// Judgements and auxiliary functions of FGG over one program, whose
/// interface embeddings must already be expanded.
///
/// Queries on closed types are memoised, so a checker must not outlive or
/// observe modifications of the program it was built from.
class FggChecker {
public:
    explicit FggChecker(const Program& p);

    const Program& program() const { return p_; }
    const TypeDecl* decl(const std::string& name) const;
    const std::vector<const MethodDecl*>& methods_of(const std::string& struct_name) const;

    bool is_struct_type(const Type& t) const;
    bool is_interface_type(const Type& t) const;

    /// `(Φ :=_Δ φ)`. Throws a TypeError naming the failing parameter.
    Substitution subst_checked(const TypeEnv& delta, const TypeFormals& formals,
                               const TypeList& actuals, SourcePos pos = {}) const;
    std::optional<Substitution> try_subst_checked(const TypeEnv& delta, const TypeFormals& formals,
                                                  const TypeList& actuals) const;

    Type bounds(const TypeEnv& delta, const Type& t) const;
    /// Instantiated fields of a structure type, in declaration order.
    std::vector<Field> fields(const Type& ts) const;
    MethodSet methods(const TypeEnv& delta, const Type& t) const;
    bool implements(const TypeEnv& delta, const Type& t, const Type& u) const;
    /// Rule `<:-formals`, with the parameters of `decl` renamed to those of `recv`.
    bool formals_implement(const TypeFormals& recv, const TypeFormals& decl) const;

    void type_ok(const TypeEnv& delta, const Type& t, SourcePos pos = {}) const;
    bool is_type_ok(const TypeEnv& delta, const Type& t) const;
    /// `Φ; Ψ ok Δ`.
    TypeEnv type_formals_ok(const TypeFormals& phi, const TypeFormals& psi,
                            SourcePos pos = {}) const;

    Type type_expr(const TypeEnv& delta, const ValueEnv& gamma, const Expr& e,
                   bool allow_stupid) const;

    MethodBody body(const Type& ts, const std::string& method, const TypeList& psi) const;

    /// Diagnostics of the type declarations alone.
    std::vector<Diagnostic> check_types() const;
    /// Everything `t-func` requires of a method declaration except its body;
    /// returns the environment `Φ, Ψ` of the body.
    TypeEnv check_method_signature(const MethodDecl& d) const;

    /// All diagnostics of the program; empty means well typed.
    std::vector<Diagnostic> check() const;

private:
    void check_type_decl(const TypeDecl& d) const;
    void check_method_decl(const MethodDecl& d) const;
    void check_struct_recursion(const TypeDecl& d) const;
    void check_main(std::vector<Diagnostic>& out) const;
    Type type_binop(const TypeEnv& delta, const ValueEnv& gamma, const Expr& e,
                    bool allow_stupid) const;

    const Program& p_;
    std::unordered_map<std::string, const TypeDecl*> types_;
    std::unordered_map<std::string, std::vector<const MethodDecl*>> methods_;
    mutable std::unordered_map<Type, MethodSet, TypeHash> closed_methods_;
};

std::vector<Diagnostic> check_program_fgg(const Program& p);

/// Parses the format of `fmt.Sprintf`, returning the verb letters in order,
/// or nothing when the format contains an unsupported directive.
std::optional<std::string> sprintf_verbs(const std::string& format);

} // namespace fgo
