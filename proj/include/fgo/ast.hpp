#pragma once

#include "fgo/source.hpp"
#include "fgo/type.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fgo {

// ============================================================================
// Signatures
// ============================================================================

struct ValueParam {
    std::string name;
    Type type;
};

/// `(Ψ)(x̄ τ̄) τ`. FG signatures have no type formals.
struct Signature {
    TypeFormals type_formals;
    std::vector<ValueParam> params;
    Type result;

    TypeList param_types() const;

    /// Renames the method's own type formals to reserved names `$0`, `$1`, ...
    /// and erases value-parameter names. Two signatures are equal exactly when
    /// their canonical forms are structurally identical.
    Signature canonical() const;

    /// Applies a substitution to everything except the signature's own formals.
    /// The signature is canonicalised first so the formals cannot capture.
    Signature instantiate(const Substitution& eta) const;

    std::string str() const;
};

bool signature_equal(const Signature& a, const Signature& b);

/// Name-determined method set; ordered for deterministic iteration.
using MethodSet = std::map<std::string, Signature>;

struct MethodSpec {
    std::string name;
    Signature sig;
    SourcePos pos;
};

// ============================================================================
// Expressions
// ============================================================================

class Expr;
using ExprList = std::vector<Expr>;

enum class BinaryOp { Add, Greater, Equal, And };
const char* binary_op_text(BinaryOp op);

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    struct Var {
        std::string name;
    };
    struct Call;
    struct StructLit;
    struct Select;
    struct Assert;
    struct IntLit {
        std::int64_t value;
    };
    struct BoolLit {
        bool value;
    };
    struct StrLit {
        std::string value;
    };
    struct BinOp;
    struct Sprintf;

    using Variant = std::variant<Var, Call, StructLit, Select, Assert, IntLit, BoolLit, StrLit,
                                 BinOp, Sprintf>;

    Expr() = default;
    Expr(Variant v, SourcePos pos);

    bool valid() const { return node_ != nullptr; }
    const Variant& variant() const;
    SourcePos pos() const;

    template <class T>
    const T* get_if() const;
    template <class T>
    bool is() const;

    /// Identity of the underlying node; stable while any copy is alive.
    const void* id() const { return node_.get(); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct Expr::Call {
    Expr receiver;
    std::string method;
    TypeList type_args;
    ExprList args;
};
struct Expr::StructLit {
    Type type;
    ExprList args;
};
struct Expr::Select {
    Expr receiver;
    std::string field;
};
struct Expr::Assert {
    Expr receiver;
    Type type;
};
struct Expr::BinOp {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct Expr::Sprintf {
    std::string format;
    ExprList args;
};

struct Expr::Node {
    Variant v;
    SourcePos pos;
};

inline Expr::Expr(Variant v, SourcePos pos)
    : node_(std::make_shared<const Node>(Node{std::move(v), pos})) {}
inline const Expr::Variant& Expr::variant() const { return node_->v; }
inline SourcePos Expr::pos() const { return node_->pos; }
template <class T>
const T* Expr::get_if() const {
    return std::get_if<T>(&variant());
}
template <class T>
bool Expr::is() const {
    return std::holds_alternative<T>(variant());
}

Expr make_var(std::string name, SourcePos pos = {});
Expr make_call(Expr receiver, std::string method, TypeList type_args, ExprList args,
               SourcePos pos = {});
Expr make_struct_lit(Type type, ExprList args, SourcePos pos = {});
Expr make_select(Expr receiver, std::string field, SourcePos pos = {});
Expr make_assert(Expr receiver, Type type, SourcePos pos = {});
Expr make_int(std::int64_t value, SourcePos pos = {});
Expr make_bool(bool value, SourcePos pos = {});
Expr make_string(std::string value, SourcePos pos = {});
Expr make_binop(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos = {});
Expr make_sprintf(std::string format, ExprList args, SourcePos pos = {});

/// `v ::= τ_S{v̄}`, plus literals in extended mode.
bool is_value(const Expr& e);

/// The run-time type of a value: its structure type, or a primitive.
Type value_type(const Expr& v);

/// Simultaneous capture-free substitution of closed terms for variables.
Expr subst_vars(const Expr& e, const std::vector<std::pair<std::string, Expr>>& bindings);

/// Applies a type substitution to every type occurring in the expression.
Expr subst_types(const Expr& e, const Substitution& eta);

bool expr_mentions_var(const Expr& e, const std::string& name);

/// Number of method and type symbols (the enumeration size metric).
std::size_t symbol_count(const Expr& e);

// ============================================================================
// Declarations and programs
// ============================================================================

struct Field {
    std::string name;
    Type type;
};

struct TypeDecl {
    enum class Kind { Struct, Interface };

    std::string name;
    TypeFormals formals;
    Kind kind = Kind::Struct;
    std::vector<Field> fields;       // struct
    std::vector<MethodSpec> specs;   // interface
    std::vector<Type> embeds;        // interface, before expansion
    SourcePos pos;

    bool is_struct() const { return kind == Kind::Struct; }
    bool is_interface() const { return kind == Kind::Interface; }
};

struct MethodDecl {
    std::string receiver_name;
    std::string receiver_type;
    TypeFormals receiver_formals;
    std::string name;
    Signature sig;
    Expr body;
    SourcePos pos;

    /// `t_S(Φ̂)`: the receiver type as seen inside the body.
    Type receiver() const;
};

using Decl = std::variant<TypeDecl, MethodDecl>;

enum class Mode { FG, FGG };

/// A `var x T = e` line in `main`. The final line binds `_`.
struct MainBinding {
    std::string name;
    std::optional<Type> type;
    Expr init;
    SourcePos pos;
};

struct Program {
    Mode mode = Mode::FGG;
    bool extended = false;
    std::string file = "<input>";
    std::vector<Decl> decls;
    /// Named bindings of `main`, in order; the formal body is `body` with
    /// these substituted in (see `main_body`).
    std::vector<MainBinding> bindings;
    std::optional<Type> body_type;
    Expr body;
    SourcePos body_pos;

    const TypeDecl* find_type(const std::string& name) const;
    const MethodDecl* find_method(const std::string& receiver_type, const std::string& name) const;
    std::vector<const TypeDecl*> type_decls() const;
    std::vector<const MethodDecl*> method_decls() const;

    /// The single expression `e` of the formal program `D̄ ▷ e`.
    Expr main_body() const;
};

bool operator==(const Signature& a, const Signature& b);
bool operator==(const ValueParam& a, const ValueParam& b);
bool operator==(const MethodSpec& a, const MethodSpec& b);
bool operator==(const Field& a, const Field& b);
bool operator==(const TypeDecl& a, const TypeDecl& b);
bool operator==(const MethodDecl& a, const MethodDecl& b);
bool operator==(const MainBinding& a, const MainBinding& b);
/// Structural equality ignoring source positions and file name.
bool operator==(const Program& a, const Program& b);

/// Size metric of the enumerator: occurrences of method and type symbols.
std::size_t symbol_count(const Program& p);

/// Primitive types available in extended mode.
bool is_primitive_type_name(const std::string& name);

} // namespace fgo
