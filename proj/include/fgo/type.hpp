#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fgo {

class Type;
using TypeList = std::vector<Type>;

/// A type is either a type parameter `a` or a named type `t(τ̄)`.
///
/// FG types are the degenerate case: named with no arguments. Types are
/// immutable and cheap to copy (a shared node plus a cached structural hash).
class Type {
public:
    enum class Kind { Param, Named };

    Type() = default;

    static Type param(std::string name);
    static Type named(std::string name, TypeList args = {});

    bool valid() const { return node_ != nullptr; }
    Kind kind() const { return node_->kind; }
    bool is_param() const { return node_->kind == Kind::Param; }
    bool is_named() const { return node_->kind == Kind::Named; }
    const std::string& name() const { return node_->name; }
    const TypeList& args() const { return node_->args; }
    std::size_t hash() const { return node_->hash; }

    /// True when no type parameter occurs anywhere in the type.
    bool closed() const { return node_->closed; }
    bool mentions(std::string_view param) const;
    void collect_params(std::vector<std::string>& out) const;

    /// Occurrences of type names and type parameters in the type.
    std::size_t symbol_count() const;

    friend bool operator==(const Type& a, const Type& b);
    friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
    /// Total structural order, used for deterministic output.
    friend bool operator<(const Type& a, const Type& b);

    std::string str() const;

private:
    struct Node {
        Kind kind;
        std::string name;
        TypeList args;
        std::size_t hash;
        bool closed;
    };
    explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

struct TypeHash {
    std::size_t operator()(const Type& t) const { return t.hash(); }
};

std::string format_types(const TypeList& ts);
bool operator<(const TypeList& a, const TypeList& b);

/// One entry of a type-formal list: `a Bound`.
struct TypeFormal {
    std::string param;
    Type bound;

    friend bool operator==(const TypeFormal&, const TypeFormal&) = default;
};
using TypeFormals = std::vector<TypeFormal>;

/// The parameters of a formal list, as types (Φ̂).
TypeList formal_params(const TypeFormals& formals);

/// Simultaneous substitution of type parameters by types.
class Substitution {
public:
    Substitution() = default;
    Substitution(const TypeFormals& formals, const TypeList& actuals);

    void bind(std::string param, Type t);
    const Type* lookup(std::string_view param) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::vector<std::pair<std::string, Type>>& entries() const { return map_; }

    Type apply(const Type& t) const;
    TypeList apply(const TypeList& ts) const;
    TypeFormals apply(const TypeFormals& formals) const;

    /// Entries of `other` that are not already bound here are appended.
    Substitution extended(const Substitution& other) const;

    std::string str() const;

private:
    std::vector<std::pair<std::string, Type>> map_;
};

} // namespace fgo
