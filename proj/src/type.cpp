#include "fgo/type.hpp"

#include <algorithm>
#include <functional>

namespace fgo {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

Type Type::param(std::string name) {
    std::size_t h = mix(std::hash<std::string>{}(name), 0x51ed27);
    return Type(std::make_shared<const Node>(Node{Kind::Param, std::move(name), {}, h, false}));
}

Type Type::named(std::string name, TypeList args) {
    std::size_t h = mix(std::hash<std::string>{}(name), args.size());
    bool closed = true;
    for (const auto& a : args) {
        h = mix(h, a.hash());
        closed = closed && a.closed();
    }
    return Type(std::make_shared<const Node>(
        Node{Kind::Named, std::move(name), std::move(args), h, closed}));
}

bool Type::mentions(std::string_view p) const {
    if (closed()) return false;
    if (is_param()) return name() == p;
    return std::any_of(args().begin(), args().end(), [&](const Type& a) { return a.mentions(p); });
}

void Type::collect_params(std::vector<std::string>& out) const {
    if (closed()) return;
    if (is_param()) {
        if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
        return;
    }
    for (const auto& a : args()) a.collect_params(out);
}

std::size_t Type::symbol_count() const {
    if (is_param()) return 1;
    std::size_t n = 1;
    for (const auto& a : args()) n += a.symbol_count();
    return n;
}

bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name()) return false;
    return a.args() == b.args();
}

bool operator<(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return false;
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.name() != b.name()) return a.name() < b.name();
    return a.args() < b.args();
}

bool operator<(const TypeList& a, const TypeList& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Type& x, const Type& y) { return x < y; });
}

std::string Type::str() const {
    if (!node_) return "<invalid>";
    if (is_param() || args().empty()) return name();
    return name() + "(" + format_types(args()) + ")";
}

std::string format_types(const TypeList& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += ts[i].str();
    }
    return out;
}

TypeList formal_params(const TypeFormals& formals) {
    TypeList out;
    out.reserve(formals.size());
    for (const auto& f : formals) out.push_back(Type::param(f.param));
    return out;
}

// ============================================================================
// Substitution
// ============================================================================

Substitution::Substitution(const TypeFormals& formals, const TypeList& actuals) {
    const std::size_t n = std::min(formals.size(), actuals.size());
    map_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) map_.emplace_back(formals[i].param, actuals[i]);
}

void Substitution::bind(std::string param, Type t) {
    for (auto& [p, ty] : map_) {
        if (p == param) {
            ty = std::move(t);
            return;
        }
    }
    map_.emplace_back(std::move(param), std::move(t));
}

const Type* Substitution::lookup(std::string_view param) const {
    for (const auto& [p, t] : map_)
        if (p == param) return &t;
    return nullptr;
}

Type Substitution::apply(const Type& t) const {
    if (map_.empty() || t.closed()) return t;
    if (t.is_param()) {
        const Type* r = lookup(t.name());
        return r ? *r : t;
    }
    TypeList args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply(a));
        changed = changed || !(args.back() == a);
    }
    if (!changed) return t;
    return Type::named(t.name(), std::move(args));
}

TypeList Substitution::apply(const TypeList& ts) const {
    TypeList out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(apply(t));
    return out;
}

TypeFormals Substitution::apply(const TypeFormals& formals) const {
    TypeFormals out = formals;
    for (auto& f : out) f.bound = apply(f.bound);
    return out;
}

Substitution Substitution::extended(const Substitution& other) const {
    Substitution out = *this;
    for (const auto& [p, t] : other.map_)
        if (!out.lookup(p)) out.map_.emplace_back(p, t);
    return out;
}

std::string Substitution::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < map_.size(); ++i) {
        if (i) out += ", ";
        out += map_[i].first + " := " + map_[i].second.str();
    }
    return out + "}";
}

} // namespace fgo
