#include "support.hpp"

#include "fgo/fg_typing.hpp"
#include "fgo/monomorphise.hpp"
#include "fgo/parser.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#ifndef FGO_TEST_DIR
#error "FGO_TEST_DIR must name the tests directory"
#endif

namespace fgo::testing {

std::string test_path(const std::string& relative) { return std::string(FGO_TEST_DIR) + "/" + relative; }

std::vector<std::string> files_in(const std::string& dir, const std::string& ext) {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(test_path(dir)))
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

Program load(const std::string& relative) {
    std::string path = test_path(relative);
    Mode mode = path.size() > 4 && path.substr(path.size() - 4) == ".fgg" ? Mode::FGG : Mode::FG;
    return load_program(path, mode);
}

std::vector<Type> closed_types(const FggChecker& c, std::size_t max_size) {
    std::vector<std::pair<std::string, std::size_t>> heads;
    for (const TypeDecl* t : c.program().type_decls()) heads.emplace_back(t->name, t->formals.size());
    if (c.program().extended)
        for (const char* prim : {"int", "bool", "string"}) heads.emplace_back(prim, 0);

    std::vector<std::vector<Type>> by_size(max_size + 1);
    for (std::size_t k = 1; k <= max_size; ++k) {
        for (const auto& [name, arity] : heads) {
            if (arity == 0) {
                if (k == 1) by_size[k].push_back(Type::named(name));
                continue;
            }
            // Arguments with sizes summing to k - 1, each at least one.
            std::function<void(std::size_t, std::size_t, TypeList&)> go = [&](std::size_t i, std::size_t left,
                                                                               TypeList& args) {
                if (i == arity) {
                    if (left == 0) by_size[k].push_back(Type::named(name, args));
                    return;
                }
                for (std::size_t s = 1; s <= left; ++s)
                    for (const auto& t : by_size[s]) {
                        args.push_back(t);
                        go(i + 1, left - s, args);
                        args.pop_back();
                    }
            };
            TypeList args;
            go(0, k - 1, args);
        }
    }
    std::vector<Type> out;
    for (const auto& level : by_size)
        for (const auto& t : level)
            if (c.is_type_ok({}, t)) out.push_back(t);
    return out;
}

Violation check_implements_order(const FggChecker& c, const std::vector<Type>& types) {
    std::vector<std::vector<char>> rel(types.size(), std::vector<char>(types.size()));
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = 0; j < types.size(); ++j) rel[i][j] = c.implements({}, types[i], types[j]);
    for (std::size_t i = 0; i < types.size(); ++i)
        if (!rel[i][i]) return fmt::format("{} does not implement itself", types[i].str());
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = 0; j < types.size(); ++j) {
            if (!rel[i][j]) continue;
            for (std::size_t k = 0; k < types.size(); ++k)
                if (rel[j][k] && !rel[i][k])
                    return fmt::format("{} <: {} <: {} but not {} <: {}", types[i].str(), types[j].str(),
                                       types[k].str(), types[i].str(), types[k].str());
        }
    return std::nullopt;
}

Violation check_fg_implements_order(const Program& fg_program) {
    fg::Checker c(fg_program);
    std::vector<std::string> names;
    for (const TypeDecl* t : fg_program.type_decls()) names.push_back(t->name);
    const std::size_t n = names.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rel[i][j] = c.implements(names[i], names[j]);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rel[i][i]) return fmt::format("FG type {} does not implement itself", names[i]);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; rel[i][j] && k < n; ++k)
                if (rel[j][k] && !rel[i][k])
                    return fmt::format("FG: {} <: {} <: {} but not transitively", names[i], names[j], names[k]);
    }
    return std::nullopt;
}

Violation check_mangler_injective(const InstanceSet& omega) {
    NameMangler mangler;
    std::map<std::string, Type> seen;
    for (const auto& inst : omega) {
        if (inst.is_method()) continue;
        std::string name = mangler.type(inst.type);
        auto [it, fresh] = seen.emplace(name, inst.type);
        if (!fresh && it->second != inst.type)
            return fmt::format("{} and {} both mangle to {}", it->second.str(), inst.type.str(), name);
        auto back = mangler.demangle(name);
        if (!back || *back != inst.type)
            return fmt::format("demangling {} does not give back {}", name, inst.type.str());
    }
    return std::nullopt;
}

Violation check_dummy_hash(const FggChecker& c, const InstanceSet& omega) {
    std::vector<std::pair<std::string, Signature>> sigs;
    for (const auto& inst : omega) {
        if (inst.is_method() || !inst.type.is_named()) continue;
        const TypeDecl* d = c.decl(inst.type.name());
        if (!d) continue;
        Substitution eta(d->formals, inst.type.args());
        if (d->is_interface()) {
            for (const auto& s : d->specs) sigs.emplace_back(s.name, s.sig.instantiate(eta));
        } else {
            for (const MethodDecl* m : c.methods_of(d->name))
                if (auto theta = c.try_subst_checked({}, m->receiver_formals, inst.type.args()))
                    sigs.emplace_back(m->name, m->sig.instantiate(*theta));
        }
    }
    SignatureHasher hasher;
    for (std::size_t i = 0; i < sigs.size(); ++i)
        for (std::size_t j = 0; j < sigs.size(); ++j) {
            if (sigs[i].first != sigs[j].first) continue;
            bool same_number = hasher.number(sigs[i].first, sigs[i].second) ==
                               hasher.number(sigs[j].first, sigs[j].second);
            bool same_sig = signature_equal(sigs[i].second, sigs[j].second);
            if (same_number != same_sig)
                return fmt::format("{}: signatures {} and {} are {} but numbered {}", sigs[i].first,
                                   sigs[i].second.str(), sigs[j].second.str(), same_sig ? "equal" : "different",
                                   same_number ? "alike" : "apart");
        }
    return std::nullopt;
}

Violation check_subtyping_preserved(const FggChecker& c, const InstanceSet& omega, const Program& fg_program) {
    fg::Checker fc(fg_program);
    NameMangler mangler;
    std::vector<Type> types;
    for (const auto& inst : omega)
        if (!inst.is_method()) types.push_back(inst.type);
    for (const auto& t : types)
        for (const auto& u : types) {
            bool source = c.implements({}, t, u);
            bool target = fc.implements(mangler.type(t), mangler.type(u));
            if (source != target)
                return fmt::format("{} <: {} is {} in FGG but {} in FG", t.str(), u.str(), source, target);
        }
    return std::nullopt;
}

Violation check_properties(const Program& source, std::size_t type_size) {
    Program p = expand_embeddings(source);
    FggChecker c(p);
    if (auto v = check_implements_order(c, closed_types(c, type_size))) return v;
    MonoResult mono = mono_program(p);
    if (auto v = check_fg_implements_order(mono.program)) return v;
    if (auto v = check_mangler_injective(mono.omega)) return v;
    if (auto v = check_dummy_hash(c, mono.omega)) return v;
    return check_subtyping_preserved(c, mono.omega, mono.program);
}

std::string diff_lines(const std::string& expected, const std::string& actual) {
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream in(s);
        for (std::string line; std::getline(in, line);) out.push_back(line);
        return out;
    };
    std::vector<std::string> a = split(expected), b = split(actual);
    std::string out;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string* x = i < a.size() ? &a[i] : nullptr;
        const std::string* y = i < b.size() ? &b[i] : nullptr;
        if (x && y && *x == *y) continue;
        out += fmt::format("{:4}: - {}\n      + {}\n", i + 1, x ? *x : "", y ? *y : "");
    }
    return out;
}

} // namespace fgo::testing
