#pragma once

#include "fgo/instances.hpp"
#include "fgo/monocheck.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fgo {

/// Deliberate translation faults, used to check that the test pipeline
/// notices a broken monomorphiser.
enum class Mutation {
    None,
    OmitDummies,          // no dummy specifications or methods
    ConstantDummyHash,    // every dummy method gets the same number
    SkipStructExtension,  // instance set computed without S-ext
    SkipInterfaceExtension,  // instance set computed without I-ext
    EraseAssertions,      // `e.(τ)` translated as `e`
};

const char* mutation_name(Mutation m);
std::vector<Mutation> all_mutations();

/// Closed types to FG identifiers: `List(int)` becomes `List<int>`.
/// Identifiers are kept with ASCII brackets; the pretty printer substitutes
/// other glyphs on output.
class NameMangler {
public:
    /// With `explicit_empty_args`, nullary types print as `t<>` when they
    /// appear as arguments, as in `f<g<>,h<>>`.
    explicit NameMangler(bool explicit_empty_args = false) : explicit_empty_(explicit_empty_args) {}

    std::string type(const Type& closed) const;
    std::string method(const std::string& m, const TypeList& psi) const;
    std::string dummy(const std::string& m, std::size_t k) const;

    /// Inverse of `type` on its image; nothing for other strings.
    std::optional<Type> demangle(const std::string& id) const;

private:
    std::string arg(const Type& t) const;
    bool explicit_empty_;
};

/// Numbers alpha-equivalence classes of method specifications in order of
/// first request.
class SignatureHasher {
public:
    explicit SignatureHasher(bool constant = false) : constant_(constant) {}

    /// Canonical text of `m` with signature `sig`.
    static std::string key(const std::string& m, const Signature& sig);

    std::size_t number(const std::string& m, const Signature& sig);
    std::size_t size() const { return numbers_.size(); }

private:
    bool constant_;
    std::map<std::string, std::size_t> numbers_;
};

struct MonoOptions {
    bool explicit_empty_args = false;
    Mutation mutation = Mutation::None;
    OmegaOptions omega;
    /// Check the output with the FG checker and raise InternalError on failure.
    bool check_output = true;
};

/// Raised when the source program is rejected by the monomorphisability check.
class NomonoError : public Error {
public:
    NomonoError(Diagnostic d, std::vector<OccursWitness> ws) : Error(std::move(d)), witnesses(std::move(ws)) {}
    std::vector<OccursWitness> witnesses;
};

/// The translation of one program under its instance set.
class Monomorphiser {
public:
    Monomorphiser(const FggChecker& c, InstanceSet omega, MonoOptions opts = {});

    const InstanceSet& omega() const { return omega_; }
    const NameMangler& mangler() const { return mangler_; }
    const std::string& top_name() const { return top_; }

    /// `η ⊢ τ ↦ t†`, as a nullary FG type.
    Type type(const Substitution& eta, const Type& t) const;
    /// `η ⊢ e ↦ e†`.
    Expr expr(const Substitution& eta, const Expr& e) const;
    /// `η; μ ⊢ S ↦ 𝒮`. `mu` holds the type arguments of the required instances of `s`.
    std::vector<MethodSpec> spec(const Substitution& eta, const std::vector<TypeList>& mu,
                                 const MethodSpec& s);
    /// `Ω ⊢ D ↦ 𝒟`.
    std::vector<Decl> decl(const Decl& d);
    /// The whole FG program, declarations sorted by name.
    Program program();

    /// Name of the dummy method for specification `m` with signature `sig`.
    std::string dummy_name(const std::string& m, const Signature& sig);

private:
    Signature sig(const Substitution& theta, const Signature& s) const;
    MethodSpec dummy_spec(const std::string& m, const Signature& instantiated, SourcePos pos);

    const FggChecker& c_;
    InstanceSet omega_;
    MonoOptions opts_;
    NameMangler mangler_;
    SignatureHasher hasher_;
    std::string top_;
};

struct MonoResult {
    Program program;
    InstanceSet omega;
};

/// `⊢ P ↦ P†`. Raises NomonoError, or InternalError when the instance
/// budget runs out or the output does not type check.
MonoResult mono_program(const Program& p, const MonoOptions& opts = {});

/// Canonical form of an FG program for comparisons that ignore declaration
/// order and the numbering of dummy methods: dummies are renumbered by first
/// appearance in the sorted output.
Program normalise_fg(const Program& p);

} // namespace fgo
