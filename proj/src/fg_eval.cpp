#include "fgo/eval.hpp"

#include <fmt/format.h>

namespace fgo {

MethodBody FgMachine::body(const Type& ts, const std::string& method, const TypeList& psi) const {
    if (!psi.empty()) type_error({}, "r-call", "type arguments in FG");
    const MethodDecl* m = p_.find_method(ts.name(), method);
    if (!m) type_error({}, "r-call", fmt::format("no method {} declared for {}", method, ts.str()));
    return {m->receiver_name, ts, m->sig.params, m->body};
}

std::vector<Field> FgMachine::fields(const Type& ts) const { return checker_.fields(ts.name()); }

bool FgMachine::implements(const Type& t, const Type& u) const {
    return checker_.implements(t.name(), u.name());
}

Type FgMachine::type_of(const Expr& e) const { return Type::named(checker_.type_expr({}, e, true)); }

StepResult step_fg(const Program& p, const Expr& e) { return step(FgMachine(p), e); }

RunResult run_fg(const Program& p, const RunOptions& opts) {
    return run(FgMachine(p), p.main_body(), opts);
}

} // namespace fgo
