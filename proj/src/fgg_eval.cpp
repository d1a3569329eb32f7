#include "fgo/eval.hpp"

namespace fgo {

MethodBody FggMachine::body(const Type& ts, const std::string& method, const TypeList& psi) const {
    return checker_.body(ts, method, psi);
}

std::vector<Field> FggMachine::fields(const Type& ts) const { return checker_.fields(ts); }

bool FggMachine::implements(const Type& t, const Type& u) const {
    return checker_.implements({}, t, u);
}

Type FggMachine::type_of(const Expr& e) const { return checker_.type_expr({}, {}, e, true); }

StepResult step_fgg(const Program& p, const Expr& e) { return step(FggMachine(p), e); }

RunResult run_fgg(const Program& p, const RunOptions& opts) {
    return run(FggMachine(p), p.main_body(), opts);
}

} // namespace fgo
