#include "fgo/pretty.hpp"

#include <fmt/format.h>

namespace fgo {

std::string render_identifier(const std::string& name, Glyphs glyphs) {
    if (glyphs == Glyphs::Ascii || name.find_first_of("<>,") == std::string::npos) return name;
    std::string out;
    for (char c : name) {
        switch (c) {
        case '<': out += "ᐸ"; break;
        case '>': out += "ᐳ"; break;
        case ',': out += "ᐨ"; break;
        default: out += c;
        }
    }
    return out;
}

namespace {

class Printer {
public:
    explicit Printer(const PrettyOptions& o) : g_(o.glyphs) {}

    std::string id(const std::string& n) const { return render_identifier(n, g_); }

    std::string type(const Type& t) const {
        if (t.is_param() || t.args().empty()) return id(t.name());
        return id(t.name()) + "(" + types(t.args()) + ")";
    }

    std::string types(const TypeList& ts) const {
        std::string out;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) out += ", ";
            out += type(ts[i]);
        }
        return out;
    }

    std::string formals(const TypeFormals& fs) const {
        if (fs.empty()) return "";
        std::string out = "(type ";
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (i) out += ", ";
            out += fs[i].param + " " + type(fs[i].bound);
        }
        return out + ")";
    }

    std::string signature(const Signature& s) const {
        std::string out = formals(s.type_formals) + "(";
        for (std::size_t i = 0; i < s.params.size(); ++i) {
            if (i) out += ", ";
            out += s.params[i].name + " " + type(s.params[i].type);
        }
        return out + ") " + type(s.result);
    }

    static int precedence(BinaryOp op) {
        switch (op) {
        case BinaryOp::And: return 1;
        case BinaryOp::Equal:
        case BinaryOp::Greater: return 2;
        case BinaryOp::Add: return 3;
        }
        return 0;
    }

    std::string operand(const Expr& e, int min_prec) const {
        if (const auto* b = e.get_if<Expr::BinOp>(); b && precedence(b->op) < min_prec)
            return "(" + expr(e) + ")";
        return expr(e);
    }

    std::string exprs(const ExprList& es) const {
        std::string out;
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (i) out += ", ";
            out += expr(es[i]);
        }
        return out;
    }

    std::string expr(const Expr& e) const {
        if (const auto* v = e.get_if<Expr::Var>()) return v->name;
        if (const auto* c = e.get_if<Expr::Call>()) {
            std::string out = operand(c->receiver, 4) + "." + id(c->method);
            if (!c->type_args.empty()) out += "(" + types(c->type_args) + ")";
            return out + "(" + exprs(c->args) + ")";
        }
        if (const auto* s = e.get_if<Expr::StructLit>())
            return type(s->type) + "{" + exprs(s->args) + "}";
        if (const auto* f = e.get_if<Expr::Select>())
            return operand(f->receiver, 4) + "." + f->field;
        if (const auto* a = e.get_if<Expr::Assert>())
            return operand(a->receiver, 4) + ".(" + type(a->type) + ")";
        if (const auto* i = e.get_if<Expr::IntLit>()) return std::to_string(i->value);
        if (const auto* b = e.get_if<Expr::BoolLit>()) return b->value ? "true" : "false";
        if (const auto* s = e.get_if<Expr::StrLit>()) return quote(s->value);
        if (const auto* b = e.get_if<Expr::BinOp>()) {
            int p = precedence(b->op);
            return operand(b->lhs, p) + " " + binary_op_text(b->op) + " " + operand(b->rhs, p + 1);
        }
        if (const auto* s = e.get_if<Expr::Sprintf>()) {
            std::string out = "fmt.Sprintf(" + quote(s->format);
            for (const auto& a : s->args) out += ", " + expr(a);
            return out + ")";
        }
        return "?";
    }

    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
            }
        }
        return out + "\"";
    }

    std::string decl(const Decl& d) const {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            std::string head = "type " + id(t->name) + formals(t->formals);
            std::string body;
            if (t->is_struct()) {
                for (const auto& f : t->fields) body += "\t" + f.name + " " + type(f.type) + "\n";
                head += " struct {";
            } else {
                for (const auto& e : t->embeds) body += "\t" + type(e) + "\n";
                for (const auto& s : t->specs) body += "\t" + id(s.name) + signature(s.sig) + "\n";
                head += " interface {";
            }
            return body.empty() ? head + "}\n" : head + "\n" + body + "}\n";
        }
        const auto& m = std::get<MethodDecl>(d);
        return fmt::format("func ({} {}{}) {}{} {{\n\treturn {}\n}}\n", m.receiver_name,
                           id(m.receiver_type), formals(m.receiver_formals), id(m.name),
                           signature(m.sig), expr(m.body));
    }

    std::string program(const Program& p) const {
        std::string out = "package main\n\n";
        for (const auto& d : p.decls) out += decl(d);
        out += "func main() {\n";
        for (const auto& b : p.bindings)
            out += fmt::format("\tvar {} {} = {}\n", b.name, type(*b.type), expr(b.init));
        if (p.body_type)
            out += fmt::format("\tvar _ {} = {}\n", type(*p.body_type), expr(p.body));
        else
            out += "\t_ = " + expr(p.body) + "\n";
        return out + "}\n";
    }

private:
    Glyphs g_;
};

} // namespace

std::string pretty(const Type& t, const PrettyOptions& o) { return Printer(o).type(t); }
std::string pretty(const Expr& e, const PrettyOptions& o) { return Printer(o).expr(e); }
std::string pretty(const Signature& s, const PrettyOptions& o) { return Printer(o).signature(s); }
std::string pretty(const Decl& d, const PrettyOptions& o) { return Printer(o).decl(d); }
std::string pretty(const Program& p, const PrettyOptions& o) { return Printer(o).program(p); }

} // namespace fgo
