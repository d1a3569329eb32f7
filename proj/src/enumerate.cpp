#include "fgo/enumerate.hpp"

#include "fgo/fgg_typing.hpp"
#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace fgo {

namespace {

const char* const kTypeParams[] = {"a", "b"};
const char* const kMethodParams[] = {"c", "d"};

std::string type_name(std::size_t i) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('A' + i % 26));
        i /= 26;
    } while (i-- > 0);
    return s;
}

std::string method_name(std::size_t i) { return fmt::format("m{}", i); }

/// A type constructor that generated types may apply.
struct Head {
    std::string name;
    std::size_t arity;
    bool interface;
};

/// Calls `fn` with every way of writing `total` as `n` ordered parts, each at
/// least `min`. Stops when `fn` returns false.
bool compositions(std::size_t total, std::size_t n, std::size_t min,
                  const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> parts(n, 0);
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i + 1 >= n) {
            if (n == 0) return left == 0 ? fn(parts) : true;
            if (left < min) return true;
            parts[i] = left;
            return fn(parts);
        }
        for (std::size_t k = min; k + min * (n - i - 1) <= left; ++k) {
            parts[i] = k;
            if (!go(i + 1, left - k)) return false;
        }
        return true;
    };
    return go(0, total);
}

/// Cartesian product of `lists`, one element from each.
template <class T>
bool product(const std::vector<const std::vector<T>*>& lists,
             const std::function<bool(const std::vector<T>&)>& fn) {
    std::vector<T> pick;
    pick.reserve(lists.size());
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
        if (i == lists.size()) return fn(pick);
        for (const auto& x : *lists[i]) {
            pick.push_back(x);
            bool more = go(i + 1);
            pick.pop_back();
            if (!more) return false;
        }
        return true;
    };
    return go(0);
}

/// Syntactic types of an exact size over some heads and parameters.
class TypeGen {
public:
    TypeGen(std::vector<Head> heads, std::vector<std::string> params)
        : heads_(std::move(heads)), params_(std::move(params)) {}

    const std::vector<Type>& of_size(std::size_t k) {
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        std::vector<Type> out;
        if (k == 1)
            for (const auto& p : params_) out.push_back(Type::param(p));
        if (k > 0) {
            for (const auto& h : heads_) {
                if (h.arity == 0) {
                    if (k == 1) out.push_back(Type::named(h.name));
                    continue;
                }
                compositions(k - 1, h.arity, 0, [&](const std::vector<std::size_t>& sizes) {
                    std::vector<const std::vector<Type>*> lists;
                    for (std::size_t s : sizes) lists.push_back(&of_size(s));
                    product<Type>(lists, [&](const TypeList& args) {
                        out.push_back(Type::named(h.name, args));
                        return true;
                    });
                    return true;
                });
            }
        }
        return memo_[k] = std::move(out);
    }

    bool is_interface_head(const Type& t) const {
        if (!t.is_named()) return false;
        for (const auto& h : heads_)
            if (h.name == t.name()) return h.interface;
        return false;
    }

    /// Lists of `n` types with sizes summing to `total`, each accepted by `keep`.
    bool lists(std::size_t n, std::size_t total, std::size_t min, const std::function<bool(const Type&)>& keep,
               const std::function<bool(const TypeList&)>& fn) {
        return compositions(total, n, min, [&](const std::vector<std::size_t>& sizes) {
            std::vector<std::vector<Type>> filtered;
            for (std::size_t s : sizes) {
                filtered.emplace_back();
                for (const auto& t : of_size(s))
                    if (keep(t)) filtered.back().push_back(t);
            }
            std::vector<const std::vector<Type>*> ptrs;
            for (const auto& f : filtered) ptrs.push_back(&f);
            return product<Type>(ptrs, fn);
        });
    }

private:
    std::vector<Head> heads_;
    std::vector<std::string> params_;
    std::map<std::size_t, std::vector<Type>> memo_;
};

struct Typed {
    Expr expr;
    Type type;
};

/// Well-typed expressions of an exact size in one typing context.
class ExprGen {
public:
    ExprGen(const FggChecker& c, std::vector<Head> heads, TypeEnv delta, ValueEnv gamma)
        : c_(c), delta_(std::move(delta)), gamma_(std::move(gamma)), types_(std::move(heads), params(delta_)) {}

    const std::vector<Typed>& of_size(std::size_t s) {
        if (auto it = memo_.find(s); it != memo_.end()) return it->second;
        std::vector<Typed> out;
        if (s == 0)
            for (const auto& [x, t] : gamma_) out.push_back({make_var(x), t});
        literals(s, out);
        calls(s, out);
        assertions(s, out);
        for (std::size_t i = 0; i < out.size(); ++i) {
            Type t = out[i].type;
            if (!c_.is_struct_type(t)) continue;
            for (const auto& f : c_.fields(t)) out.push_back({make_select(out[i].expr, f.name), f.type});
        }
        return memo_[s] = std::move(out);
    }

    /// Expressions of size `s` whose type implements `target`.
    std::vector<Expr> of_type(std::size_t s, const Type& target) {
        std::vector<Expr> out;
        for (const auto& x : of_size(s))
            if (c_.implements(delta_, x.type, target)) out.push_back(x.expr);
        return out;
    }

    TypeGen& types() { return types_; }
    const TypeEnv& delta() const { return delta_; }

private:
    static std::vector<std::string> params(const TypeEnv& delta) {
        std::vector<std::string> out;
        for (const auto& f : delta) out.push_back(f.param);
        return out;
    }

    bool type_ok(const Type& t) const { return c_.is_type_ok(delta_, t); }

    /// Argument lists of total size `total` matching `want` by `implements`.
    void arguments(const std::vector<Type>& want, std::size_t total,
                   const std::function<void(const ExprList&)>& fn) {
        compositions(total, want.size(), 0, [&](const std::vector<std::size_t>& sizes) {
            std::vector<std::vector<Expr>> cands;
            for (std::size_t i = 0; i < want.size(); ++i) {
                cands.push_back(of_type(sizes[i], want[i]));
                if (cands.back().empty()) return true;
            }
            std::vector<const std::vector<Expr>*> ptrs;
            for (const auto& c : cands) ptrs.push_back(&c);
            product<Expr>(ptrs, [&](const ExprList& args) {
                fn(args);
                return true;
            });
            return true;
        });
    }

    void literals(std::size_t s, std::vector<Typed>& out) {
        for (std::size_t k = 1; k <= s; ++k) {
            for (const auto& t : types_.of_size(k)) {
                if (!c_.is_struct_type(t) || !type_ok(t)) continue;
                std::vector<Type> want;
                for (const auto& f : c_.fields(t)) want.push_back(f.type);
                arguments(want, s - k, [&](const ExprList& args) { out.push_back({make_struct_lit(t, args), t}); });
            }
        }
    }

    void calls(std::size_t s, std::vector<Typed>& out) {
        if (s == 0) return;
        for (std::size_t j = 0; j < s; ++j) {
            for (const auto& r : of_size(j)) {
                MethodSet ms;
                try {
                    ms = c_.methods(delta_, r.type);
                } catch (const TypeError&) {
                    continue;
                }
                std::size_t rest = s - 1 - j;
                for (const auto& [name, sig] : ms) {
                    std::size_t n = sig.type_formals.size();
                    for (std::size_t psi_size = 0; psi_size <= rest; ++psi_size) {
                        types_.lists(n, psi_size, 0, [&](const Type& t) { return type_ok(t); },
                                     [&](const TypeList& psi) {
                                         auto eta = c_.try_subst_checked(delta_, sig.type_formals, psi);
                                         if (!eta) return true;
                                         std::vector<Type> want;
                                         for (const auto& p : sig.params) want.push_back(eta->apply(p.type));
                                         Type result = eta->apply(sig.result);
                                         arguments(want, rest - psi_size, [&](const ExprList& args) {
                                             out.push_back({make_call(r.expr, name, psi, args), result});
                                         });
                                         return true;
                                     });
                    }
                }
            }
        }
    }

    void assertions(std::size_t s, std::vector<Typed>& out) {
        for (std::size_t j = 0; j < s; ++j) {
            for (const auto& r : of_size(j)) {
                for (const auto& t : types_.of_size(s - j)) {
                    Expr e = make_assert(r.expr, t);
                    try {
                        out.push_back({e, c_.type_expr(delta_, gamma_, e, false)});
                    } catch (const TypeError&) {
                    }
                }
            }
        }
    }

    const FggChecker& c_;
    TypeEnv delta_;
    ValueEnv gamma_;
    TypeGen types_;
    std::map<std::size_t, std::vector<Typed>> memo_;
};

class Enumerator {
public:
    Enumerator(const EnumerateOptions& opts, const ProgramSink& sink) : opts_(opts), sink_(sink) {}

    std::size_t run() {
        for (std::size_t s = std::max<std::size_t>(opts_.min_size, 1); s <= opts_.max_size && !stopped_; ++s) {
            size_ = s;
            type_decls(0, 0, 0);
        }
        return yielded_;
    }

private:
    // Smallest method declaration plus the smallest main.
    static constexpr std::size_t kMethodsAndMainMin = 3;

    std::vector<Head> heads(std::size_t upto, bool with_self, const TypeDecl* self) const {
        std::vector<Head> out;
        for (std::size_t i = 0; i < upto; ++i)
            out.push_back({types_[i].name, types_[i].formals.size(), types_[i].is_interface()});
        if (with_self) out.push_back({self->name, self->formals.size(), self->is_interface()});
        return out;
    }

    std::vector<Head> all_heads() const { return heads(types_.size(), false, nullptr); }

    Program program(const std::vector<MethodDecl>& methods) const {
        Program p;
        p.mode = Mode::FGG;
        p.file = "<enumerated>";
        for (const auto& t : types_) p.decls.emplace_back(t);
        for (const auto& m : methods) p.decls.emplace_back(m);
        return p;
    }

    bool types_ok() const {
        Program p = program({});
        return FggChecker(p).check_types().empty();
    }

    std::vector<std::string> names(const char* const* pool, std::size_t n) const {
        return std::vector<std::string>(pool, pool + n);
    }

    // ------------------------------------------------------------------ types

    void type_decls(std::size_t used, std::size_t empty_interfaces, std::size_t empty_structs) {
        if (stopped_) return;
        if (!types_.empty()) {
            bool field = std::any_of(types_.begin(), types_.end(),
                                     [](const TypeDecl& t) { return t.is_struct() && !t.fields.empty(); });
            bool has_struct = std::any_of(types_.begin(), types_.end(), [](const TypeDecl& t) { return t.is_struct(); });
            if ((field || !opts_.require_field) && has_struct) {
                methods_.clear();
                method_decls(used, 0, 0);
            }
        }
        if (used + 1 + kMethodsAndMainMin > size_) return;
        std::size_t budget = size_ - used - kMethodsAndMainMin;
        for (std::size_t d = 1; d <= budget && !stopped_; ++d) {
            for (bool iface : {false, true}) {
                one_type_decl(d, iface, [&] {
                    std::size_t empty_i = empty_interfaces, empty_s = empty_structs;
                    const TypeDecl& t = types_.back();
                    if (t.is_interface() && t.specs.empty()) ++empty_i;
                    if (t.is_struct() && t.fields.empty()) ++empty_s;
                    if (empty_i > opts_.max_empty_interfaces || empty_s > opts_.max_empty_structs) return;
                    if (!types_ok()) return;
                    type_decls(used + d, empty_i, empty_s);
                });
            }
        }
    }

    /// Every type declaration of size exactly `d`, appended to `types_` while
    /// `fn` runs.
    void one_type_decl(std::size_t d, bool iface, const std::function<void()>& fn) {
        TypeDecl decl;
        decl.name = type_name(types_.size());
        decl.kind = iface ? TypeDecl::Kind::Interface : TypeDecl::Kind::Struct;
        std::size_t rest = d - 1;
        for (std::size_t n = 0; n <= opts_.max_type_params && n <= rest && !stopped_; ++n) {
            decl.formals.clear();
            for (std::size_t i = 0; i < n; ++i) decl.formals.push_back({kTypeParams[i], Type()});
            TypeGen bound_types(heads(types_.size(), true, &decl), names(kTypeParams, n));
            for (std::size_t bsize = n; bsize <= rest && !stopped_; ++bsize) {
                bound_types.lists(
                    n, bsize, 1, [&](const Type& t) { return bound_types.is_interface_head(t); },
                    [&](const TypeList& bounds) {
                        for (std::size_t i = 0; i < n; ++i) decl.formals[i].bound = bounds[i];
                        if (iface)
                            interface_body(decl, rest - bsize, fn);
                        else
                            struct_body(decl, rest - bsize, fn);
                        return !stopped_;
                    });
            }
        }
    }

    void struct_body(TypeDecl& decl, std::size_t size, const std::function<void()>& fn) {
        TypeGen field_types(heads(types_.size(), false, nullptr), names(kTypeParams, decl.formals.size()));
        for (std::size_t nf = 0; nf <= opts_.max_fields && !stopped_; ++nf) {
            field_types.lists(nf, size, 0, [](const Type&) { return true; }, [&](const TypeList& ts) {
                decl.fields.clear();
                for (std::size_t i = 0; i < nf; ++i) decl.fields.push_back({fmt::format("f{}", i), ts[i]});
                types_.push_back(decl);
                fn();
                types_.pop_back();
                return !stopped_;
            });
        }
    }

    void interface_body(TypeDecl& decl, std::size_t size, const std::function<void()>& fn) {
        decl.specs.clear();
        specs(decl, size, 0, fn);
    }

    /// Appends specifications with names above `min_name` totalling `size`.
    void specs(TypeDecl& decl, std::size_t size, std::size_t min_name, const std::function<void()>& fn) {
        if (stopped_) return;
        if (size == 0) {
            types_.push_back(decl);
            fn();
            types_.pop_back();
        }
        if (decl.specs.size() >= opts_.max_specs || size == 0) return;
        std::size_t saved_pool = pool_;
        for (std::size_t name = min_name; name <= pool_ && !stopped_; ++name) {
            bool fresh = name == pool_;
            if (fresh) ++pool_;
            std::vector<Head> hs = heads(types_.size(), true, &decl);
            for (std::size_t sz = 1; sz <= size && !stopped_; ++sz) {
                signatures(hs, names(kTypeParams, decl.formals.size()), sz - 1, [&](const Signature& sig) {
                    decl.specs.push_back({method_name(name), sig, {}});
                    specs(decl, size - sz, name + 1, fn);
                    decl.specs.pop_back();
                });
            }
            if (fresh) pool_ = saved_pool;
        }
    }

    /// Signatures of exactly `size` whose types range over `hs` and the
    /// enclosing parameters plus the signature's own.
    void signatures(const std::vector<Head>& hs, const std::vector<std::string>& outer, std::size_t size,
                    const std::function<void(const Signature&)>& fn) {
        for (std::size_t n = 0; n <= opts_.max_type_params && n <= size && !stopped_; ++n) {
            std::vector<std::string> scope = outer;
            for (std::size_t i = 0; i < n; ++i) scope.push_back(kMethodParams[i]);
            TypeGen tg(hs, scope);
            for (std::size_t bsize = n; bsize <= size && !stopped_; ++bsize) {
                tg.lists(n, bsize, 1, [&](const Type& t) { return tg.is_interface_head(t); },
                         [&](const TypeList& bounds) {
                             Signature sig;
                             for (std::size_t i = 0; i < n; ++i) sig.type_formals.push_back({kMethodParams[i], bounds[i]});
                             for (std::size_t np = 0; np <= opts_.max_params && !stopped_; ++np) {
                                 tg.lists(np + 1, size - bsize, 0, [](const Type&) { return true; },
                                          [&](const TypeList& ts) {
                                              sig.params.clear();
                                              for (std::size_t i = 0; i < np; ++i)
                                                  sig.params.push_back({fmt::format("y{}", i), ts[i]});
                                              sig.result = ts[np];
                                              fn(sig);
                                              return !stopped_;
                                          });
                             }
                             return !stopped_;
                         });
            }
        }
    }

    // ---------------------------------------------------------------- methods

    void method_decls(std::size_t used, std::size_t min_recv, std::size_t min_name) {
        if (stopped_) return;
        if (!methods_.empty() || !opts_.require_method) bodies(used);
        if (used + kMethodsAndMainMin > size_) return;
        std::size_t budget = size_ - used - 1;
        std::size_t saved_pool = pool_;
        for (std::size_t r = min_recv; r < types_.size() && !stopped_; ++r) {
            const TypeDecl& recv = types_[r];
            if (!recv.is_struct()) continue;
            for (std::size_t name = (r == min_recv ? min_name : 0); name <= pool_ && !stopped_; ++name) {
                bool fresh = name == pool_;
                if (fresh) ++pool_;
                for (std::size_t d = 2; d <= budget && !stopped_; ++d)
                    one_method(recv, name, d, [&] { method_decls(used + d, r, name + 1); });
                if (fresh) pool_ = saved_pool;
            }
        }
    }

    void one_method(const TypeDecl& recv, std::size_t name, std::size_t d, const std::function<void()>& fn) {
        std::size_t n = recv.formals.size();
        MethodDecl m;
        m.receiver_name = "x";
        m.receiver_type = recv.name;
        m.name = method_name(name);
        m.body = make_var("x");
        std::vector<Head> hs = all_heads();
        TypeGen bound_types(hs, names(kTypeParams, n));
        std::size_t rest = d - 2;
        for (std::size_t bsize = n; bsize <= rest && !stopped_; ++bsize) {
            bound_types.lists(n, bsize, 1, [&](const Type& t) { return bound_types.is_interface_head(t); },
                              [&](const TypeList& bounds) {
                                  m.receiver_formals.clear();
                                  for (std::size_t i = 0; i < n; ++i) m.receiver_formals.push_back({kTypeParams[i], bounds[i]});
                                  signatures(hs, names(kTypeParams, n), rest - bsize, [&](const Signature& sig) {
                                      m.sig = sig;
                                      methods_.push_back(m);
                                      Program p = program(methods_);
                                      bool ok = true;
                                      try {
                                          FggChecker(p).check_method_signature(m);
                                      } catch (const TypeError&) {
                                          ok = false;
                                      }
                                      if (ok) fn();
                                      methods_.pop_back();
                                  });
                                  return !stopped_;
                              });
        }
    }

    // ----------------------------------------------------------------- bodies

    void bodies(std::size_t used) {
        if (used + 1 > size_) return;
        Program p = program(methods_);
        FggChecker c(p);
        std::vector<Head> hs = all_heads();
        std::vector<ExprGen> gens;
        std::vector<Type> results;
        for (const auto& m : methods_) {
            ValueEnv gamma{{m.receiver_name, m.receiver()}};
            for (const auto& v : m.sig.params) gamma.emplace_back(v.name, v.type);
            gens.emplace_back(c, hs, c.check_method_signature(m), std::move(gamma));
            results.push_back(m.sig.result);
        }
        ExprGen main_gen(c, hs, {}, {});
        std::size_t left = size_ - used;
        std::vector<Expr> chosen(methods_.size());

        std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t budget) {
            if (stopped_) return;
            if (i == methods_.size()) {
                for (const auto& x : main_gen.of_size(budget)) {
                    Program out = p;
                    std::size_t k = 0;
                    for (auto& d : out.decls)
                        if (auto* md = std::get_if<MethodDecl>(&d)) md->body = chosen[k++];
                    out.body = x.expr;
                    ++yielded_;
                    if (!sink_(out)) {
                        stopped_ = true;
                        return;
                    }
                }
                return;
            }
            for (std::size_t b = 0; b < budget && !stopped_; ++b) {
                for (const auto& e : gens[i].of_type(b, results[i])) {
                    chosen[i] = e;
                    go(i + 1, budget - b);
                    if (stopped_) return;
                }
            }
        };
        go(0, left);
    }

    const EnumerateOptions& opts_;
    const ProgramSink& sink_;
    std::size_t size_ = 0;
    std::size_t yielded_ = 0;
    bool stopped_ = false;
    /// Method names in use are `m0` up to but excluding `m<pool_>`.
    std::size_t pool_ = 0;
    std::vector<TypeDecl> types_;
    std::vector<MethodDecl> methods_;
};

} // namespace

std::size_t enumerate(const EnumerateOptions& opts, const ProgramSink& sink) {
    return Enumerator(opts, sink).run();
}

std::vector<std::size_t> enumerate_counts(const EnumerateOptions& opts) {
    std::vector<std::size_t> out(opts.max_size + 1, 0);
    enumerate(opts, [&](const Program& p) {
        std::size_t n = symbol_count(p);
        if (n < out.size()) ++out[n];
        return true;
    });
    return out;
}

// ============================================================================
// Pipeline
// ============================================================================

std::string PipelineReport::str() const {
    std::string out = fmt::format("{} programs: {} passed, {} skipped (not monomorphisable), {} ill typed, "
                                  "{} failures ({:.1f}s)",
                                  programs, passed, skipped, ill_typed, failures.size(), seconds);
    for (const auto& f : failures)
        out += fmt::format("\n--- program #{}\n{}\n{}", f.index, pretty(f.program), f.verdict.str());
    return out;
}

namespace {

bool well_typed(const Program& p) { return check_program_fgg(expand_embeddings(p)).empty(); }

} // namespace

Program shrink(const Program& p, const std::function<bool(const Program&)>& still_fails) {
    Program cur = p;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = cur.decls.size(); i-- > 0;) {
            Program q = cur;
            q.decls.erase(q.decls.begin() + static_cast<std::ptrdiff_t>(i));
            if (well_typed(q) && still_fails(q)) {
                cur = std::move(q);
                progress = true;
            }
        }
    }
    return cur;
}

PipelineReport fuzz_pipeline(const PipelineOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    PipelineReport rep;
    std::size_t workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());

    std::mutex mu;
    std::condition_variable not_empty, not_full;
    std::deque<std::pair<std::size_t, Program>> queue;
    bool done = false;
    std::atomic<std::size_t> passed{0}, skipped{0}, ill{0}, failed{0};
    std::vector<PipelineFailure> failures;
    const std::size_t capacity = 4096;

    auto work = [&] {
        for (;;) {
            std::pair<std::size_t, Program> item;
            {
                std::unique_lock lock(mu);
                not_empty.wait(lock, [&] { return done || !queue.empty(); });
                if (queue.empty()) return;
                item = std::move(queue.front());
                queue.pop_front();
                not_full.notify_one();
            }
            const auto& [index, prog] = item;
            if (!well_typed(prog)) {
                ++ill;
                BisimVerdict v;
                v.kind = BisimVerdict::Kind::Desync;
                v.detail = "generated program is ill typed: " +
                           format_diagnostics(check_program_fgg(expand_embeddings(prog)));
                std::lock_guard lock(mu);
                failures.push_back({index, prog, v});
                continue;
            }
            BisimVerdict v = bisim_run(prog, opts.bisim);
            if (v.kind == BisimVerdict::Kind::Pass) {
                ++passed;
            } else if (v.kind == BisimVerdict::Kind::Skipped) {
                ++skipped;
            } else {
                ++failed;
                std::lock_guard lock(mu);
                failures.push_back({index, prog, v});
            }
        }
    };

    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    rep.programs = enumerate(opts.enumerate, [&](const Program& p) {
        std::unique_lock lock(mu);
        not_full.wait(lock, [&] { return queue.size() < capacity; });
        queue.emplace_back(rep.programs++, p);
        not_empty.notify_one();
        return opts.stop_after == 0 || failed.load() + ill.load() < opts.stop_after;
    });
    {
        std::lock_guard lock(mu);
        done = true;
    }
    not_empty.notify_all();
    for (auto& t : pool) t.join();

    std::sort(failures.begin(), failures.end(),
              [](const PipelineFailure& a, const PipelineFailure& b) { return a.index < b.index; });
    if (opts.stop_after && failures.size() > opts.stop_after) failures.resize(opts.stop_after);
    if (opts.shrink) {
        for (auto& f : failures) {
            if (!well_typed(f.program)) continue;
            BisimVerdict::Kind kind = f.verdict.kind;
            f.program = shrink(f.program, [&](const Program& q) {
                BisimVerdict v = bisim_run(q, opts.bisim);
                return v.kind == kind;
            });
            f.verdict = bisim_run(f.program, opts.bisim);
        }
    }
    rep.passed = passed;
    rep.skipped = skipped;
    rep.ill_typed = ill;
    rep.failures = std::move(failures);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace fgo
