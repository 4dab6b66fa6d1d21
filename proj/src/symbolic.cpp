#include "orbitforge/symbolic.hpp"

#include <algorithm>
#include <sstream>

namespace orbitforge {

// --- interning ------------------------------------------------------------

static std::string node_key(const SymNode& n) {
    std::ostringstream os;
    switch (n.kind) {
        case SymKind::Exact: os << "E:" << n.exact.str(); break;
        case SymKind::BaseEval: os << "B:" << n.kernel << ":" << n.a.get(); break;
        case SymKind::Sum: os << "S:" << n.a.get() << ":" << n.b.get(); break;
        case SymKind::Product: os << "P:" << n.a.get() << ":" << n.b.get(); break;
        case SymKind::Quotient: os << "Q:" << n.a.get() << ":" << n.b.get(); break;
        case SymKind::Negation: os << "N:" << n.a.get(); break;
        case SymKind::IntPower: os << "I:" << n.a.get() << ":" << n.power; break;
    }
    return os.str();
}

SymValue SymContext::intern(SymNode&& n) {
    std::string key = node_key(n);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    auto sp = std::make_shared<SymNode>(std::move(n));
    nodes_.push_back(sp);
    table_.emplace(std::move(key), sp);
    return sp;
}

SymValue SymContext::exact(const GaussianRational& g) {
    SymNode n;
    n.kind = SymKind::Exact;
    n.exact = g;
    return intern(std::move(n));
}

SymValue SymContext::base_eval(int kernel, const SymValue& arg) {
    // Evaluation at 0 folds to the exact constant term.
    if (auto q = reduce_exact(arg)) {
        if (q->is_zero()) return exact(GaussianRational(kernel::taylor(kernel, 0)));
        SymNode n;
        n.kind = SymKind::BaseEval;
        n.kernel = kernel;
        n.a = exact(*q); // canonical exact argument node
        return intern(std::move(n));
    }
    SymNode n;
    n.kind = SymKind::BaseEval;
    n.kernel = kernel;
    n.a = arg;
    return intern(std::move(n));
}

SymValue SymContext::sum(const SymValue& x, const SymValue& y) {
    if (x->kind == SymKind::Exact && x->exact.is_zero()) return y;
    if (y->kind == SymKind::Exact && y->exact.is_zero()) return x;
    if (x->kind == SymKind::Exact && y->kind == SymKind::Exact) return exact(x->exact + y->exact);
    SymNode n;
    n.kind = SymKind::Sum;
    n.a = x;
    n.b = y;
    return intern(std::move(n));
}

SymValue SymContext::sum(const std::vector<SymValue>& xs) {
    if (xs.empty()) return exact(0L);
    SymValue acc = xs[0];
    for (size_t i = 1; i < xs.size(); ++i) acc = sum(acc, xs[i]);
    return acc;
}

SymValue SymContext::product(const SymValue& x, const SymValue& y) {
    if (x->kind == SymKind::Exact) {
        if (x->exact.is_zero()) return exact(0L);
        if (x->exact == GaussianRational(1)) return y;
    }
    if (y->kind == SymKind::Exact) {
        if (y->exact.is_zero()) return exact(0L);
        if (y->exact == GaussianRational(1)) return x;
    }
    if (x->kind == SymKind::Exact && y->kind == SymKind::Exact) return exact(x->exact * y->exact);
    SymNode n;
    n.kind = SymKind::Product;
    n.a = x;
    n.b = y;
    return intern(std::move(n));
}

SymValue SymContext::negation(const SymValue& x) {
    if (x->kind == SymKind::Exact) return exact(-x->exact);
    SymNode n;
    n.kind = SymKind::Negation;
    n.a = x;
    return intern(std::move(n));
}

SymValue SymContext::quotient(const SymValue& num, const SymValue& den) {
    if (auto q = reduce_exact(den)) {
        if (q->is_zero()) throw DivisionByEnclosedZero("exact zero denominator");
        if (num->kind == SymKind::Exact) return exact(num->exact / *q);
        SymNode n;
        n.kind = SymKind::Quotient;
        n.a = num;
        n.b = exact(*q);
        return intern(std::move(n));
    }
    // transcendental denominator: require an enclosure excluding zero
    bool witnessed = false;
    for (Prec p = pol_.start; p <= pol_.max; p *= 2) {
        try {
            if (enclose_at(den, p).surely_excludes_zero()) { witnessed = true; break; }
        } catch (const DivisionByEnclosedZero&) {
        }
    }
    if (!witnessed)
        throw DivisionByEnclosedZero("no nonzero witness for denominator at max precision");
    SymNode n;
    n.kind = SymKind::Quotient;
    n.a = num;
    n.b = den;
    return intern(std::move(n));
}

SymValue SymContext::int_power(const SymValue& x, long e) {
    if (e == 0) return exact(1L);
    if (e == 1) return x;
    if (x->kind == SymKind::Exact) {
        if (e > 0) return exact(x->exact.pow((unsigned long)e));
        if (x->exact.is_zero()) throw DivisionByEnclosedZero("0^negative");
        return exact(x->exact.inverse().pow((unsigned long)(-e)));
    }
    SymNode n;
    n.kind = SymKind::IntPower;
    n.a = x;
    n.power = e;
    return intern(std::move(n));
}

// --- normal form ------------------------------------------------------------

int SymContext::atom_id(int kernel, const GaussianRational& arg) {
    std::string key = std::to_string(kernel) + "|" + arg.str();
    auto it = atom_table_.find(key);
    if (it != atom_table_.end()) return it->second;
    int id = (int)atoms_.size();
    atoms_.emplace_back(kernel, arg);
    atom_table_.emplace(std::move(key), id);
    return id;
}

// Distinct ids for atoms that are whole opaque subtrees; disjoint from the
// kernel-eval id space (negative, one per interned node).
int SymContext::opaque_atom_id(const SymNode* n) {
    auto it = opaque_table_.find(n);
    if (it != opaque_table_.end()) return it->second;
    int id = -1 - (int)opaque_table_.size();
    opaque_table_.emplace(n, id);
    return id;
}

static void nf_add_term(NormalForm& nf, Monomial m, GaussianRational c) {
    if (c.is_zero()) return;
    auto it = nf.find(m);
    if (it == nf.end()) {
        nf.emplace(std::move(m), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) nf.erase(it);
    }
}

static NormalForm nf_scale(const NormalForm& a, const GaussianRational& c) {
    NormalForm out;
    if (c.is_zero()) return out;
    for (const auto& [m, k] : a) out.emplace(m, k * c);
    return out;
}

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) out.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    return out;
}

static NormalForm nf_mul(const NormalForm& a, const NormalForm& b) {
    NormalForm out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) nf_add_term(out, mono_mul(ma, mb), ca * cb);
    return out;
}

static Monomial mono_inv(const Monomial& m) {
    Monomial out = m;
    for (auto& [id, e] : out) e = -e;
    return out;
}

const NormalForm& SymContext::normal_form(const SymValue& v) {
    {
        std::lock_guard<std::mutex> g(v->mu);
        if (v->nf) return *v->nf;
    }
    NormalForm out;
    switch (v->kind) {
        case SymKind::Exact:
            if (!v->exact.is_zero()) out.emplace(Monomial{}, v->exact);
            break;
        case SymKind::BaseEval: {
            auto q = reduce_exact(v->a);
            if (q) {
                int id = atom_id(v->kernel, *q);
                out.emplace(Monomial{{id, 1}}, GaussianRational(1));
            } else {
                // opaque: the node itself is the atom; cancellation then
                // requires the shared (interned) subtree
                out.emplace(Monomial{{opaque_atom_id(v.get()), 1}}, GaussianRational(1));
            }
            break;
        }
        case SymKind::Sum: {
            out = normal_form(v->a);
            for (const auto& [m, c] : normal_form(v->b)) nf_add_term(out, m, c);
            break;
        }
        case SymKind::Product:
            out = nf_mul(normal_form(v->a), normal_form(v->b));
            break;
        case SymKind::Negation:
            out = nf_scale(normal_form(v->a), GaussianRational(-1));
            break;
        case SymKind::Quotient: {
            const NormalForm& d = normal_form(v->b);
            if (d.size() == 1) {
                const auto& [m, c] = *d.begin();
                out = nf_mul(normal_form(v->a), NormalForm{{mono_inv(m), c.inverse()}});
            } else {
                // unresolvable quotient: opaque atom
                out.emplace(Monomial{{opaque_atom_id(v.get()), 1}}, GaussianRational(1));
            }
            break;
        }
        case SymKind::IntPower: {
            const NormalForm& base = normal_form(v->a);
            long e = v->power;
            if (base.size() == 1) {
                const auto& [m, c] = *base.begin();
                Monomial mm = m;
                for (auto& [id, ex] : mm) ex = (int)(ex * e);
                std::erase_if(mm, [](auto& pe) { return pe.second == 0; });
                GaussianRational cc =
                    e >= 0 ? c.pow((unsigned long)e) : c.inverse().pow((unsigned long)(-e));
                out.emplace(std::move(mm), std::move(cc));
            } else if (e >= 0) {
                NormalForm acc{{Monomial{}, GaussianRational(1)}};
                NormalForm b = base;
                unsigned long ee = (unsigned long)e;
                while (ee) {
                    if (ee & 1) acc = nf_mul(acc, b);
                    ee >>= 1;
                    if (ee) b = nf_mul(b, b);
                }
                out = std::move(acc);
            } else {
                out.emplace(Monomial{{opaque_atom_id(v.get()), 1}}, GaussianRational(1));
            }
            break;
        }
    }
    std::lock_guard<std::mutex> g(v->mu);
    if (!v->nf) v->nf = std::make_shared<const NormalForm>(std::move(out));
    return *v->nf;
}

std::optional<GaussianRational> SymContext::reduce_exact(const SymValue& v) {
    if (v->kind == SymKind::Exact) return v->exact;
    const NormalForm& nf = normal_form(v);
    if (nf.empty()) return GaussianRational(0);
    if (nf.size() == 1 && nf.begin()->first.empty()) return nf.begin()->second;
    return std::nullopt;
}

bool SymContext::reduces_to_zero(const SymValue& v) {
    auto q = reduce_exact(v);
    return q && q->is_zero();
}

ExactnessTag SymContext::tag(const SymValue& v) {
    if (reduce_exact(v)) return ExactnessTag::exact_in_k;
    return ExactnessTag::transcendental_symbolic;
}

// --- enclosure ------------------------------------------------------------

ComplexBox SymContext::eval_box(const SymNode* n, Prec p) {
    {
        std::lock_guard<std::mutex> g(n->mu);
        if (n->has_box && n->box_prec >= p) return n->box;
    }
    ComplexBox out;
    switch (n->kind) {
        case SymKind::Exact: out = ComplexBox::exact(n->exact, p); break;
        case SymKind::BaseEval: out = kernel::eval(n->kernel, eval_box(n->a.get(), p), p); break;
        case SymKind::Sum: out = badd(eval_box(n->a.get(), p), eval_box(n->b.get(), p), p); break;
        case SymKind::Product: out = bmul(eval_box(n->a.get(), p), eval_box(n->b.get(), p), p); break;
        case SymKind::Negation: out = bneg(eval_box(n->a.get(), p), p); break;
        case SymKind::Quotient: out = bdiv(eval_box(n->a.get(), p), eval_box(n->b.get(), p), p); break;
        case SymKind::IntPower: {
            ComplexBox base = eval_box(n->a.get(), p);
            out = n->power >= 0 ? bpow_ui(base, (unsigned long)n->power, p)
                                : bpow_ui(binv(base, p), (unsigned long)(-n->power), p);
            break;
        }
    }
    std::lock_guard<std::mutex> g(n->mu);
    // keep the tighter enclosure; both contain the value
    if (!n->has_box || out.radius() < n->box.radius()) {
        n->box = out;
        n->box_prec = p;
        n->has_box = true;
        return out;
    }
    if (n->box_prec < p) n->box_prec = p;
    return n->box;
}

ComplexBox SymContext::enclose_at(const SymValue& v, Prec p) { return eval_box(v.get(), p); }

ComplexBox SymContext::enclose(const SymValue& v, const BigFloat& target_radius) {
    ComplexBox best;
    bool have = false;
    for (Prec p = pol_.start; p <= pol_.max; p *= 2) {
        try {
            ComplexBox bx = eval_box(v.get(), p);
            if (!have || bx.radius() < best.radius()) {
                best = bx;
                have = true;
            }
            if (best.is_bounded() && best.radius() <= target_radius) return best;
        } catch (const DivisionByEnclosedZero&) {
            if (p * 2 > pol_.max) throw;
        }
    }
    throw PrecisionExhausted("enclose: target radius " + target_radius.to_decimal(6) +
                             " unreachable at " + std::to_string(pol_.max) + " bits");
}

ComplexBox SymContext::enclose(const SymValue& v, const Rational& target_radius) {
    return enclose(v, BigFloat::from_rational(target_radius, 64, MPFR_RNDD));
}

// --- serialization ----------------------------------------------------------

static void dump_visit(const SymNode* n, SymGraphDump& d) {
    if (d.index.count(n)) return;
    switch (n->kind) {
        case SymKind::Exact: break;
        case SymKind::BaseEval:
        case SymKind::Negation: dump_visit(n->a.get(), d); break;
        case SymKind::IntPower: dump_visit(n->a.get(), d); break;
        case SymKind::Sum:
        case SymKind::Product:
        case SymKind::Quotient:
            dump_visit(n->a.get(), d);
            dump_visit(n->b.get(), d);
            break;
    }
    std::ostringstream os;
    switch (n->kind) {
        case SymKind::Exact: os << "exact " << n->exact.str(); break;
        case SymKind::BaseEval: os << "eval " << n->kernel << " " << d.index.at(n->a.get()); break;
        case SymKind::Sum: os << "sum " << d.index.at(n->a.get()) << " " << d.index.at(n->b.get()); break;
        case SymKind::Product:
            os << "mul " << d.index.at(n->a.get()) << " " << d.index.at(n->b.get());
            break;
        case SymKind::Quotient:
            os << "div " << d.index.at(n->a.get()) << " " << d.index.at(n->b.get());
            break;
        case SymKind::Negation: os << "neg " << d.index.at(n->a.get()); break;
        case SymKind::IntPower: os << "pow " << d.index.at(n->a.get()) << " " << n->power; break;
    }
    d.index.emplace(n, d.lines.size());
    d.lines.push_back(os.str());
}

SymGraphDump dump_symbolic(const std::vector<SymValue>& roots) {
    SymGraphDump d;
    for (const auto& r : roots) dump_visit(r.get(), d);
    return d;
}

std::vector<SymValue> load_symbolic(SymContext& ctx, const std::vector<std::string>& lines,
                                    const std::vector<size_t>& root_indices) {
    std::vector<SymValue> built;
    built.reserve(lines.size());
    for (const std::string& line : lines) {
        std::istringstream is(line);
        std::string op;
        is >> op;
        auto child = [&]() -> SymValue {
            size_t i;
            is >> i;
            if (i >= built.size()) throw StateError("symbolic node forward reference");
            return built[i];
        };
        if (op == "exact") {
            std::string rest;
            is >> rest;
            built.push_back(ctx.exact(GaussianRational::parse(rest)));
        } else if (op == "eval") {
            int k;
            is >> k;
            built.push_back(ctx.base_eval(k, child()));
        } else if (op == "sum") {
            SymValue x = child(), y = child();
            built.push_back(ctx.sum(x, y));
        } else if (op == "mul") {
            SymValue x = child(), y = child();
            built.push_back(ctx.product(x, y));
        } else if (op == "div") {
            SymValue x = child(), y = child();
            built.push_back(ctx.quotient(x, y));
        } else if (op == "neg") {
            built.push_back(ctx.negation(child()));
        } else if (op == "pow") {
            SymValue x = child();
            long e;
            is >> e;
            built.push_back(ctx.int_power(x, e));
        } else {
            throw StateError("unknown symbolic op '" + op + "'");
        }
    }
    std::vector<SymValue> roots;
    for (size_t i : root_indices) {
        if (i >= built.size()) throw StateError("symbolic root out of range");
        roots.push_back(built[i]);
    }
    return roots;
}

} // namespace orbitforge
