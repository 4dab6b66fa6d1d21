#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "orbitforge/complexbox.hpp"
#include "orbitforge/kernels.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

struct PrecPolicy {
    Prec start = 128;
    Prec max = 8192;
};

enum class ExactnessTag { exact_in_k, exact_algebraic, transcendental_symbolic };

class SymNode;
using SymValue = std::shared_ptr<const SymNode>;

enum class SymKind { Exact, BaseEval, Sum, Product, Quotient, Negation, IntPower };

// Normal form: K-linear combination of monomials in interned atoms, where an
// atom is a kernel evaluated at an exact K-point (known transcendental, hence
// invertible). A value reduces to an element of K iff its normal form is a
// bare constant. Rewrites only ever preserve the value, so a constant normal
// form is a proof of exactness; a non-constant one is only "not reduced".
using Monomial = std::vector<std::pair<int, int>>; // (atom id, exponent != 0), sorted by id
using NormalForm = std::map<Monomial, GaussianRational>;

class SymNode {
  public:
    SymKind kind;
    GaussianRational exact;       // Exact
    int kernel = -1;              // BaseEval
    SymValue a, b;                // children
    long power = 0;               // IntPower

    // enclosure cache: smallest-radius box computed so far and its precision
    mutable std::mutex mu;
    mutable bool has_box = false;
    mutable Prec box_prec = 0;
    mutable ComplexBox box;
    mutable std::shared_ptr<const NormalForm> nf;

    SymNode() = default;
    SymNode(SymNode&& o) noexcept
        : kind(o.kind), exact(std::move(o.exact)), kernel(o.kernel), a(std::move(o.a)),
          b(std::move(o.b)), power(o.power) {}
};

// Owns and interns the DAG. Structurally identical subtrees share one node,
// so equality of construction paths becomes pointer equality.
class SymContext {
  public:
    explicit SymContext(PrecPolicy pol = {}) : pol_(pol) {}

    const PrecPolicy& policy() const { return pol_; }
    void set_policy(PrecPolicy p) { pol_ = p; }

    SymValue exact(const GaussianRational& g);
    SymValue exact(long n) { return exact(GaussianRational(n)); }
    SymValue exact(const Rational& q) { return exact(GaussianRational(q)); }
    SymValue base_eval(int kernel, const SymValue& arg);
    SymValue sum(const SymValue& x, const SymValue& y);
    SymValue sum(const std::vector<SymValue>& xs);
    SymValue product(const SymValue& x, const SymValue& y);
    SymValue negation(const SymValue& x);
    // Requires a nonzero witness for the denominator: an exact nonzero
    // reduction, or an enclosure excluding zero within the precision policy.
    SymValue quotient(const SymValue& num, const SymValue& den);
    SymValue int_power(const SymValue& x, long e);

    std::optional<GaussianRational> reduce_exact(const SymValue& v);
    bool reduces_to_zero(const SymValue& v);
    ExactnessTag tag(const SymValue& v);

    // Box containing the value with radius <= target; refines by doubling
    // precision from policy().start up to policy().max.
    ComplexBox enclose(const SymValue& v, const BigFloat& target_radius);
    ComplexBox enclose(const SymValue& v, const Rational& target_radius);
    // Single pass at fixed precision (still sound; radius best-effort).
    ComplexBox enclose_at(const SymValue& v, Prec p);

    const NormalForm& normal_form(const SymValue& v);

    // atom table (kernel eval at exact point)
    int atom_id(int kernel, const GaussianRational& arg);
    std::pair<int, GaussianRational> atom(int id) const { return atoms_[id]; }
    size_t atom_count() const { return atoms_.size(); }

  private:
    SymValue intern(SymNode&& n);
    ComplexBox eval_box(const SymNode* n, Prec p);
    int opaque_atom_id(const SymNode* n);

    PrecPolicy pol_;
    std::vector<SymValue> nodes_;
    std::unordered_map<std::string, SymValue> table_;
    std::vector<std::pair<int, GaussianRational>> atoms_;
    std::unordered_map<std::string, int> atom_table_;
    std::unordered_map<const SymNode*, int> opaque_table_;
};

// Serialization of a set of rooted DAGs as an indexed node list. Node order
// is a canonical DFS from the roots, so equal semantic content produces
// byte-identical output regardless of construction history.
struct SymGraphDump {
    std::vector<std::string> lines;                      // one node per line
    std::unordered_map<const SymNode*, size_t> index;    // node -> line index
};
SymGraphDump dump_symbolic(const std::vector<SymValue>& roots);
std::vector<SymValue> load_symbolic(SymContext& ctx, const std::vector<std::string>& lines,
                                    const std::vector<size_t>& root_indices);

} // namespace orbitforge
