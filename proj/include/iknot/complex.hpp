#pragma once

// Free bigraded chain complexes over F2[U,V] and its quotients.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/ring.hpp"

namespace iknot {

struct Bigrading {
    int u = 0;
    int v = 0;

    constexpr auto operator<=>(const Bigrading&) const = default;
    constexpr Bigrading operator+(const Bigrading& o) const { return {u + o.u, v + o.v}; }
    constexpr Bigrading operator-(const Bigrading& o) const { return {u - o.u, v - o.v}; }
    constexpr Bigrading operator-() const { return {-u, -v}; }
    constexpr Bigrading swapped() const { return {v, u}; }
};

struct Generator {
    std::string name;
    int gr_u = 0;  // Maslov grading
    int gr_v = 0;

    Bigrading gr() const { return {gr_u, gr_v}; }
    int alexander() const { return (gr_u - gr_v) / 2; }
    bool operator==(const Generator&) const = default;
};

/// coeff * basis[target]
struct Term {
    int target = 0;
    RingElt coeff;

    bool operator==(const Term&) const = default;
};

/// A module element written in a basis: terms sorted by target, no zero
/// coefficients, at most one term per target.
using Chain = std::vector<Term>;

/// Merges duplicate targets, reduces coefficients mod `ideal`, drops zeros.
inline Chain normalize_chain(std::vector<Term> terms, const Ideal& ideal) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.target < b.target; });
    Chain out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().target == t.target)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    Chain kept;
    kept.reserve(out.size());
    for (auto& t : out) {
        t.coeff = reduce(t.coeff, ideal);
        if (!t.coeff.is_zero()) kept.push_back(std::move(t));
    }
    return kept;
}

inline RingElt coefficient(const Chain& c, int target) {
    auto it = std::lower_bound(c.begin(), c.end(), target, [](const Term& t, int k) { return t.target < k; });
    if (it != c.end() && it->target == target) return it->coeff;
    return {};
}

inline Chain add_chains(const Chain& a, const Chain& b, const Ideal& ideal) {
    std::vector<Term> all(a);
    all.insert(all.end(), b.begin(), b.end());
    return normalize_chain(std::move(all), ideal);
}

/// Ring a complex is defined over. Every ideal kind is accepted; only Zero
/// and UV have a `.cfk` spelling.
class Complex {
public:
    Complex() = default;

    Complex(std::string name, std::vector<Generator> basis, std::vector<Chain> diff, Ideal ring = Ideal::zero())
        : name_(std::move(name)), basis_(std::move(basis)), diff_(std::move(diff)), ring_(ring) {
        if (diff_.size() != basis_.size()) throw StructuralError("differential table size differs from basis size");
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            if (!index_.emplace(basis_[k].name, static_cast<int>(k)).second)
                throw StructuralError("duplicate generator name '" + basis_[k].name + "'");
            if ((basis_[k].gr_u - basis_[k].gr_v) % 2 != 0)
                throw StructuralError("generator '" + basis_[k].name + "' has odd grU - grV");
        }
        for (auto& chain : diff_) {
            for (const auto& t : chain)
                if (t.target < 0 || static_cast<std::size_t>(t.target) >= basis_.size())
                    throw StructuralError("differential references unknown generator index " +
                                          std::to_string(t.target));
            chain = normalize_chain(std::move(chain), ring_);
        }
    }

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    const std::vector<Generator>& basis() const { return basis_; }
    const Generator& gen(int k) const { return basis_[static_cast<std::size_t>(k)]; }
    std::size_t size() const { return basis_.size(); }
    const Chain& d(int k) const { return diff_[static_cast<std::size_t>(k)]; }
    const std::vector<Chain>& differential() const { return diff_; }
    const Ideal& ring() const { return ring_; }

    std::optional<int> index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    int require(const std::string& name) const {
        auto k = index_of(name);
        if (!k) throw StructuralError("unknown generator '" + name + "' in complex '" + name_ + "'");
        return *k;
    }

    /// ∂ applied to a chain.
    Chain apply_d(const Chain& c) const {
        std::vector<Term> out;
        for (const auto& t : c)
            for (const auto& s : d(t.target)) out.push_back({s.target, t.coeff * s.coeff});
        return normalize_chain(std::move(out), ring_);
    }

    int max_span() const {
        if (basis_.empty()) return 0;
        int lo = basis_[0].gr_u, hi = lo;
        for (const auto& g : basis_) {
            lo = std::min({lo, g.gr_u, g.gr_v});
            hi = std::max({hi, g.gr_u, g.gr_v});
        }
        return hi - lo;
    }

    /// Exponent cap for truncated searches: 1 + span/2.
    int default_cap() const { return 1 + max_span() / 2; }

    /// Same name, ring, generators and differential; basis order is ignored.
    bool operator==(const Complex& o) const {
        if (name_ != o.name_ || !(ring_ == o.ring_) || size() != o.size()) return false;
        if (basis_ == o.basis_) return diff_ == o.diff_;
        std::vector<int> to_o(size());
        for (std::size_t k = 0; k < size(); ++k) {
            auto j = o.index_of(basis_[k].name);
            if (!j || !(o.gen(*j) == basis_[k])) return false;
            to_o[k] = *j;
        }
        for (std::size_t k = 0; k < size(); ++k) {
            std::vector<Term> mapped;
            for (const auto& t : diff_[k]) mapped.push_back({to_o[static_cast<std::size_t>(t.target)], t.coeff});
            if (normalize_chain(std::move(mapped), ring_) != o.d(to_o[k])) return false;
        }
        return true;
    }

    /// Equality including basis order.
    bool identical(const Complex& o) const {
        return name_ == o.name_ && basis_ == o.basis_ && diff_ == o.diff_ && ring_ == o.ring_;
    }

private:
    std::string name_;
    std::vector<Generator> basis_;
    std::vector<Chain> diff_;
    Ideal ring_;
    std::unordered_map<std::string, int> index_;
};

/// Name-based construction helper used by builders and the parser.
class ComplexBuilder {
public:
    explicit ComplexBuilder(std::string name, Ideal ring = Ideal::zero()) : name_(std::move(name)), ring_(ring) {}

    ComplexBuilder& gen(const std::string& name, int gr_u, int gr_v) {
        if (!index_.emplace(name, static_cast<int>(basis_.size())).second)
            throw StructuralError("duplicate generator name '" + name + "'");
        basis_.push_back({name, gr_u, gr_v});
        diff_.emplace_back();
        return *this;
    }

    /// Adds `coeff * target` to ∂(source).
    ComplexBuilder& d(const std::string& source, const RingElt& coeff, const std::string& target) {
        diff_[static_cast<std::size_t>(lookup(source))].push_back({lookup(target), coeff});
        return *this;
    }

    bool has(const std::string& name) const { return index_.count(name) != 0; }

    Complex build() const { return Complex(name_, basis_, diff_, ring_); }

private:
    int lookup(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw StructuralError("differential references unknown generator '" + name + "'");
        return it->second;
    }

    std::string name_;
    Ideal ring_;
    std::vector<Generator> basis_;
    std::vector<std::vector<Term>> diff_;
    std::unordered_map<std::string, int> index_;
};

struct ValidationReport {
    bool square_zero = true;
    bool grading_law = true;
    bool reduced = true;
    bool symmetric = true;  // informational only
    std::vector<std::string> messages;

    /// Fatal checks only: ∂² = 0 and the grading law.
    bool ok() const { return square_zero && grading_law; }
};

/// True when the term coeff*y of ∂x lowers both gradings by one.
inline bool obeys_grading_law(const Generator& x, const Generator& y, const Mono& m) {
    return y.gr_u + m.gr_u() == x.gr_u - 1 && y.gr_v + m.gr_v() == x.gr_v - 1;
}

inline ValidationReport validate(const Complex& c) {
    ValidationReport rep;
    for (int x = 0; x < static_cast<int>(c.size()); ++x) {
        for (const auto& t : c.d(x)) {
            for (const auto& m : t.coeff.terms()) {
                if (!obeys_grading_law(c.gen(x), c.gen(t.target), m)) {
                    rep.grading_law = false;
                    rep.messages.push_back("grading law fails on term " + to_string(m) + " " + c.gen(t.target).name +
                                           " of d(" + c.gen(x).name + ")");
                }
                if (m.is_one()) {
                    rep.reduced = false;
                    rep.messages.push_back("unit arrow " + c.gen(x).name + " -> " + c.gen(t.target).name);
                }
            }
        }
        const Chain dd = c.apply_d(c.d(x));
        if (!dd.empty()) {
            rep.square_zero = false;
            rep.messages.push_back("d^2(" + c.gen(x).name + ") != 0");
        }
    }
    std::map<Bigrading, int> count;
    for (const auto& g : c.basis()) ++count[g.gr()];
    for (const auto& [gr, k] : count) {
        auto it = count.find(gr.swapped());
        if (it == count.end() || it->second != k) {
            rep.symmetric = false;
            rep.messages.push_back("bigrading multiset not closed under swap at (" + std::to_string(gr.u) + "," +
                                   std::to_string(gr.v) + ") [informational]");
            break;
        }
    }
    return rep;
}

inline bool is_reduced(const Complex& c) {
    for (int x = 0; x < static_cast<int>(c.size()); ++x)
        for (const auto& t : c.d(x))
            if (t.coeff.constant_term()) return false;
    return true;
}

/// Name of the dual basis element: toggles a trailing '*'.
inline std::string dual_name(const std::string& n) {
    if (!n.empty() && n.back() == '*') return n.substr(0, n.size() - 1);
    return n + "*";
}

/// Dual over the ground ring: x* has grading (-grU, -grV) and
/// <∂x*, y*> = <∂y, x>.
inline Complex dualize(const Complex& c) {
    std::vector<Generator> basis;
    basis.reserve(c.size());
    for (const auto& g : c.basis()) basis.push_back({dual_name(g.name), -g.gr_u, -g.gr_v});
    std::vector<std::vector<Term>> diff(c.size());
    for (int y = 0; y < static_cast<int>(c.size()); ++y)
        for (const auto& t : c.d(y)) diff[static_cast<std::size_t>(t.target)].push_back({y, t.coeff});
    std::vector<Chain> chains(diff.begin(), diff.end());
    return Complex(dual_name(c.name()), std::move(basis), std::move(chains), c.ring());
}

/// C / I. The result lives over the larger of C's ring ideal and I.
inline Complex quotient(const Complex& c, const Ideal& ideal) {
    const Ideal ring = larger_ideal(c.ring(), ideal);
    return Complex(c.name(), c.basis(), c.differential(), ring);
}

enum class Variable { U, V };

/// C / (U) or C / (V): deletes every term with a positive exponent of the
/// variable. Setting a variable to zero is a ring map, so the result is again
/// a complex over C's ring.
inline Complex quotient(const Complex& c, Variable var) {
    std::vector<Chain> diff;
    diff.reserve(c.size());
    for (const auto& chain : c.differential()) {
        std::vector<Term> kept;
        for (const auto& t : chain) {
            std::vector<Mono> ms;
            for (const auto& m : t.coeff.terms())
                if ((var == Variable::U ? m.i : m.j) == 0) ms.push_back(m);
            if (!ms.empty()) kept.push_back({t.target, RingElt(std::move(ms))});
        }
        diff.emplace_back(std::move(kept));
    }
    return Complex(c.name(), c.basis(), std::move(diff), c.ring());
}

/// F2 matrix of the unit-coefficient part of ∂ (entry (y, x) for x -> y).
inline BitMatrix unit_part(const Complex& c) {
    BitMatrix m(c.size(), c.size());
    for (int x = 0; x < static_cast<int>(c.size()); ++x)
        for (const auto& t : c.d(x))
            if (t.coeff.constant_term()) m.set(static_cast<std::size_t>(t.target), static_cast<std::size_t>(x));
    return m;
}

/// Direct sum; clashing names from the second summand get a trailing '\''.
inline Complex direct_sum(const Complex& a, const Complex& b) {
    ComplexBuilder bld(a.name() + "+" + b.name(), larger_ideal(a.ring(), b.ring()));
    std::vector<std::string> names_b;
    for (const auto& g : a.basis()) bld.gen(g.name, g.gr_u, g.gr_v);
    for (const auto& g : b.basis()) {
        std::string n = g.name;
        while (bld.has(n)) n += '\'';
        names_b.push_back(n);
        bld.gen(n, g.gr_u, g.gr_v);
    }
    for (int x = 0; x < static_cast<int>(a.size()); ++x)
        for (const auto& t : a.d(x)) bld.d(a.gen(x).name, t.coeff, a.gen(t.target).name);
    for (int x = 0; x < static_cast<int>(b.size()); ++x)
        for (const auto& t : b.d(x))
            bld.d(names_b[static_cast<std::size_t>(x)], t.coeff, names_b[static_cast<std::size_t>(t.target)]);
    return bld.build();
}

/// Brute-force search for a grading-preserving relabeling of `a`'s basis
/// onto `b`'s basis that carries ∂_a to ∂_b exactly. Returns perm with
/// perm[x in a] = index in b.
inline std::optional<std::vector<int>> find_isomorphism(const Complex& a, const Complex& b) {
    if (a.size() != b.size() || !(a.ring() == b.ring())) return std::nullopt;
    const int n = static_cast<int>(a.size());
    std::map<Bigrading, std::vector<int>> cls_b;
    for (int y = 0; y < n; ++y) cls_b[b.gen(y).gr()].push_back(y);
    std::map<Bigrading, int> cnt_a;
    for (int x = 0; x < n; ++x) ++cnt_a[a.gen(x).gr()];
    for (const auto& [g, k] : cnt_a) {
        auto it = cls_b.find(g);
        if (it == cls_b.end() || static_cast<int>(it->second.size()) != k) return std::nullopt;
    }

    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    // Differential entries between already-assigned generators must agree.
    auto consistent = [&](int x) {
        const int px = perm[static_cast<std::size_t>(x)];
        for (const auto& t : a.d(x)) {
            const int py = perm[static_cast<std::size_t>(t.target)];
            if (py >= 0 && coefficient(b.d(px), py) != t.coeff) return false;
        }
        for (const auto& t : b.d(px)) {
            // every term of ∂_b(px) whose target is assigned must come from a
            int src = -1;
            for (int z = 0; z < n; ++z)
                if (perm[static_cast<std::size_t>(z)] == t.target) src = z;
            if (src >= 0 && coefficient(a.d(x), src) != t.coeff) return false;
        }
        for (int w = 0; w < n; ++w) {
            const int pw = perm[static_cast<std::size_t>(w)];
            if (pw < 0 || w == x) continue;
            if (coefficient(a.d(w), x) != coefficient(b.d(pw), px)) return false;
        }
        return true;
    };

    auto rec = [&](auto&& self, int x) -> bool {
        if (x == n) return true;
        for (int y : cls_b[a.gen(x).gr()]) {
            if (used[static_cast<std::size_t>(y)]) continue;
            perm[static_cast<std::size_t>(x)] = y;
            used[static_cast<std::size_t>(y)] = true;
            if (consistent(x) && self(self, x + 1)) return true;
            used[static_cast<std::size_t>(y)] = false;
            perm[static_cast<std::size_t>(x)] = -1;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    return perm;
}

}  // namespace iknot
