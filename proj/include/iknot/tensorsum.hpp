#pragma once

// Tensor products of complexes and maps, and the two product involutions.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/linmap.hpp"
#include "iknot/morphism.hpp"

namespace iknot {

inline std::string pair_name(const std::string& x, const std::string& y) { return x + "|" + y; }

/// C1 ⊗ C2 over the common ring. Generator x|y sits at index
/// x * |C2| + y; ∂(x⊗y) = ∂x⊗y + x⊗∂y.
inline Complex tensor(const Complex& a, const Complex& b) {
    if (!(a.ring() == b.ring()))
        throw StructuralError("tensor of complexes over different rings " + a.ring().to_string() + " and " +
                              b.ring().to_string());
    const int nb = static_cast<int>(b.size());
    std::vector<Generator> basis;
    basis.reserve(a.size() * b.size());
    for (const auto& x : a.basis())
        for (const auto& y : b.basis()) basis.push_back({pair_name(x.name, y.name), x.gr_u + y.gr_u, x.gr_v + y.gr_v});
    std::vector<Chain> diff(basis.size());
    for (int x = 0; x < static_cast<int>(a.size()); ++x)
        for (int y = 0; y < nb; ++y) {
            std::vector<Term> terms;
            for (const auto& t : a.d(x)) terms.push_back({t.target * nb + y, t.coeff});
            for (const auto& t : b.d(y)) terms.push_back({x * nb + t.target, t.coeff});
            diff[static_cast<std::size_t>(x * nb + y)] = normalize_chain(std::move(terms), a.ring());
        }
    return Complex(pair_name(a.name(), b.name()), std::move(basis), std::move(diff), a.ring());
}

/// f ⊗ g as a map between tensor complexes `src` and `tgt`, which must be
/// tensor(f.source, g.source) and tensor(f.target, g.target).
inline LinMap tensor_maps(const LinMap& f, const LinMap& g, const ComplexPtr& src, const ComplexPtr& tgt) {
    if (f.variance() != g.variance()) throw StructuralError("tensor of maps with different variance");
    const std::size_t ns = g.source()->size(), nt = g.target()->size();
    if (src->size() != f.source()->size() * ns || tgt->size() != f.target()->size() * nt)
        throw StructuralError("tensor map basis does not match the tensor complex");
    const Ideal ideal = larger_ideal(f.ideal(), g.ideal());
    std::vector<Chain> act(src->size());
    for (std::size_t x = 0; x < f.source()->size(); ++x)
        for (std::size_t y = 0; y < ns; ++y) {
            std::vector<Term> terms;
            for (const auto& s : f.image(static_cast<int>(x)))
                for (const auto& t : g.image(static_cast<int>(y)))
                    terms.push_back({s.target * static_cast<int>(nt) + t.target, s.coeff * t.coeff});
            act[x * ns + y] = normalize_chain(std::move(terms), ideal);
        }
    return LinMap(src, tgt, f.variance(), f.shift() + g.shift(), ideal, std::move(act));
}

/// A tensor complex together with the product involution on it.
struct ProductIota {
    ComplexPtr complex;
    IotaData iota;
};

/// Variant 1: ι1⊗ι2 + (Φ1⊗Ψ2)(ι1⊗ι2). Variant 2 uses Ψ1⊗Φ2. Evaluated
/// literally, then reduced mod (U,V) in almost mode.
inline LinMap product_iota_map(const ComplexPtr& t, const ComplexPtr& c1, const IotaData& i1, const ComplexPtr& c2,
                               const IotaData& i2, int variant) {
    if (variant != 1 && variant != 2) throw DomainError("product variant must be 1 or 2");
    if (i1.mode != i2.mode) throw StructuralError("product of iota data in different modes");
    if (!same_complex(i1.map.source(), c1) || !same_complex(i2.map.source(), c2))
        throw StructuralError("iota is defined on a different basis");
    const auto d1 = derivative_maps(c1);
    const auto d2 = derivative_maps(c2);
    const LinMap ii = tensor_maps(i1.map, i2.map, t, t);
    const LinMap corr = variant == 1 ? tensor_maps(d1.phi, d2.psi, t, t) : tensor_maps(d1.psi, d2.phi, t, t);
    LinMap out = ii + compose(corr, ii);
    if (i1.mode == IotaMode::Almost) out = out.reduced(Ideal::max_ideal());
    return out;
}

inline ProductIota product_iota(const ComplexPtr& c1, const IotaData& i1, const ComplexPtr& c2, const IotaData& i2,
                                int variant) {
    ComplexPtr t = share(tensor(*c1, *c2));
    LinMap m = product_iota_map(t, c1, i1, c2, i2, variant);
    return {t, IotaData{std::move(m), i1.mode}};
}

/// Evidence that two almost involutions on the same reduced complex are
/// equivalent: an equivariant chain map F, invertible mod (U,V), with
/// F ι_a = ι_b F mod (U,V).
struct AlmostEquivalence {
    LinMap map;
    std::string description;
};

namespace detail {

inline bool intertwines_mod_max(const LinMap& f, const IotaData& a, const IotaData& b) {
    const BitMatrix f0 = unit_matrix(f);
    return f0 * a.unit() == b.unit() * f0;
}

inline bool invertible(const BitMatrix& m) { return m.rows() == m.cols() && m.rank() == m.rows(); }

}  // namespace detail

/// Tries the maps 1, 1 + Φ⊗Ψ, 1 + Ψ⊗Φ first, then searches the space of
/// equivariant chain maps intertwining mod (U,V) for an invertible one.
inline std::optional<AlmostEquivalence> almost_equivalence(const ComplexPtr& t, const ComplexPtr& c1,
                                                           const ComplexPtr& c2, const IotaData& a,
                                                           const IotaData& b, const SearchOptions& opt = {}) {
    const auto d1 = derivative_maps(c1);
    const auto d2 = derivative_maps(c2);
    const LinMap id = LinMap::identity(t, t->ring());
    const std::vector<std::pair<std::string, LinMap>> candidates = {
        {"identity", id},
        {"1 + Phi(x)Psi", id + tensor_maps(d1.phi, d2.psi, t, t)},
        {"1 + Psi(x)Phi", id + tensor_maps(d1.psi, d2.phi, t, t)},
    };
    for (const auto& [name, f] : candidates)
        if (is_chain_map(f) && detail::invertible(unit_matrix(f)) && detail::intertwines_mod_max(f, a, b))
            return AlmostEquivalence{f, name};

    const int cap = effective_cap(*t, *t, opt.cap);
    const MapSpace space(t, t, Variance::Equivariant, {0, 0}, t->ring(), cap);
    MapSystem sys(opt.budget);
    sys.add_block(space, [&](const LinMap& f) {
        const LinMap f0 = f.reduced(Ideal::max_ideal());
        std::vector<std::pair<int, LinMap>> out;
        out.emplace_back(0, chain_defect(f));
        out.emplace_back(1, compose(f0, a.map) + compose(b.map, f0));
        return out;
    });
    const LinearSolution sol = sys.solve();
    std::optional<AlmostEquivalence> found;
    detail::for_each_in_span(sol.null_basis, space.size(), opt.budget, "equivalence search exceeds budget",
                             [&](const BitVec& v, const BitVec&) {
                                 const LinMap f = space.from_bits(v);
                                 if (!detail::invertible(unit_matrix(f))) return true;
                                 found = AlmostEquivalence{f, "searched"};
                                 return false;
                             });
    return found;
}

}  // namespace iknot
