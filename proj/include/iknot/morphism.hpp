#pragma once

// Chain maps, the basepoint maps Phi/Psi, homotopy solving, and iota data.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/linmap.hpp"
#include "iknot/ring.hpp"

namespace iknot {

/// Shared knobs for every truncated search. cap <= 0 means "auto"; the
/// effective cap is never below what the gradings require.
struct SearchOptions {
    int cap = 0;
    std::size_t budget = 2'000'000;
};

inline int effective_cap(const Complex& a, const Complex& b, int requested) {
    const int automatic = std::max(a.default_cap(), b.default_cap());
    return std::max(requested, automatic);
}

struct DerivativeMaps {
    LinMap phi;
    LinMap psi;
};

/// Phi = [∂, D_U] and Psi = [∂, D_V] in the given basis: formal derivatives
/// of the differential's coefficients. Bidegrees (+1,-1) and (-1,+1).
inline DerivativeMaps derivative_maps(const ComplexPtr& c) {
    std::vector<Chain> phi(c->size()), psi(c->size());
    for (int x = 0; x < static_cast<int>(c->size()); ++x) {
        std::vector<Term> p, q;
        for (const auto& t : c->d(x)) {
            p.push_back({t.target, t.coeff.derivative_u()});
            q.push_back({t.target, t.coeff.derivative_v()});
        }
        phi[static_cast<std::size_t>(x)] = normalize_chain(std::move(p), c->ring());
        psi[static_cast<std::size_t>(x)] = normalize_chain(std::move(q), c->ring());
    }
    return {LinMap(c, c, Variance::Equivariant, {1, -1}, c->ring(), std::move(phi)),
            LinMap(c, c, Variance::Equivariant, {-1, 1}, c->ring(), std::move(psi))};
}

/// ∂_target ∘ f + f ∘ ∂_source, reduced mod f's ideal.
inline LinMap chain_defect(const LinMap& f) {
    const LinMap dt = LinMap::differential(f.target()).reduced(f.ideal());
    const LinMap ds = LinMap::differential(f.source()).reduced(f.ideal());
    return compose(dt, f) + compose(f, ds);
}

inline bool is_chain_map(const LinMap& f) {
    if (!(f.source()->ring() == f.target()->ring()))
        throw StructuralError("chain-map check needs source and target over the same ring");
    if (auto bad = f.grading_violations(); !bad.empty())
        throw StructuralError("map does not have its declared bidegree: " + bad.front());
    return chain_defect(f).is_zero();
}

/// ∂H + H∂ for a homotopy H.
inline LinMap homotopy_boundary(const LinMap& h) { return chain_defect(h); }

inline Ideal common_ideal(const LinMap& f) {
    return larger_ideal(f.ideal(), larger_ideal(f.source()->ring(), f.target()->ring()));
}

/// Coordinate space of homotopies between maps shaped like `f`.
inline MapSpace homotopy_space(const LinMap& f, int cap) {
    return MapSpace(f.source(), f.target(), f.variance(), f.shift() + Bigrading{1, 1}, common_ideal(f), cap);
}

struct HomotopyResult {
    std::optional<LinMap> homotopy;
    bool definitive = true;  // false only if the cap dropped coordinates
    std::size_t unknowns = 0;
    std::size_t rank = 0;
};

/// H with f + g = ∂H + H∂, of the same variance as f and g and bidegree
/// shifted by (+1,+1); absent if the F2 system is inconsistent.
inline HomotopyResult solve_homotopy_detailed(const LinMap& f, const LinMap& g, const SearchOptions& opt = {}) {
    if (f.variance() != g.variance() || !(f.shift() == g.shift()))
        throw StructuralError("homotopy between maps of different variance or bidegree");
    if (f.variance() == Variance::Linear) throw StructuralError("homotopies need graded maps");
    const LinMap sum = f + g;
    const int cap = effective_cap(*f.source(), *f.target(), opt.cap);
    const MapSpace space = homotopy_space(sum, cap);
    MapSystem sys(opt.budget);
    sys.add_block(space, [](const LinMap& h) { return std::vector<std::pair<int, LinMap>>{{0, homotopy_boundary(h)}}; });
    const BitVec rhs = sys.vectorize({{0, sum.reduced(space.ideal())}});
    const LinearSolution sol = sys.solve(rhs);
    HomotopyResult out;
    out.definitive = space.complete();
    out.unknowns = space.size();
    out.rank = sol.rank;
    if (sol.particular) out.homotopy = space.from_bits(*sol.particular);
    return out;
}

inline std::optional<LinMap> solve_homotopy(const LinMap& f, const LinMap& g, const SearchOptions& opt = {}) {
    return solve_homotopy_detailed(f, g, opt).homotopy;
}

enum class IotaMode { Full, Almost };

inline const char* to_string(IotaMode m) { return m == IotaMode::Full ? "full" : "almost"; }

/// A candidate involution: a skew map of bidegree 0. Almost mode keeps only
/// the action mod (U,V).
struct IotaData {
    LinMap map;
    IotaMode mode = IotaMode::Almost;

    static IotaData almost(const ComplexPtr& c, const BitMatrix& unit) {
        return {from_unit_matrix(c, c, Variance::Skew, {0, 0}, unit), IotaMode::Almost};
    }

    BitMatrix unit() const { return unit_matrix(map); }
    bool operator==(const IotaData& o) const { return mode == o.mode && map == o.map; }
};

/// 1 + ΨΦ mod (U,V) as an F2 matrix.
inline BitMatrix one_plus_psi_phi_mod_max(const ComplexPtr& c) {
    const auto dm = derivative_maps(c);
    const LinMap pp = compose(dm.psi, dm.phi).reduced(Ideal::max_ideal());
    return BitMatrix::identity(c->size()) + unit_matrix(pp);
}

struct IotaReport {
    bool skew_graded = true;
    bool chain_map = true;
    bool square_relation = true;  // ι² ≃ 1 + ΨΦ (mod (U,V) in almost mode)
    std::vector<std::string> messages;
    std::optional<LinMap> square_homotopy;  // full mode witness

    bool ok() const { return skew_graded && chain_map && square_relation; }
};

inline IotaReport validate_iota(const ComplexPtr& c, const IotaData& iota, const SearchOptions& opt = {}) {
    if (!same_complex(iota.map.source(), c) || !same_complex(iota.map.target(), c))
        throw StructuralError("iota is defined on a different basis");
    IotaReport rep;
    if (iota.map.variance() != Variance::Skew || !(iota.map.shift() == Bigrading{0, 0})) {
        rep.skew_graded = false;
        rep.messages.push_back("iota must be skew of bidegree 0");
    }
    for (const auto& v : iota.map.grading_violations()) {
        rep.skew_graded = false;
        rep.messages.push_back("not skew-graded: " + v);
    }
    if (!rep.skew_graded) return rep;

    if (iota.mode == IotaMode::Almost) {
        const BitMatrix i0 = iota.unit();
        const BitMatrix d0 = unit_part(*c);
        if (!(d0 * i0 == i0 * d0)) {
            rep.chain_map = false;
            rep.messages.push_back("iota is not a chain map mod (U,V)");
        }
        if (!(i0 * i0 == one_plus_psi_phi_mod_max(c))) {
            rep.square_relation = false;
            rep.messages.push_back("iota^2 != 1 + Psi Phi mod (U,V)");
        }
        return rep;
    }

    if (!is_chain_map(iota.map)) {
        rep.chain_map = false;
        rep.messages.push_back("iota is not a skew chain map");
    }
    const auto dm = derivative_maps(c);
    const LinMap target = LinMap::identity(c, c->ring()) + compose(dm.psi, dm.phi);
    const LinMap sq = compose(iota.map, iota.map);
    auto h = solve_homotopy(sq, target.reduced(sq.ideal()), opt);
    if (!h) {
        rep.square_relation = false;
        rep.messages.push_back("no equivariant homotopy iota^2 ~ 1 + Psi Phi");
    } else {
        rep.square_homotopy = std::move(h);
    }
    return rep;
}

/// ω = 1 + ι on C/(U,V).
inline LinMap omega(const IotaData& iota) {
    const ComplexPtr& c = iota.map.source();
    return from_unit_matrix(c, c, Variance::Linear, {0, 0}, BitMatrix::identity(c->size()) + iota.unit());
}

/// An almost iota that is the reduction of a full skew chain map ι̃ with an
/// equivariant homotopy ι̃² ≃ 1 + ΨΦ; the lift and homotopy are kept as
/// witnesses.
struct IotaCompletion {
    IotaData almost;
    LinMap lift;
    LinMap square_homotopy;
};

struct IotaEnumerationStats {
    std::size_t chain_space_dim = 0;   // skew chain maps of bidegree 0
    std::size_t unit_image_dim = 0;    // their reductions mod (U,V)
    std::size_t higher_classes_dim = 0;  // positive-filtration maps mod null-homotopic
    std::size_t square_candidates = 0;   // reductions with ι0² = 1 + ΨΦ
};

namespace detail {

inline std::vector<std::pair<int, LinMap>> single(int family, LinMap m) {
    std::vector<std::pair<int, LinMap>> v;
    v.emplace_back(family, std::move(m));
    return v;
}

/// Visits every vector of span(basis) in Gray-code order.
template <class Visit>
void for_each_in_span(const std::vector<BitVec>& basis, std::size_t dim, std::size_t budget, const char* what,
                      Visit visit) {
    if (basis.size() >= 63 || (std::size_t{1} << basis.size()) > budget)
        throw ResourceError(what, basis.size() >= 63 ? ~std::size_t{0} : (std::size_t{1} << basis.size()), budget);
    BitVec cur(dim);
    BitVec combo(basis.size());
    const std::size_t total = std::size_t{1} << basis.size();
    for (std::size_t step = 0; step < total; ++step) {
        if (step > 0) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(step));
            cur ^= basis[bit];
            combo.flip(bit);
        }
        if (!visit(cur, combo)) return;
    }
}

}  // namespace detail

/// Every F2-linear skew-graded map ι0 on C/(U,V) with ι0² = 1 + ΨΦ that is
/// the reduction of a skew chain map ι̃ over C's ring admitting an
/// equivariant homotopy ι̃² ≃ 1 + ΨΦ. Sorted by unit matrix.
inline std::vector<IotaCompletion> enumerate_iota_completions(const ComplexPtr& c, const SearchOptions& opt = {},
                                                              IotaEnumerationStats* stats = nullptr) {
    if (c->size() > 64) throw ResourceError("iota enumeration basis too large", c->size(), 64);
    if (!is_reduced(*c)) throw StructuralError("iota enumeration needs a reduced complex");
    const int cap = effective_cap(*c, *c, opt.cap);
    const Ideal ring = c->ring();
    const std::size_t n = c->size();

    // Skew chain maps of bidegree 0.
    const MapSpace skew(c, c, Variance::Skew, {0, 0}, ring, cap);
    MapSystem chain_sys(opt.budget);
    chain_sys.add_block(skew, [](const LinMap& f) { return detail::single(0, chain_defect(f)); });
    const LinearSolution chain_sol = chain_sys.solve();
    const auto& chain_basis = chain_sol.null_basis;

    // Split into a part injecting mod (U,V) and the kernel K of reduction.
    std::vector<std::size_t> unit_coords;
    std::vector<int> unit_pos(skew.size(), -1);
    for (std::size_t k = 0; k < skew.size(); ++k)
        if (skew.coord(k).m.is_one()) {
            unit_pos[k] = static_cast<int>(unit_coords.size());
            unit_coords.push_back(k);
        }
    auto project = [&](const BitVec& v) {
        BitVec p(unit_coords.size());
        for (std::size_t k = v.find_first(); k < v.size(); k = v.find_next(k + 1))
            if (unit_pos[k] >= 0) p.set(static_cast<std::size_t>(unit_pos[k]));
        return p;
    };
    EchelonBasis proj(unit_coords.size(), chain_basis.size());
    std::vector<BitVec> lift_basis;     // chain maps whose reductions are independent
    std::vector<BitVec> reduced_basis;  // their reductions
    std::vector<BitVec> kernel_basis;   // chain maps vanishing mod (U,V)
    for (std::size_t k = 0; k < chain_basis.size(); ++k) {
        BitVec tag(chain_basis.size());
        tag.set(k);
        if (auto rel = proj.insert(project(chain_basis[k]), tag)) {
            BitVec v(skew.size());
            for (std::size_t j = rel->find_first(); j < rel->size(); j = rel->find_next(j + 1)) v ^= chain_basis[j];
            kernel_basis.push_back(std::move(v));
        } else {
            lift_basis.push_back(chain_basis[k]);
            reduced_basis.push_back(project(chain_basis[k]));
        }
    }

    // Null-homotopic skew maps ∂J + J∂ all vanish mod (U,V) on a reduced
    // complex; only K modulo them affects the homotopy class of ι̃².
    const MapSpace skew_h(c, c, Variance::Skew, {1, 1}, ring, cap);
    EchelonBasis classes(skew.size(), 0);
    for (std::size_t k = 0; k < skew_h.size(); ++k) classes.insert(skew.to_bits(homotopy_boundary(skew_h.unit(k))));
    std::vector<BitVec> higher;
    for (const auto& v : kernel_basis)
        if (classes.insert(v)) higher.push_back(v);

    // Equivariant homotopies for ι̃² ≃ 1 + ΨΦ.
    const MapSpace eq0(c, c, Variance::Equivariant, {0, 0}, ring, cap);
    const MapSpace eq_h(c, c, Variance::Equivariant, {1, 1}, ring, cap);
    EchelonBasis boundaries(eq0.size(), eq_h.size());
    for (std::size_t k = 0; k < eq_h.size(); ++k) {
        BitVec tag(eq_h.size());
        tag.set(k);
        boundaries.insert(eq0.to_bits(homotopy_boundary(eq_h.unit(k))), std::move(tag));
    }
    const auto dm = derivative_maps(c);
    const BitVec one_pp = eq0.to_bits(LinMap::identity(c, ring) + compose(dm.psi, dm.phi));
    const BitMatrix target_sq = one_plus_psi_phi_mod_max(c);

    if (stats) {
        stats->chain_space_dim = chain_basis.size();
        stats->unit_image_dim = reduced_basis.size();
        stats->higher_classes_dim = higher.size();
    }

    auto unit_to_matrix = [&](const BitVec& p) {
        BitMatrix m(n, n);
        for (std::size_t k = p.find_first(); k < p.size(); k = p.find_next(k + 1)) {
            const auto& co = skew.coord(unit_coords[k]);
            m.set(static_cast<std::size_t>(co.y), static_cast<std::size_t>(co.x));
        }
        return m;
    };

    std::vector<IotaCompletion> out;
    std::size_t square_ok = 0;
    detail::for_each_in_span(
        reduced_basis, unit_coords.size(), opt.budget, "iota candidate space exceeds budget",
        [&](const BitVec& red, const BitVec& combo) {
            const BitMatrix i0 = unit_to_matrix(red);
            if (!(i0 * i0 == target_sq)) return true;
            ++square_ok;
            BitVec base(skew.size());
            for (std::size_t k = combo.find_first(); k < combo.size(); k = combo.find_next(k + 1))
                base ^= lift_basis[k];
            // Keep the sparsest valid lift so the choice is canonical.
            std::optional<IotaCompletion> found;
            std::size_t weight = 0;
            detail::for_each_in_span(higher, skew.size(), opt.budget, "iota lift space exceeds budget",
                                     [&](const BitVec& extra, const BitVec&) {
                                         const BitVec bits = base ^ extra;
                                         if (found && bits.count() >= weight) return true;
                                         const LinMap lift = skew.from_bits(bits);
                                         BitVec q = eq0.to_bits(compose(lift, lift)) ^ one_pp;
                                         if (auto h = boundaries.express(q)) {
                                             found = IotaCompletion{IotaData::almost(c, i0), lift, eq_h.from_bits(*h)};
                                             weight = bits.count();
                                         }
                                         return true;
                                     });
            if (found) out.push_back(std::move(*found));
            return true;
        });
    if (stats) stats->square_candidates = square_ok;

    std::sort(out.begin(), out.end(), [](const IotaCompletion& a, const IotaCompletion& b) {
        const BitMatrix ua = a.almost.unit(), ub = b.almost.unit();
        for (std::size_t r = 0; r < ua.rows(); ++r) {
            if (ua.row(r) == ub.row(r)) continue;
            return ua.row(r) < ub.row(r);
        }
        return false;
    });
    return out;
}

inline std::vector<IotaData> enumerate_almost_iotas(const ComplexPtr& c, const SearchOptions& opt = {}) {
    std::vector<IotaData> out;
    for (auto& comp : enumerate_iota_completions(c, opt)) out.push_back(std::move(comp.almost));
    return out;
}

}  // namespace iknot
