#pragma once

// (Almost) local maps, self-local equivalences, the connected complex and
// the concordance unknotting bound it gives.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/homology.hpp"
#include "iknot/linmap.hpp"
#include "iknot/morphism.hpp"

namespace iknot {

enum class LocalMode { Local, Almost };

inline const char* to_string(LocalMode m) { return m == LocalMode::Local ? "local" : "almost"; }

/// A complex with every iota it may carry. A single entry means iota is
/// known; several mean it is pinned only partially and all completions count.
struct IotaSide {
    ComplexPtr complex;
    std::vector<IotaData> iotas;
};

struct LocalSearchSpec {
    IotaSide source;
    IotaSide target;
    LocalMode mode = LocalMode::Almost;
    SearchOptions options;
    std::optional<Ideal> ideal_override;  // Zero or UV
};

/// Size of one exhausted F2 system.
struct SystemDims {
    std::size_t source_iota = 0;
    std::size_t target_iota = 0;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
    std::size_t rank = 0;
};

struct LocalCertificate {
    bool found = false;
    LocalMode mode = LocalMode::Almost;
    Ideal ideal;
    std::optional<LinMap> map;
    std::optional<LinMap> homotopy;  // local mode: f ι1 + ι2 f = ∂J + J∂
    std::size_t source_iota = 0;     // completion indices used by the found map
    std::size_t target_iota = 0;
    std::vector<SystemDims> systems;  // one per completion pair tried
    int cap = 0;
    int required_cap = 0;
    bool definitive = true;  // the cap kept every grading-compatible coordinate
};

/// Data for the locality test. Setting U = 1 and V = 0 turns C into a
/// complex of F2-vector spaces whose homology is the localized homology;
/// `cycle` generates it on the source side, `cocycle` detects it on the target.
struct LocalityWitness {
    BitVec cycle;
    BitVec cocycle;
};

/// ∂ at U = 1, V = 0: entry (y, x) is the parity of pure-U monomials.
inline BitMatrix evaluate_u1_v0(const Complex& c) {
    BitMatrix m(c.size(), c.size());
    for (int x = 0; x < static_cast<int>(c.size()); ++x)
        for (const auto& t : c.d(x))
            for (const auto& mono : t.coeff.terms())
                if (mono.j == 0) m.flip(static_cast<std::size_t>(t.target), static_cast<std::size_t>(x));
    return m;
}

inline BitMatrix evaluate_u1_v0(const LinMap& f) {
    BitMatrix m(f.target()->size(), f.source()->size());
    for (int x = 0; x < static_cast<int>(f.source()->size()); ++x)
        for (const auto& t : f.image(x))
            for (const auto& mono : t.coeff.terms())
                if (mono.j == 0) m.flip(static_cast<std::size_t>(t.target), static_cast<std::size_t>(x));
    return m;
}

namespace detail {

struct CycleData {
    std::vector<BitVec> kernel;
    EchelonBasis image;
};

inline CycleData cycles_and_boundaries(const BitMatrix& d) {
    const std::size_t n = d.cols();
    std::vector<BitVec> cols;
    for (std::size_t x = 0; x < n; ++x) cols.push_back(d.column(x));
    CycleData out{solve_columns(cols, d.rows()).null_basis, EchelonBasis(d.rows(), 0)};
    for (const auto& c : cols) out.image.insert(c);
    return out;
}

/// A cycle whose class generates H, which must be F2.
inline BitVec homology_generator(const Complex& c, const BitMatrix& d) {
    auto cd = cycles_and_boundaries(d);
    const std::size_t h = cd.kernel.size() - cd.image.rank();
    if (h != 1)
        throw StructuralError("complex '" + c.name() + "' has localized homology of rank " + std::to_string(h) +
                              ", expected 1");
    for (const auto& z : cd.kernel)
        if (!cd.image.contains(z)) return z;
    throw StructuralError("no homology generator found");
}

}  // namespace detail

inline LocalityWitness locality_witness(const Complex& src, const Complex& tgt) {
    const BitMatrix ds = evaluate_u1_v0(src);
    const BitMatrix dt = evaluate_u1_v0(tgt);
    LocalityWitness w{detail::homology_generator(src, ds), BitVec()};
    const BitVec z2 = detail::homology_generator(tgt, dt);
    // cocycles: λ with λ ∘ ∂ = 0, i.e. kernel of the transpose
    const BitMatrix dtt = dt.transposed();
    std::vector<BitVec> cols;
    for (std::size_t y = 0; y < dtt.cols(); ++y) cols.push_back(dtt.column(y));
    for (const auto& lam : solve_columns(cols, dtt.rows()).null_basis)
        if (lam.dot(z2)) {
            w.cocycle = lam;
            return w;
        }
    throw StructuralError("no cocycle detects the homology of '" + tgt.name() + "'");
}

/// True when f carries the localized homology generator to the generator.
inline bool is_local(const LinMap& f, const LocalityWitness& w) {
    return w.cocycle.dot(evaluate_u1_v0(f).apply(w.cycle));
}

inline bool is_local(const LinMap& f) { return is_local(f, locality_witness(*f.source(), *f.target())); }

/// f ι1 + ι2 f, reduced mod (U,V) in almost mode.
inline LinMap intertwining_defect(const LinMap& f, const IotaData& i1, const IotaData& i2) {
    if (i1.mode == IotaMode::Almost) {
        const LinMap f0 = f.reduced(Ideal::max_ideal());
        return compose(f0, i1.map) + compose(i2.map, f0);
    }
    return compose(f, i1.map) + compose(i2.map, f);
}

namespace detail {

inline Ideal search_ideal(const LocalSearchSpec& spec) {
    const Ideal base = larger_ideal(spec.source.complex->ring(), spec.target.complex->ring());
    if (!spec.ideal_override) return base;
    const auto k = spec.ideal_override->kind();
    if (k != Ideal::Kind::Zero && k != Ideal::Kind::UV)
        throw DomainError("locality is decided at U = 1, V = 0, which needs an ideal override of 0 or (UV)");
    return larger_ideal(base, *spec.ideal_override);
}

inline void check_side(const IotaSide& side, LocalMode mode, const char* which) {
    if (side.iotas.empty()) throw StructuralError(std::string(which) + " has no iota candidates");
    const IotaMode want = mode == LocalMode::Almost ? IotaMode::Almost : IotaMode::Full;
    for (const auto& i : side.iotas) {
        if (i.mode != want)
            throw StructuralError(std::string(which) + " iota is in " + to_string(i.mode) + " mode, search is " +
                                  to_string(mode));
        if (!same_complex(i.map.source(), side.complex))
            throw StructuralError(std::string(which) + " iota is defined on a different basis");
    }
}

/// Columns of `sys` with one extra row holding `extra` per column.
inline std::vector<BitVec> with_extra_row(const MapSystem& sys, const std::vector<bool>& extra) {
    auto cols = sys.columns();
    const std::size_t r = sys.row_count();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        BitVec c = widen(cols[k], r + 1);
        if (k < extra.size() && extra[k]) c.set(r);
        cols[k] = std::move(c);
    }
    return cols;
}

}  // namespace detail

/// Decides whether an (almost) local map exists for some choice of iotas.
/// Each completion pair gives an affine F2 system in the map coordinates
/// (plus homotopy coordinates in local mode); nonexistence means every one
/// of them is inconsistent.
inline LocalCertificate search_local_map(const LocalSearchSpec& spec) {
    const ComplexPtr& src = spec.source.complex;
    const ComplexPtr& tgt = spec.target.complex;
    detail::check_side(spec.source, spec.mode, "source");
    detail::check_side(spec.target, spec.mode, "target");
    if (!is_reduced(*src) || !is_reduced(*tgt)) throw StructuralError("local map search needs reduced complexes");

    LocalCertificate cert;
    cert.mode = spec.mode;
    cert.ideal = detail::search_ideal(spec);
    cert.cap = effective_cap(*src, *tgt, spec.options.cap);
    const LocalityWitness w = locality_witness(*src, *tgt);

    const MapSpace fspace(src, tgt, Variance::Equivariant, {0, 0}, cert.ideal, cert.cap);
    std::optional<MapSpace> jspace;
    if (spec.mode == LocalMode::Local) jspace.emplace(src, tgt, Variance::Skew, Bigrading{1, 1}, cert.ideal, cert.cap);
    cert.required_cap = std::max(fspace.required_cap(), jspace ? jspace->required_cap() : 0);
    cert.definitive = fspace.complete() && (!jspace || jspace->complete());

    // ε on unit maps: only pure-U monomials survive U = 1, V = 0.
    std::vector<bool> eps(fspace.size());
    for (std::size_t k = 0; k < fspace.size(); ++k) {
        const auto& co = fspace.coord(k);
        eps[k] = co.m.j == 0 && w.cycle.get(static_cast<std::size_t>(co.x)) &&
                 w.cocycle.get(static_cast<std::size_t>(co.y));
    }

    for (std::size_t a = 0; a < spec.source.iotas.size(); ++a)
        for (std::size_t b = 0; b < spec.target.iotas.size(); ++b) {
            const IotaData& i1 = spec.source.iotas[a];
            const IotaData& i2 = spec.target.iotas[b];
            MapSystem sys(spec.options.budget);
            sys.add_block(fspace, [&](const LinMap& f) {
                std::vector<std::pair<int, LinMap>> out;
                out.emplace_back(0, chain_defect(f));
                out.emplace_back(1, intertwining_defect(f, i1, i2));
                return out;
            });
            if (jspace)
                sys.add_block(*jspace, [](const LinMap& j) { return detail::single(1, homotopy_boundary(j)); });
            const auto cols = detail::with_extra_row(sys, eps);
            BitVec rhs(sys.row_count() + 1);
            rhs.set(sys.row_count());
            const LinearSolution sol = solve_columns(cols, sys.row_count() + 1, rhs);
            cert.systems.push_back({a, b, sys.unknowns(), sys.row_count() + 1, sol.rank});
            if (!sol.particular) continue;

            BitVec fb(fspace.size());
            for (std::size_t k = 0; k < fspace.size(); ++k)
                if (sol.particular->get(k)) fb.set(k);
            LinMap f = fspace.from_bits(fb);
            std::optional<LinMap> j;
            if (jspace) {
                BitVec jb(jspace->size());
                for (std::size_t k = 0; k < jspace->size(); ++k)
                    if (sol.particular->get(fspace.size() + k)) jb.set(k);
                j = jspace->from_bits(jb);
            }
            // re-verify before reporting
            if (!chain_defect(f).is_zero() || !is_local(f, w))
                throw StructuralError("internal error: solved map fails re-verification");
            LinMap defect = intertwining_defect(f, i1, i2);
            if (j) defect = defect + homotopy_boundary(*j);
            if (!defect.is_zero()) throw StructuralError("internal error: solved map does not intertwine");
            cert.found = true;
            cert.map = std::move(f);
            cert.homotopy = std::move(j);
            cert.source_iota = a;
            cert.target_iota = b;
            return cert;
        }
    return cert;
}

/// The almost self-local equivalences of (C, ι): an affine F2 space of
/// degree-0 chain maps, described by a particular solution and a basis of
/// directions. Maps are graded, so the coefficient of y in f(x) is c·m for a
/// monomial m fixed by the gradings; the F2 matrix of the c's has the same
/// rank and (up to diagonal scaling) the same kernel as f over F2(U,V).
struct SelfLocalFamily {
    ComplexPtr complex;
    IotaData iota;
    MapSpace space;
    BitVec particular;
    std::vector<BitVec> directions;

    std::size_t dimension() const { return directions.size(); }

    LinMap map(const BitVec& bits) const { return space.from_bits(bits); }

    /// F2 coefficient matrix of the map with coordinates `bits`.
    BitMatrix coefficients(const BitVec& bits) const {
        BitMatrix m(complex->size(), complex->size());
        for (std::size_t k = bits.find_first(); k < bits.size(); k = bits.find_next(k + 1))
            m.flip(static_cast<std::size_t>(space.coord(k).y), static_cast<std::size_t>(space.coord(k).x));
        return m;
    }

    /// Visits every member in Gray-code order as (coordinates, coefficient
    /// matrix). The visitor returns false to stop.
    template <class Visit>
    void visit(std::size_t budget, Visit fn) const {
        const std::size_t d = directions.size();
        if (d >= 63 || (std::size_t{1} << d) > budget)
            throw ResourceError("self-local family exceeds budget", d >= 63 ? ~std::size_t{0} : std::size_t{1} << d,
                                budget);
        std::vector<BitMatrix> dmats;
        for (const auto& v : directions) dmats.push_back(coefficients(v));
        BitMatrix m = coefficients(particular);
        BitVec bits = particular;
        for (std::size_t step = 0; step < (std::size_t{1} << d); ++step) {
            if (step > 0) {
                const auto k = static_cast<std::size_t>(std::countr_zero(step));
                m ^= dmats[k];
                bits ^= directions[k];
            }
            if (!fn(bits, m)) return;
        }
    }
};

inline SelfLocalFamily self_local_family(const ComplexPtr& c, const IotaData& iota, const SearchOptions& opt = {}) {
    if (iota.mode != IotaMode::Almost) throw StructuralError("self-local equivalences are computed in almost mode");
    if (!same_complex(iota.map.source(), c)) throw StructuralError("iota is defined on a different basis");
    const int cap = effective_cap(*c, *c, opt.cap);
    MapSpace space(c, c, Variance::Equivariant, {0, 0}, c->ring(), cap);
    const LocalityWitness w = locality_witness(*c, *c);
    std::vector<bool> eps(space.size());
    for (std::size_t k = 0; k < space.size(); ++k) {
        const auto& co = space.coord(k);
        eps[k] = co.m.j == 0 && w.cycle.get(static_cast<std::size_t>(co.x)) &&
                 w.cocycle.get(static_cast<std::size_t>(co.y));
    }
    MapSystem sys(opt.budget);
    sys.add_block(space, [&](const LinMap& f) {
        std::vector<std::pair<int, LinMap>> out;
        out.emplace_back(0, chain_defect(f));
        out.emplace_back(1, intertwining_defect(f, iota, iota));
        return out;
    });
    const auto cols = detail::with_extra_row(sys, eps);
    BitVec rhs(sys.row_count() + 1);
    rhs.set(sys.row_count());
    LinearSolution sol = solve_columns(cols, sys.row_count() + 1, rhs);
    if (!sol.particular) throw StructuralError("no self-local equivalence; is iota valid?");
    return {c, iota, std::move(space), std::move(*sol.particular), std::move(sol.null_basis)};
}

/// A self-local equivalence with its kernel, an F2 basis of the null space
/// of its coefficient matrix.
struct SelfLocal {
    LinMap map;
    std::vector<BitVec> kernel;
};

inline std::vector<BitVec> null_space(const BitMatrix& m) {
    std::vector<BitVec> cols;
    for (std::size_t x = 0; x < m.cols(); ++x) cols.push_back(m.column(x));
    return solve_columns(cols, m.rows()).null_basis;
}

/// Every almost self-local equivalence, each with its kernel. The family
/// has 2^dimension members; the budget bounds that count.
inline std::vector<SelfLocal> self_local_equivalences(const ComplexPtr& c, const IotaData& iota,
                                                      const SearchOptions& opt = {}) {
    const SelfLocalFamily fam = self_local_family(c, iota, opt);
    std::vector<SelfLocal> out;
    fam.visit(opt.budget, [&](const BitVec& bits, const BitMatrix& m) {
        out.push_back({fam.map(bits), null_space(m)});
        return true;
    });
    return out;
}

/// ker a ⊆ ker b for kernels given as F2 bases.
inline bool kernel_contained(const std::vector<BitVec>& a, const std::vector<BitVec>& b, std::size_t dim) {
    EchelonBasis eb(dim, 0);
    for (const auto& v : b) eb.insert(v);
    return std::all_of(a.begin(), a.end(), [&](const BitVec& v) { return eb.contains(v); });
}

struct ConnectedResult {
    Complex complex;
    LinMap maximal;     // a maximal self-local equivalence
    LinMap idempotent;  // a power of it with e∘e = e and the same image
    std::size_t rank = 0;
    std::size_t family_size = 0;
    bool maximal_within_cap = true;  // the cap kept every coordinate, so this is absolute
};

namespace detail {

/// e(y) written in the basis e(x_j): coefficients as a chain over `basis`.
inline Chain express_in_image(const Complex& c, const LinMap& e, const std::vector<int>& basis, int y) {
    std::map<std::pair<int, Mono>, std::size_t> rows;
    auto row_of = [&](int t, const Mono& m) { return rows.emplace(std::make_pair(t, m), rows.size()).first->second; };
    std::vector<std::vector<std::size_t>> col_rows;
    std::vector<std::optional<Mono>> monos;
    for (int x : basis) {
        auto m = graded_mono(c.gen(y), c.gen(x), Variance::Equivariant, {0, 0});
        monos.push_back(m);
        std::vector<std::size_t> rs;
        if (m)
            for (const auto& t : e.image(x))
                for (const auto& mono : t.coeff.terms())
                    if (!c.ring().contains(*m * mono)) rs.push_back(row_of(t.target, *m * mono));
        col_rows.push_back(std::move(rs));
    }
    std::vector<std::size_t> target_rows;
    for (const auto& t : e.image(y))
        for (const auto& mono : t.coeff.terms()) target_rows.push_back(row_of(t.target, mono));
    std::vector<BitVec> cols;
    for (const auto& rs : col_rows) {
        BitVec v(rows.size());
        for (auto r : rs) v.flip(r);
        cols.push_back(std::move(v));
    }
    BitVec rhs(rows.size());
    for (auto r : target_rows) rhs.flip(r);
    const LinearSolution sol = solve_columns(cols, rows.size(), rhs);
    if (!sol.particular) throw StructuralError("image of the idempotent is not spanned by the chosen basis");
    Chain out;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (sol.particular->get(j)) out.push_back({static_cast<int>(j), RingElt(*monos[j])});
    return out;
}

}  // namespace detail

/// im f as a complex, for a degree-0 self chain map f of C. Some power e of
/// f is idempotent with the same image, and the e(x_j) for x_j independent
/// mod (U,V) under e form a basis of im e. Returns the complex and e.
inline std::pair<Complex, LinMap> image_complex(const ComplexPtr& c, const LinMap& f, std::size_t budget) {
    LinMap e = f;
    for (std::size_t k = 0;; ++k) {
        const LinMap ee = compose(e, e);
        if (ee == e) break;
        if (k > budget) throw ResourceError("no idempotent power found", k, budget);
        e = compose(e, f);
    }

    const BitMatrix e0 = unit_matrix(e);
    EchelonBasis indep(c->size(), 0);
    std::vector<int> basis;
    for (std::size_t x = 0; x < c->size(); ++x)
        if (indep.insert(e0.column(x))) basis.push_back(static_cast<int>(x));

    std::vector<Generator> gens;
    for (int x : basis) gens.push_back(c->gen(x));
    std::vector<std::vector<Term>> expr(c->size());
    std::vector<bool> done(c->size(), false);
    auto expression = [&](int y) -> const std::vector<Term>& {
        if (!done[static_cast<std::size_t>(y)]) {
            expr[static_cast<std::size_t>(y)] = detail::express_in_image(*c, e, basis, y);
            done[static_cast<std::size_t>(y)] = true;
        }
        return expr[static_cast<std::size_t>(y)];
    };
    // ∂ e(x_j) = e(∂ x_j) = Σ coeff · e(y)
    std::vector<Chain> diff;
    for (int x : basis) {
        std::vector<Term> terms;
        for (const auto& t : c->d(x))
            for (const auto& s : expression(t.target)) terms.push_back({s.target, t.coeff * s.coeff});
        diff.push_back(normalize_chain(std::move(terms), c->ring()));
    }
    return {Complex(c->name() + "-conn", std::move(gens), std::move(diff), c->ring()), std::move(e)};
}

/// Image of a maximal almost self-local equivalence, as a complex. A member
/// of least coefficient rank has a kernel of largest dimension, hence a
/// maximal kernel.
inline ConnectedResult connected_complex(const ComplexPtr& c, const IotaData& iota, const SearchOptions& opt = {}) {
    const SelfLocalFamily fam = self_local_family(c, iota, opt);
    std::optional<BitVec> best;
    std::size_t best_rank = c->size() + 1;
    std::size_t count = 0;
    fam.visit(opt.budget, [&](const BitVec& bits, const BitMatrix& m) {
        ++count;
        const std::size_t r = m.rank();
        if (r < best_rank) {
            best_rank = r;
            best = bits;
        }
        return true;
    });
    const LinMap f = fam.map(*best);
    auto [conn, e] = image_complex(c, f, opt.budget);
    return {std::move(conn), f, e, best_rank, count, fam.space.complete()};
}

/// Ord_U of HFK^- of the connected complex.
inline int concordance_unknotting_bound(const ComplexPtr& c, const IotaData& iota, const SearchOptions& opt = {}) {
    return torsion_order(hfk_minus(connected_complex(c, iota, opt).complex));
}

}  // namespace iknot
