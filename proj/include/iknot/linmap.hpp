#pragma once

// Module maps between complexes, and the finite F2 coordinate spaces of
// graded maps that all searches are phrased in.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/ring.hpp"

namespace iknot {

using ComplexPtr = std::shared_ptr<const Complex>;

inline ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

/// Equivariant: f(Ux) = U f(x). Skew: f(Ux) = V f(x), f(Vx) = U f(x).
/// Linear: a bare F2-linear map on C/(U,V) with no grading constraint.
enum class Variance { Equivariant, Skew, Linear };

inline const char* to_string(Variance v) {
    switch (v) {
        case Variance::Equivariant: return "eq";
        case Variance::Skew: return "skew";
        case Variance::Linear: return "linear";
    }
    return "?";
}

/// Grading of f(x) predicted by the declared variance and shift. For skew
/// maps: grU(f x) = grV(x) + shift.u and grV(f x) = grU(x) + shift.v.
inline Bigrading image_grading(const Generator& x, Variance var, Bigrading shift) {
    if (var == Variance::Skew) return Bigrading{x.gr_v, x.gr_u} + shift;
    return x.gr() + shift;
}

/// The unique monomial m for which m*y has the predicted grading of f(x).
inline std::optional<Mono> graded_mono(const Generator& x, const Generator& y, Variance var, Bigrading shift) {
    const Bigrading want = image_grading(x, var, shift);
    const int du = y.gr_u - want.u;
    const int dv = y.gr_v - want.v;
    if (du < 0 || dv < 0 || du % 2 != 0 || dv % 2 != 0) return std::nullopt;
    return Mono{du / 2, dv / 2};
}

inline bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || a->identical(*b); }

class LinMap {
public:
    LinMap() = default;

    LinMap(ComplexPtr src, ComplexPtr tgt, Variance var, Bigrading shift, Ideal ideal, std::vector<Chain> action)
        : src_(std::move(src)), tgt_(std::move(tgt)), var_(var), shift_(shift), ideal_(ideal),
          action_(std::move(action)) {
        if (action_.size() != src_->size()) throw StructuralError("map action size differs from source basis size");
        if (var_ == Variance::Linear) ideal_ = Ideal::max_ideal();
        for (auto& c : action_) {
            for (const auto& t : c)
                if (t.target < 0 || static_cast<std::size_t>(t.target) >= tgt_->size())
                    throw StructuralError("map references unknown target generator");
            c = normalize_chain(std::move(c), ideal_);
        }
    }

    static LinMap zero(ComplexPtr src, ComplexPtr tgt, Variance var, Bigrading shift, Ideal ideal) {
        const std::size_t n = src->size();
        return LinMap(std::move(src), std::move(tgt), var, shift, ideal, std::vector<Chain>(n));
    }

    static LinMap identity(const ComplexPtr& c, Ideal ideal) {
        std::vector<Chain> act(c->size());
        for (int x = 0; x < static_cast<int>(c->size()); ++x) act[static_cast<std::size_t>(x)] = {{x, RingElt::one()}};
        return LinMap(c, c, Variance::Equivariant, {0, 0}, ideal, std::move(act));
    }

    /// The differential of `c` as an equivariant map of bidegree (-1,-1).
    static LinMap differential(const ComplexPtr& c) {
        return LinMap(c, c, Variance::Equivariant, {-1, -1}, c->ring(), c->differential());
    }

    const ComplexPtr& source() const { return src_; }
    const ComplexPtr& target() const { return tgt_; }
    Variance variance() const { return var_; }
    Bigrading shift() const { return shift_; }
    const Ideal& ideal() const { return ideal_; }
    const Chain& image(int x) const { return action_[static_cast<std::size_t>(x)]; }
    const std::vector<Chain>& action() const { return action_; }

    bool is_zero() const {
        for (const auto& c : action_)
            if (!c.empty()) return false;
        return true;
    }

    /// f applied to a chain in the source basis.
    Chain apply(const Chain& c) const {
        std::vector<Term> out;
        for (const auto& t : c) {
            const RingElt k = var_ == Variance::Skew ? t.coeff.swapped() : t.coeff;
            for (const auto& s : image(t.target)) out.push_back({s.target, k * s.coeff});
        }
        return normalize_chain(std::move(out), ideal_);
    }

    LinMap reduced(const Ideal& ideal) const {
        return LinMap(src_, tgt_, var_, shift_, larger_ideal(ideal_, ideal), action_);
    }

    /// Terms violating the declared variance/shift grading rule.
    std::vector<std::string> grading_violations() const {
        std::vector<std::string> out;
        if (var_ == Variance::Linear) return out;
        for (int x = 0; x < static_cast<int>(src_->size()); ++x)
            for (const auto& t : image(x))
                for (const auto& m : t.coeff.terms()) {
                    auto want = graded_mono(src_->gen(x), tgt_->gen(t.target), var_, shift_);
                    if (!want || !(*want == m))
                        out.push_back(to_string(m) + " " + tgt_->gen(t.target).name + " in image of " +
                                      src_->gen(x).name);
                }
        return out;
    }

    friend LinMap operator+(const LinMap& f, const LinMap& g) {
        if (!same_complex(f.src_, g.src_) || !same_complex(f.tgt_, g.tgt_))
            throw StructuralError("adding maps with different source or target");
        if (f.var_ != g.var_) throw StructuralError("adding maps of different variance");
        if (f.var_ != Variance::Linear && !(f.shift_ == g.shift_))
            throw StructuralError("adding maps of different bidegree");
        const Ideal ideal = larger_ideal(f.ideal_, g.ideal_);
        std::vector<Chain> act(f.action_.size());
        for (std::size_t x = 0; x < act.size(); ++x) act[x] = add_chains(f.action_[x], g.action_[x], ideal);
        return LinMap(f.src_, f.tgt_, f.var_, f.shift_, ideal, std::move(act));
    }

    /// Exact equality of actions (ideal and bidegree included).
    bool operator==(const LinMap& o) const {
        return same_complex(src_, o.src_) && same_complex(tgt_, o.tgt_) && var_ == o.var_ &&
               (var_ == Variance::Linear || shift_ == o.shift_) && ideal_ == o.ideal_ && action_ == o.action_;
    }

private:
    ComplexPtr src_;
    ComplexPtr tgt_;
    Variance var_ = Variance::Equivariant;
    Bigrading shift_{};
    Ideal ideal_;
    std::vector<Chain> action_;
};

inline Variance composed_variance(Variance f, Variance g) {
    if (f == Variance::Linear || g == Variance::Linear) return Variance::Linear;
    return (f == g) ? Variance::Equivariant : Variance::Skew;
}

inline Bigrading composed_shift(const LinMap& f, const LinMap& g) {
    const Bigrading sf = f.shift(), sg = g.shift();
    if (f.variance() == Variance::Skew) return {sf.u + sg.v, sf.v + sg.u};
    return sf + sg;
}

/// f ∘ g
inline LinMap compose(const LinMap& f, const LinMap& g) {
    if (!same_complex(g.target(), f.source())) throw StructuralError("composing maps with mismatched complexes");
    const Ideal ideal = larger_ideal(f.ideal(), g.ideal());
    const LinMap fr = f.ideal() == ideal ? f : f.reduced(ideal);
    std::vector<Chain> act(g.source()->size());
    for (int x = 0; x < static_cast<int>(act.size()); ++x) act[static_cast<std::size_t>(x)] = fr.apply(g.image(x));
    return LinMap(g.source(), f.target(), composed_variance(f.variance(), g.variance()), composed_shift(f, g), ideal,
                  std::move(act));
}

/// Entry (y, x) is the constant coefficient of y in f(x).
inline BitMatrix unit_matrix(const LinMap& f) {
    BitMatrix m(f.target()->size(), f.source()->size());
    for (int x = 0; x < static_cast<int>(f.source()->size()); ++x)
        for (const auto& t : f.image(x))
            if (t.coeff.constant_term()) m.set(static_cast<std::size_t>(t.target), static_cast<std::size_t>(x));
    return m;
}

/// Map over C/(U,V) with the given unit matrix.
inline LinMap from_unit_matrix(const ComplexPtr& src, const ComplexPtr& tgt, Variance var, Bigrading shift,
                               const BitMatrix& m) {
    std::vector<Chain> act(src->size());
    for (std::size_t x = 0; x < src->size(); ++x)
        for (std::size_t y = 0; y < tgt->size(); ++y)
            if (m.get(y, x)) act[x].push_back({static_cast<int>(y), RingElt::one()});
    return LinMap(src, tgt, var, shift, Ideal::max_ideal(), std::move(act));
}

/// One coordinate of a graded map: the monomial coefficient of y in f(x).
struct MapCoord {
    int x = 0;
    int y = 0;
    Mono m;
};

/// Every coordinate a graded map with the given variance and bidegree can
/// have, truncated at exponent `cap` and with monomials in `ideal` dropped.
/// Because gradings determine the monomial, each (x, y) pair contributes at
/// most one coordinate.
class MapSpace {
public:
    MapSpace(ComplexPtr src, ComplexPtr tgt, Variance var, Bigrading shift, Ideal ideal, int cap)
        : src_(std::move(src)), tgt_(std::move(tgt)), var_(var), shift_(shift), ideal_(ideal), cap_(cap) {
        for (int x = 0; x < static_cast<int>(src_->size()); ++x)
            for (int y = 0; y < static_cast<int>(tgt_->size()); ++y) {
                auto m = graded_mono(src_->gen(x), tgt_->gen(y), var_, shift_);
                if (!m || ideal_.contains(*m)) continue;
                required_cap_ = std::max({required_cap_, m->i, m->j});
                if (m->i > cap_ || m->j > cap_) {
                    ++excluded_;
                    continue;
                }
                index_.emplace(key(x, y), static_cast<int>(coords_.size()));
                coords_.push_back({x, y, *m});
            }
    }

    const ComplexPtr& source() const { return src_; }
    const ComplexPtr& target() const { return tgt_; }
    Variance variance() const { return var_; }
    Bigrading shift() const { return shift_; }
    const Ideal& ideal() const { return ideal_; }
    int cap() const { return cap_; }
    std::size_t size() const { return coords_.size(); }
    const MapCoord& coord(std::size_t k) const { return coords_[k]; }

    /// Grading-compatible coordinates dropped because they exceed the cap.
    std::size_t excluded_by_cap() const { return excluded_; }
    /// Smallest cap that keeps every grading-compatible coordinate.
    int required_cap() const { return required_cap_; }
    bool complete() const { return excluded_ == 0; }

    std::optional<std::size_t> find(int x, int y) const {
        auto it = index_.find(key(x, y));
        if (it == index_.end()) return std::nullopt;
        return static_cast<std::size_t>(it->second);
    }

    LinMap unit(std::size_t k) const {
        std::vector<Chain> act(src_->size());
        act[static_cast<std::size_t>(coords_[k].x)] = {{coords_[k].y, RingElt(coords_[k].m)}};
        return LinMap(src_, tgt_, var_, shift_, ideal_, std::move(act));
    }

    LinMap from_bits(const BitVec& bits) const {
        std::vector<std::vector<Term>> act(src_->size());
        for (std::size_t k = bits.find_first(); k < bits.size(); k = bits.find_next(k + 1))
            act[static_cast<std::size_t>(coords_[k].x)].push_back({coords_[k].y, RingElt(coords_[k].m)});
        std::vector<Chain> chains(act.begin(), act.end());
        return LinMap(src_, tgt_, var_, shift_, ideal_, std::move(chains));
    }

    /// Coordinates of f; throws if f has a term outside this space.
    BitVec to_bits(const LinMap& f) const {
        BitVec out(size());
        for (int x = 0; x < static_cast<int>(f.source()->size()); ++x)
            for (const auto& t : f.image(x))
                for (const auto& m : t.coeff.terms()) {
                    if (ideal_.contains(m)) continue;
                    auto k = find(x, t.target);
                    if (!k || !(coords_[*k].m == m))
                        throw StructuralError("map term " + to_string(m) + " " + tgt_->gen(t.target).name +
                                              " lies outside the coordinate space");
                    out.flip(*k);
                }
        return out;
    }

private:
    static std::uint64_t key(int x, int y) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
    }

    ComplexPtr src_;
    ComplexPtr tgt_;
    Variance var_;
    Bigrading shift_;
    Ideal ideal_;
    int cap_;
    int required_cap_ = 0;
    std::size_t excluded_ = 0;
    std::vector<MapCoord> coords_;
    std::unordered_map<std::uint64_t, int> index_;
};

/// Linear equations on map coordinates. Each block of unknowns comes with a
/// linear operator taking a unit map to the map(s) it contributes; outputs
/// are keyed by (equation family, x, y, monomial).
class MapSystem {
public:
    explicit MapSystem(std::size_t budget) : budget_(budget) {}

    /// Adds one column per coordinate of `space`. `op` returns the
    /// contribution of a unit map as (family, map) pairs.
    template <class Op>
    std::size_t add_block(const MapSpace& space, Op op) {
        const std::size_t first = cols_.size();
        if (first + space.size() > budget_)
            throw ResourceError("F2 system exceeds unknown budget", first + space.size(), budget_);
        for (std::size_t k = 0; k < space.size(); ++k) {
            std::vector<std::size_t> rows;
            for (const auto& [family, img] : op(space.unit(k))) append_rows(family, img, rows);
            cols_.push_back(std::move(rows));
        }
        return first;
    }

    /// Adds a constant column that is not an unknown: returns its row vector.
    BitVec vectorize(const std::vector<std::pair<int, LinMap>>& parts) {
        std::vector<std::size_t> rows;
        for (const auto& [family, img] : parts) append_rows(family, img, rows);
        BitVec v(row_count());
        for (auto r : rows) v.flip(r);
        return v;
    }

    std::size_t unknowns() const { return cols_.size(); }
    std::size_t row_count() const { return row_index_.size(); }

    /// Dense columns over the rows seen so far.
    std::vector<BitVec> columns() const {
        std::vector<BitVec> out;
        out.reserve(cols_.size());
        for (const auto& c : cols_) {
            BitVec v(row_count());
            for (auto r : c) v.flip(r);
            out.push_back(std::move(v));
        }
        return out;
    }

    /// Solves sum_k x_k col_k = rhs (rhs absent: homogeneous).
    LinearSolution solve(const std::optional<BitVec>& rhs = std::nullopt) const {
        std::optional<BitVec> r;
        if (rhs) {
            r = BitVec(row_count());
            for (std::size_t k = rhs->find_first(); k < rhs->size(); k = rhs->find_next(k + 1)) r->set(k);
        }
        return solve_columns(columns(), row_count(), r);
    }

private:
    void append_rows(int family, const LinMap& img, std::vector<std::size_t>& rows) {
        for (int x = 0; x < static_cast<int>(img.source()->size()); ++x)
            for (const auto& t : img.image(x))
                for (const auto& m : t.coeff.terms()) {
                    const std::uint64_t key = (static_cast<std::uint64_t>(family & 0xF) << 60) |
                                              (static_cast<std::uint64_t>(x & 0x7FFF) << 45) |
                                              (static_cast<std::uint64_t>(t.target & 0x7FFF) << 30) |
                                              (static_cast<std::uint64_t>(m.i & 0x7FFF) << 15) |
                                              static_cast<std::uint64_t>(m.j & 0x7FFF);
                    auto [it, fresh] = row_index_.emplace(key, row_index_.size());
                    rows.push_back(it->second);
                }
    }

    std::size_t budget_;
    std::vector<std::vector<std::size_t>> cols_;
    std::unordered_map<std::uint64_t, std::size_t> row_index_;
};

/// Resizes a vector built before later rows were added.
inline BitVec widen(const BitVec& v, std::size_t n) {
    BitVec out(n);
    for (std::size_t k = v.find_first(); k < v.size(); k = v.find_next(k + 1)) out.set(k);
    return out;
}

}  // namespace iknot
