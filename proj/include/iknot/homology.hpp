#pragma once

// HFK^- = H_*(C/(V)) as an F2[U]-module, its torsion order, the hat
// homology H_*(C/(U,V)), and the rank of the localized homology.

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"

namespace iknot {

struct TorsionSummand {
    int order = 0;    // F2[U]/(U^order)
    int grading = 0;  // Maslov grading of the generator

    auto operator<=>(const TorsionSummand&) const = default;
};

/// Free part (one Maslov grading per tower) and torsion summands, both sorted.
struct FUDecomp {
    std::vector<int> towers;
    std::vector<TorsionSummand> torsion;

    std::size_t tower_count() const { return towers.size(); }
    bool operator==(const FUDecomp&) const = default;
};

namespace detail {

/// Square matrix over F2[U] whose nonzero entries are single powers of U
/// (stored as exponents, -1 for zero). Entry (r, c): coefficient of r in the
/// image of c. Graded basis changes keep every entry a monomial.
class UMatrix {
public:
    explicit UMatrix(std::size_t n) : n_(n), e_(n * n, -1) {}

    int& at(std::size_t r, std::size_t c) { return e_[r * n_ + c]; }
    int at(std::size_t r, std::size_t c) const { return e_[r * n_ + c]; }
    std::size_t size() const { return n_; }

    /// Basis change e_i <- e_i + U^s e_j: column i += U^s column j, then
    /// row j += U^s row i.
    void transvect(std::size_t i, std::size_t j, int s) {
        for (std::size_t r = 0; r < n_; ++r) add_into(at(r, i), at(r, j), s);
        for (std::size_t c = 0; c < n_; ++c) add_into(at(j, c), at(i, c), s);
    }

private:
    static void add_into(int& dst, int src, int s) {
        if (src < 0) return;
        if (dst < 0)
            dst = src + s;
        else if (dst == src + s)
            dst = -1;
        else
            throw StructuralError("inhomogeneous entry in F2[U] reduction");
    }

    std::size_t n_;
    std::vector<int> e_;
};

}  // namespace detail

/// Reduction of the differential of C/(V) over F2[U] by graded basis
/// changes. Each step takes the nonzero entry of least U-degree, ties broken
/// by column then row, clears its row and column, and splits off the pair.
inline FUDecomp hfk_minus(const Complex& c) {
    const auto kind = c.ring().kind();
    if (kind != Ideal::Kind::Zero && kind != Ideal::Kind::UV)
        throw StructuralError("HFK^- needs a complex over the full ring or mod UV, got " + c.ring().to_string());
    const std::size_t n = c.size();
    detail::UMatrix m(n);
    for (int x = 0; x < static_cast<int>(n); ++x)
        for (const auto& t : c.d(x))
            for (const auto& mono : t.coeff.terms())
                if (mono.j == 0) m.at(static_cast<std::size_t>(t.target), static_cast<std::size_t>(x)) = mono.i;

    std::vector<bool> alive(n, true);
    FUDecomp out;
    while (true) {
        int best = -1;
        std::size_t px = 0, py = 0;
        for (std::size_t x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            for (std::size_t y = 0; y < n; ++y) {
                const int e = m.at(y, x);
                if (!alive[y] || e < 0) continue;
                if (best < 0 || e < best) {
                    best = e;
                    px = x;
                    py = y;
                }
            }
        }
        if (best < 0) break;
        for (std::size_t x = 0; x < n; ++x)
            if (x != px && alive[x] && m.at(py, x) >= 0) m.transvect(x, px, m.at(py, x) - best);
        for (std::size_t y = 0; y < n; ++y)
            if (y != py && alive[y] && m.at(y, px) >= 0) m.transvect(py, y, m.at(y, px) - best);
        alive[px] = alive[py] = false;
        if (best > 0) out.torsion.push_back({best, c.gen(static_cast<int>(py)).gr_u});
    }
    for (std::size_t x = 0; x < n; ++x)
        if (alive[x]) out.towers.push_back(c.gen(static_cast<int>(x)).gr_u);
    std::sort(out.towers.begin(), out.towers.end());
    std::sort(out.torsion.begin(), out.torsion.end());
    return out;
}

/// Ord_U: the largest torsion order, 0 when torsion-free.
inline int torsion_order(const FUDecomp& d) {
    int k = 0;
    for (const auto& t : d.torsion) k = std::max(k, t.order);
    return k;
}

struct HatEntry {
    int maslov = 0;
    int alexander = 0;
    int rank = 0;

    auto operator<=>(const HatEntry&) const = default;
};

struct HatRanks {
    std::vector<HatEntry> entries;  // sorted, zero ranks omitted

    int total() const {
        int s = 0;
        for (const auto& e : entries) s += e.rank;
        return s;
    }
};

/// Homology of C/(U,V) bucketed by (Maslov, Alexander). Unit arrows lower
/// the bigrading by (1,1), so each bucket only meets its two neighbours.
inline HatRanks hfk_hat(const Complex& c) {
    std::map<Bigrading, std::vector<int>> buckets;
    for (int x = 0; x < static_cast<int>(c.size()); ++x) buckets[c.gen(x).gr()].push_back(x);
    const BitMatrix d = unit_part(c);

    // rank of ∂ restricted to the bucket at `g`
    auto out_rank = [&](const Bigrading& g) -> std::size_t {
        auto src = buckets.find(g);
        auto dst = buckets.find(g - Bigrading{1, 1});
        if (src == buckets.end() || dst == buckets.end()) return 0;
        BitMatrix sub(dst->second.size(), src->second.size());
        for (std::size_t r = 0; r < dst->second.size(); ++r)
            for (std::size_t k = 0; k < src->second.size(); ++k)
                if (d.get(static_cast<std::size_t>(dst->second[r]), static_cast<std::size_t>(src->second[k])))
                    sub.set(r, k);
        return sub.rank();
    };

    HatRanks out;
    for (const auto& [g, gens] : buckets) {
        const auto h = static_cast<int>(gens.size() - out_rank(g) - out_rank(g + Bigrading{1, 1}));
        if (h > 0) out.entries.push_back({g.u, (g.u - g.v) / 2, h});
    }
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

/// Rank of H_*(C) after inverting U and V, read off as the number of towers.
inline std::size_t locality_rank(const Complex& c) { return hfk_minus(c).tower_count(); }

inline std::string to_string(const FUDecomp& d) {
    std::string s;
    for (int g : d.towers) {
        if (!s.empty()) s += "; ";
        s += "tower gr=" + std::to_string(g);
    }
    if (!s.empty()) s += "; ";
    if (d.torsion.empty()) {
        s += "torsion none";
    } else {
        s += "torsion";
        for (std::size_t k = 0; k < d.torsion.size(); ++k)
            s += (k ? ", U^" : " U^") + std::to_string(d.torsion[k].order) + " gr=" +
                 std::to_string(d.torsion[k].grading);
    }
    return s;
}

}  // namespace iknot
