#pragma once

// Random reduced complexes and graded changes of basis for property tests.

#include <random>
#include <string>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/knotlib.hpp"
#include "iknot/linmap.hpp"
#include "iknot/tensorsum.hpp"

namespace testing_helpers {

using namespace iknot;

/// ∂b = U^p c + V^q d, ∂c = V^q e, ∂d = U^p e.
inline Complex box(int p, int q, const std::string& tag) {
    ComplexBuilder b("box" + tag);
    b.gen("b" + tag, 0, 0).gen("c" + tag, 2 * p - 1, -1).gen("d" + tag, -1, 2 * q - 1).gen("e" + tag, 2 * p - 2, 2 * q - 2);
    b.d("b" + tag, Mono{p, 0}, "c" + tag).d("b" + tag, Mono{0, q}, "d" + tag);
    b.d("c" + tag, Mono{0, q}, "e" + tag).d("d" + tag, Mono{p, 0}, "e" + tag);
    return b.build();
}

/// New basis e_i' = e_i + m e_j, which needs gr(e_i) = gr(m e_j).
inline Complex transvect(const Complex& c, int i, int j, const Mono& m) {
    std::vector<std::vector<Term>> d(c.differential().begin(), c.differential().end());
    for (const auto& t : c.d(j)) d[static_cast<std::size_t>(i)].push_back({t.target, RingElt(m) * t.coeff});
    std::vector<Chain> cols;
    for (auto& ch : d) cols.push_back(normalize_chain(std::move(ch), c.ring()));
    for (auto& ch : cols) {
        const RingElt ci = coefficient(ch, i);
        if (ci.is_zero()) continue;
        std::vector<Term> t(ch.begin(), ch.end());
        t.push_back({j, RingElt(m) * ci});
        ch = normalize_chain(std::move(t), c.ring());
    }
    return Complex(c.name(), c.basis(), std::move(cols), c.ring());
}

/// The isomorphism P: new -> old, e_k' -> e_k + [k = i] m e_j. It is its
/// own inverse when read old -> new.
inline LinMap transvection_map(const ComplexPtr& from, const ComplexPtr& to, int i, int j, const Mono& m) {
    std::vector<Chain> act(from->size());
    for (int k = 0; k < static_cast<int>(from->size()); ++k) {
        std::vector<Term> t{{k, RingElt::one()}};
        if (k == i) t.push_back({j, RingElt(m)});
        act[static_cast<std::size_t>(k)] = normalize_chain(std::move(t), from->ring());
    }
    return LinMap(from, to, Variance::Equivariant, {0, 0}, from->ring(), std::move(act));
}

/// A random graded transvection of `c`, or nothing when none is found.
inline bool random_transvection(const Complex& c, std::mt19937& rng, int& i, int& j, Mono& m) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(c.size()) - 1);
    for (int tries = 0; tries < 200; ++tries) {
        i = pick(rng);
        j = pick(rng);
        if (i == j) continue;
        auto mm = graded_mono(c.gen(i), c.gen(j), Variance::Equivariant, {0, 0});
        if (!mm) continue;
        m = *mm;
        return true;
    }
    return false;
}

inline Complex random_basis_change(Complex c, std::mt19937& rng, int steps) {
    for (int s = 0; s < steps; ++s) {
        int i = 0, j = 0;
        Mono m;
        if (random_transvection(c, rng, i, j, m)) c = transvect(c, i, j, m);
    }
    return c;
}

/// Unknot plus a few boxes, maybe a figure-eight or K2, maybe a small
/// tensor product, then a random change of basis. Always reduced.
inline Complex random_reduced_complex(std::mt19937& rng) {
    std::uniform_int_distribution<int> len(1, 3), coin(0, 1), nbox(0, 3);
    Complex c = build_unknot();
    const int boxes = nbox(rng);
    for (int k = 0; k < boxes; ++k) c = direct_sum(c, box(len(rng), len(rng), std::to_string(k)));
    if (coin(rng)) c = direct_sum(c, build_figure_eight());
    if (coin(rng) && coin(rng)) c = direct_sum(c, build_cable(2));
    if (coin(rng)) c = direct_sum(c, tensor(box(len(rng), len(rng), "x"), build_figure_eight()));
    return random_basis_change(c, rng, 12);
}

/// A random element of a map coordinate space.
inline BitVec random_bits(std::size_t n, std::mt19937& rng) {
    BitVec v(n);
    std::bernoulli_distribution b(0.5);
    for (std::size_t k = 0; k < n; ++k)
        if (b(rng)) v.set(k);
    return v;
}

}  // namespace testing_helpers
