#pragma once

// Builders for the unknot, the figure-eight knot, and the (2n-1,-1)-cables
// K_n of the figure-eight knot, plus the iota values pinned on K_n.

#include <string>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/ring.hpp"

namespace iknot {

inline Mono U(int k = 1) { return {k, 0}; }
inline Mono V(int k = 1) { return {0, k}; }

inline Complex build_unknot() {
    ComplexBuilder b("unknot");
    b.gen("a", 0, 0);
    return b.build();
}

inline Complex build_figure_eight() {
    ComplexBuilder b("fig8");
    b.gen("a", 0, 0).gen("b", 0, 0).gen("c", 1, -1).gen("d", -1, 1).gen("e", 0, 0);
    b.d("b", U(), "c").d("b", V(), "d");
    b.d("c", V(), "e");
    b.d("d", U(), "e");
    return b.build();
}

/// Generator name for the indexed families: b_0_1 stands for b_{0,1}.
inline std::string cable_name(char letter, int j, int i) {
    return std::string(1, letter) + "_" + std::to_string(j) + "_" + std::to_string(i);
}

/// K_n for n >= 2: 15 + 12(n-2) generators in the fixed basis of the
/// published table. Other bases are related by a change of basis only.
inline Complex build_cable(int n) {
    if (n < 2) throw DomainError("cable parameter n must be at least 2, got " + std::to_string(n));
    ComplexBuilder b("cable:" + std::to_string(n));
    b.gen("a", 0, 0).gen("b", 0, 0);
    b.gen("c", 2 * n - 1, -1).gen("d", 1, 1).gen("e", -1, 2 * n - 1);
    b.gen("f", 2 * n - 2, 0).gen("g", 0, 2 * n - 2);
    b.d("b", U(n), "c").d("b", Mono{1, 1}, "d").d("b", V(n), "e");
    b.d("c", V(), "f");
    b.d("d", U(n - 1), "f").d("d", V(n - 1), "g");
    b.d("e", U(), "g");

    // Square families: j = 0 lengthens the U side, j = 1 the V side.
    for (int j = 0; j < 2; ++j)
        for (int i = 1; i <= n - 2; ++i) {
            const int p = j == 0 ? n + i : n - i;  // horizontal length
            const int q = j == 0 ? n - i : n + i;  // vertical length
            auto nm = [&](char l) { return cable_name(l, j, i); };
            b.gen(nm('b'), 0, 0).gen(nm('c'), 2 * p - 1, -1).gen(nm('d'), 1, 1).gen(nm('e'), -1, 2 * q - 1);
            b.gen(nm('f'), 2 * p - 2, 0).gen(nm('g'), 0, 2 * q - 2);
            b.d(nm('b'), U(p), nm('c')).d(nm('b'), Mono{1, 1}, nm('d')).d(nm('b'), V(q), nm('e'));
            b.d(nm('c'), V(), nm('f'));
            b.d(nm('d'), U(p - 1), nm('f')).d(nm('d'), V(q - 1), nm('g'));
            b.d(nm('e'), U(), nm('g'));
        }

    const int m = n - 1;
    const std::string b0 = cable_name('b', 0, m), c0 = cable_name('c', 0, m), e0 = cable_name('e', 0, m),
                      f0 = cable_name('f', 0, m);
    b.gen(b0, 0, 0).gen(c0, 4 * n - 3, -1).gen(e0, -1, 1).gen(f0, 4 * n - 4, 0);
    b.d(b0, U(2 * n - 1), c0).d(b0, V(), e0);
    b.d(c0, V(), f0);
    b.d(e0, U(2 * n - 1), f0);

    const std::string b1 = cable_name('b', 1, m), c1 = cable_name('c', 1, m), e1 = cable_name('e', 1, m),
                      g1 = cable_name('g', 1, m);
    b.gen(b1, 0, 0).gen(c1, 1, -1).gen(e1, -1, 4 * n - 3).gen(g1, 0, 4 * n - 4);
    b.d(b1, U(), c1).d(b1, V(2 * n - 1), e1);
    b.d(c1, V(2 * n - 1), g1);
    b.d(e1, U(), g1);
    return b.build();
}

/// A generator and its forced image mod (U,V), as a sum of generator names.
struct ForcedValue {
    std::string generator;
    std::vector<std::string> image;
};

/// The iota values on K_n that every almost iota must take.
inline std::vector<ForcedValue> forced_iota_constraints(int n) {
    if (n < 2) throw DomainError("cable parameter n must be at least 2, got " + std::to_string(n));
    return {{"a", {"a"}}, {"b", {"a", "b"}}, {"f", {"g"}}, {"g", {"f"}}};
}

/// Parses the --knot spelling: unknot, fig8, or cable:<n>.
inline Complex build_knot(const std::string& spec) {
    if (spec == "unknot") return build_unknot();
    if (spec == "fig8") return build_figure_eight();
    if (spec.rfind("cable:", 0) == 0) {
        const std::string tail = spec.substr(6);
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (tail.empty() || used != tail.size()) throw DomainError("bad cable parameter '" + tail + "'");
        return build_cable(n);
    }
    throw DomainError("unknown knot '" + spec + "' (expected unknot, fig8 or cable:<n>)");
}

}  // namespace iknot
