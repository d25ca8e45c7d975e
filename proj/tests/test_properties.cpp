#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "iknot/cfk_io.hpp"
#include "iknot/knotlib.hpp"
#include "iknot/morphism.hpp"

using namespace iknot;
using namespace testing_helpers;

namespace {

std::vector<Complex> builders() {
    std::vector<Complex> cs = {build_unknot(), build_figure_eight()};
    for (int n = 2; n <= 6; ++n) cs.push_back(build_cable(n));
    return cs;
}

}  // namespace

TEST(Properties, ReducedHomotopyLemma) {
    // g = f + ∂H + H∂ on a reduced complex agrees with f mod (U,V).
    std::mt19937 rng(1234);
    for (int t = 0; t < 100; ++t) {
        const ComplexPtr c = share(random_reduced_complex(rng));
        ASSERT_TRUE(is_reduced(*c));
        const int cap = c->default_cap();
        for (Variance var : {Variance::Equivariant, Variance::Skew}) {
            const MapSpace maps(c, c, var, {0, 0}, c->ring(), cap);
            const MapSpace homs(c, c, var, {1, 1}, c->ring(), cap);
            const LinMap f = maps.from_bits(random_bits(maps.size(), rng));
            const LinMap h = homs.from_bits(random_bits(homs.size(), rng));
            const LinMap g = f + homotopy_boundary(h);
            EXPECT_EQ(unit_matrix(g), unit_matrix(f)) << "complex " << t;
            EXPECT_TRUE(solve_homotopy(f, g).has_value()) << "complex " << t;
        }
    }
}

TEST(Properties, ReducedHomotopyLemmaNeedsReduced) {
    // A unit arrow x -> y lets H = (y -> x) change the identity mod (U,V).
    ComplexBuilder b("acyclic");
    b.gen("x", 1, 1).gen("y", 0, 0);
    b.d("x", kOne, "y");
    const ComplexPtr c = share(b.build());
    std::vector<Chain> act(2);
    act[1] = Chain{{0, RingElt::one()}};
    const LinMap h(c, c, Variance::Equivariant, {1, 1}, c->ring(), std::move(act));
    EXPECT_FALSE(unit_matrix(homotopy_boundary(h)).is_zero());
}

TEST(Properties, DerivativeMapsOnBuilders) {
    for (const auto& raw : builders()) {
        const ComplexPtr c = share(raw);
        const auto dm = derivative_maps(c);
        EXPECT_TRUE(dm.phi.grading_violations().empty()) << c->name();
        EXPECT_TRUE(dm.psi.grading_violations().empty()) << c->name();
        EXPECT_EQ(dm.phi.shift(), (Bigrading{1, -1}));
        EXPECT_EQ(dm.psi.shift(), (Bigrading{-1, 1}));
        EXPECT_TRUE(is_chain_map(dm.phi)) << c->name();
        EXPECT_TRUE(is_chain_map(dm.psi)) << c->name();
    }
}

TEST(Properties, DerivativeMapsOnRandomComplexes) {
    std::mt19937 rng(77);
    for (int t = 0; t < 30; ++t) {
        const ComplexPtr c = share(random_reduced_complex(rng));
        const auto dm = derivative_maps(c);
        EXPECT_TRUE(is_chain_map(dm.phi));
        EXPECT_TRUE(is_chain_map(dm.psi));
    }
}

TEST(Properties, DerivativeMapsAreBasisIndependentUpToHomotopy) {
    std::mt19937 rng(4242);
    for (const auto& raw : {build_figure_eight(), build_cable(2), build_cable(3)}) {
        for (int t = 0; t < 5; ++t) {
            // compose transvections one at a time, carrying P: new -> old
            ComplexPtr old_c = share(raw);
            ComplexPtr cur = old_c;
            LinMap to_old = LinMap::identity(cur, cur->ring());
            LinMap to_new = to_old;
            for (int s = 0; s < 8; ++s) {
                int i = 0, j = 0;
                Mono m;
                if (!random_transvection(*cur, rng, i, j, m)) continue;
                const ComplexPtr next = share(transvect(*cur, i, j, m));
                to_old = compose(to_old, transvection_map(next, cur, i, j, m));
                to_new = compose(transvection_map(cur, next, i, j, m), to_new);
                cur = next;
            }
            ASSERT_TRUE(is_chain_map(to_old));
            ASSERT_TRUE(is_chain_map(to_new));
            const auto d_old = derivative_maps(old_c);
            const auto d_new = derivative_maps(cur);
            const LinMap phi_moved = compose(to_new, compose(d_old.phi, to_old));
            const LinMap psi_moved = compose(to_new, compose(d_old.psi, to_old));
            EXPECT_TRUE(solve_homotopy(phi_moved, d_new.phi).has_value()) << raw.name() << " " << t;
            EXPECT_TRUE(solve_homotopy(psi_moved, d_new.psi).has_value()) << raw.name() << " " << t;
        }
    }
}

TEST(Properties, DualizeIsAnInvolution) {
    std::mt19937 rng(8);
    std::vector<Complex> cs = builders();
    for (int t = 0; t < 30; ++t) cs.push_back(random_reduced_complex(rng));
    for (const auto& c : cs) {
        EXPECT_TRUE(dualize(dualize(c)).identical(c)) << c.name();
        const auto rep = validate(dualize(c));
        EXPECT_TRUE(rep.ok()) << c.name();
        EXPECT_EQ(rep.reduced, is_reduced(c));
    }
}

TEST(Properties, CfkRoundTrip) {
    std::mt19937 rng(99);
    std::vector<Complex> cs = builders();
    for (int t = 0; t < 30; ++t) cs.push_back(random_reduced_complex(rng));
    for (const auto& c : cs) {
        const std::string text = render_complex(c);
        const Complex back = parse_complex(text);
        EXPECT_TRUE(back.identical(c)) << c.name();
        EXPECT_EQ(render_complex(back), text);
    }
}

TEST(Properties, RingLaws) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(0, 4), k(0, 5);
    auto random_elt = [&] {
        std::vector<Mono> ms;
        const int terms = k(rng);
        for (int t = 0; t < terms; ++t) ms.push_back({e(rng), e(rng)});
        return RingElt(std::move(ms));
    };
    const std::vector<Ideal> ideals = {Ideal::zero(), Ideal::uv(), Ideal::power_box(2, 3), Ideal::max_ideal()};
    for (int t = 0; t < 200; ++t) {
        const RingElt a = random_elt(), b = random_elt(), c = random_elt();
        for (const auto& i : ideals) {
            EXPECT_EQ(reduce(reduce(a, i), i), reduce(a, i));
            EXPECT_EQ(mul(a, b, i), mul(b, a, i));
            EXPECT_EQ(mul(mul(a, b, i), c, i), mul(a, mul(b, c, i), i));
            EXPECT_EQ(mul(a, b + c, i), reduce(mul(a, b, i) + mul(a, c, i), i));
        }
        EXPECT_EQ(reduce(a, Ideal::max_ideal()).is_one(), a.constant_term());
    }
}
