// Acceptance run: one PASS/FAIL line per criterion, with wall-clock limits.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "iknot/iknot.hpp"
#include "oracles.hpp"

using namespace iknot;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const ResourceError& e) {
        o.ok = false;
        o.detail = std::string("resource error: ") + e.what();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= limit_s) {
        o.ok = false;
        o.detail = "over the time limit";
    }
    if (!o.ok) ++failures;
    std::printf("%s %d %s (%.3fs, limit %.0fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs, limit_s,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
}

Chain chain_of(const Complex& c, std::initializer_list<std::pair<Mono, const char*>> terms) {
    std::vector<Term> out;
    for (const auto& [m, n] : terms) out.push_back({c.require(n), RingElt(m)});
    return normalize_chain(std::move(out), c.ring());
}

bool forced_values_hold(const Complex& c, const IotaData& iota, int n) {
    const BitMatrix u = iota.unit();
    for (const auto& fv : forced_iota_constraints(n)) {
        BitVec want(c.size());
        for (const auto& y : fv.image) want.set(static_cast<std::size_t>(c.require(y)));
        if (!(u.column(static_cast<std::size_t>(c.require(fv.generator))) == want)) return false;
    }
    return true;
}

IotaSide almost_side(const Complex& c) {
    const ComplexPtr p = share(c);
    return {p, enumerate_almost_iotas(p)};
}

}  // namespace

int main() {
    criterion(1, "builder fidelity: figure-eight table, K_n valid for n = 2..6", 1.0, [](Outcome& o) {
        const ComplexPtr c = share(build_figure_eight());
        const auto& f = *c;
        const auto dm = derivative_maps(c);
        const LinMap pp = compose(dm.psi, dm.phi);
        struct Row {
            const char* name;
            int gu, gv, a;
            Chain d, phi, psi, pp;
        };
        const std::vector<Row> table = {
            {"a", 0, 0, 0, {}, {}, {}, {}},
            {"b", 0, 0, 0, chain_of(f, {{U(), "c"}, {V(), "d"}}), chain_of(f, {{kOne, "c"}}), chain_of(f, {{kOne, "d"}}),
             chain_of(f, {{kOne, "e"}})},
            {"c", 1, -1, 1, chain_of(f, {{V(), "e"}}), {}, chain_of(f, {{kOne, "e"}}), {}},
            {"d", -1, 1, -1, chain_of(f, {{U(), "e"}}), chain_of(f, {{kOne, "e"}}), {}, {}},
            {"e", 0, 0, 0, {}, {}, {}, {}},
        };
        o.require(f.size() == 5, "figure-eight has 5 generators");
        for (const auto& r : table) {
            const int x = f.require(r.name);
            const auto& g = f.gen(x);
            o.require(g.gr_u == r.gu && g.gr_v == r.gv && g.alexander() == r.a, std::string("gradings of ") + r.name);
            o.require(f.d(x) == r.d, std::string("d of ") + r.name);
            o.require(dm.phi.image(x) == r.phi, std::string("Phi of ") + r.name);
            o.require(dm.psi.image(x) == r.psi, std::string("Psi of ") + r.name);
            o.require(pp.image(x) == r.pp, std::string("Psi Phi of ") + r.name);
        }
        for (int n = 2; n <= 6; ++n) {
            const auto rep = validate(build_cable(n));
            o.require(rep.square_zero && rep.grading_law && rep.reduced, "K_" + std::to_string(n) + " validates");
        }
    });

    criterion(2, "homology: Ord_U(HFK^-(K_n)) = 2n-1 for n = 2..5, oracle agrees", 5.0, [](Outcome& o) {
        for (int n = 2; n <= 5; ++n) {
            const Complex c = build_cable(n);
            const FUDecomp d = hfk_minus(c);
            const oracle::Decomp want = oracle::hfk_minus(c);
            int oracle_order = 0;
            for (const auto& [k, g] : want.torsion) oracle_order = std::max(oracle_order, k);
            std::multiset<std::pair<int, int>> got;
            for (const auto& t : d.torsion) got.insert({t.order, t.grading});
            o.require(torsion_order(d) == 2 * n - 1, "torsion order of K_" + std::to_string(n));
            o.require(oracle_order == 2 * n - 1, "oracle torsion order of K_" + std::to_string(n));
            o.require(got == want.torsion, "torsion summands of K_" + std::to_string(n) + " match the oracle");
            o.require(std::multiset<int>(d.towers.begin(), d.towers.end()) == want.towers, "towers match the oracle");
        }
    });

    criterion(3, "forced iota: every almost iota on K_2, K_3 takes the pinned values", 60.0, [](Outcome& o) {
        for (int n = 2; n <= 3; ++n) {
            const ComplexPtr c = share(build_cable(n));
            const auto all = enumerate_almost_iotas(c);
            o.require(!all.empty(), "K_" + std::to_string(n) + " has an almost iota");
            for (const auto& i : all) {
                o.require(validate_iota(c, i).ok(), "enumerated iota validates");
                o.require(forced_values_hold(*c, i, n), "forced values on K_" + std::to_string(n));
            }
        }
    });

    criterion(4, "nonexistence: no almost local K_2 -> U or K_3 -> K_2; U -> K_2 exists; stable at cap+1", 300.0,
              [](Outcome& o) {
                  const IotaSide u = almost_side(build_unknot()), k2 = almost_side(build_cable(2)),
                                 k3 = almost_side(build_cable(3));
                  auto none_stably = [&](const IotaSide& a, const IotaSide& b, const std::string& what) {
                      LocalSearchSpec spec{a, b, LocalMode::Almost, {}, std::nullopt};
                      const auto cert = search_local_map(spec);
                      o.require(!cert.found && cert.definitive, what + " has no almost local map");
                      o.require(cert.systems.size() == a.iotas.size() * b.iotas.size(), what + " covers every completion");
                      spec.options.cap = cert.cap + 1;
                      const auto again = search_local_map(spec);
                      o.require(!again.found && again.definitive, what + " stays empty at cap+1");
                  };
                  none_stably(k2, u, "K_2 -> U");
                  none_stably(k3, k2, "K_3 -> K_2");
                  const auto yes = search_local_map({u, k2, LocalMode::Almost, {}, std::nullopt});
                  o.require(yes.found && yes.map && is_chain_map(*yes.map) && is_local(*yes.map), "U -> K_2 exists");
              });

    criterion(5, "connected complex of K_2: U HFK^- != 0, bound >= 2", 600.0, [](Outcome& o) {
        const ComplexPtr c = share(build_cable(2));
        const auto all = enumerate_almost_iotas(c);
        o.require(!all.empty(), "K_2 has an almost iota");
        const std::size_t b = static_cast<std::size_t>(c->require("b")), cc = static_cast<std::size_t>(c->require("c"));
        for (const auto& i : all) {
            const auto r = connected_complex(c, i);
            const FUDecomp h = hfk_minus(r.complex);
            o.require(validate(r.complex).ok(), "connected complex validates");
            o.require(torsion_order(h) >= 2, "U acts nontrivially on the torsion of HFK^-");
            o.require(concordance_unknotting_bound(c, i) >= 2, "bound at least 2");
            const SelfLocalFamily fam = self_local_family(c, i);
            fam.visit(SearchOptions{}.budget, [&](const BitVec&, const BitMatrix& m) {
                o.require(m.get(b, b) && m.get(cc, cc), "<f(b),b> = <f(c),c> = 1");
                return o.ok;
            });
        }
    });

    criterion(6, "products: x1, x2 on K_2 (x) K_2 valid and equivalent; unknot is an identity", 60.0, [](Outcome& o) {
        const ComplexPtr k2 = share(build_cable(2));
        for (const auto& i : enumerate_almost_iotas(k2)) {
            const ProductIota p1 = product_iota(k2, i, k2, i, 1);
            const ProductIota p2 = product_iota(k2, i, k2, i, 2);
            o.require(validate_iota(p1.complex, p1.iota).ok(), "x1 is an almost iota");
            o.require(validate_iota(p2.complex, p2.iota).ok(), "x2 is an almost iota");
            const auto eq = almost_equivalence(p1.complex, k2, k2, p1.iota, IotaData::almost(p1.complex, p2.iota.unit()));
            o.require(eq.has_value(), "x1 and x2 are equivalent mod (U,V)");
        }
        const Complex u = build_unknot();
        for (const Complex& c : {build_figure_eight(), build_cable(2), build_cable(3)}) {
            o.require(find_isomorphism(tensor(u, c), c).has_value(), "U (x) C = C");
            o.require(find_isomorphism(tensor(c, u), c).has_value(), "C (x) U = C");
        }
    });

    criterion(7, "property suites: reduced homotopies, Phi/Psi, dual involution, .cfk round trip", 60.0,
              [](Outcome& o) {
                  std::mt19937 rng(20261016);
                  for (int t = 0; t < 100; ++t) {
                      const ComplexPtr c = share(testing_helpers::random_reduced_complex(rng));
                      for (Variance var : {Variance::Equivariant, Variance::Skew}) {
                          const MapSpace maps(c, c, var, {0, 0}, c->ring(), c->default_cap());
                          const MapSpace homs(c, c, var, {1, 1}, c->ring(), c->default_cap());
                          const LinMap f = maps.from_bits(testing_helpers::random_bits(maps.size(), rng));
                          const LinMap h = homs.from_bits(testing_helpers::random_bits(homs.size(), rng));
                          o.require(unit_matrix(f + homotopy_boundary(h)) == unit_matrix(f), "reduced homotopy lemma");
                      }
                  }
                  std::vector<Complex> builders = {build_unknot(), build_figure_eight()};
                  for (int n = 2; n <= 6; ++n) builders.push_back(build_cable(n));
                  for (const auto& raw : builders) {
                      const ComplexPtr c = share(raw);
                      const auto dm = derivative_maps(c);
                      o.require(dm.phi.shift() == Bigrading{1, -1} && dm.psi.shift() == Bigrading{-1, 1} &&
                                    dm.phi.grading_violations().empty() && dm.psi.grading_violations().empty(),
                                "Phi/Psi grading shifts on " + raw.name());
                      o.require(is_chain_map(dm.phi) && is_chain_map(dm.psi), "Phi/Psi chain maps on " + raw.name());
                      o.require(dualize(dualize(raw)).identical(raw), "dual involution on " + raw.name());
                      const std::string text = render_complex(raw);
                      o.require(render_complex(parse_complex(text)) == text, ".cfk round trip on " + raw.name());
                  }
                  for (int t = 0; t < 30; ++t) {
                      const Complex c = testing_helpers::random_reduced_complex(rng);
                      o.require(dualize(dualize(c)).identical(c), "dual involution on a random complex");
                      o.require(render_complex(parse_complex(render_complex(c))) == render_complex(c),
                                ".cfk round trip on a random complex");
                  }
              });

    std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
