#pragma once

// The `.cfk` text format:
//
//   complex <name> ring <full|modUV>
//   gen <name> gr <grU> <grV>
//   d <name> = <term> + <term> ...        term: [U^i] [V^j] <generator>
//   iota <name> = <sum>                   action mod (U,V); 0 for zero
//   map <name> variance <eq|skew> : <gen> -> <sum>
//   # comment
//
// Differential and iota lines may precede the generators they mention.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iknot/complex.hpp"
#include "iknot/errors.hpp"
#include "iknot/gf2.hpp"
#include "iknot/linmap.hpp"
#include "iknot/morphism.hpp"
#include "iknot/ring.hpp"

namespace iknot {

/// A term as written: monomial and generator name.
struct NamedTerm {
    Mono mono;
    std::string name;
};

struct IotaLine {
    std::size_t line = 0;
    std::string source;
    std::vector<std::string> image;
};

struct MapLine {
    std::size_t line = 0;
    std::string map;
    Variance variance = Variance::Equivariant;
    std::string source;
    std::vector<NamedTerm> image;
};

/// Everything a `.cfk` file can hold. `complex` is absent for map-only files.
struct CfkDocument {
    std::optional<Complex> complex;
    std::vector<IotaLine> iota;
    std::vector<MapLine> maps;
};

namespace cfk_detail {

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        std::size_t e = k;
        while (e < s.size() && !std::isspace(static_cast<unsigned char>(s[e]))) ++e;
        if (e > k) out.emplace_back(s.substr(k, e - k));
        k = e;
    }
    return out;
}

inline bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (k == s.size()) return false;
    for (std::size_t j = k; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    try {
        out = std::stoi(s);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

/// U, U^k, V or V^k; adds the exponent to `m`.
inline bool parse_factor(const std::string& tok, Mono& m) {
    if (tok.empty() || (tok[0] != 'U' && tok[0] != 'V')) return false;
    int e = 1;
    if (tok.size() > 1) {
        if (tok[1] != '^' || !parse_int(tok.substr(2), e) || e < 1 || tok[2] == '-' || tok[2] == '+') return false;
    }
    (tok[0] == 'U' ? m.i : m.j) += e;
    return true;
}

inline bool valid_name(const std::string& n) {
    if (n.empty() || n == "0" || n == "+" || n == "=" || n == ":" || n == "->") return false;
    Mono scratch;
    if (parse_factor(n, scratch)) return false;
    return std::none_of(n.begin(), n.end(), [](char ch) {
        return std::isspace(static_cast<unsigned char>(ch)) || ch == '#' || ch == '+';
    });
}

/// `<term> + <term> ...` or `0`.
inline std::vector<NamedTerm> parse_sum(const std::vector<std::string>& toks, std::size_t from, std::size_t line) {
    std::vector<NamedTerm> out;
    if (toks.size() == from + 1 && toks[from] == "0") return out;
    if (toks.size() <= from) throw ParseError(line, "empty sum");
    std::vector<std::string> cur;
    auto flush = [&] {
        if (cur.empty()) throw ParseError(line, "empty term");
        NamedTerm t;
        for (std::size_t k = 0; k + 1 < cur.size(); ++k)
            if (!parse_factor(cur[k], t.mono)) throw ParseError(line, "bad monomial factor '" + cur[k] + "'");
        t.name = cur.back();
        if (!valid_name(t.name)) throw ParseError(line, "bad generator name '" + t.name + "'");
        out.push_back(std::move(t));
        cur.clear();
    };
    for (std::size_t k = from; k < toks.size(); ++k) {
        if (toks[k] == "+")
            flush();
        else
            cur.push_back(toks[k]);
    }
    flush();
    return out;
}

inline std::string render_term(const Mono& m, const std::string& name) {
    return m.is_one() ? name : to_string(m) + " " + name;
}

}  // namespace cfk_detail

inline CfkDocument parse_cfk(const std::string& text) {
    using namespace cfk_detail;
    CfkDocument doc;
    std::optional<std::string> name;
    Ideal ring;
    struct DLine {
        std::size_t line;
        std::string source;
        std::vector<NamedTerm> terms;
    };
    std::vector<Generator> gens;
    std::vector<std::size_t> gen_lines;
    std::vector<DLine> dlines;

    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto toks = split_ws(raw);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "complex") {
            if (name) throw ParseError(line, "second complex header");
            if (toks.size() != 4 || toks[2] != "ring") throw ParseError(line, "expected 'complex <name> ring <full|modUV>'");
            if (toks[3] == "full")
                ring = Ideal::zero();
            else if (toks[3] == "modUV")
                ring = Ideal::uv();
            else
                throw ParseError(line, "unknown ring '" + toks[3] + "'");
            name = toks[1];
        } else if (kw == "gen") {
            if (!name) throw ParseError(line, "generator before complex header");
            int gu = 0, gv = 0;
            if (toks.size() != 5 || toks[2] != "gr" || !parse_int(toks[3], gu) || !parse_int(toks[4], gv))
                throw ParseError(line, "expected 'gen <name> gr <grU> <grV>'");
            if (!valid_name(toks[1])) throw ParseError(line, "bad generator name '" + toks[1] + "'");
            if ((gu - gv) % 2 != 0) throw ParseError(line, "generator '" + toks[1] + "' has odd grU - grV");
            for (const auto& g : gens)
                if (g.name == toks[1]) throw ParseError(line, "duplicate generator '" + toks[1] + "'");
            gens.push_back({toks[1], gu, gv});
            gen_lines.push_back(line);
        } else if (kw == "d") {
            if (!name) throw ParseError(line, "differential before complex header");
            if (toks.size() < 4 || toks[2] != "=") throw ParseError(line, "expected 'd <name> = <sum>'");
            dlines.push_back({line, toks[1], parse_sum(toks, 3, line)});
        } else if (kw == "iota") {
            if (toks.size() < 4 || toks[2] != "=") throw ParseError(line, "expected 'iota <name> = <sum>'");
            IotaLine il{line, toks[1], {}};
            for (auto& t : parse_sum(toks, 3, line)) {
                if (!t.mono.is_one()) throw ParseError(line, "iota lines hold values mod (U,V); drop the monomials");
                il.image.push_back(std::move(t.name));
            }
            doc.iota.push_back(std::move(il));
        } else if (kw == "map") {
            if (toks.size() < 8 || toks[2] != "variance" || toks[4] != ":" || toks[6] != "->")
                throw ParseError(line, "expected 'map <name> variance <eq|skew> : <gen> -> <sum>'");
            MapLine ml;
            ml.line = line;
            ml.map = toks[1];
            if (toks[3] == "eq")
                ml.variance = Variance::Equivariant;
            else if (toks[3] == "skew")
                ml.variance = Variance::Skew;
            else
                throw ParseError(line, "unknown variance '" + toks[3] + "'");
            ml.source = toks[5];
            ml.image = parse_sum(toks, 7, line);
            doc.maps.push_back(std::move(ml));
        } else {
            throw ParseError(line, "unknown keyword '" + kw + "'");
        }
    }
    if (!name) {
        if (!gens.empty() || !dlines.empty() || !doc.iota.empty()) throw ParseError(line + 1, "missing complex header");
        return doc;
    }

    std::map<std::string, int> index;
    for (std::size_t k = 0; k < gens.size(); ++k) index.emplace(gens[k].name, static_cast<int>(k));
    auto lookup = [&](const std::string& n, std::size_t ln) {
        auto it = index.find(n);
        if (it == index.end()) throw ParseError(ln, "unknown generator '" + n + "'");
        return it->second;
    };
    std::vector<std::vector<Term>> diff(gens.size());
    std::vector<bool> seen(gens.size(), false);
    for (const auto& dl : dlines) {
        const int src = lookup(dl.source, dl.line);
        if (seen[static_cast<std::size_t>(src)]) throw ParseError(dl.line, "second differential line for '" + dl.source + "'");
        seen[static_cast<std::size_t>(src)] = true;
        for (const auto& t : dl.terms) diff[static_cast<std::size_t>(src)].push_back({lookup(t.name, dl.line), RingElt(t.mono)});
    }
    for (const auto& il : doc.iota) {
        lookup(il.source, il.line);
        for (const auto& n : il.image) lookup(n, il.line);
    }
    std::vector<Chain> chains(diff.begin(), diff.end());
    doc.complex = Complex(*name, std::move(gens), std::move(chains), ring);
    return doc;
}

inline Complex parse_complex(const std::string& text) {
    CfkDocument doc = parse_cfk(text);
    if (!doc.complex) throw ParseError(1, "no complex header");
    return std::move(*doc.complex);
}

inline std::string ring_spelling(const Ideal& ring) {
    if (ring.kind() == Ideal::Kind::Zero) return "full";
    if (ring.kind() == Ideal::Kind::UV) return "modUV";
    throw StructuralError("the .cfk format has no spelling for the ring mod " + ring.to_string());
}

inline std::string render_chain(const Complex& target, const Chain& chain) {
    std::string s;
    for (const auto& t : chain)
        for (const auto& m : t.coeff.terms()) {
            if (!s.empty()) s += " + ";
            s += cfk_detail::render_term(m, target.gen(t.target).name);
        }
    return s.empty() ? "0" : s;
}

inline std::string render_complex(const Complex& c) {
    std::string out = "complex " + c.name() + " ring " + ring_spelling(c.ring()) + "\n";
    for (const auto& g : c.basis())
        out += "gen " + g.name + " gr " + std::to_string(g.gr_u) + " " + std::to_string(g.gr_v) + "\n";
    for (int x = 0; x < static_cast<int>(c.size()); ++x)
        if (!c.d(x).empty()) out += "d " + c.gen(x).name + " = " + render_chain(c, c.d(x)) + "\n";
    return out;
}

/// One `iota` line per generator, unit part only.
inline std::string render_iota(const Complex& c, const IotaData& iota) {
    const BitMatrix u = iota.unit();
    std::string out;
    for (std::size_t x = 0; x < c.size(); ++x) {
        std::string s;
        for (std::size_t y = 0; y < c.size(); ++y)
            if (u.get(y, x)) s += (s.empty() ? "" : " + ") + c.gen(static_cast<int>(y)).name;
        out += "iota " + c.gen(static_cast<int>(x)).name + " = " + (s.empty() ? "0" : s) + "\n";
    }
    return out;
}

inline std::string render_map(const std::string& name, const LinMap& f) {
    if (f.variance() == Variance::Linear) throw StructuralError("only eq and skew maps have a .cfk spelling");
    std::string out;
    const char* var = f.variance() == Variance::Skew ? "skew" : "eq";
    for (int x = 0; x < static_cast<int>(f.source()->size()); ++x)
        if (!f.image(x).empty())
            out += "map " + name + " variance " + var + " : " + f.source()->gen(x).name + " -> " +
                   render_chain(*f.target(), f.image(x)) + "\n";
    return out;
}

/// Collects the lines of map `name` into a LinMap between `src` and `tgt`.
inline LinMap build_map(const std::vector<MapLine>& lines, const std::string& name, const ComplexPtr& src,
                        const ComplexPtr& tgt, Bigrading shift, const Ideal& ideal) {
    std::vector<std::vector<Term>> act(src->size());
    std::optional<Variance> var;
    for (const auto& ml : lines) {
        if (ml.map != name) continue;
        if (var && *var != ml.variance) throw ParseError(ml.line, "map '" + name + "' changes variance");
        var = ml.variance;
        auto x = src->index_of(ml.source);
        if (!x) throw ParseError(ml.line, "unknown source generator '" + ml.source + "'");
        for (const auto& t : ml.image) {
            auto y = tgt->index_of(t.name);
            if (!y) throw ParseError(ml.line, "unknown target generator '" + t.name + "'");
            act[static_cast<std::size_t>(*x)].push_back({*y, RingElt(t.mono)});
        }
    }
    if (!var) throw StructuralError("no lines for map '" + name + "'");
    std::vector<Chain> chains(act.begin(), act.end());
    return LinMap(src, tgt, *var, shift, ideal, std::move(chains));
}

/// Iota lines as (generator index, unit image) pins on `c`.
inline std::vector<std::pair<int, BitVec>> iota_pins(const Complex& c, const std::vector<IotaLine>& lines) {
    std::vector<std::pair<int, BitVec>> out;
    for (const auto& il : lines) {
        auto x = c.index_of(il.source);
        if (!x) throw ParseError(il.line, "unknown generator '" + il.source + "'");
        BitVec v(c.size());
        for (const auto& n : il.image) {
            auto y = c.index_of(n);
            if (!y) throw ParseError(il.line, "unknown generator '" + n + "'");
            v.flip(static_cast<std::size_t>(*y));
        }
        out.emplace_back(*x, std::move(v));
    }
    return out;
}

/// True when the unit matrix of `iota` agrees with every pin.
inline bool satisfies_pins(const IotaData& iota, const std::vector<std::pair<int, BitVec>>& pins) {
    const BitMatrix u = iota.unit();
    for (const auto& [x, v] : pins)
        if (!(u.column(static_cast<std::size_t>(x)) == v)) return false;
    return true;
}

}  // namespace iknot
