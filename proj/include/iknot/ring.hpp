#pragma once

// Exact arithmetic in F2[U,V] and its monomial quotients.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "iknot/errors.hpp"

namespace iknot {

/// Monomial U^i V^j. Contributes (-2i, -2j) to the bigrading.
struct Mono {
    int i = 0;
    int j = 0;

    constexpr auto operator<=>(const Mono&) const = default;

    constexpr Mono operator*(const Mono& o) const { return {i + o.i, j + o.j}; }
    constexpr bool is_one() const { return i == 0 && j == 0; }
    constexpr int gr_u() const { return -2 * i; }
    constexpr int gr_v() const { return -2 * j; }
    /// Image under the swap U <-> V used by skew-equivariant maps.
    constexpr Mono swapped() const { return {j, i}; }
};

inline constexpr Mono kOne{0, 0};

/// Monomial ideals the search machinery works modulo.
class Ideal {
public:
    enum class Kind { Zero, UV, PowerBox, MaxIdeal };

    constexpr Ideal() = default;

    static constexpr Ideal zero() { return Ideal(Kind::Zero, 0, 0); }
    static constexpr Ideal uv() { return Ideal(Kind::UV, 0, 0); }
    static constexpr Ideal max_ideal() { return Ideal(Kind::MaxIdeal, 0, 0); }
    /// (U^a, V^b, UV)
    static Ideal power_box(int a, int b) {
        if (a < 1 || b < 1) throw DomainError("PowerBox ideal needs a >= 1 and b >= 1");
        return Ideal(Kind::PowerBox, a, b);
    }

    constexpr Kind kind() const { return kind_; }
    constexpr int a() const { return a_; }
    constexpr int b() const { return b_; }

    constexpr bool contains(const Mono& m) const {
        switch (kind_) {
            case Kind::Zero: return false;
            case Kind::UV: return m.i > 0 && m.j > 0;
            case Kind::PowerBox: return m.i >= a_ || m.j >= b_ || (m.i > 0 && m.j > 0);
            case Kind::MaxIdeal: return m.i > 0 || m.j > 0;
        }
        return false;
    }

    /// True when every monomial of `other` is also in this ideal.
    constexpr bool contains(const Ideal& other) const {
        switch (other.kind_) {
            case Kind::Zero: return true;
            case Kind::UV: return kind_ != Kind::Zero;
            case Kind::PowerBox:
                if (kind_ == Kind::MaxIdeal) return true;
                if (kind_ == Kind::PowerBox) return a_ <= other.a_ && b_ <= other.b_;
                return false;
            case Kind::MaxIdeal: return kind_ == Kind::MaxIdeal;
        }
        return false;
    }

    constexpr bool operator==(const Ideal&) const = default;

    std::string to_string() const {
        switch (kind_) {
            case Kind::Zero: return "0";
            case Kind::UV: return "(UV)";
            case Kind::PowerBox:
                return "(U^" + std::to_string(a_) + ", V^" + std::to_string(b_) + ", UV)";
            case Kind::MaxIdeal: return "(U, V)";
        }
        return "?";
    }

private:
    constexpr Ideal(Kind k, int a, int b) : kind_(k), a_(a), b_(b) {}

    Kind kind_ = Kind::Zero;
    int a_ = 0;
    int b_ = 0;
};

/// Sum of the two ideals when one contains the other; the larger one wins.
inline Ideal larger_ideal(const Ideal& x, const Ideal& y) {
    if (x.contains(y)) return x;
    if (y.contains(x)) return y;
    if (x.kind() == Ideal::Kind::PowerBox && y.kind() == Ideal::Kind::PowerBox)
        return Ideal::power_box(std::min(x.a(), y.a()), std::min(x.b(), y.b()));
    throw StructuralError("incomparable ideals " + x.to_string() + " and " + y.to_string());
}

/// Element of F2[U,V]: a set of monomials kept sorted (U-exponent, then
/// V-exponent) with F2 cancellation applied. The empty set is 0.
class RingElt {
public:
    RingElt() = default;
    RingElt(Mono m) : terms_{m} {}  // NOLINT(google-explicit-constructor)
    RingElt(std::initializer_list<Mono> ms) : terms_(ms) { normalize(); }
    explicit RingElt(std::vector<Mono> ms) : terms_(std::move(ms)) { normalize(); }

    static RingElt one() { return RingElt(kOne); }

    const std::vector<Mono>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return terms_.size() == 1 && terms_[0].is_one(); }
    bool contains(const Mono& m) const { return std::binary_search(terms_.begin(), terms_.end(), m); }

    bool operator==(const RingElt&) const = default;
    auto operator<=>(const RingElt& o) const { return terms_ <=> o.terms_; }

    RingElt& operator+=(const RingElt& o) {
        std::vector<Mono> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::set_symmetric_difference(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
                                      std::back_inserter(out));
        terms_ = std::move(out);
        return *this;
    }
    friend RingElt operator+(RingElt a, const RingElt& b) { return a += b; }

    /// Product over the full ring.
    friend RingElt operator*(const RingElt& a, const RingElt& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.terms_.size() == 1 && b.terms_.size() == 1) return RingElt(a.terms_[0] * b.terms_[0]);
        std::vector<Mono> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) out.push_back(x * y);
        return RingElt(std::move(out));
    }

    /// Image under U <-> V.
    RingElt swapped() const {
        std::vector<Mono> out;
        out.reserve(terms_.size());
        for (const auto& m : terms_) out.push_back(m.swapped());
        return RingElt(std::move(out));
    }

    /// Formal derivative in U over F2: U^i V^j -> i U^(i-1) V^j.
    RingElt derivative_u() const {
        std::vector<Mono> out;
        for (const auto& m : terms_)
            if (m.i % 2 == 1) out.push_back({m.i - 1, m.j});
        return RingElt(std::move(out));
    }

    RingElt derivative_v() const {
        std::vector<Mono> out;
        for (const auto& m : terms_)
            if (m.j % 2 == 1) out.push_back({m.i, m.j - 1});
        return RingElt(std::move(out));
    }

    /// The coefficient of U^0 V^0.
    bool constant_term() const { return !terms_.empty() && terms_.front().is_one(); }

private:
    void normalize() {
        std::sort(terms_.begin(), terms_.end());
        std::vector<Mono> out;
        out.reserve(terms_.size());
        for (std::size_t k = 0; k < terms_.size();) {
            std::size_t run = 1;
            while (k + run < terms_.size() && terms_[k + run] == terms_[k]) ++run;
            if (run % 2 == 1) out.push_back(terms_[k]);
            k += run;
        }
        terms_ = std::move(out);
    }

    std::vector<Mono> terms_;
};

/// Canonical coset representative: drops every monomial lying in `ideal`.
inline RingElt reduce(const RingElt& e, const Ideal& ideal) {
    if (ideal.kind() == Ideal::Kind::Zero) return e;
    std::vector<Mono> kept;
    for (const auto& m : e.terms())
        if (!ideal.contains(m)) kept.push_back(m);
    return RingElt(std::move(kept));
}

inline RingElt mul(const RingElt& a, const RingElt& b, const Ideal& ideal) { return reduce(a * b, ideal); }

inline std::string to_string(const Mono& m) {
    if (m.is_one()) return "1";
    std::string s;
    if (m.i > 0) s += m.i == 1 ? "U" : "U^" + std::to_string(m.i);
    if (m.j > 0) {
        if (!s.empty()) s += ' ';
        s += m.j == 1 ? "V" : "V^" + std::to_string(m.j);
    }
    return s;
}

inline std::string to_string(const RingElt& e) {
    if (e.is_zero()) return "0";
    std::string s;
    for (const auto& m : e.terms()) {
        if (!s.empty()) s += " + ";
        s += to_string(m);
    }
    return s;
}

}  // namespace iknot
