#pragma once

// Dense F2 vectors and matrices packed into 64-bit words, plus an
// incremental echelon basis used by every linear solve in the library.

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace iknot {

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool get(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
    void set(std::size_t k, bool v = true) {
        const std::uint64_t bit = std::uint64_t{1} << (k & 63);
        if (v)
            words_[k >> 6] |= bit;
        else
            words_[k >> 6] &= ~bit;
    }
    void flip(std::size_t k) { words_[k >> 6] ^= std::uint64_t{1} << (k & 63); }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    /// XOR of words [from_word, end); callers use it when both vectors are
    /// known to vanish below `from_word`.
    void xor_tail(const BitVec& o, std::size_t from_word) {
        for (std::size_t w = from_word; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Index of the first set bit at or after `from`, or size() if none.
    std::size_t find_next(std::size_t from) const {
        if (from >= n_) return n_;
        std::size_t w = from >> 6;
        std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (cur) return std::min(n_, (w << 6) + static_cast<std::size_t>(std::countr_zero(cur)));
            if (++w >= words_.size()) return n_;
            cur = words_[w];
        }
    }
    std::size_t find_first() const { return find_next(0); }

    bool dot(const BitVec& o) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitVec&) const = default;
    bool operator<(const BitVec& o) const {
        // Lexicographic on bit index order.
        for (std::size_t w = 0; w < words_.size() && w < o.words_.size(); ++w) {
            if (words_[w] == o.words_[w]) continue;
            const std::uint64_t diff = words_[w] ^ o.words_[w];
            const auto bit = std::countr_zero(diff);
            return ((o.words_[w] >> bit) & 1u) != 0;
        }
        return n_ < o.n_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-major F2 matrix. Row r holds the images' coordinates: entry (r, c)
/// is the coefficient of basis vector r in the image of basis vector c.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m.set(k, k);
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { rows_[r].flip(c); }

    const BitVec& row(std::size_t r) const { return rows_[r]; }
    BitVec& row(std::size_t r) { return rows_[r]; }

    BitVec column(std::size_t c) const {
        BitVec v(rows());
        for (std::size_t r = 0; r < rows(); ++r)
            if (get(r, c)) v.set(r);
        return v;
    }

    BitMatrix& operator^=(const BitMatrix& o) {
        for (std::size_t r = 0; r < rows(); ++r) rows_[r] ^= o.rows_[r];
        return *this;
    }
    friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) { return a ^= b; }

    friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
        BitMatrix out(a.rows(), b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const BitVec& ar = a.rows_[r];
            for (std::size_t k = ar.find_first(); k < a.cols(); k = ar.find_next(k + 1)) out.rows_[r] ^= b.rows_[k];
        }
        return out;
    }

    BitVec apply(const BitVec& v) const {
        BitVec out(rows());
        for (std::size_t r = 0; r < rows(); ++r)
            if (rows_[r].dot(v)) out.set(r);
        return out;
    }

    BitMatrix transposed() const {
        BitMatrix t(cols(), rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t c = rows_[r].find_first(); c < cols(); c = rows_[r].find_next(c + 1)) t.set(c, r);
        return t;
    }

    bool is_zero() const {
        for (const auto& r : rows_)
            if (r.any()) return false;
        return true;
    }

    std::size_t rank() const;

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Incrementally built echelon basis of a subspace of F2^dim. Each stored
/// vector carries a tag recording which inserted inputs it combines, which
/// turns dependencies into null vectors and reductions into solutions.
class EchelonBasis {
public:
    EchelonBasis(std::size_t dim, std::size_t tag_dim) : dim_(dim), tag_dim_(tag_dim), pivot_at_(dim, -1) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return vecs_.size(); }

    /// Inserts `v` tagged with `tag`. Returns std::nullopt if it enlarged the
    /// span; otherwise the tag combination of a relation summing to zero.
    std::optional<BitVec> insert(BitVec v, BitVec tag) {
        const std::size_t lead = reduce_in_place(v, &tag);
        if (lead >= dim_) return tag;
        pivot_at_[lead] = static_cast<int>(vecs_.size());
        vecs_.push_back(std::move(v));
        tags_.push_back(std::move(tag));
        return std::nullopt;
    }

    bool insert(BitVec v) {
        const std::size_t lead = reduce_in_place(v, nullptr);
        if (lead >= dim_) return false;
        pivot_at_[lead] = static_cast<int>(vecs_.size());
        vecs_.push_back(std::move(v));
        tags_.emplace_back(tag_dim_);
        return true;
    }

    bool contains(BitVec v) const { return reduce_in_place(v, nullptr) >= dim_; }

    /// If `target` lies in the span, the tag combination producing it.
    std::optional<BitVec> express(BitVec target) const {
        BitVec tag(tag_dim_);
        if (reduce_in_place(target, &tag) < dim_) return std::nullopt;
        return tag;
    }

    /// Residual of `v` after reduction; zero iff `v` is in the span.
    BitVec residual(BitVec v) const {
        reduce_in_place(v, nullptr);
        return v;
    }

private:
    // Clears every pivot position of v it encounters; returns the first bit
    // that has no pivot, or dim_ when v reduces to zero.
    std::size_t reduce_in_place(BitVec& v, BitVec* tag) const {
        std::size_t p = v.find_first();
        while (p < dim_) {
            const int k = pivot_at_[p];
            if (k < 0) return p;
            v.xor_tail(vecs_[static_cast<std::size_t>(k)], p >> 6);
            if (tag) *tag ^= tags_[static_cast<std::size_t>(k)];
            p = v.find_next(p + 1);
        }
        return dim_;
    }

    std::size_t dim_;
    std::size_t tag_dim_;
    std::vector<int> pivot_at_;
    std::vector<BitVec> vecs_;
    std::vector<BitVec> tags_;
};

inline std::size_t BitMatrix::rank() const {
    EchelonBasis eb(cols_, 0);
    for (const auto& r : rows_) eb.insert(r);
    return eb.rank();
}

/// Solution set of A x = b for the matrix whose columns are `columns`.
struct LinearSolution {
    std::optional<BitVec> particular;  // absent when inconsistent
    std::vector<BitVec> null_basis;    // basis of {x : A x = 0}
    std::size_t rank = 0;
};

/// Columns live in F2^rows; the unknown vector has one entry per column.
inline LinearSolution solve_columns(const std::vector<BitVec>& columns, std::size_t rows,
                                    const std::optional<BitVec>& rhs = std::nullopt) {
    const std::size_t n = columns.size();
    EchelonBasis eb(rows, n);
    LinearSolution out;
    for (std::size_t c = 0; c < n; ++c) {
        BitVec tag(n);
        tag.set(c);
        if (auto rel = eb.insert(columns[c], std::move(tag))) out.null_basis.push_back(std::move(*rel));
    }
    out.rank = eb.rank();
    if (rhs)
        out.particular = eb.express(*rhs);
    else
        out.particular = BitVec(n);
    return out;
}

}  // namespace iknot
