// Vectors and parity-check matrices over prime fields F_q, syndrome
// computation and standard-form reduction.
#pragma once

#include "grsse/numeric.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace grsse {

inline bool is_prime(uint32_t q) {
    if (q < 2) return false;
    for (uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

inline void require_prime(uint32_t q) {
    if (!is_prime(q)) throw std::invalid_argument("field order must be prime, got " + std::to_string(q));
    if (q > 251) throw std::invalid_argument("field order above 251 not supported");
}

inline uint32_t mod_inverse(uint32_t a, uint32_t q) {
    // Fermat; q prime, a != 0 mod q
    uint64_t r = 1, b = a % q, e = q - 2;
    for (; e; e >>= 1) {
        if (e & 1) r = r * b % q;
        b = b * b % q;
    }
    return static_cast<uint32_t>(r);
}

struct FieldElement {
    uint32_t value;
    uint32_t q;
    FieldElement(uint32_t v, uint32_t modulus) : value(v), q(modulus) {
        require_prime(q);
        if (v >= q) throw std::invalid_argument("field element out of range");
    }
};

class FieldVector {
public:
    FieldVector(uint32_t q, size_t n) : q_(q), v_(n, 0) {
        require_prime(q);
        if (n == 0) throw std::invalid_argument("empty vectors not allowed");
    }
    FieldVector(uint32_t q, std::vector<uint8_t> values) : q_(q), v_(std::move(values)) {
        require_prime(q);
        if (v_.empty()) throw std::invalid_argument("empty vectors not allowed");
        for (uint8_t x : v_)
            if (x >= q_) throw std::invalid_argument("vector entry out of field range");
    }
    static FieldVector unit(uint32_t q, size_t n, size_t i) {
        FieldVector v(q, n);
        v.set(i, 1);
        return v;
    }

    uint32_t modulus() const { return q_; }
    size_t size() const { return v_.size(); }
    uint8_t operator[](size_t i) const { return v_[i]; }
    void set(size_t i, uint32_t value) {
        if (value >= q_) throw std::invalid_argument("vector entry out of field range");
        v_[i] = static_cast<uint8_t>(value);
    }
    const std::vector<uint8_t>& raw() const { return v_; }

    size_t weight() const {
        size_t w = 0;
        for (uint8_t x : v_) w += x != 0;
        return w;
    }

    FieldVector operator+(const FieldVector& o) const {
        check_same(o);
        FieldVector r(*this);
        for (size_t i = 0; i < v_.size(); ++i) r.v_[i] = static_cast<uint8_t>((v_[i] + o.v_[i]) % q_);
        return r;
    }
    FieldVector operator-(const FieldVector& o) const {
        check_same(o);
        FieldVector r(*this);
        for (size_t i = 0; i < v_.size(); ++i) r.v_[i] = static_cast<uint8_t>((v_[i] + q_ - o.v_[i]) % q_);
        return r;
    }
    FieldVector negated() const {
        FieldVector r(*this);
        for (auto& x : r.v_) x = static_cast<uint8_t>((q_ - x) % q_);
        return r;
    }

    // packs coordinates into bits (q = 2, n <= 64 only)
    uint64_t packed() const {
        uint64_t m = 0;
        for (size_t i = 0; i < v_.size(); ++i) m |= static_cast<uint64_t>(v_[i]) << i;
        return m;
    }
    static FieldVector from_packed(uint64_t bits, size_t n) {
        FieldVector v(2, n);
        for (size_t i = 0; i < n; ++i) v.v_[i] = (bits >> i) & 1u;
        return v;
    }

    bool operator==(const FieldVector& o) const { return q_ == o.q_ && v_ == o.v_; }
    bool operator<(const FieldVector& o) const { return v_ < o.v_; }

private:
    void check_same(const FieldVector& o) const {
        if (q_ != o.q_ || v_.size() != o.v_.size())
            throw std::invalid_argument("vector dimension/modulus mismatch");
    }
    uint32_t q_;
    std::vector<uint8_t> v_;
};

class PermutationMatrix {
public:
    static PermutationMatrix identity(size_t n) {
        std::vector<uint32_t> m(n);
        std::iota(m.begin(), m.end(), 0u);
        return PermutationMatrix(std::move(m));
    }
    explicit PermutationMatrix(std::vector<uint32_t> map) : map_(std::move(map)) {
        std::vector<char> seen(map_.size(), 0);
        for (uint32_t i : map_) {
            if (i >= map_.size() || seen[i]) throw std::invalid_argument("not a permutation");
            seen[i] = 1;
        }
    }

    size_t size() const { return map_.size(); }
    uint32_t operator[](size_t i) const { return map_[i]; }

    // (v P)[i] = v[map[i]]
    FieldVector apply(const FieldVector& v) const {
        if (v.size() != map_.size()) throw std::invalid_argument("permutation size mismatch");
        FieldVector r(v.modulus(), v.size());
        for (size_t i = 0; i < map_.size(); ++i) r.set(i, v[map_[i]]);
        return r;
    }
    PermutationMatrix inverse() const {
        std::vector<uint32_t> inv(map_.size());
        for (uint32_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
        return PermutationMatrix(std::move(inv));
    }
    bool is_identity() const {
        for (uint32_t i = 0; i < map_.size(); ++i)
            if (map_[i] != i) return false;
        return true;
    }
    bool operator==(const PermutationMatrix& o) const { return map_ == o.map_; }

private:
    std::vector<uint32_t> map_;
};

namespace detail {

// Row-reduces `rows` (m x n over F_q) in place; returns the rank.
inline size_t row_reduce(std::vector<std::vector<uint8_t>>& rows, uint32_t q, size_t n) {
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < rows.size(); ++col) {
        size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        uint32_t inv = mod_inverse(rows[rank][col], q);
        for (size_t j = col; j < n; ++j)
            rows[rank][j] = static_cast<uint8_t>(rows[rank][j] * inv % q);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            uint32_t f = rows[i][col];
            for (size_t j = col; j < n; ++j)
                rows[i][j] = static_cast<uint8_t>((rows[i][j] + (q - f) * rows[rank][j]) % q);
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Full-row-rank (n-k) x n parity-check matrix. k = n means no rows (the
// complete code); k = 0 means n rows (the trivial code).
class ParityCheckMatrix {
public:
    ParityCheckMatrix(uint32_t q, size_t n, std::vector<FieldVector> rows)
        : q_(q), n_(n), rows_(std::move(rows)) {
        require_prime(q);
        if (n == 0 || rows_.size() > n) throw std::invalid_argument("bad parity-check dimensions");
        for (const auto& r : rows_)
            if (r.size() != n || r.modulus() != q) throw std::invalid_argument("parity-check row mismatch");
        std::vector<std::vector<uint8_t>> work;
        work.reserve(rows_.size());
        for (const auto& r : rows_) work.push_back(r.raw());
        if (detail::row_reduce(work, q_, n_) != rows_.size())
            throw std::invalid_argument("parity-check matrix is not full row rank");
        build_packed();
    }

    static ParityCheckMatrix identity(uint32_t q, size_t n) {
        std::vector<FieldVector> rows;
        rows.reserve(n);
        for (size_t i = 0; i < n; ++i) rows.push_back(FieldVector::unit(q, n, i));
        return ParityCheckMatrix(q, n, std::move(rows));
    }
    static ParityCheckMatrix empty(uint32_t q, size_t n) { return ParityCheckMatrix(q, n, {}); }

    uint32_t q() const { return q_; }
    size_t n() const { return n_; }
    size_t k() const { return n_ - rows_.size(); }
    size_t num_rows() const { return rows_.size(); }
    const std::vector<FieldVector>& rows() const { return rows_; }

    // z H^T; empty matrices map everything to the (size-0 stand-in) syndrome,
    // represented here as an empty optional-free vector of length 0 is not
    // allowed, so callers must special-case k == n.
    FieldVector syndrome(const FieldVector& z) const {
        if (z.size() != n_ || z.modulus() != q_)
            throw std::invalid_argument("syndrome: dimension/modulus mismatch");
        if (rows_.empty()) throw std::logic_error("syndrome of a complete code is empty");
        FieldVector s(q_, rows_.size());
        if (q_ == 2 && n_ <= 64) {
            uint64_t zp = z.packed();
            for (size_t r = 0; r < rows_.size(); ++r)
                s.set(r, static_cast<uint32_t>(std::popcount(packed_rows_[r] & zp) & 1));
            return s;
        }
        for (size_t r = 0; r < rows_.size(); ++r) {
            uint32_t acc = 0;
            const auto& row = rows_[r].raw();
            for (size_t j = 0; j < n_; ++j) acc += static_cast<uint32_t>(row[j]) * z[j];
            s.set(r, acc % q_);
        }
        return s;
    }

    // q = 2, n <= 64 fast path
    uint64_t syndrome_packed(uint64_t z) const {
        uint64_t s = 0;
        for (size_t r = 0; r < packed_rows_.size(); ++r)
            s |= static_cast<uint64_t>(std::popcount(packed_rows_[r] & z) & 1) << r;
        return s;
    }
    const std::vector<uint64_t>& packed_rows() const { return packed_rows_; }

    bool in_standard_form() const {
        const size_t k = this->k();
        for (size_t r = 0; r < rows_.size(); ++r)
            for (size_t j = 0; j < rows_.size(); ++j)
                if (rows_[r][k + j] != (r == j ? 1 : 0)) return false;
        return true;
    }

    bool operator==(const ParityCheckMatrix& o) const {
        return q_ == o.q_ && n_ == o.n_ && rows_ == o.rows_;
    }

private:
    void build_packed() {
        packed_rows_.clear();
        if (q_ == 2 && n_ <= 64)
            for (const auto& r : rows_) packed_rows_.push_back(r.packed());
    }
    uint32_t q_;
    size_t n_;
    std::vector<FieldVector> rows_;
    std::vector<uint64_t> packed_rows_;
};

struct StandardFormResult {
    ParityCheckMatrix h_std;   // [H~ | I_{n-k}]
    PermutationMatrix col_perm;  // h_std column i <- reduced-H column col_perm[i]
};

// Reduces H to standard form [H~ | I]. Pivots are sought in the identity
// block's home columns first, so an input already in standard form comes back
// unchanged with the identity permutation; otherwise the leftmost usable
// column is swapped in. Codewords map via z -> col_perm.apply(z).
inline StandardFormResult to_standard_form(const ParityCheckMatrix& h) {
    const uint32_t q = h.q();
    const size_t n = h.n(), m = h.num_rows(), k = n - m;
    if (m == 0)
        return {ParityCheckMatrix::empty(q, n), PermutationMatrix::identity(n)};

    std::vector<std::vector<uint8_t>> w;
    w.reserve(m);
    for (const auto& r : h.rows()) w.push_back(r.raw());
    std::vector<uint32_t> colmap(n);
    std::iota(colmap.begin(), colmap.end(), 0u);

    auto swap_cols = [&](size_t a, size_t b) {
        if (a == b) return;
        for (auto& row : w) std::swap(row[a], row[b]);
        std::swap(colmap[a], colmap[b]);
    };

    for (size_t r = 0; r < m; ++r) {
        const size_t tc = k + r;
        size_t pr = r;
        while (pr < m && w[pr][tc] == 0) ++pr;
        if (pr == m) {
            // leftmost column with a usable pivot below row r
            size_t found = n;
            for (size_t c = 0; c < n && found == n; ++c) {
                if (c >= k && c <= tc) continue;  // previous identity columns and tc itself
                for (size_t i = r; i < m; ++i)
                    if (w[i][c] != 0) {
                        found = c;
                        break;
                    }
            }
            if (found == n) throw std::invalid_argument("to_standard_form: rank-deficient input");
            swap_cols(found, tc);
            pr = r;
            while (w[pr][tc] == 0) ++pr;
        }
        std::swap(w[r], w[pr]);
        const uint32_t inv = mod_inverse(w[r][tc], q);
        for (size_t j = 0; j < n; ++j) w[r][j] = static_cast<uint8_t>(w[r][j] * inv % q);
        for (size_t i = 0; i < m; ++i) {
            if (i == r || w[i][tc] == 0) continue;
            const uint32_t f = w[i][tc];
            for (size_t j = 0; j < n; ++j)
                w[i][j] = static_cast<uint8_t>((w[i][j] + (q - f) * w[r][j]) % q);
        }
    }

    std::vector<FieldVector> rows;
    rows.reserve(m);
    for (auto& row : w) rows.emplace_back(q, std::move(row));
    return {ParityCheckMatrix(q, n, std::move(rows)), PermutationMatrix(std::move(colmap))};
}

}  // namespace grsse
