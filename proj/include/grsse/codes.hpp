// Inner-code catalog: trivial / complete / repetition / Golay / user matrices
// and block-diagonal juxtapositions, with distance computation, coset
// operations, type sets and type-set distributions.
#pragma once

#include "grsse/field.hpp"
#include "grsse/rng_util.hpp"
#include "grsse/typespace.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace grsse {

// Sorted set of type ids realized in some coset.
using TypeSet = std::vector<uint32_t>;

// Distribution of the type set of a uniformly random syndrome. Probabilities
// are kept exact as count / q^denom_exp.
struct TypeSetTable {
    TypeUniversePtr space;
    std::vector<TypeSet> sets;          // canonical (lexicographic) order
    std::vector<BigInt> syndrome_count; // # syndromes with that type set
    uint32_t denom_exp = 0;             // P(set) = count / q^denom_exp
    std::map<TypeSet, uint32_t> index;

    // leader census: leader_count[p] = # cosets whose coset leader has type p
    std::vector<BigInt> leader_count;
    bool has_leader_count = false;

    size_t size() const { return sets.size(); }

    uint32_t index_of(const TypeSet& t) const {
        auto it = index.find(t);
        if (it == index.end()) throw std::invalid_argument("type set not in table");
        return it->second;
    }

    template <class S>
    std::vector<S> probs() const {
        const BigInt den = int_pow(space->q(), denom_exp);
        std::vector<S> p;
        p.reserve(sets.size());
        for (const auto& c : syndrome_count) p.push_back(scalar_traits<S>::from_ratio(c, den));
        return p;
    }

    void finalize() {
        index.clear();
        for (uint32_t i = 0; i < sets.size(); ++i) index[sets[i]] = i;
    }
};

// Minkowski-sum convolution of two type-set distributions (the type-set
// distribution of the block-diagonal code stacking the two underlying codes).
inline TypeSetTable convolve_type_set_tables(const TypeSetTable& a, const TypeSetTable& b) {
    const uint32_t q = a.space->q();
    if (q != b.space->q()) throw std::invalid_argument("convolve: field mismatch");
    TypeSetTable out;
    out.space = TypeUniverse::get(q, a.space->n() + b.space->n());
    out.denom_exp = a.denom_exp + b.denom_exp;

    std::map<TypeSet, BigInt> acc;
    std::vector<uint32_t> sum(q);
    for (size_t i = 0; i < a.sets.size(); ++i) {
        for (size_t j = 0; j < b.sets.size(); ++j) {
            TypeSet m;
            for (uint32_t pa : a.sets[i]) {
                const auto& ca = a.space->type(pa).counts;
                for (uint32_t pb : b.sets[j]) {
                    const auto& cb = b.space->type(pb).counts;
                    for (uint32_t y = 0; y < q; ++y) sum[y] = ca[y] + cb[y];
                    m.push_back(out.space->id_of(EmpiricalType{sum}));
                }
            }
            std::sort(m.begin(), m.end());
            m.erase(std::unique(m.begin(), m.end()), m.end());
            acc[m] += a.syndrome_count[i] * b.syndrome_count[j];
        }
    }
    for (auto& [set, count] : acc) {
        out.sets.push_back(set);
        out.syndrome_count.push_back(count);
    }
    out.finalize();

    if (a.has_leader_count && b.has_leader_count && q == 2) {
        // minimum coset weight adds across blocks; for q = 2 the leader type
        // is the weight, so the census convolves
        out.leader_count.assign(out.space->count(), BigInt(0));
        for (uint32_t wa = 0; wa < a.leader_count.size(); ++wa)
            for (uint32_t wb = 0; wb < b.leader_count.size(); ++wb)
                if (a.leader_count[wa] != 0 && b.leader_count[wb] != 0)
                    out.leader_count[wa + wb] += a.leader_count[wa] * b.leader_count[wb];
        out.has_leader_count = true;
    }
    return out;
}

// r-fold Minkowski-sum convolution; r = 1 returns a copy of the base table.
inline TypeSetTable juxtapose_type_set_distribution(const TypeSetTable& base, uint32_t r) {
    if (r < 1) throw std::invalid_argument("juxtapose: r must be >= 1");
    TypeSetTable out = base;
    for (uint32_t i = 1; i < r; ++i) out = convolve_type_set_tables(out, base);
    return out;
}

class LinearCode;
using CodePtr = std::shared_ptr<const LinearCode>;

class LinearCode {
public:
    enum class Kind { generic, trivial, complete, repetition, juxtaposition };

    static constexpr int64_t kInfiniteDistance = std::numeric_limits<int64_t>::max();
    // enumeration budgets (spec guards)
    static constexpr uint64_t kEnumBudget = uint64_t(1) << 26;
    static constexpr uint64_t kCosetProductBudget = uint64_t(1) << 20;
    static constexpr uint64_t kSyndromeTableBudget = uint64_t(1) << 20;

    static CodePtr trivial(uint32_t q, uint32_t n) {
        return build(Kind::trivial, "trivial", ParityCheckMatrix::identity(q, n));
    }
    static CodePtr complete(uint32_t q, uint32_t n) {
        return build(Kind::complete, "complete", ParityCheckMatrix::empty(q, n));
    }
    static CodePtr repetition(uint32_t q, uint32_t n) {
        if (n < 2) throw std::invalid_argument("repetition code needs n >= 2");
        std::vector<FieldVector> rows;
        for (uint32_t r = 0; r + 1 < n; ++r) {
            FieldVector row(q, n);
            row.set(0, q - 1);
            row.set(1 + r, 1);
            rows.push_back(row);
        }
        return build(Kind::repetition, "repetition", ParityCheckMatrix(q, n, std::move(rows)));
    }
    static CodePtr golay24();

    // Arbitrary full-row-rank H; reduced to standard form internally. The
    // recorded column permutation maps user coordinates to internal ones.
    static CodePtr from_matrix(const std::string& name, const ParityCheckMatrix& h) {
        auto sf = to_standard_form(h);
        auto code = build(Kind::generic, name, std::move(sf.h_std));
        const_cast<LinearCode&>(*code).input_perm_ = sf.col_perm;
        return code;
    }

    // Block-diagonal I_r (x) H_base, stored in standard form (all information
    // coordinates first, then all parity coordinates, blockwise).
    static CodePtr juxtapose(CodePtr base, uint32_t r) {
        if (r < 1) throw std::invalid_argument("juxtapose: r must be >= 1");
        if (r == 1) return base;
        const uint32_t q = base->q(), nb = base->n(), kb = base->k(), pb = nb - kb;
        const uint32_t n = r * nb, k = r * kb;
        std::vector<FieldVector> rows;
        for (uint32_t b = 0; b < r; ++b) {
            for (uint32_t rr = 0; rr < pb; ++rr) {
                FieldVector row(q, n);
                const auto& brow = base->check_matrix().rows()[rr];
                for (uint32_t j = 0; j < kb; ++j) row.set(b * kb + j, brow[j]);
                row.set(k + b * pb + rr, 1);
                rows.push_back(row);
            }
        }
        auto code = build(Kind::juxtaposition, "jux" + std::to_string(r) + ":" + base->name(),
                          ParityCheckMatrix(q, n, std::move(rows)));
        const_cast<LinearCode&>(*code).base_ = std::move(base);
        const_cast<LinearCode&>(*code).r_ = r;
        return code;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    uint32_t q() const { return q_; }
    uint32_t n() const { return n_; }
    uint32_t k() const { return k_; }
    const ParityCheckMatrix& check_matrix() const { return h_; }
    const PermutationMatrix& input_column_perm() const { return input_perm_; }
    CodePtr juxtaposition_base() const { return base_; }
    uint32_t juxtaposition_order() const { return r_; }

    FieldVector syndrome(const FieldVector& x) const { return h_.syndrome(x); }

    // exact minimum weight over nonzero codewords; infinity sentinel for k = 0
    int64_t distance() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!distance_) distance_ = compute_distance();
        return *distance_;
    }
    bool distance_is_infinite() const { return distance() == kInfiniteDistance; }

    // r * d_base for juxtapositions (the footnote heuristic); d otherwise.
    // Infinite distances stay infinite (flagged via distance()).
    Rational effective_distance() const {
        if (kind_ == Kind::juxtaposition) {
            if (base_->distance_is_infinite()) return Rational(0);  // unused; callers check the flag
            return Rational(r_) * base_->effective_distance();
        }
        if (distance_is_infinite()) return Rational(0);
        return Rational(distance());
    }
    bool effective_distance_is_infinite() const {
        const LinearCode* c = this;
        while (c->kind_ == Kind::juxtaposition) c = c->base_.get();
        return c->distance_is_infinite();
    }

    const TypeSetTable& typesets() const {
        std::lock_guard<std::mutex> lock(mu_);
        ensure_typesets_locked();
        return *typesets_;
    }

    // --- syndrome-indexed operations -------------------------------------
    // Raw syndromes are symbol strings of length n-k (possibly empty).

    uint32_t typeset_of(const std::vector<uint8_t>& s) const;
    uint32_t typeset_of(const FieldVector& s) const { return typeset_of(s.raw()); }

    TypeSet type_set(const FieldVector& s) const { return typesets().sets[typeset_of(s)]; }

    FieldVector coset_leader(const FieldVector& s) const;

    // Uniform draw from {z : z H^T = s, type(z) = p}.
    FieldVector sample_in_coset(const std::vector<uint8_t>& s, uint32_t type_id, LocalRng& rng) const;
    FieldVector sample_in_coset(const FieldVector& s, uint32_t type_id, LocalRng& rng) const {
        return sample_in_coset(s.raw(), type_id, rng);
    }

    // Exact census of the coset of s: type id -> number of elements.
    std::map<uint32_t, BigInt> coset_type_census(const std::vector<uint8_t>& s) const;

    // Visits every vector of the coset of s (budget-guarded).
    void for_each_in_coset(const std::vector<uint8_t>& s,
                           const std::function<void(const FieldVector&)>& visit) const;

private:
    LinearCode(Kind kind, std::string name, ParityCheckMatrix h)
        : kind_(kind),
          name_(std::move(name)),
          q_(h.q()),
          n_(static_cast<uint32_t>(h.n())),
          k_(static_cast<uint32_t>(h.k())),
          h_(std::move(h)),
          input_perm_(PermutationMatrix::identity(n_)) {
        if (k_ > 0 && k_ < n_ && !h_.in_standard_form())
            throw std::logic_error("internal: code not in standard form");
    }

    static CodePtr build(Kind kind, std::string name, ParityCheckMatrix h) {
        return CodePtr(new LinearCode(kind, std::move(name), std::move(h)));
    }

    // generator row j of G = [I_k | -H~^T]
    FieldVector generator_row(uint32_t j) const {
        FieldVector g(q_, n_);
        g.set(j, 1);
        for (uint32_t r = 0; r < n_ - k_; ++r)
            g.set(k_ + r, (q_ - h_.rows()[r][j]) % q_);
        return g;
    }

    // packed generator rows (q = 2, n <= 63), cached
    const std::vector<uint64_t>& packed_generators() const {
        std::lock_guard<std::mutex> lock(gen_mu_);
        if (packed_gen_.empty() && k_ > 0) {
            packed_gen_.reserve(k_);
            for (uint32_t j = 0; j < k_; ++j) packed_gen_.push_back(generator_row(j).packed());
        }
        return packed_gen_;
    }
    bool packable() const { return q_ == 2 && n_ <= 63; }
    static uint64_t pack_syms(const std::vector<uint8_t>& s) {
        uint64_t m = 0;
        for (size_t i = 0; i < s.size(); ++i) m |= static_cast<uint64_t>(s[i]) << i;
        return m;
    }
    // lexicographically smaller in coordinate order (coordinate 0 first)
    static bool packed_lex_less(uint64_t x, uint64_t y) {
        if (x == y) return false;
        const int i = std::countr_zero(x ^ y);
        return ((x >> i) & 1u) == 0;
    }
    // streams the packed coset [0|s] + codewords via Gray code
    template <class F>
    void for_each_in_coset_packed(uint64_t s_packed, F&& visit) const {
        const auto& g = packed_generators();
        uint64_t cur = s_packed << k_;
        visit(cur);
        const uint64_t total = uint64_t(1) << k_;
        for (uint64_t idx = 1; idx < total; ++idx) {
            cur ^= g[std::countr_zero(idx)];
            visit(cur);
        }
    }

    // Streams all q^k codewords (Gray code for q = 2, digit recursion else).
    template <class F>
    void for_each_codeword(F&& visit) const;

    int64_t compute_distance() const;
    void ensure_typesets_locked() const;
    void build_typesets_generic() const;
    void build_typesets_trivial() const;
    void build_typesets_complete() const;
    void build_typesets_repetition() const;
    void build_typesets_juxtaposition() const;

    std::vector<uint8_t> block_syndrome(const std::vector<uint8_t>& s, uint32_t b) const {
        const uint32_t pb = base_->n() - base_->k();
        return std::vector<uint8_t>(s.begin() + b * pb, s.begin() + (b + 1) * pb);
    }
    // scatter a base-code vector into block b of a length-n vector
    void place_block(FieldVector& full, const FieldVector& blockv, uint32_t b) const {
        const uint32_t kb = base_->k(), pb = base_->n() - kb;
        for (uint32_t j = 0; j < kb; ++j) full.set(b * kb + j, blockv[j]);
        for (uint32_t j = 0; j < pb; ++j) full.set(k_ + b * pb + j, blockv[kb + j]);
    }

    Kind kind_;
    std::string name_;
    uint32_t q_, n_, k_;
    ParityCheckMatrix h_;
    PermutationMatrix input_perm_;
    CodePtr base_;
    uint32_t r_ = 1;

    mutable std::mutex mu_;
    mutable std::mutex gen_mu_;
    mutable std::vector<uint64_t> packed_gen_;
    mutable std::optional<int64_t> distance_;
    mutable std::shared_ptr<const TypeSetTable> typesets_;
    mutable std::vector<uint32_t> syndrome_ts_;        // enumerated kinds, if within budget
    mutable std::vector<uint32_t> type_to_ts_;         // trivial/repetition: type id -> set index
    mutable std::map<std::vector<uint32_t>, uint32_t> jux_memo_;  // sorted block ts ids -> ts id
};

// ---------------------------------------------------------------------------

template <class F>
void LinearCode::for_each_codeword(F&& visit) const {
    const uint64_t total = [&] {
        BigInt t = int_pow(q_, k_);
        if (t > BigInt(kEnumBudget)) throw std::runtime_error("codeword enumeration budget exceeded");
        return t.convert_to<uint64_t>();
    }();
    if (q_ == 2 && n_ <= 63) {
        std::vector<uint64_t> g(k_);
        for (uint32_t j = 0; j < k_; ++j) g[j] = generator_row(j).packed();
        uint64_t cur = 0;
        visit(FieldVector::from_packed(cur, n_));
        for (uint64_t idx = 1; idx < total; ++idx) {
            cur ^= g[std::countr_zero(idx)];
            visit(FieldVector::from_packed(cur, n_));
        }
        return;
    }
    std::vector<FieldVector> g;
    for (uint32_t j = 0; j < k_; ++j) g.push_back(generator_row(j));
    FieldVector cur(q_, n_);
    auto rec = [&](auto&& self, uint32_t j) -> void {
        if (j == k_) {
            visit(cur);
            return;
        }
        self(self, j + 1);
        for (uint32_t c = 1; c < q_; ++c) {
            cur = cur + g[j];
            self(self, j + 1);
        }
        cur = cur + g[j];  // wraps back (q * g = 0)
    };
    if (k_ == 0)
        visit(cur);
    else
        rec(rec, 0);
}

inline void LinearCode::for_each_in_coset(
    const std::vector<uint8_t>& s, const std::function<void(const FieldVector&)>& visit) const {
    if (s.size() != n_ - k_) throw std::invalid_argument("syndrome length mismatch");
    switch (kind_) {
        case Kind::trivial: {
            visit(FieldVector(q_, s));
            return;
        }
        case Kind::complete: {
            BigInt t = int_pow(q_, n_);
            if (t > BigInt(kEnumBudget)) throw std::runtime_error("coset enumeration budget exceeded");
            FieldVector cur(q_, n_);
            auto rec = [&](auto&& self, uint32_t i) -> void {
                if (i == n_) {
                    visit(cur);
                    return;
                }
                for (uint32_t c = 0; c < q_; ++c) {
                    cur.set(i, c);
                    self(self, i + 1);
                }
                cur.set(i, 0);
            };
            rec(rec, 0);
            return;
        }
        case Kind::repetition: {
            FieldVector z0(q_, n_);
            for (uint32_t r = 0; r < n_ - 1; ++r) z0.set(1 + r, s[r]);
            FieldVector ones(q_, n_);
            for (uint32_t i = 0; i < n_; ++i) ones.set(i, 1);
            FieldVector cur = z0;
            for (uint32_t c = 0; c < q_; ++c) {
                visit(cur);
                if (c + 1 < q_) cur = cur + ones;
            }
            return;
        }
        case Kind::juxtaposition: {
            BigInt t = int_pow(q_, k_);
            if (t > BigInt(kCosetProductBudget))
                throw std::runtime_error("coset enumeration budget exceeded");
            std::vector<std::vector<FieldVector>> block_elems(r_);
            for (uint32_t b = 0; b < r_; ++b)
                base_->for_each_in_coset(block_syndrome(s, b),
                                         [&](const FieldVector& v) { block_elems[b].push_back(v); });
            FieldVector cur(q_, n_);
            auto rec = [&](auto&& self, uint32_t b) -> void {
                if (b == r_) {
                    visit(cur);
                    return;
                }
                for (const auto& v : block_elems[b]) {
                    place_block(cur, v, b);
                    self(self, b + 1);
                }
            };
            rec(rec, 0);
            return;
        }
        case Kind::generic: {
            // z0 = [0 | s] plus every codeword
            FieldVector z0(q_, n_);
            for (uint32_t r = 0; r < n_ - k_; ++r) z0.set(k_ + r, s[r]);
            for_each_codeword([&](const FieldVector& c) { visit(z0 + c); });
            return;
        }
    }
}

inline int64_t LinearCode::compute_distance() const {
    if (k_ == 0) return kInfiniteDistance;
    switch (kind_) {
        case Kind::complete:
            return 1;
        case Kind::repetition:
            return n_;
        case Kind::juxtaposition:
            return base_->distance();
        default:
            break;
    }
    int64_t best = kInfiniteDistance;
    if (q_ == 2 && n_ <= 63) {
        BigInt t = int_pow(q_, k_);
        if (t > BigInt(kEnumBudget)) throw std::runtime_error("distance enumeration budget exceeded");
        const uint64_t total = t.convert_to<uint64_t>();
        std::vector<uint64_t> g(k_);
        for (uint32_t j = 0; j < k_; ++j) g[j] = generator_row(j).packed();
        uint64_t cur = 0;
        for (uint64_t idx = 1; idx < total; ++idx) {
            cur ^= g[std::countr_zero(idx)];
            const int64_t w = std::popcount(cur);
            if (w < best) best = w;
        }
        return best;
    }
    for_each_codeword([&](const FieldVector& c) {
        const int64_t w = static_cast<int64_t>(c.weight());
        if (w != 0 && w < best) best = w;
    });
    return best;
}

inline void LinearCode::ensure_typesets_locked() const {
    if (typesets_) return;
    switch (kind_) {
        case Kind::trivial: build_typesets_trivial(); break;
        case Kind::complete: build_typesets_complete(); break;
        case Kind::repetition: build_typesets_repetition(); break;
        case Kind::juxtaposition: build_typesets_juxtaposition(); break;
        case Kind::generic: build_typesets_generic(); break;
    }
}

inline void LinearCode::build_typesets_trivial() const {
    auto table = std::make_shared<TypeSetTable>();
    table->space = TypeUniverse::get(q_, n_);
    table->denom_exp = n_;
    type_to_ts_.resize(table->space->count());
    table->leader_count.assign(table->space->count(), BigInt(0));
    for (uint32_t p = 0; p < table->space->count(); ++p) {
        table->sets.push_back({p});
        table->syndrome_count.push_back(table->space->class_size(p));
        table->leader_count[p] = table->space->class_size(p);
        type_to_ts_[p] = p;
    }
    table->has_leader_count = true;
    table->finalize();
    typesets_ = std::move(table);
}

inline void LinearCode::build_typesets_complete() const {
    auto table = std::make_shared<TypeSetTable>();
    table->space = TypeUniverse::get(q_, n_);
    table->denom_exp = 0;
    TypeSet all(table->space->count());
    for (uint32_t p = 0; p < all.size(); ++p) all[p] = p;
    table->sets.push_back(std::move(all));
    table->syndrome_count.push_back(1);
    table->leader_count.assign(table->space->count(), BigInt(0));
    table->leader_count[0] = 1;  // zero vector leads the single coset
    table->has_leader_count = true;
    table->finalize();
    typesets_ = std::move(table);
}

inline void LinearCode::build_typesets_repetition() const {
    auto table = std::make_shared<TypeSetTable>();
    auto space = TypeUniverse::get(q_, n_);
    table->space = space;
    table->denom_exp = n_ - 1;

    // the type set of the coset of z is the orbit of type(z) under adding a
    // constant to every coordinate
    auto orbit_of = [&](uint32_t p) {
        const auto& counts = space->type(p).counts;
        TypeSet orbit;
        std::vector<uint32_t> shifted(q_);
        for (uint32_t c = 0; c < q_; ++c) {
            for (uint32_t y = 0; y < q_; ++y) shifted[y] = counts[(y + q_ - c) % q_];
            orbit.push_back(space->id_of(EmpiricalType{shifted}));
        }
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        return orbit;
    };

    std::map<TypeSet, BigInt> acc;
    std::vector<TypeSet> orbit_by_type(space->count());
    for (uint32_t p = 0; p < space->count(); ++p) {
        orbit_by_type[p] = orbit_of(p);
        acc[orbit_by_type[p]] += space->class_size(p);
    }
    for (auto& [set, vectors] : acc) {
        table->sets.push_back(set);
        table->syndrome_count.push_back(vectors / q_);  // q vectors per coset
    }
    table->finalize();

    if (q_ == 2) {
        table->leader_count.assign(space->count(), BigInt(0));
        for (uint32_t w = 0; 2 * w <= n_; ++w) {
            if (2 * w < n_)
                table->leader_count[w] = binomial(n_, w);
            else
                table->leader_count[w] = binomial(n_, w) / 2;
        }
        table->has_leader_count = true;
    }

    type_to_ts_.resize(space->count());
    for (uint32_t p = 0; p < space->count(); ++p)
        type_to_ts_[p] = table->index_of(orbit_by_type[p]);
    typesets_ = std::move(table);
}

inline void LinearCode::build_typesets_juxtaposition() const {
    const TypeSetTable& base = base_->typesets();
    typesets_ = std::make_shared<TypeSetTable>(juxtapose_type_set_distribution(base, r_));
}

inline void LinearCode::build_typesets_generic() const {
    if (int_pow(q_, n_) > BigInt(kEnumBudget))
        throw std::runtime_error("type-set enumeration budget exceeded");
    auto table = std::make_shared<TypeSetTable>();
    auto space = TypeUniverse::get(q_, n_);
    table->space = space;
    table->denom_exp = n_ - k_;
    table->leader_count.assign(space->count(), BigInt(0));
    table->has_leader_count = true;

    const uint64_t num_syndromes = int_pow(q_, n_ - k_).convert_to<uint64_t>();
    const bool keep_table = num_syndromes <= kSyndromeTableBudget;
    std::map<TypeSet, uint32_t> provisional;
    std::vector<BigInt> counts;
    std::vector<uint32_t> ts_of_syndrome;
    if (keep_table) ts_of_syndrome.resize(num_syndromes);

    if (q_ == 2 && n_ <= 63) {
        std::vector<uint64_t> g(k_);
        for (uint32_t j = 0; j < k_; ++j) g[j] = generator_row(j).packed();
        const uint64_t num_codewords = uint64_t(1) << k_;
        for (uint64_t s = 0; s < num_syndromes; ++s) {
            const uint64_t z0 = s << k_;
            uint64_t mask = 0, cur = 0;
            uint32_t minw = n_ + 1;
            uint64_t w = std::popcount(z0);
            mask |= uint64_t(1) << w;
            if (w < minw) minw = static_cast<uint32_t>(w);
            for (uint64_t idx = 1; idx < num_codewords; ++idx) {
                cur ^= g[std::countr_zero(idx)];
                w = std::popcount(z0 ^ cur);
                mask |= uint64_t(1) << w;
                if (w < minw) minw = static_cast<uint32_t>(w);
            }
            TypeSet set;
            for (uint32_t p = 0; p <= n_; ++p)
                if (mask & (uint64_t(1) << p)) set.push_back(p);
            auto [it, fresh] = provisional.try_emplace(std::move(set),
                                                       static_cast<uint32_t>(counts.size()));
            if (fresh) counts.push_back(0);
            counts[it->second] += 1;
            table->leader_count[minw] += 1;
            if (keep_table) ts_of_syndrome[s] = it->second;
        }
    } else {
        std::vector<uint8_t> s(n_ - k_, 0);
        for (uint64_t sidx = 0; sidx < num_syndromes; ++sidx) {
            TypeSet set;
            uint32_t min_weight = n_ + 1;
            std::optional<FieldVector> leader;
            for_each_in_coset(s, [&](const FieldVector& z) {
                set.push_back(space->id_of(z));
                const uint32_t w = static_cast<uint32_t>(z.weight());
                if (w < min_weight || (w == min_weight && z < *leader)) {
                    min_weight = w;
                    leader = z;
                }
            });
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            auto [it, fresh] = provisional.try_emplace(std::move(set),
                                                       static_cast<uint32_t>(counts.size()));
            if (fresh) counts.push_back(0);
            counts[it->second] += 1;
            table->leader_count[space->id_of(*leader)] += 1;
            if (keep_table) ts_of_syndrome[sidx] = it->second;
            // next syndrome (mixed radix, digit 0 fastest)
            for (size_t d = 0; d < s.size(); ++d) {
                if (++s[d] < q_) break;
                s[d] = 0;
            }
        }
    }

    // canonicalize set order and remap
    std::vector<uint32_t> remap(counts.size());
    for (auto& [set, pid] : provisional) {
        remap[pid] = static_cast<uint32_t>(table->sets.size());
        table->sets.push_back(set);
        table->syndrome_count.push_back(counts[pid]);
    }
    table->finalize();
    if (keep_table) {
        syndrome_ts_.resize(num_syndromes);
        for (uint64_t s = 0; s < num_syndromes; ++s) syndrome_ts_[s] = remap[ts_of_syndrome[s]];
    }
    typesets_ = std::move(table);
}

inline uint32_t LinearCode::typeset_of(const std::vector<uint8_t>& s) const {
    if (s.size() != n_ - k_) throw std::invalid_argument("syndrome length mismatch");
    const TypeSetTable& table = typesets();
    switch (kind_) {
        case Kind::complete:
            return 0;
        case Kind::trivial:
            return type_to_ts_[table.space->id_of(FieldVector(q_, s))];
        case Kind::repetition: {
            EmpiricalType t;
            t.counts.assign(q_, 0);
            t.counts[0] = 1;  // leading information coordinate of [0 | s]
            for (uint8_t x : s) ++t.counts[x];
            return type_to_ts_[table.space->id_of(t)];
        }
        case Kind::juxtaposition: {
            std::vector<uint32_t> key(r_);
            for (uint32_t b = 0; b < r_; ++b) key[b] = base_->typeset_of(block_syndrome(s, b));
            std::sort(key.begin(), key.end());
            {
                std::lock_guard<std::mutex> lock(mu_);
                auto it = jux_memo_.find(key);
                if (it != jux_memo_.end()) return it->second;
            }
            // Minkowski sum of the block type sets
            const TypeSetTable& bt = base_->typesets();
            const uint32_t q = q_;
            std::vector<std::vector<uint32_t>> partial = {std::vector<uint32_t>(q, 0)};
            for (uint32_t b = 0; b < r_; ++b) {
                std::map<std::vector<uint32_t>, bool> next;
                for (const auto& acc : partial) {
                    for (uint32_t p : bt.sets[key[b]]) {
                        const auto& c = bt.space->type(p).counts;
                        std::vector<uint32_t> sum(q);
                        for (uint32_t y = 0; y < q; ++y) sum[y] = acc[y] + c[y];
                        next[sum] = true;
                    }
                }
                partial.clear();
                for (auto& [counts, _] : next) partial.push_back(counts);
            }
            TypeSet set;
            for (auto& counts : partial) set.push_back(table.space->id_of(EmpiricalType{counts}));
            std::sort(set.begin(), set.end());
            const uint32_t id = table.index_of(set);
            std::lock_guard<std::mutex> lock(mu_);
            jux_memo_[key] = id;
            return id;
        }
        case Kind::generic: {
            if (!syndrome_ts_.empty()) {
                uint64_t idx = 0;
                for (size_t d = s.size(); d-- > 0;) idx = idx * q_ + s[d];
                return syndrome_ts_[idx];
            }
            TypeSet set;
            if (packable()) {
                uint64_t mask = 0;
                for_each_in_coset_packed(pack_syms(s),
                                         [&](uint64_t z) { mask |= uint64_t(1) << std::popcount(z); });
                for (uint32_t p = 0; p <= n_; ++p)
                    if (mask & (uint64_t(1) << p)) set.push_back(p);
            } else {
                for_each_in_coset(s,
                                  [&](const FieldVector& z) { set.push_back(table.space->id_of(z)); });
                std::sort(set.begin(), set.end());
                set.erase(std::unique(set.begin(), set.end()), set.end());
            }
            return table.index_of(set);
        }
    }
    throw std::logic_error("unreachable");
}

inline FieldVector LinearCode::coset_leader(const FieldVector& s) const {
    if (kind_ == Kind::complete) return FieldVector(q_, n_);
    if (kind_ == Kind::trivial) return s;
    if (kind_ == Kind::generic && packable()) {
        if (int_pow(q_, k_) > BigInt(kEnumBudget))
            throw std::runtime_error("coset enumeration budget exceeded");
        uint64_t best = 0;
        int best_w = static_cast<int>(n_) + 1;
        for_each_in_coset_packed(pack_syms(s.raw()), [&](uint64_t z) {
            const int w = std::popcount(z);
            if (w < best_w || (w == best_w && packed_lex_less(z, best))) {
                best_w = w;
                best = z;
            }
        });
        return FieldVector::from_packed(best, n_);
    }
    std::optional<FieldVector> best;
    size_t best_w = n_ + 1;
    for_each_in_coset(s.raw(), [&](const FieldVector& z) {
        const size_t w = z.weight();
        if (w < best_w || (w == best_w && z < *best)) {
            best_w = w;
            best = z;
        }
    });
    return *best;
}

inline std::map<uint32_t, BigInt> LinearCode::coset_type_census(
    const std::vector<uint8_t>& s) const {
    std::map<uint32_t, BigInt> census;
    switch (kind_) {
        case Kind::trivial: {
            census[typesets().space->id_of(FieldVector(q_, s))] = 1;
            return census;
        }
        case Kind::complete: {
            const auto& space = *typesets().space;
            for (uint32_t p = 0; p < space.count(); ++p) census[p] = space.class_size(p);
            return census;
        }
        case Kind::generic:
            if (packable()) {
                if (int_pow(q_, k_) > BigInt(kEnumBudget))
                    throw std::runtime_error("coset enumeration budget exceeded");
                std::vector<uint64_t> hist(n_ + 1, 0);
                for_each_in_coset_packed(pack_syms(s),
                                         [&](uint64_t z) { ++hist[std::popcount(z)]; });
                for (uint32_t w = 0; w <= n_; ++w)
                    if (hist[w]) census[w] = hist[w];
                return census;
            }
            [[fallthrough]];
        case Kind::repetition: {
            const auto& space = *typesets().space;
            for_each_in_coset(s, [&](const FieldVector& z) { census[space.id_of(z)] += 1; });
            return census;
        }
        case Kind::juxtaposition:
            throw std::logic_error("coset_type_census: use the per-block decomposition");
    }
    throw std::logic_error("unreachable");
}

inline FieldVector LinearCode::sample_in_coset(const std::vector<uint8_t>& s, uint32_t type_id,
                                               LocalRng& rng) const {
    const TypeSetTable& table = typesets();
    const EmpiricalType& target = table.space->type(type_id);
    switch (kind_) {
        case Kind::trivial: {
            FieldVector z(q_, s);
            if (table.space->id_of(z) != type_id)
                throw std::invalid_argument("sample_in_coset: type not in this coset");
            return z;
        }
        case Kind::complete: {
            // uniform arrangement of a word with the target symbol counts
            std::vector<uint8_t> symbols;
            symbols.reserve(n_);
            for (uint32_t y = 0; y < q_; ++y)
                symbols.insert(symbols.end(), target.counts[y], static_cast<uint8_t>(y));
            for (size_t i = symbols.size() - 1; i > 0; --i)
                std::swap(symbols[i], symbols[draw_below(rng, i + 1)]);
            return FieldVector(q_, std::move(symbols));
        }
        case Kind::juxtaposition: {
            const TypeSetTable& bt = base_->typesets();
            // per-block census of coset types
            std::vector<std::map<uint32_t, BigInt>> block_types(r_);
            std::vector<std::vector<uint8_t>> block_s(r_);
            for (uint32_t b = 0; b < r_; ++b) {
                block_s[b] = block_syndrome(s, b);
                block_types[b] = base_->coset_type_census(block_s[b]);
            }
            // suffix[b]: remaining-counts -> number of completions from block b on
            using Key = std::vector<uint32_t>;
            std::vector<std::map<Key, BigInt>> suffix(r_ + 1);
            suffix[r_][Key(q_, 0)] = 1;
            for (uint32_t b = r_; b-- > 0;) {
                for (const auto& [tid, cnt] : block_types[b]) {
                    const auto& c = bt.space->type(tid).counts;
                    for (const auto& [rem, ways] : suffix[b + 1]) {
                        Key key(q_);
                        for (uint32_t y = 0; y < q_; ++y) key[y] = rem[y] + c[y];
                        suffix[b][key] += cnt * ways;
                    }
                }
            }
            Key rem = target.counts;
            auto it_total = suffix[0].find(rem);
            if (it_total == suffix[0].end() || it_total->second == 0)
                throw std::invalid_argument("sample_in_coset: type not in this coset");
            FieldVector full(q_, n_);
            for (uint32_t b = 0; b < r_; ++b) {
                // choose the block type proportional to census * completions
                BigInt total = 0;
                std::vector<std::pair<uint32_t, BigInt>> options;
                for (const auto& [tid, cnt] : block_types[b]) {
                    const auto& c = bt.space->type(tid).counts;
                    Key next(q_);
                    bool ok = true;
                    for (uint32_t y = 0; y < q_; ++y) {
                        if (rem[y] < c[y]) { ok = false; break; }
                        next[y] = rem[y] - c[y];
                    }
                    if (!ok) continue;
                    auto jt = suffix[b + 1].find(next);
                    if (jt == suffix[b + 1].end()) continue;
                    BigInt wgt = cnt * jt->second;
                    total += wgt;
                    options.emplace_back(tid, wgt);
                }
                BigInt pick = draw_big_below(rng, total);
                uint32_t chosen = options.back().first;
                for (const auto& [tid, wgt] : options) {
                    if (pick < wgt) { chosen = tid; break; }
                    pick -= wgt;
                }
                place_block(full, base_->sample_in_coset(block_s[b], chosen, rng), b);
                const auto& c = bt.space->type(chosen).counts;
                for (uint32_t y = 0; y < q_; ++y) rem[y] -= c[y];
            }
            return full;
        }
        case Kind::generic:
            if (packable()) {
                // two passes over the packed coset: count, then select
                const uint32_t w = target.weight();
                uint64_t matches = 0;
                const uint64_t sp = pack_syms(s);
                for_each_in_coset_packed(sp, [&](uint64_t z) {
                    matches += std::popcount(z) == static_cast<int>(w);
                });
                if (matches == 0)
                    throw std::invalid_argument("sample_in_coset: type not in this coset");
                uint64_t pick = draw_below(rng, matches);
                uint64_t found = 0;
                bool done = false;
                for_each_in_coset_packed(sp, [&](uint64_t z) {
                    if (done || std::popcount(z) != static_cast<int>(w)) return;
                    if (pick-- == 0) {
                        found = z;
                        done = true;
                    }
                });
                return FieldVector::from_packed(found, n_);
            }
            [[fallthrough]];
        case Kind::repetition: {
            // two-pass reservoir over the coset
            uint64_t matches = 0;
            for_each_in_coset(s, [&](const FieldVector& z) {
                if (type_of(z).counts == target.counts) ++matches;
            });
            if (matches == 0) throw std::invalid_argument("sample_in_coset: type not in this coset");
            uint64_t pick = draw_below(rng, matches);
            std::optional<FieldVector> out;
            for_each_in_coset(s, [&](const FieldVector& z) {
                if (out) return;
                if (type_of(z).counts == target.counts && pick-- == 0) out = z;
            });
            return *out;
        }
    }
    throw std::logic_error("unreachable");
}

// Extended binary Golay code [24,12,8] in standard form [B | I_12].
inline CodePtr LinearCode::golay24() {
    static const char* kB[12] = {
        "011111111111", "111011100010", "110111000101", "101110001011",
        "111100010110", "111000101101", "110001011011", "100010110111",
        "100101101110", "101011011100", "110110111000", "101101110001",
    };
    std::vector<FieldVector> rows;
    for (uint32_t r = 0; r < 12; ++r) {
        FieldVector row(2, 24);
        for (uint32_t j = 0; j < 12; ++j) row.set(j, kB[r][j] - '0');
        row.set(12 + r, 1);
        rows.push_back(row);
    }
    auto code = build(Kind::generic, "golay24", ParityCheckMatrix(2, 24, std::move(rows)));
    if (code->distance() != 8) throw std::logic_error("golay24 self-check failed: distance != 8");
    return code;
}

// Built-in catalog for a given field/length (golay24 only when it fits).
inline std::vector<CodePtr> default_catalog(uint32_t q, uint32_t n) {
    std::vector<CodePtr> out;
    out.push_back(LinearCode::trivial(q, n));
    if (n >= 2) out.push_back(LinearCode::repetition(q, n));
    if (q == 2 && n == 24) out.push_back(LinearCode::golay24());
    out.push_back(LinearCode::complete(q, n));
    return out;
}

}  // namespace grsse
