// Empirical types (symbol-count vectors) of words in F_q^n and the indexed
// universe of all types for a given (n, q).
#pragma once

#include "grsse/field.hpp"
#include "grsse/numeric.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace grsse {

// Symbol counts of a word; counts[y] = number of coordinates equal to y.
// Stored as integers (not fractions of n) so juxtaposition sums stay exact.
struct EmpiricalType {
    std::vector<uint32_t> counts;

    uint32_t n() const {
        uint32_t s = 0;
        for (uint32_t c : counts) s += c;
        return s;
    }
    uint32_t weight() const { return n() - counts[0]; }

    bool operator==(const EmpiricalType& o) const { return counts == o.counts; }
    // canonical order: by weight, then lexicographically on the counts
    bool operator<(const EmpiricalType& o) const {
        uint32_t wa = weight(), wb = o.weight();
        if (wa != wb) return wa < wb;
        return counts < o.counts;
    }
};

inline EmpiricalType type_of(const FieldVector& z) {
    EmpiricalType t;
    t.counts.assign(z.modulus(), 0);
    for (size_t i = 0; i < z.size(); ++i) ++t.counts[z[i]];
    return t;
}

// Size of the type class: n! / prod_y counts[y]!
inline BigInt type_class_size(const EmpiricalType& t) {
    BigInt r = factorial(t.n());
    for (uint32_t c : t.counts) r /= factorial(c);
    return r;
}

// All types of F_q^n, id-indexed in canonical (weight, then lex) order.
// For q = 2 the id of a type equals its Hamming weight.
class TypeUniverse {
public:
    TypeUniverse(uint32_t q, uint32_t n) : q_(q), n_(n) {
        require_prime(q);
        std::vector<uint32_t> counts(q, 0);
        enumerate(counts, 0, n);
        std::sort(types_.begin(), types_.end());
        class_sizes_.reserve(types_.size());
        weights_.reserve(types_.size());
        for (uint32_t id = 0; id < types_.size(); ++id) {
            index_[types_[id].counts] = id;
            class_sizes_.push_back(type_class_size(types_[id]));
            weights_.push_back(types_[id].weight());
        }
    }

    uint32_t q() const { return q_; }
    uint32_t n() const { return n_; }
    size_t count() const { return types_.size(); }
    const EmpiricalType& type(uint32_t id) const { return types_[id]; }
    uint32_t weight(uint32_t id) const { return weights_[id]; }
    const BigInt& class_size(uint32_t id) const { return class_sizes_[id]; }

    uint32_t id_of(const EmpiricalType& t) const {
        auto it = index_.find(t.counts);
        if (it == index_.end()) throw std::invalid_argument("type not in universe");
        return it->second;
    }
    uint32_t id_of(const FieldVector& z) const { return id_of(type_of(z)); }

    // memoized shared instances
    static std::shared_ptr<const TypeUniverse> get(uint32_t q, uint32_t n) {
        static std::mutex mu;
        static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const TypeUniverse>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{q, n}];
        if (!slot) slot = std::make_shared<TypeUniverse>(q, n);
        return slot;
    }

private:
    void enumerate(std::vector<uint32_t>& counts, uint32_t pos, uint32_t remaining) {
        if (pos + 1 == q_) {
            counts[pos] = remaining;
            types_.push_back(EmpiricalType{counts});
            return;
        }
        for (uint32_t c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            enumerate(counts, pos + 1, remaining - c);
        }
    }

    uint32_t q_, n_;
    std::vector<EmpiricalType> types_;
    std::vector<BigInt> class_sizes_;
    std::vector<uint32_t> weights_;
    std::map<std::vector<uint32_t>, uint32_t> index_;
};

using TypeUniversePtr = std::shared_ptr<const TypeUniverse>;

}  // namespace grsse
