// Target exchangeable noise models as distributions over types, with entropy,
// capacity and tail-weight computations.
#pragma once

#include "grsse/numeric.hpp"
#include "grsse/typespace.hpp"

#include <cmath>
#include <string>

namespace grsse {

enum class NoiseKind { q_symmetric, hamming_ball, constant_weight };

struct NoiseModel {
    NoiseKind kind;
    uint32_t q = 2;
    uint32_t n = 0;
    Rational alpha;  // q_symmetric flip probability
    uint32_t w = 0;  // ball / constant-weight radius

    static NoiseModel symmetric(uint32_t q, uint32_t n, const Rational& alpha) {
        if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must be in [0,1]");
        NoiseModel m;
        m.kind = NoiseKind::q_symmetric;
        m.q = q;
        m.n = n;
        m.alpha = alpha;
        return m;
    }
    static NoiseModel ball(uint32_t q, uint32_t n, uint32_t w) {
        if (w > n) throw std::invalid_argument("ball radius w exceeds n");
        NoiseModel m;
        m.kind = NoiseKind::hamming_ball;
        m.q = q;
        m.n = n;
        m.w = w;
        return m;
    }
    static NoiseModel constant_weight(uint32_t q, uint32_t n, uint32_t w) {
        if (w > n) throw std::invalid_argument("weight w exceeds n");
        NoiseModel m;
        m.kind = NoiseKind::constant_weight;
        m.q = q;
        m.n = n;
        m.w = w;
        return m;
    }

    std::string label() const {
        switch (kind) {
            case NoiseKind::q_symmetric:
                return (q == 2 ? "bsc(" : "qsc(") + format_rational(alpha) + ")";
            case NoiseKind::hamming_ball:
                return "ball(w=" + std::to_string(w) + ")";
            case NoiseKind::constant_weight:
                return "cw(w=" + std::to_string(w) + ")";
        }
        return "?";
    }
};

// Probability mass over types p in P_n(F_q); Z is uniform within each class.
template <class S>
struct TypeDistribution {
    TypeUniversePtr space;
    std::vector<S> mass;  // indexed by type id

    S total() const {
        S t = scalar_traits<S>::zero();
        for (const auto& m : mass) t = t + m;
        return t;
    }
};

template <class S>
TypeDistribution<S> type_distribution(const NoiseModel& model) {
    using traits = scalar_traits<S>;
    TypeDistribution<S> d;
    d.space = TypeUniverse::get(model.q, model.n);
    d.mass.assign(d.space->count(), traits::zero());
    switch (model.kind) {
        case NoiseKind::q_symmetric: {
            // mass(p) = N_p (1-a)^{c_0} (a/(q-1))^{n-c_0}
            const Rational a = model.alpha;
            const Rational keep = 1 - a;
            const Rational flip = model.q > 1 ? a / (model.q - 1) : Rational(0);
            std::vector<Rational> keep_pow(model.n + 1), flip_pow(model.n + 1);
            keep_pow[0] = flip_pow[0] = 1;
            for (uint32_t i = 1; i <= model.n; ++i) {
                keep_pow[i] = keep_pow[i - 1] * keep;
                flip_pow[i] = flip_pow[i - 1] * flip;
            }
            for (uint32_t p = 0; p < d.space->count(); ++p) {
                const uint32_t c0 = d.space->type(p).counts[0];
                Rational m = Rational(d.space->class_size(p)) * keep_pow[c0] *
                             flip_pow[model.n - c0];
                d.mass[p] = traits::from_rational(m);
            }
            break;
        }
        case NoiseKind::hamming_ball: {
            const BigInt denom = ball_size(model.n, model.w, model.q);
            for (uint32_t p = 0; p < d.space->count(); ++p)
                if (d.space->weight(p) <= model.w)
                    d.mass[p] = traits::from_ratio(d.space->class_size(p), denom);
            break;
        }
        case NoiseKind::constant_weight: {
            const BigInt denom = sphere_size(model.n, model.w, model.q);
            for (uint32_t p = 0; p < d.space->count(); ++p)
                if (d.space->weight(p) == model.w)
                    d.mass[p] = traits::from_ratio(d.space->class_size(p), denom);
            break;
        }
    }
    return d;
}

// H(Z) in bits, using uniformity within type classes:
// H(Z) = sum_p mass(p) (log2 N_p - log2 mass(p)), with 0 log 0 = 0.
template <class S>
double noise_entropy(const TypeDistribution<S>& d) {
    double h = 0.0;
    for (uint32_t p = 0; p < d.space->count(); ++p) {
        const double m = to_double(d.mass[p]);
        if (m <= 0.0) continue;
        double log_mass;
        if constexpr (scalar_traits<S>::exact)
            log_mass = log2_rational(d.mass[p]);
        else
            log_mass = std::log2(m);
        h += m * (log2_big(d.space->class_size(p)) - log_mass);
    }
    return h;
}

// C = n log2 q - H(Z): uniform input maximizes I(X;Y) for additive noise.
template <class S>
double capacity(const TypeDistribution<S>& d) {
    return d.space->n() * std::log2(static_cast<double>(d.space->q())) - noise_entropy(d);
}

// Asymptotic Hamming-ball capacity per symbol:
// log q + (1-a) log(1-a) + a log(a/(q-1)), for 0 <= a <= 1 - 1/q.
inline double asymptotic_ball_capacity(double alpha, uint32_t q) {
    if (alpha < 0.0 || alpha > 1.0 - 1.0 / q)
        throw std::invalid_argument("alpha must be in [0, 1-1/q]");
    auto xlog = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    const double cross = alpha > 0.0 ? alpha * std::log2(alpha / (q - 1)) : 0.0;
    return std::log2(static_cast<double>(q)) + xlog(1.0 - alpha) + cross;
}

// P(wt(Z) >= threshold)
template <class S>
S tail_weight_probability(const TypeDistribution<S>& d, const Rational& threshold) {
    S t = scalar_traits<S>::zero();
    for (uint32_t p = 0; p < d.space->count(); ++p)
        if (Rational(d.space->weight(p)) >= threshold) t = t + d.mass[p];
    return t;
}

}  // namespace grsse
