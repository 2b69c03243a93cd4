// Closed-form bound evaluators for the main theorem and the general greedy
// rejection sampling lemma, plus a reference GRS sampler for empirical checks.
#pragma once

#include "grsse/channels.hpp"
#include "grsse/codes.hpp"
#include "grsse/rng_util.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace grsse {

// eta = (1 + e^-1) log2 e, evaluated from its defining expression
inline double eta_bits() { return (1.0 + std::exp(-1.0)) / std::log(2.0); }

struct BoundReport {
    uint32_t n = 0;
    uint32_t k = 0;
    double capacity = 0.0;     // C, bits
    double eta = 0.0;          // (1+1/e) log2 e
    double tail = 0.0;         // P(wt(Z) >= d/2)
    double elogl_bound = 0.0;  // bound on E[log2 L], bits
    double comm_bound = 0.0;   // bound on expected message bits

    double capacity_per_symbol() const { return capacity / n; }
    double comm_bound_per_symbol() const { return comm_bound / n; }
};

// E[log L] <= C - P(wt Z < d/2) k log q + eta + 1
// comm    <= C + P(wt Z >= d/2) k log q
//            + log2(C - P(wt Z < d/2) k log q + eta + 2) + eta + 3
// The bounded-noise case (tail = 0) is the same expressions with tail 0.
template <class S>
BoundReport theorem1_bounds(const TypeDistribution<S>& noise, const LinearCode& code) {
    BoundReport r;
    r.n = code.n();
    r.k = code.k();
    r.eta = eta_bits();
    r.capacity = capacity(noise);
    const int64_t d = code.distance();  // throws if not computable
    if (code.distance_is_infinite())
        r.tail = 0.0;
    else
        r.tail = to_double(tail_weight_probability(noise, Rational(d, 2)));
    const double klogq = r.k * std::log2(static_cast<double>(code.q()));
    const double kept = (1.0 - r.tail) * klogq;
    r.elogl_bound = r.capacity - kept + r.eta + 1.0;
    r.comm_bound =
        r.capacity + r.tail * klogq + std::log2(r.capacity - kept + r.eta + 2.0) + r.eta + 3.0;
    return r;
}

// Lemma: E[log L] <= D_KL(P||Q) - log theta + eta
inline double lemma2_bound(double dkl_bits, double theta) {
    if (theta <= 0.0 || theta > 1.0) throw std::invalid_argument("theta must be in (0,1]");
    if (dkl_bits < 0.0) throw std::invalid_argument("KL divergence must be nonnegative");
    return dkl_bits - std::log2(theta) + eta_bits();
}

inline double discrete_kl_bits(const std::vector<double>& target,
                               const std::vector<double>& proposal) {
    double d = 0.0;
    for (size_t i = 0; i < target.size(); ++i) {
        if (target[i] <= 0.0) continue;
        if (proposal[i] <= 0.0) throw std::invalid_argument("target not dominated by proposal");
        d += target[i] * std::log2(target[i] / proposal[i]);
    }
    return d;
}

struct GrsResult {
    uint32_t sample;
    uint64_t iterations;
};

// Reference greedy rejection sampler on small discrete alphabets: at each
// iteration the mass min{residual, proposal} is accepted, the rest carries
// over. Returns an exact-law sample and the accepting iteration index.
inline GrsResult grs_reference(const std::vector<double>& target,
                               const std::vector<double>& proposal, LocalRng& rng) {
    if (target.size() != proposal.size() || target.empty())
        throw std::invalid_argument("grs_reference: size mismatch");
    if (target.size() > 10000)
        throw std::invalid_argument("grs_reference: alphabet too large (max 10^4)");
    std::vector<double> residual = target;
    for (size_t i = 0; i < target.size(); ++i)
        if (target[i] > 0.0 && proposal[i] <= 0.0)
            throw std::invalid_argument("target not dominated by proposal");
    for (uint64_t iter = 1;; ++iter) {
        double accept_mass = 0.0;
        for (size_t i = 0; i < residual.size(); ++i)
            accept_mass += std::min(residual[i], proposal[i]);
        if (accept_mass <= 1e-300) throw std::runtime_error("grs_reference: vanishing acceptance");
        // draw X ~ proposal
        double u = draw_unit(rng);
        size_t x = proposal.size() - 1;
        double cum = 0.0;
        for (size_t i = 0; i < proposal.size(); ++i) {
            cum += proposal[i];
            if (u < cum) {
                x = i;
                break;
            }
        }
        // accept with probability min{residual/proposal, 1}
        if (proposal[x] > 0.0 && draw_unit(rng) < std::min(residual[x] / proposal[x], 1.0))
            return {static_cast<uint32_t>(x), iter};
        const double scale = 1.0 - accept_mass;
        if (scale <= 1e-300) throw std::runtime_error("grs_reference: degenerate rejection");
        for (size_t i = 0; i < residual.size(); ++i)
            residual[i] = std::max(residual[i] - std::min(residual[i], proposal[i]), 0.0) / scale;
    }
}

}  // namespace grsse
