// Per-iteration greedy acceptance planning (max flow over type sets / types),
// residual updates, p_L bookkeeping, and the mixed-schedule code selection
// rule. Plans materialize lazily and are safe to read while being extended.
#pragma once

#include "grsse/channels.hpp"
#include "grsse/codes.hpp"
#include "grsse/maxflow.hpp"
#include "grsse/prefix_code.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>

namespace grsse {

template <class S>
struct IterationPlan {
    uint32_t code_index;       // position in the schedule; kCompleteFallback for the cap iteration
    std::vector<S> residual;   // p_P^(i), the distribution this iteration faces
    // gamma[t] lists (type id, mass) pairs for type set t of the code's table
    std::vector<std::vector<std::pair<uint32_t, S>>> gamma;
    S accept_prob;             // F_i = sum of all gamma masses
    bool terminal = false;

    static constexpr uint32_t kCompleteFallback = UINT32_MAX;
};

struct CodeSchedule {
    std::vector<CodePtr> codes;  // effective distances strictly decreasing
    Rational epsilon = Rational(1, 1000000000);
    uint32_t cap = 20000;

    CodeSchedule(std::vector<CodePtr> cs, Rational eps, uint32_t iteration_cap)
        : codes(std::move(cs)), epsilon(std::move(eps)), cap(iteration_cap) {
        if (codes.empty()) throw std::invalid_argument("schedule needs at least one code");
        if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
        if (cap < 1) throw std::invalid_argument("cap must be >= 1");
        for (size_t j = 0; j + 1 < codes.size(); ++j) {
            const bool inf_a = codes[j]->effective_distance_is_infinite();
            const bool inf_b = codes[j + 1]->effective_distance_is_infinite();
            const bool decreasing =
                inf_b ? false
                      : (inf_a || codes[j]->effective_distance() > codes[j + 1]->effective_distance());
            if (!decreasing)
                throw std::invalid_argument("schedule effective distances must strictly decrease");
        }
        for (const auto& c : codes)
            if (c->q() != codes[0]->q() || c->n() != codes[0]->n())
                throw std::invalid_argument("schedule codes must share (q, n)");
    }
};

// One max-flow step of the precomputation: sources are the code's type sets
// (capacity p_t), sinks are types (capacity = residual mass), edges restricted
// to membership.
template <class S>
IterationPlan<S> plan_iteration(const std::vector<S>& residual, const TypeSetTable& table) {
    std::vector<S> source_cap = table.template probs<S>();
    std::vector<std::vector<uint32_t>> edges(table.sets.size());
    for (size_t t = 0; t < table.sets.size(); ++t)
        for (uint32_t p : table.sets[t])
            if (residual[p] > scalar_traits<S>::zero()) edges[t].push_back(p);
    auto res = max_transport<S>(source_cap, residual, edges);

    IterationPlan<S> plan;
    plan.code_index = 0;
    plan.residual = residual;
    plan.gamma.resize(table.sets.size());
    for (size_t t = 0; t < table.sets.size(); ++t)
        for (size_t e = 0; e < edges[t].size(); ++e)
            if (res.flow[t][e] > scalar_traits<S>::zero())
                plan.gamma[t].emplace_back(edges[t][e], res.flow[t][e]);
    plan.accept_prob = res.total;
    plan.terminal = scalar_traits<S>::is_terminal(res.total);
    return plan;
}

// Acceptance lower bound from the beta-mixture proposal: given the syndrome,
// emit the coset leader with probability beta, else a uniform coset element.
// Aggregated over types:
//   sum_p min{ residual(p), beta L_p q^-(n-k) + (1-beta) N_p q^-n }
// where L_p counts cosets whose leader has type p.
template <class S>
S beta_mixture_bound(const TypeDistribution<S>& residual, const LinearCode& code,
                     const Rational& beta) {
    if (beta < 0 || beta > 1) throw std::invalid_argument("beta must be in [0,1]");
    const TypeSetTable& table = code.typesets();
    if (!table.has_leader_count)
        throw std::runtime_error("beta_mixture_bound: leader census unavailable for this code");
    const auto& space = *residual.space;
    if (space.q() != code.q() || space.n() != code.n())
        throw std::invalid_argument("beta_mixture_bound: dimension mismatch");
    const BigInt qn = int_pow(code.q(), code.n());
    const BigInt qnk = int_pow(code.q(), code.n() - code.k());
    S bound = scalar_traits<S>::zero();
    for (uint32_t p = 0; p < space.count(); ++p) {
        const Rational proposal = beta * Rational(table.leader_count[p], qnk) +
                                  (1 - beta) * Rational(space.class_size(p), qn);
        const S prop = scalar_traits<S>::from_rational(proposal);
        bound = bound + std::min(residual.mass[p], prop);
    }
    return bound;
}

// Algorithm-2 engine. Iterations are materialized on demand; a completed
// prefix is immutable and readable without locking.
template <class S>
class GrssePlanner {
public:
    GrssePlanner(NoiseModel channel, CodeSchedule schedule)
        : channel_(std::move(channel)),
          schedule_(std::move(schedule)),
          complete_(LinearCode::complete(channel_.q, channel_.n)) {
        if (schedule_.codes[0]->q() != channel_.q || schedule_.codes[0]->n() != channel_.n)
            throw std::invalid_argument("schedule codes do not match the channel");
        if constexpr (scalar_traits<S>::exact) {
            if (schedule_.cap > 512)
                throw std::invalid_argument(
                    "rational backend requires cap <= 512 (denominator growth guard)");
        }
        current_residual_ = type_distribution<S>(channel_).mass;
        survival_ = scalar_traits<S>::one();
        // warm the type-set tables so concurrent readers never build them
        for (const auto& c : schedule_.codes) c->typesets();
        complete_->typesets();
    }

    // Rebuild from serialized iterations (already terminal-capped).
    GrssePlanner(NoiseModel channel, CodeSchedule schedule,
                 std::deque<IterationPlan<S>> iterations, std::vector<S> p_l)
        : channel_(std::move(channel)),
          schedule_(std::move(schedule)),
          complete_(LinearCode::complete(channel_.q, channel_.n)),
          iters_(std::move(iterations)),
          p_l_(std::move(p_l)) {
        if (iters_.empty() || !iters_.back().terminal)
            throw std::invalid_argument("preloaded plans must end in a terminal iteration");
        for (const auto& c : schedule_.codes) c->typesets();
        complete_->typesets();
        ready_.store(iters_.size());
        terminal_ = true;
    }

    const NoiseModel& channel() const { return channel_; }
    const CodeSchedule& schedule() const { return schedule_; }

    // 1-based iteration access; extends the plan as needed. The returned
    // reference stays valid while the planner lives (deque stability).
    const IterationPlan<S>& iteration(size_t i) {
        if (i == 0) throw std::invalid_argument("iterations are 1-based");
        while (ready_.load(std::memory_order_acquire) < i) {
            std::lock_guard<std::mutex> lock(mu_);
            if (ready_.load(std::memory_order_relaxed) >= i) break;
            if (terminal_) throw std::logic_error("plan exhausted beyond its terminal iteration");
            extend_one_locked();
        }
        std::lock_guard<std::mutex> lock(mu_);
        return iters_[i - 1];
    }

    CodePtr code_at(size_t i) {
        const auto& it = iteration(i);
        return it.code_index == IterationPlan<S>::kCompleteFallback ? complete_
                                                                    : schedule_.codes[it.code_index];
    }
    CodePtr complete_code() const { return complete_; }

    size_t materialized() const { return ready_.load(std::memory_order_acquire); }
    bool terminal_reached() const {
        std::lock_guard<std::mutex> lock(mu_);
        return terminal_;
    }

    // materializes through the terminal iteration (the cap guarantees one)
    size_t ensure_terminal() {
        while (true) {
            {
                std::lock_guard<std::mutex> lock(mu_);
                if (terminal_) return iters_.size();
                extend_one_locked();
            }
        }
    }

    const std::vector<S>& p_L() {
        ensure_terminal();
        return p_l_;
    }

    double expected_log2_L() {
        ensure_terminal();
        double e = 0.0, total = 0.0;
        for (size_t i = 0; i < p_l_.size(); ++i) {
            const double p = to_double(p_l_[i]);
            e += p * std::log2(static_cast<double>(i + 1));
            total += p;
        }
        return total > 0 ? e / total : 0.0;
    }

    double expected_payload_symbols() {
        ensure_terminal();
        double e = 0.0;
        for (size_t i = 0; i < p_l_.size(); ++i)
            e += to_double(p_l_[i]) * static_cast<double>(code_at(i + 1)->k());
        return e;
    }

    // j_i rule: the lowest-distance schedule code whose half effective
    // distance still dominates the residual tail at level epsilon.
    uint32_t select_code_index(const std::vector<S>& residual) const {
        const S eps = scalar_traits<S>::from_rational(schedule_.epsilon);
        for (size_t j = schedule_.codes.size(); j-- > 0;) {
            const auto& code = *schedule_.codes[j];
            S tail = scalar_traits<S>::zero();
            if (!code.effective_distance_is_infinite()) {
                const Rational half = code.effective_distance() / 2;
                for (uint32_t p = 0; p < residual.size(); ++p)
                    if (Rational(universe().weight(p)) >= half) tail = tail + residual[p];
            }
            if (tail <= eps) return static_cast<uint32_t>(j);
        }
        return 0;  // no code qualifies: fall back to the largest distance
    }

    const TypeUniverse& universe() const { return *complete_->typesets().space; }

private:
    void extend_one_locked() {
        const size_t i = iters_.size() + 1;
        const bool forced_complete = i >= schedule_.cap;
        const uint32_t idx =
            forced_complete ? IterationPlan<S>::kCompleteFallback : select_code_index(current_residual_);
        const LinearCode& code =
            forced_complete ? *complete_ : *schedule_.codes[idx];
        IterationPlan<S> plan = plan_iteration<S>(current_residual_, code.typesets());
        plan.code_index = idx;
        if (forced_complete && !plan.terminal)
            throw std::logic_error("complete-code iteration failed to terminate the plan");
        p_l_.push_back(survival_ * plan.accept_prob);
        if (!plan.terminal) {
            std::vector<S> next = current_residual_;
            const S one = scalar_traits<S>::one();
            S scale = one - plan.accept_prob;
            for (size_t t = 0; t < plan.gamma.size(); ++t)
                for (const auto& [p, mass] : plan.gamma[t]) next[p] = next[p] - mass;
            for (auto& m : next) m = m / scale;
            if constexpr (!scalar_traits<S>::exact) {
                double total = 0.0;
                for (auto& m : next) {
                    if (m < 0.0) m = 0.0;
                    total += m;
                }
                if (total > 0.0)
                    for (auto& m : next) m = m / total;
            }
            current_residual_ = std::move(next);
            survival_ = survival_ * scale;
        } else {
            terminal_ = true;
        }
        iters_.push_back(std::move(plan));
        ready_.store(iters_.size(), std::memory_order_release);
    }

    NoiseModel channel_;
    CodeSchedule schedule_;
    CodePtr complete_;
    mutable std::mutex mu_;
    std::deque<IterationPlan<S>> iters_;
    std::vector<S> p_l_;
    std::vector<S> current_residual_;
    S survival_ = scalar_traits<S>::one();
    bool terminal_ = false;
    std::atomic<size_t> ready_{0};
};

template <class S>
using PlannerPtr = std::shared_ptr<GrssePlanner<S>>;

template <class S>
PlannerPtr<S> plan_grsse(const NoiseModel& channel, const CodeSchedule& schedule) {
    auto p = std::make_shared<GrssePlanner<S>>(channel, schedule);
    p->ensure_terminal();
    return p;
}

enum class LengthCoder { huffman, elias_gamma };

inline const char* coder_name(LengthCoder c) {
    return c == LengthCoder::huffman ? "huffman" : "elias-gamma";
}

// Expected bits per source symbol: (E|code(L)| + E[k_L] log2 q) / n.
template <class S>
double expected_rate(GrssePlanner<S>& plan, LengthCoder coder) {
    plan.ensure_terminal();
    const auto& pl = plan.p_L();
    double header = 0.0;
    if (coder == LengthCoder::huffman) {
        const auto lengths = huffman_lengths(pl);
        for (size_t i = 0; i < pl.size(); ++i)
            if (lengths[i] != UINT32_MAX) header += to_double(pl[i]) * lengths[i];
    } else {
        for (size_t i = 0; i < pl.size(); ++i)
            header += to_double(pl[i]) * elias_gamma_length(i + 1);
    }
    const double payload_bits =
        plan.expected_payload_symbols() * std::log2(static_cast<double>(plan.channel().q));
    return (header + payload_bits) / plan.channel().n;
}

}  // namespace grsse
