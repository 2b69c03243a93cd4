// Runtime encoder/decoder (the rejection-sampled syndrome scheme): replayable
// common randomness, per-iteration permutation and offset, acceptance
// sampling from the plan, message extraction in standard-form coordinates,
// and the prefix-free bitstream.
#pragma once

#include "grsse/planner.hpp"
#include "grsse/prefix_code.hpp"
#include "grsse/rng_util.hpp"
#include "grsse/sync_rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace grsse {

inline uint32_t symbol_bits(uint32_t q) {
    uint32_t b = 0;
    while ((uint64_t(1) << b) < q) ++b;
    return b;
}

struct SimulationResult {
    FieldVector y_hat;
    uint64_t L;
    BitWriter message;
    uint32_t distortion;  // wt(y_hat - x)
};

// Draws an accepted type (or rejection) for the observed syndrome's type set:
// type p with probability gamma[ts][p] / p_t(ts), using local randomness.
// Terminal iterations never reject.
template <class S>
std::optional<uint32_t> sample_accept(const IterationPlan<S>& iter, uint32_t ts,
                                      const TypeSetTable& table, LocalRng& rng) {
    const double p_ts = scalar_traits<double>::from_ratio(table.syndrome_count[ts],
                                                          int_pow(table.space->q(), table.denom_exp));
    const auto& row = iter.gamma[ts];
    if (row.empty()) return std::nullopt;
    const double u = draw_unit(rng);
    if (iter.terminal) {
        // the row is saturated; renormalize so float dust cannot reject
        double row_sum = 0.0;
        for (const auto& [p, mass] : row) row_sum += to_double(mass);
        double cum = 0.0;
        for (const auto& [p, mass] : row) {
            cum += to_double(mass) / row_sum;
            if (u < cum) return p;
        }
        return row.back().first;
    }
    double cum = 0.0;
    for (const auto& [p, mass] : row) {
        cum += to_double(mass) / p_ts;
        if (u < cum) return p;
    }
    return std::nullopt;
}

// Uniform draw from {z : z H^T = s, type(z) = p} (delegates to the code).
inline FieldVector sample_vector_in_coset(const FieldVector& s, uint32_t type_id,
                                          const LinearCode& code, LocalRng& rng) {
    return code.sample_in_coset(s, type_id, rng);
}

template <class S>
class Codec {
public:
    Codec(PlannerPtr<S> plan, LengthCoder coder) : plan_(std::move(plan)), coder_(coder) {
        if (coder_ == LengthCoder::huffman) {
            // Huffman needs the full p_L, so the plan materializes through its
            // terminal iteration here; Elias gamma keeps planning lazy.
            plan_->ensure_terminal();
            code_of_L_.emplace(huffman_lengths(plan_->p_L()));
        }
    }

    const GrssePlanner<S>& plan() const { return *plan_; }
    LengthCoder coder() const { return coder_; }

    SimulationResult encode(const FieldVector& x, SyncRng& common, LocalRng& local) {
        const uint32_t q = plan_->channel().q, n = plan_->channel().n;
        if (x.size() != n || x.modulus() != q)
            throw std::invalid_argument("encode: input does not match the plan");
        for (uint64_t i = 1;; ++i) {
            const IterationPlan<S>& iter = plan_->iteration(i);
            CodePtr code = plan_->code_at(i);
            const uint32_t k = code->k();
            CommonDraw draw = draw_common_randomness(common, q, n, n - k);
            const FieldVector xp = draw.perm.apply(x);
            // s = B - X Pi H^T
            std::vector<uint8_t> s(n - k);
            if (k < n) {
                const FieldVector syn = code->syndrome(xp);
                for (uint32_t r = 0; r < n - k; ++r)
                    s[r] = static_cast<uint8_t>((draw.offset[r] + q - syn[r]) % q);
            }
            const uint32_t ts = code->typeset_of(s);
            const auto accepted = sample_accept(iter, ts, code->typesets(), local);
            if (!accepted) continue;

            const FieldVector v = code->sample_in_coset(s, *accepted, local);
            FieldVector y_perm = xp + v;  // = Y Pi
            FieldVector y = draw.perm.inverse().apply(y_perm);

            BitWriter msg;
            encode_length(i, msg);
            const uint32_t bits = symbol_bits(q);
            for (uint32_t j = 0; j < k; ++j) msg.push_bits(y_perm[j], bits);

            FieldVector z = y - x;
            return SimulationResult{std::move(y), i, std::move(msg),
                                    static_cast<uint32_t>(z.weight())};
        }
    }

    FieldVector decode(BitReader& in, SyncRng& common) {
        const uint32_t q = plan_->channel().q, n = plan_->channel().n;
        const uint64_t L = decode_length(in);
        // replay the common-randomness schedule for iterations 1..L
        CodePtr code;
        std::optional<CommonDraw> last;
        for (uint64_t i = 1; i <= L; ++i) {
            try {
                code = plan_->code_at(i);
            } catch (const std::logic_error&) {
                throw MalformedMessage("iteration index beyond the plan");
            }
            last = draw_common_randomness(common, q, n, n - code->k());
        }
        const uint32_t k = code->k();
        const uint32_t bits = symbol_bits(q);
        FieldVector y_perm(q, n);
        for (uint32_t j = 0; j < k; ++j) {
            const uint64_t sym = in.read_bits(bits);
            if (sym >= q) throw MalformedMessage("payload symbol out of field range");
            y_perm.set(j, static_cast<uint32_t>(sym));
        }
        // Y Pi = [M | B - M H~^T]
        const auto& rows = code->check_matrix().rows();
        for (uint32_t r = 0; r < n - k; ++r) {
            uint32_t acc = 0;
            for (uint32_t j = 0; j < k; ++j) acc += rows[r][j] * y_perm[j];
            y_perm.set(k + r, (last->offset[r] + q - acc % q) % q);
        }
        return last->perm.inverse().apply(y_perm);
    }

private:
    void encode_length(uint64_t L, BitWriter& out) const {
        if (coder_ == LengthCoder::elias_gamma) {
            elias_gamma_encode(L, out);
        } else {
            code_of_L_->encode(static_cast<uint32_t>(L - 1), out);
        }
    }
    uint64_t decode_length(BitReader& in) const {
        if (coder_ == LengthCoder::elias_gamma) return elias_gamma_decode(in);
        return static_cast<uint64_t>(code_of_L_->decode(in)) + 1;
    }

    PlannerPtr<S> plan_;
    LengthCoder coder_;
    std::optional<CanonicalCode> code_of_L_;
};

// --- block file formats ------------------------------------------------------
// Data files hold consecutive n-symbol blocks, each symbol ceil(log2 q) bits,
// MSB-first; the total bit count must divide into whole blocks. Message files
// are the concatenated per-block bitstreams, zero-padded to a byte boundary,
// with a one-byte pad-length trailer.

inline std::vector<FieldVector> unpack_blocks(const std::vector<uint8_t>& data, uint32_t q,
                                              uint32_t n) {
    const uint32_t bits = symbol_bits(q);
    const uint64_t total_bits = 8ull * data.size();
    const uint64_t block_bits = uint64_t(bits) * n;
    if (total_bits % block_bits != 0)
        throw std::invalid_argument("input does not divide into whole n-symbol blocks");
    BitReader reader(data.data(), total_bits);
    std::vector<FieldVector> blocks;
    blocks.reserve(total_bits / block_bits);
    for (uint64_t b = 0; b < total_bits / block_bits; ++b) {
        FieldVector v(q, n);
        for (uint32_t i = 0; i < n; ++i) {
            const uint64_t sym = reader.read_bits(bits);
            if (sym >= q) throw std::invalid_argument("input symbol out of field range");
            v.set(i, static_cast<uint32_t>(sym));
        }
        blocks.push_back(std::move(v));
    }
    return blocks;
}

inline std::vector<uint8_t> pack_blocks(const std::vector<FieldVector>& blocks) {
    BitWriter w;
    for (const auto& v : blocks) {
        const uint32_t bits = symbol_bits(v.modulus());
        for (size_t i = 0; i < v.size(); ++i) w.push_bits(v[i], bits);
    }
    if (w.bit_count() % 8 != 0)
        throw std::logic_error("packed blocks should be byte-aligned per file");
    return w.bytes();
}

// Encodes a whole data buffer; one SyncRng stream runs across blocks.
template <class S>
std::vector<uint8_t> encode_data(Codec<S>& codec, const std::vector<uint8_t>& data, uint64_t seed) {
    const auto& ch = codec.plan().channel();
    auto blocks = unpack_blocks(data, ch.q, ch.n);
    SyncRng common(seed);
    LocalRng local(seed ^ 0x5DEECE66Dull);
    BitWriter all;
    for (const auto& x : blocks) {
        auto res = codec.encode(x, common, local);
        all.append(res.message);
    }
    return all.to_padded_file();
}

template <class S>
std::vector<uint8_t> decode_data(Codec<S>& codec, const std::vector<uint8_t>& message,
                                 uint64_t seed) {
    BitReader in = BitReader::from_padded_file(message);
    SyncRng common(seed);
    std::vector<FieldVector> blocks;
    while (in.remaining() > 0) blocks.push_back(codec.decode(in, common));
    return pack_blocks(blocks);
}

}  // namespace grsse
