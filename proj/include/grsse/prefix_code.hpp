// Bit-level IO, Elias gamma coding and deterministic Huffman codebooks for
// the iteration index L.
#pragma once

#include "grsse/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

namespace grsse {

struct MalformedMessage : std::runtime_error {
    explicit MalformedMessage(const std::string& what) : std::runtime_error(what) {}
};

// MSB-first bit buffer.
class BitWriter {
public:
    void push_bit(uint32_t bit) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (nbits_ % 8));
        ++nbits_;
    }
    void push_bits(uint64_t value, uint32_t count) {
        for (uint32_t i = count; i-- > 0;) push_bit((value >> i) & 1u);
    }
    void append(const BitWriter& o) {
        for (uint64_t i = 0; i < o.nbits_; ++i)
            push_bit((o.bytes_[i / 8] >> (7 - i % 8)) & 1u);
    }
    uint64_t bit_count() const { return nbits_; }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

    // zero-pad to a byte boundary and append a one-byte pad-length trailer
    std::vector<uint8_t> to_padded_file() const {
        std::vector<uint8_t> out = bytes_;
        const uint8_t pad = static_cast<uint8_t>((8 - nbits_ % 8) % 8);
        out.push_back(pad);
        return out;
    }

private:
    std::vector<uint8_t> bytes_;
    uint64_t nbits_ = 0;
};

class BitReader {
public:
    BitReader(const uint8_t* data, uint64_t nbits) : data_(data), nbits_(nbits) {}
    explicit BitReader(const BitWriter& w) : data_(w.bytes().data()), nbits_(w.bit_count()) {}

    // strips the pad-length trailer of to_padded_file()
    static BitReader from_padded_file(const std::vector<uint8_t>& file) {
        if (file.empty()) throw MalformedMessage("empty message file");
        const uint8_t pad = file.back();
        if (pad > 7) throw MalformedMessage("bad pad-length trailer");
        const uint64_t payload_bits = 8 * (file.size() - 1);
        if (payload_bits < pad) throw MalformedMessage("truncated message file");
        return BitReader(file.data(), payload_bits - pad);
    }

    uint32_t read_bit() {
        if (pos_ >= nbits_) throw MalformedMessage("bitstream exhausted");
        const uint32_t b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
        ++pos_;
        return b;
    }
    uint64_t read_bits(uint32_t count) {
        uint64_t v = 0;
        for (uint32_t i = 0; i < count; ++i) v = (v << 1) | read_bit();
        return v;
    }
    uint64_t remaining() const { return nbits_ - pos_; }

private:
    const uint8_t* data_;
    uint64_t nbits_;
    uint64_t pos_ = 0;
};

// Elias gamma: floor(log2 L) zeros, then L in binary. L >= 1.
inline void elias_gamma_encode(uint64_t value, BitWriter& out) {
    if (value == 0) throw std::invalid_argument("elias gamma undefined for 0");
    uint32_t width = 0;
    while ((value >> width) > 1) ++width;
    for (uint32_t i = 0; i < width; ++i) out.push_bit(0);
    out.push_bits(value, width + 1);
}

inline uint64_t elias_gamma_decode(BitReader& in) {
    uint32_t zeros = 0;
    while (in.read_bit() == 0) {
        if (++zeros > 63) throw MalformedMessage("elias gamma prefix too long");
    }
    uint64_t v = 1;
    for (uint32_t i = 0; i < zeros; ++i) v = (v << 1) | in.read_bit();
    return v;
}

inline uint32_t elias_gamma_length(uint64_t value) {
    uint32_t width = 0;
    while ((value >> width) > 1) ++width;
    return 2 * width + 1;
}

// Optimal prefix code lengths for a pmf (weights need not be normalized).
// Merging is deterministic: lowest weight first, ties broken by the smaller
// maximum original symbol index in the subtree. A single-symbol support gets
// code length 0 by convention. Zero-weight symbols get no code (UINT32_MAX).
template <class S>
std::vector<uint32_t> huffman_lengths(const std::vector<S>& pmf) {
    struct Node {
        S weight;
        uint64_t max_index;
        int32_t left, right;  // -1 for leaves
    };
    std::vector<Node> nodes;
    std::vector<uint32_t> heap;  // indices into nodes
    auto cmp = [&](uint32_t x, uint32_t y) {
        if (nodes[x].weight != nodes[y].weight) return nodes[x].weight > nodes[y].weight;
        return nodes[x].max_index > nodes[y].max_index;
    };
    std::vector<int32_t> leaf_node(pmf.size(), -1);
    for (size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] == scalar_traits<S>::zero()) continue;
        leaf_node[i] = static_cast<int32_t>(nodes.size());
        nodes.push_back({pmf[i], static_cast<uint64_t>(i), -1, -1});
        heap.push_back(static_cast<uint32_t>(nodes.size() - 1));
    }
    std::vector<uint32_t> lengths(pmf.size(), UINT32_MAX);
    if (nodes.empty()) throw std::invalid_argument("huffman: empty support");
    if (nodes.size() == 1) {
        for (size_t i = 0; i < pmf.size(); ++i)
            if (leaf_node[i] >= 0) lengths[i] = 0;
        return lengths;
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    while (heap.size() > 1) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        uint32_t x = heap.back();
        heap.pop_back();
        std::pop_heap(heap.begin(), heap.end(), cmp);
        uint32_t y = heap.back();
        heap.pop_back();
        nodes.push_back({nodes[x].weight + nodes[y].weight,
                         std::max(nodes[x].max_index, nodes[y].max_index),
                         static_cast<int32_t>(x), static_cast<int32_t>(y)});
        heap.push_back(static_cast<uint32_t>(nodes.size() - 1));
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    // depth-first depth assignment
    std::vector<std::pair<int32_t, uint32_t>> stack{{static_cast<int32_t>(heap[0]), 0}};
    std::vector<uint32_t> depth(nodes.size(), 0);
    while (!stack.empty()) {
        auto [idx, d] = stack.back();
        stack.pop_back();
        depth[idx] = d;
        if (nodes[idx].left >= 0) {
            stack.push_back({nodes[idx].left, d + 1});
            stack.push_back({nodes[idx].right, d + 1});
        }
    }
    for (size_t i = 0; i < pmf.size(); ++i)
        if (leaf_node[i] >= 0) lengths[i] = depth[leaf_node[i]];
    return lengths;
}

// Canonical prefix code over symbols 0..lengths.size()-1; symbols with
// UINT32_MAX length are absent. Deterministic given the lengths.
class CanonicalCode {
public:
    explicit CanonicalCode(std::vector<uint32_t> lengths) : lengths_(std::move(lengths)) {
        std::vector<uint32_t> order;
        for (uint32_t s = 0; s < lengths_.size(); ++s)
            if (lengths_[s] != UINT32_MAX) order.push_back(s);
        if (order.empty()) throw std::invalid_argument("canonical code: empty support");
        std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
            if (lengths_[x] != lengths_[y]) return lengths_[x] < lengths_[y];
            return x < y;
        });
        singleton_ = order.size() == 1;
        if (singleton_) {
            singleton_symbol_ = order[0];
            return;
        }
        codes_.assign(lengths_.size(), 0);
        uint64_t code = 0;
        uint32_t prev_len = lengths_[order[0]];
        for (size_t i = 0; i < order.size(); ++i) {
            const uint32_t s = order[i];
            code <<= (lengths_[s] - prev_len);
            codes_[s] = code;
            if (lengths_[s] != prev_len || i == 0)
                groups_.push_back({lengths_[s], code, static_cast<uint32_t>(i), 0});
            ++groups_.back().count;
            prev_len = lengths_[s];
            ++code;
        }
        sorted_ = std::move(order);
    }

    bool singleton() const { return singleton_; }
    uint32_t length(uint32_t symbol) const { return lengths_[symbol]; }

    void encode(uint32_t symbol, BitWriter& out) const {
        if (singleton_) {
            if (symbol != singleton_symbol_) throw std::invalid_argument("symbol outside codebook");
            return;  // zero-length code
        }
        if (symbol >= lengths_.size() || lengths_[symbol] == UINT32_MAX)
            throw std::invalid_argument("symbol outside codebook");
        out.push_bits(codes_[symbol], lengths_[symbol]);
    }

    uint32_t decode(BitReader& in) const {
        if (singleton_) return singleton_symbol_;
        uint64_t code = 0;
        uint32_t len = 0;
        for (const Group& g : groups_) {
            while (len < g.length) {
                code = (code << 1) | in.read_bit();
                ++len;
            }
            if (code >= g.first_code && code - g.first_code < g.count)
                return sorted_[g.start + (code - g.first_code)];
        }
        throw MalformedMessage("invalid prefix codeword");
    }

private:
    struct Group {
        uint32_t length;
        uint64_t first_code;
        uint32_t start;  // index into sorted_
        uint32_t count;
    };
    std::vector<uint32_t> lengths_;
    std::vector<uint64_t> codes_;
    std::vector<uint32_t> sorted_;
    std::vector<Group> groups_;
    bool singleton_ = false;
    uint32_t singleton_symbol_ = 0;
};

}  // namespace grsse
