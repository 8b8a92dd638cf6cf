#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace fraccol {

// Fixed-capacity dynamic bitset over 64-bit words. Sized once at
// construction; all binary operations require equal capacity.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    int capacity() const { return nbits_; }

    bool test(int i) const {
        assert(i >= 0 && i < nbits_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(int i) {
        assert(i >= 0 && i < nbits_);
        words_[i >> 6] |= uint64_t{1} << (i & 63);
    }
    void reset(int i) {
        assert(i >= 0 && i < nbits_);
        words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
    }
    void set_all() {
        for (auto& w : words_) w = ~uint64_t{0};
        trim();
    }
    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    void and_not(const Bitset& other) {  // *this &= ~other
        assert(nbits_ == other.nbits_);
        for (size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
    }
    void and_with(const Bitset& other) {
        assert(nbits_ == other.nbits_);
        for (size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    }
    void or_with(const Bitset& other) {
        assert(nbits_ == other.nbits_);
        for (size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    }

    bool intersects(const Bitset& other) const {
        assert(nbits_ == other.nbits_);
        for (size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & other.words_[k]) return true;
        return false;
    }

    // Index of the i-th set bit (0-based); -1 if fewer than i+1 bits set.
    int nth_set(int i) const {
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t w = words_[k];
            int c = __builtin_popcountll(w);
            if (i >= c) { i -= c; continue; }
            while (i-- > 0) w &= w - 1;
            return int(k) * 64 + __builtin_ctzll(w);
        }
        return -1;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t w = words_[k];
            while (w) {
                fn(int(k) * 64 + __builtin_ctzll(w));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    bool operator==(const Bitset& other) const {
        return nbits_ == other.nbits_ && words_ == other.words_;
    }

private:
    void trim() {
        int rem = nbits_ & 63;
        if (rem && !words_.empty()) words_.back() &= (uint64_t{1} << rem) - 1;
    }

    int nbits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace fraccol
