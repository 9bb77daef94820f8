// Copyright 2026 The PFSR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <functional>
#include <memory>
#include <span>
#include <string>

namespace pfsr {

/// Fixed-length packed bit vector. Bit `i` lives in word `i / 64`, position `i % 64`.
///
/// Used for symplectic rows of Pauli strings and for basis labels. Vectors up to 128
/// bits are stored inline.
class Bits {
   public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    Bits() = default;
    explicit Bits(std::size_t num_bits)
        : num_bits_(static_cast<std::uint32_t>(num_bits)), num_words_(static_cast<std::uint32_t>(num_words_for(num_bits))) {
        if (num_words_ > kInline) {
            heap_ = std::make_unique<Word[]>(num_words_);
        }
    }
    Bits(const Bits &other) : num_bits_(other.num_bits_), num_words_(other.num_words_) {
        if (other.heap_) {
            heap_ = std::make_unique<Word[]>(num_words_);
            std::copy_n(other.heap_.get(), num_words_, heap_.get());
        } else {
            inline_[0] = other.inline_[0];
            inline_[1] = other.inline_[1];
        }
    }
    Bits(Bits &&other) noexcept = default;
    Bits &operator=(const Bits &other) {
        if (this != &other) {
            Bits copy(other);
            *this = std::move(copy);
        }
        return *this;
    }
    Bits &operator=(Bits &&other) noexcept = default;

    static std::size_t num_words_for(std::size_t num_bits) { return (num_bits + kWordBits - 1) / kWordBits; }

    /// Parses a string of '0'/'1' characters, bit 0 first.
    static Bits from_string(std::string_view text);

    std::size_t size() const { return num_bits_; }
    std::size_t num_words() const { return num_words_; }

    bool operator[](std::size_t i) const { return (data()[i / kWordBits] >> (i % kWordBits)) & 1; }
    void set(std::size_t i, bool value) {
        Word mask = Word{1} << (i % kWordBits);
        if (value) {
            data()[i / kWordBits] |= mask;
        } else {
            data()[i / kWordBits] &= ~mask;
        }
    }
    void flip(std::size_t i) { data()[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    void clear() { std::fill_n(data(), num_words_, Word{0}); }

    Bits &operator^=(const Bits &other) {
        Word *w = data();
        const Word *o = other.data();
        for (std::size_t k = 0; k < num_words_; k++) {
            w[k] ^= o[k];
        }
        return *this;
    }
    friend Bits operator^(Bits a, const Bits &b) {
        a ^= b;
        return a;
    }

    bool any() const {
        for (auto w : words()) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    std::size_t popcount() const {
        std::size_t total = 0;
        for (auto w : words()) {
            total += std::popcount(w);
        }
        return total;
    }
    /// Parity of the bitwise AND with `other`.
    bool dot(const Bits &other) const {
        Word acc = 0;
        const Word *w = data();
        const Word *o = other.data();
        for (std::size_t k = 0; k < num_words_; k++) {
            acc ^= w[k] & o[k];
        }
        return std::popcount(acc) & 1;
    }

    std::span<Word> words() { return {data(), num_words_}; }
    std::span<const Word> words() const { return {data(), num_words_}; }

    std::string to_string() const;

    friend bool operator==(const Bits &a, const Bits &b) {
        return a.num_bits_ == b.num_bits_ && std::equal(a.data(), a.data() + a.num_words_, b.data());
    }

    /// Lexicographic order on the bit string read from bit 0 upward.
    friend bool operator<(const Bits &a, const Bits &b) {
        const Word *aw = a.data();
        const Word *bw = b.data();
        for (std::size_t k = 0; k < a.num_words_; k++) {
            Word diff = aw[k] ^ bw[k];
            if (diff) {
                Word lowest = diff & (~diff + 1);
                return (aw[k] & lowest) == 0;
            }
        }
        return false;
    }

    std::size_t hash() const {
        std::size_t h = 0x9E3779B97F4A7C15ull ^ num_bits_;
        for (auto w : words()) {
            h ^= std::hash<Word>{}(w) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

   private:
    static constexpr std::size_t kInline = 2;
    Word *data() { return heap_ ? heap_.get() : inline_; }
    const Word *data() const { return heap_ ? heap_.get() : inline_; }

    std::uint32_t num_bits_ = 0;
    std::uint32_t num_words_ = 0;
    Word inline_[kInline] = {0, 0};
    std::unique_ptr<Word[]> heap_;
};

struct BitsHash {
    std::size_t operator()(const Bits &b) const { return b.hash(); }
};

}  // namespace pfsr
