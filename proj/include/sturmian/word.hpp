#pragma once

// Two-letter words stored one bit per letter. Letter 0 is the alphabet's symA,
// letter 1 its symB. A Word is an immutable view (offset, length) into a shared
// buffer, so slicing is O(1) and copies are cheap.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sturmian/exactnum.hpp"

namespace sturm {

struct Alphabet {
    int sym_a = 0;
    int sym_b = 1;
    int base = 2;

    void validate() const;
    int digit(int letter) const { return letter ? sym_b : sym_a; }
    /// (symB - symA)(b - 1), the constant c of the approximant residuals.
    long c() const { return static_cast<long>(sym_b - sym_a) * (base - 1); }
};

class Word {
  public:
    Word() = default;

    /// Accepts 'a'/'b' or '0'/'1'.
    static Word from_letters(std::string_view text);
    static Word repeated(int letter, std::size_t n);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    /// 0-based access.
    int operator[](std::size_t i) const {
        std::size_t p = offset_ + i;
        return static_cast<int>(((*bits_)[p >> 6] >> (p & 63)) & 1U);
    }
    /// 1-based access, matching the usual x_1 x_2 ... indexing.
    int letter(std::size_t n) const { return (*this)[n - 1]; }

    Word slice(std::size_t pos, std::size_t count) const;
    Word prefix(std::size_t n) const { return slice(0, n); }
    Word suffix(std::size_t n) const { return slice(size_ - n, n); }
    Word drop_last(std::size_t n) const { return slice(0, size_ - n); }

    /// Up to 64 letters starting at pos; bit j holds letter pos + j, bits past the end are 0.
    std::uint64_t chunk(std::size_t pos) const;

    /// this[pos, pos+count) == other[opos, opos+count)
    bool equal_range(std::size_t pos, const Word& other, std::size_t opos, std::size_t count) const;
    /// Length of the longest common prefix.
    std::size_t common_prefix(const Word& other) const;
    bool starts_with(const Word& w) const { return w.size_ <= size_ && equal_range(0, w, 0, w.size_); }
    bool ends_with(const Word& w) const {
        return w.size_ <= size_ && equal_range(size_ - w.size_, w, 0, w.size_);
    }

    std::size_t count_b() const;

    Word operator+(const Word& other) const;
    friend bool operator==(const Word& x, const Word& y) {
        return x.size_ == y.size_ && x.equal_range(0, y, 0, x.size_);
    }

    std::string to_letters() const;
    /// Digit string, e.g. "10110101"; needs every digit < 10.
    std::string to_digits(const Alphabet& alphabet) const;
    std::vector<int> digits(const Alphabet& alphabet) const;

  private:
    friend class WordBuilder;
    Word(std::shared_ptr<const std::vector<std::uint64_t>> bits, std::size_t offset, std::size_t size)
        : bits_(std::move(bits)), offset_(offset), size_(size) {}

    std::shared_ptr<const std::vector<std::uint64_t>> bits_ = std::make_shared<const std::vector<std::uint64_t>>(1, 0);
    std::size_t offset_ = 0;
    std::size_t size_ = 0;
};

class WordBuilder {
  public:
    void reserve(std::size_t letters) { data_.reserve(letters / 64 + 2); }
    void push(int letter) { append_bits(letter ? 1U : 0U, 1); }
    void append(const Word& w);
    void append(const Word& w, std::size_t times);
    /// Appends the low n bits of v (n <= 64).
    void append_bits(std::uint64_t v, unsigned n);
    std::size_t size() const { return size_; }
    Word build() const;

  private:
    std::vector<std::uint64_t> data_;
    std::size_t size_ = 0;
};

/// Integer whose base-b expansion is the word's digit string (first letter most significant).
Integer digits_to_integer(const Word& w, const Alphabet& alphabet);

}  // namespace sturm
