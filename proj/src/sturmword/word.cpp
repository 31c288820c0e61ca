#include "sturmian/word.hpp"

#include <bit>

namespace sturm {

void Alphabet::validate() const {
    if (base < 2) throw DomainError("base must be at least 2");
    if (sym_a == sym_b) throw DomainError("alphabet letters must be distinct");
    if (sym_a < 0 || sym_b < 0 || sym_a >= base || sym_b >= base) {
        throw DomainError("alphabet letters must be digits in [0, base)");
    }
}

Word Word::from_letters(std::string_view text) {
    WordBuilder b;
    b.reserve(text.size());
    for (char c : text) {
        if (c == 'a' || c == '0') {
            b.push(0);
        } else if (c == 'b' || c == '1') {
            b.push(1);
        } else {
            throw ParseError("word letters must be a/b or 0/1");
        }
    }
    return b.build();
}

Word Word::repeated(int letter, std::size_t n) {
    WordBuilder b;
    b.reserve(n);
    std::uint64_t fill = letter ? ~std::uint64_t{0} : 0;
    for (; n >= 64; n -= 64) b.append_bits(fill, 64);
    if (n) b.append_bits(fill, static_cast<unsigned>(n));
    return b.build();
}

Word Word::slice(std::size_t pos, std::size_t count) const {
    if (pos > size_ || count > size_ - pos) throw DomainError("word slice out of range");
    return Word(bits_, offset_ + pos, count);
}

std::uint64_t Word::chunk(std::size_t pos) const {
    if (pos >= size_) return 0;
    std::size_t p = offset_ + pos;
    std::size_t w = p >> 6;
    unsigned s = p & 63;
    const auto& v = *bits_;
    std::uint64_t out = v[w] >> s;
    if (s != 0 && w + 1 < v.size()) out |= v[w + 1] << (64 - s);
    std::size_t left = size_ - pos;
    if (left < 64) out &= (std::uint64_t{1} << left) - 1;
    return out;
}

bool Word::equal_range(std::size_t pos, const Word& other, std::size_t opos, std::size_t count) const {
    if (pos + count > size_ || opos + count > other.size_) return false;
    std::size_t i = 0;
    for (; i + 64 <= count; i += 64) {
        if (chunk(pos + i) != other.chunk(opos + i)) return false;
    }
    if (i < count) {
        std::uint64_t mask = (std::uint64_t{1} << (count - i)) - 1;
        if (((chunk(pos + i) ^ other.chunk(opos + i)) & mask) != 0) return false;
    }
    return true;
}

std::size_t Word::common_prefix(const Word& other) const {
    std::size_t n = std::min(size_, other.size_);
    for (std::size_t i = 0; i < n; i += 64) {
        std::uint64_t diff = chunk(i) ^ other.chunk(i);
        if (diff != 0) return std::min(n, i + static_cast<std::size_t>(std::countr_zero(diff)));
    }
    return n;
}

std::size_t Word::count_b() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size_; i += 64) n += static_cast<std::size_t>(std::popcount(chunk(i)));
    return n;
}

Word Word::operator+(const Word& other) const {
    WordBuilder b;
    b.reserve(size_ + other.size_);
    b.append(*this);
    b.append(other);
    return b.build();
}

std::string Word::to_letters() const {
    std::string s(size_, 'a');
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) s[i] = 'b';
    }
    return s;
}

std::string Word::to_digits(const Alphabet& alphabet) const {
    if (alphabet.sym_a > 9 || alphabet.sym_b > 9) throw DomainError("digit strings need digits below 10");
    std::string s(size_, static_cast<char>('0' + alphabet.sym_a));
    char b = static_cast<char>('0' + alphabet.sym_b);
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) s[i] = b;
    }
    return s;
}

std::vector<int> Word::digits(const Alphabet& alphabet) const {
    std::vector<int> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = alphabet.digit((*this)[i]);
    return out;
}

void WordBuilder::append_bits(std::uint64_t v, unsigned n) {
    if (n == 0) return;
    if (n < 64) v &= (std::uint64_t{1} << n) - 1;
    unsigned s = size_ & 63;
    if (s == 0) {
        data_.push_back(v);
    } else {
        data_.back() |= v << s;
        if (s + n > 64) data_.push_back(v >> (64 - s));
    }
    size_ += n;
}

void WordBuilder::append(const Word& w) {
    std::size_t i = 0;
    for (; i + 64 <= w.size(); i += 64) append_bits(w.chunk(i), 64);
    if (i < w.size()) append_bits(w.chunk(i), static_cast<unsigned>(w.size() - i));
}

void WordBuilder::append(const Word& w, std::size_t times) {
    for (std::size_t t = 0; t < times; ++t) append(w);
}

Word WordBuilder::build() const {
    auto bits = std::make_shared<std::vector<std::uint64_t>>(data_);
    if (bits->empty()) bits->push_back(0);
    return Word(std::move(bits), 0, size_);
}

Integer digits_to_integer(const Word& w, const Alphabet& alphabet) {
    alphabet.validate();
    const std::size_t n = w.size();
    if (n == 0) return 0;
    const unsigned long b = static_cast<unsigned long>(alphabet.base);

    // Leaf blocks of L letters fit in 64 bits; blocks are aligned to the end of
    // the word so every right-hand group in the merge tree has full size.
    std::size_t leaf = 1;
    {
        unsigned __int128 p = b;
        while (p * b < (static_cast<unsigned __int128>(1) << 63)) {
            p *= b;
            ++leaf;
        }
    }
    std::vector<Integer> vals;
    vals.reserve(n / leaf + 1);
    std::size_t first = n % leaf == 0 ? leaf : n % leaf;
    for (std::size_t start = 0; start < n;) {
        std::size_t len = start == 0 ? first : leaf;
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < len; ++i) v = v * b + static_cast<std::uint64_t>(w[start + i]);
        vals.emplace_back(static_cast<unsigned long>(v));
        start += len;
    }
    Integer power = pow_z(Integer(b), leaf);
    while (vals.size() > 1) {
        std::vector<Integer> next((vals.size() + 1) / 2);
        std::size_t out = next.size();
        std::size_t i = vals.size();
        while (i >= 2) {
            next[--out] = vals[i - 2] * power + vals[i - 1];
            i -= 2;
        }
        if (i == 1) next[--out] = vals[0];
        vals.swap(next);
        power *= power;
    }
    // value over digits (0,1) -> value over (symA, symB)
    Integer ones = (pow_z(Integer(b), n) - 1) / (b - 1);
    return Integer(alphabet.sym_a) * ones + Integer(alphabet.sym_b - alphabet.sym_a) * vals[0];
}

}  // namespace sturm
