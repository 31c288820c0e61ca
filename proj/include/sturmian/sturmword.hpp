#pragma once

// Standard words M_k of a continued fraction, Sturmian words with slope theta
// and intercept rho, the level-k decomposition x = U_k M_k^d M_{k-1} M_k M_k ...
// and detection of shift relations with the characteristic word.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sturmian/confrac.hpp"
#include "sturmian/word.hpp"

namespace sturm {

/// Raised when a checked structural identity fails; indicates a bug, not bad input.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

/// M_0 = a, M_1 = a^{a_1-1} b, M_k = M_{k-1}^{a_k} M_{k-2}, memoized.
class StandardWordFamily {
  public:
    explicit StandardWordFamily(ContinuedFraction cf);

    /// Largest word the family will materialize, in letters.
    static constexpr std::size_t kMaxLetters = std::size_t{1} << 34;

    Word M(std::size_t k) const;
    Integer q(std::size_t k) const { return cf_.convergent(k).second; }
    std::size_t qs(std::size_t k) const;
    const ContinuedFraction& cf() const { return cf_; }

  private:
    struct Cache;
    ContinuedFraction cf_;
    std::shared_ptr<Cache> cache_;
};

std::vector<Word> standard_words(const StandardWordFamily& family, std::size_t K);

struct WordVariants {
    Word minus2;  // M_k without its last two letters
    Word star;    // M_k with its last two letters exchanged
    Word prime;   // M_{k-1}^{a_k - 1} M_{k-2}
};

WordVariants word_variants(const StandardWordFamily& family, std::size_t k);

enum class Variant { Lower, Upper, Characteristic };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

/// Letters x_1 x_2 ... of a Sturmian word, generated on demand and memoized.
///   lower:          x_n = floor(n theta + rho) - floor((n-1) theta + rho)
///   upper:          x_n = ceil(n theta + rho) - ceil((n-1) theta + rho)
///   characteristic: x_n = floor((n+1) theta) - floor(n theta)
/// so letter n is s_{n-1} in the 0-indexed s_0 s_1 ... convention.
class SturmianSource {
  public:
    SturmianSource(Theta theta, ThetaOffset rho, Variant variant, Alphabet alphabet = {});
    static SturmianSource characteristic(const Theta& theta, Alphabet alphabet = {});

    const Theta& theta() const { return theta_; }
    const ThetaOffset& rho() const { return rho_; }
    Variant variant() const { return variant_; }
    const Alphabet& alphabet() const { return alphabet_; }

    Word prefix(std::size_t n) const;
    std::string describe() const;

  private:
    struct Generator;
    Theta theta_;
    ThetaOffset rho_;
    Variant variant_;
    Alphabet alphabet_;
    std::shared_ptr<Generator> gen_;
};

Word sturmian_prefix(const SturmianSource& source, std::size_t n);

struct Decomposition {
    std::size_t k = 0;
    Word U;
    Integer d;
    std::string case_tag;  // "i", "ii", "iii-a" or "iii-b"
    std::size_t w = 0;     // length of the matched suffix W
    std::size_t candidates_matched = 0;
    std::size_t reconstruction_length = 0;
};

/// Scans the 2q_{k+1}+q_k candidate prefixes, requires exactly one match and
/// checks the reconstruction U M_k^d M_{k-1} M_k M_k against the source.
Decomposition decompose(const SturmianSource& source, std::size_t k);

/// Closed form for the characteristic word: U = M_{k+1}, d = a_{k+1} or a_{k+1}+1.
Decomposition characteristic_decomposition(const StandardWordFamily& family, std::size_t k);

enum class ShiftDirection {
    WordShifted,            // sigma^p(x) = c_theta
    CharacteristicShifted,  // sigma^p(c_theta) = x
};

std::string to_string(ShiftDirection d);

struct ShiftRelation {
    std::size_t p = 0;
    ShiftDirection direction = ShiftDirection::WordShifted;
    Integer j;  // rho = {j theta}
};

std::optional<ShiftRelation> shift_relation(const SturmianSource& source, std::size_t bound);

}  // namespace sturm
