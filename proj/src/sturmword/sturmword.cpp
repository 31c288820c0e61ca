#include "sturmian/sturmword.hpp"

#include <mutex>

namespace sturm {

namespace {

// Fixed-point scale for the fast letter generator: nθ+ρ is tracked as a pair
// of signed 128-bit values with kFrac fractional bits, which leaves room for
// indices up to 2^38.
constexpr int kFrac = 88;
constexpr std::size_t kMaxIndex = std::size_t{1} << 38;

__int128 to_i128(const Integer& x) {
    Integer a = x < 0 ? Integer(-x) : x;
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 126) throw DomainError("fixed-point overflow");
    std::uint64_t words[2] = {0, 0};
    std::size_t count = 0;
    mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
    __int128 v = static_cast<__int128>((static_cast<unsigned __int128>(words[1]) << 64) | words[0]);
    return x < 0 ? -v : v;
}

__int128 fixed_floor(const Rational& x) { return to_i128(floor_of(x * Rational(pow_z(2, kFrac)))); }
__int128 fixed_ceil(const Rational& x) { return to_i128(ceil_of(x * Rational(pow_z(2, kFrac)))); }

long long floor_fixed(__int128 v) { return static_cast<long long>(v >> kFrac); }
long long ceil_fixed(__int128 v) { return -static_cast<long long>((-v) >> kFrac); }

std::size_t to_size(const Integer& v) {
    if (v < 0 || v > Integer(static_cast<unsigned long>(StandardWordFamily::kMaxLetters))) {
        throw DomainError("word length " + v.get_str() + " exceeds the supported maximum");
    }
    return static_cast<std::size_t>(v.get_ui());
}

}  // namespace

struct StandardWordFamily::Cache {
    std::mutex mutex;
    std::vector<Word> words;
};

StandardWordFamily::StandardWordFamily(ContinuedFraction cf) : cf_(std::move(cf)), cache_(std::make_shared<Cache>()) {}

std::size_t StandardWordFamily::qs(std::size_t k) const { return to_size(q(k)); }

Word StandardWordFamily::M(std::size_t k) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& w = cache_->words;
    if (w.empty()) w.push_back(Word::from_letters("a"));
    while (w.size() <= k) {
        std::size_t i = w.size();
        std::size_t len = qs(i);
        WordBuilder b;
        b.reserve(len);
        if (i == 1) {
            b.append(Word::repeated(0, to_size(cf_.a(1) - 1)));
            b.push(1);
        } else {
            b.append(w[i - 1], to_size(cf_.a(i)));
            b.append(w[i - 2]);
        }
        if (b.size() != len) throw InvariantViolation("|M_k| != q_k at k = " + std::to_string(i));
        w.push_back(b.build());
    }
    return w[k];
}

std::vector<Word> standard_words(const StandardWordFamily& family, std::size_t K) {
    std::vector<Word> out;
    out.reserve(K + 1);
    for (std::size_t k = 0; k <= K; ++k) out.push_back(family.M(k));
    return out;
}

WordVariants word_variants(const StandardWordFamily& family, std::size_t k) {
    if (k < 2) throw DomainError("word variants need k >= 2");
    Word m = family.M(k);
    WordVariants v;
    v.minus2 = m.drop_last(2);
    v.star = v.minus2 + Word::from_letters(k % 2 == 1 ? "ba" : "ab");
    WordBuilder b;
    b.append(family.M(k - 1), to_size(family.cf().a(k) - 1));
    b.append(family.M(k - 2));
    v.prime = b.build();
    return v;
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Lower:
            return "lower";
        case Variant::Upper:
            return "upper";
        case Variant::Characteristic:
            return "characteristic";
    }
    return "?";
}

Variant parse_variant(const std::string& text) {
    if (text == "lower") return Variant::Lower;
    if (text == "upper") return Variant::Upper;
    if (text == "characteristic") return Variant::Characteristic;
    throw ParseError("unknown variant '" + text + "' (expected lower, upper or characteristic)");
}

// Letter n is H(n + shift) - H(n + shift - 1) with H(m) = floor or ceil of
// m*theta + rho. The fixed-point pair (lo, hi) brackets m*theta + rho; when
// the floor (ceil) of both ends agree that is the value, otherwise the exact
// offset arithmetic decides.
struct SturmianSource::Generator {
    std::mutex mutex;
    ThetaOffset offset;
    bool use_ceil = false;
    std::size_t shift = 0;

    WordBuilder letters;
    Word snapshot;
    bool snapshot_valid = true;

    std::size_t m = 0;  // index of the last H value
    long long prev = 0;
    __int128 lo = 0, hi = 0, step_lo = 0, step_hi = 0;

    explicit Generator(ThetaOffset o) : offset(std::move(o)) {}

    long long exact_h(std::size_t idx) const {
        Integer v = use_ceil ? offset.ceil_at(Integer(static_cast<unsigned long>(idx)))
                             : offset.floor_at(Integer(static_cast<unsigned long>(idx)));
        return v.get_si();
    }

    void init() {
        const long bits = kFrac + 8;
        Interval t = offset.theta().enclose(bits);
        Interval r = offset.enclose(bits);
        step_lo = fixed_floor(t.lo);
        step_hi = fixed_ceil(t.hi);
        m = shift;
        lo = fixed_floor(r.lo) + step_lo * static_cast<__int128>(m);
        hi = fixed_ceil(r.hi) + step_hi * static_cast<__int128>(m);
        prev = exact_h(m);
    }

    void extend(std::size_t n) {
        if (n + shift >= kMaxIndex) throw DomainError("prefix length exceeds the supported maximum");
        letters.reserve(n);
        while (letters.size() < n) {
            ++m;
            lo += step_lo;
            hi += step_hi;
            long long a = use_ceil ? ceil_fixed(lo) : floor_fixed(lo);
            long long b = use_ceil ? ceil_fixed(hi) : floor_fixed(hi);
            long long h = a == b ? a : exact_h(m);
            long long diff = h - prev;
            if (diff != 0 && diff != 1) {
                throw InvariantViolation("Sturmian letter outside {0,1} at index " + std::to_string(m));
            }
            letters.push(static_cast<int>(diff));
            prev = h;
            snapshot_valid = false;
        }
    }
};

SturmianSource::SturmianSource(Theta theta, ThetaOffset rho, Variant variant, Alphabet alphabet)
    : theta_(std::move(theta)), rho_(std::move(rho)), variant_(variant), alphabet_(alphabet) {
    alphabet_.validate();
    if (variant_ == Variant::Characteristic) rho_ = ThetaOffset::rational(theta_, 0);
    gen_ = std::make_shared<Generator>(rho_);
    gen_->use_ceil = variant_ == Variant::Upper;
    gen_->shift = variant_ == Variant::Characteristic ? 1 : 0;
    gen_->init();
}

SturmianSource SturmianSource::characteristic(const Theta& theta, Alphabet alphabet) {
    return SturmianSource(theta, ThetaOffset::rational(theta, 0), Variant::Characteristic, alphabet);
}

Word SturmianSource::prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(gen_->mutex);
    if (gen_->letters.size() < n) gen_->extend(n);
    if (!gen_->snapshot_valid) {
        gen_->snapshot = gen_->letters.build();
        gen_->snapshot_valid = true;
    }
    return gen_->snapshot.prefix(n);
}

std::string SturmianSource::describe() const {
    std::string s = "theta=" + theta_.label() + " variant=" + to_string(variant_);
    if (variant_ != Variant::Characteristic) s += " rho=" + rho_.describe();
    return s;
}

Word sturmian_prefix(const SturmianSource& source, std::size_t n) {
    if (n < 1) throw DomainError("prefix length must be at least 1");
    return source.prefix(n);
}

Decomposition decompose(const SturmianSource& source, std::size_t k) {
    if (k < 3) throw DomainError("decomposition needs k >= 3");
    StandardWordFamily family(source.theta().cf());
    const Word Mkm1 = family.M(k - 1), Mk = family.M(k), Mk1 = family.M(k + 1);
    const std::size_t qk = Mk.size(), qk1 = Mk1.size();
    const std::size_t L = 2 * qk1 + qk - 1;

    const Word Mk1_minus2 = Mk1.drop_last(2);
    WordBuilder tb;
    tb.append(Mk1);
    tb.append(Mk);
    tb.append(Mk1_minus2);
    const Word tail_a = tb.build();  // M_{k+1} M_k M_{k+1}^{--}
    const Word tail_b = Mk + tail_a;  // M_k M_{k+1} M_k M_{k+1}^{--}

    const Word x = source.prefix(L);
    struct Match {
        int kind;  // 1, 2, 3 for cases i, ii, iii
        std::size_t w;
    };
    std::vector<Match> matches;
    for (std::size_t w = 1; w <= qk1; ++w) {
        if (!x.equal_range(0, Mk1, qk1 - w, w)) continue;
        if (x.equal_range(w, tail_a, 0, L - w)) matches.push_back({1, w});
        if (x.equal_range(w, tail_b, 0, L - w)) matches.push_back({2, w});
    }
    for (std::size_t w = 1; w <= qk; ++w) {
        if (x.equal_range(0, Mk, qk - w, w) && x.equal_range(w, tail_a, 0, L - w)) matches.push_back({3, w});
    }
    if (matches.size() != 1) {
        throw InvariantViolation("decomposition at k = " + std::to_string(k) + ": " +
                                 std::to_string(matches.size()) + " candidates matched, expected 1");
    }

    const Integer a_next = family.cf().a(k + 1);
    Decomposition dec;
    dec.k = k;
    dec.w = matches[0].w;
    dec.candidates_matched = matches.size();
    switch (matches[0].kind) {
        case 1:
            dec.U = Mk1.suffix(dec.w);
            dec.d = a_next;
            dec.case_tag = "i";
            break;
        case 2:
            dec.U = Mk1.suffix(dec.w);
            dec.d = a_next + 1;
            dec.case_tag = "ii";
            break;
        default: {
            dec.U = Mk.suffix(dec.w) + Mk1;
            // x' = x with W removed begins M_{k+1} M_{k+1} M_k or M_{k+1} M_k M_{k+1};
            // the two first differ at letter L of x'.
            const Word xp = source.prefix(dec.w + L).slice(dec.w, L);
            const Word first = Mk1 + Mk1 + Mk;
            if (xp[L - 1] == first[L - 1]) {
                dec.d = a_next;
                dec.case_tag = "iii-a";
            } else {
                dec.d = a_next + 1;
                dec.case_tag = "iii-b";
            }
        }
    }

    if (!(Mk + Mk1).ends_with(dec.U)) throw InvariantViolation("U_k is not a suffix of M_k M_{k+1}");
    WordBuilder rb;
    rb.append(dec.U);
    rb.append(Mk, to_size(dec.d));
    rb.append(Mkm1);
    rb.append(Mk);
    rb.append(Mk);
    const Word rec = rb.build();
    dec.reconstruction_length = rec.size();
    if (!(source.prefix(rec.size()) == rec)) {
        throw InvariantViolation("decomposition at k = " + std::to_string(k) + " does not reconstruct the word");
    }
    return dec;
}

Decomposition characteristic_decomposition(const StandardWordFamily& family, std::size_t k) {
    if (k < 3) throw DomainError("decomposition needs k >= 3");
    Decomposition dec;
    dec.k = k;
    dec.U = family.M(k + 1);
    dec.w = dec.U.size();
    const Integer a1 = family.cf().a(k + 1);
    const bool long_run = family.cf().a(k + 2) >= 2;
    dec.d = long_run ? a1 : a1 + 1;
    dec.case_tag = long_run ? "i" : "ii";
    dec.candidates_matched = 1;
    dec.reconstruction_length = dec.U.size() + to_size(dec.d + 2) * family.qs(k) + family.qs(k - 1);
    return dec;
}

std::string to_string(ShiftDirection d) {
    return d == ShiftDirection::WordShifted ? "word-shifted" : "characteristic-shifted";
}

namespace {

// rho = {j theta}: the lower and upper words are sigma^{j-1}(c) for j >= 1 and
// satisfy sigma^{1-j}(x) = c for j <= 0.
std::optional<ShiftRelation> relation_for(const Integer& j, std::size_t bound) {
    ShiftRelation rel;
    rel.j = j;
    Integer p = j >= 1 ? Integer(j - 1) : Integer(1 - j);
    if (p > Integer(static_cast<unsigned long>(bound))) return std::nullopt;
    rel.p = p.get_ui();
    rel.direction = j >= 1 ? ShiftDirection::CharacteristicShifted : ShiftDirection::WordShifted;
    return rel;
}

}  // namespace

std::optional<ShiftRelation> shift_relation(const SturmianSource& source, std::size_t bound) {
    if (source.variant() == Variant::Characteristic) return ShiftRelation{0, ShiftDirection::WordShifted, 0};
    const ThetaOffset& rho = source.rho();
    const Theta& theta = source.theta();
    if (const auto& af = rho.affine_form()) {
        // theta is irrational, so alpha + beta*theta = j*theta + n forces beta = j, alpha = n.
        const auto& [alpha, beta] = *af;
        if (!is_integer(alpha) || !is_integer(beta)) return std::nullopt;
        Integer j = beta.get_num();
        if (Integer(abs(j)) > Integer(static_cast<unsigned long>(bound + 1))) return std::nullopt;
        return relation_for(j, bound);
    }
    const long limit = static_cast<long>(bound) + 1;
    for (long j = -limit; j <= limit; ++j) {
        Real frac = ThetaOffset::multiple(theta, Integer(j)).real();
        // ResolutionExceeded here means rho cannot be separated from {j theta}.
        certified_compare(rho.real(), frac, theta.budget());
    }
    return std::nullopt;
}

}  // namespace sturm
