#pragma once

#include "fquant/error.hpp"
#include "fquant/rifs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fquant {

/// Letter of the alphabet {0, ..., N-1} (component index, zero-based).
using Letter = int;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform [0,1) variate attached to position `k` of the stream `seed`.
inline double counter_uniform(std::uint64_t seed, std::uint64_t k) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (k * 0xD1B54A32D192ED03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// A symbolic word omega over the component alphabet.
///
/// Sampled words are infinite: letter k is a pure function of (seed, k), so any
/// prefix is reproducible and extending never changes earlier letters.
class Word {
 public:
  enum class Kind { Explicit, Periodic, Sampled };

  static Word explicit_word(std::vector<Letter> letters) {
    Word w;
    w.kind_ = Kind::Explicit;
    w.letters_ = std::move(letters);
    return w;
  }

  /// omega_n^p: the first n letters repeated forever.
  static Word periodic(std::vector<Letter> period) {
    if (period.empty()) throw DegenerateInput("periodic word needs a non-empty period");
    Word w;
    w.kind_ = Kind::Periodic;
    w.letters_ = std::move(period);
    return w;
  }

  static Word sampled(const std::vector<double>& zeta, std::uint64_t seed, std::size_t length) {
    Word w;
    w.kind_ = Kind::Sampled;
    w.seed_ = seed;
    double acc = 0.0;
    for (double z : zeta) {
      acc += z;
      w.cdf_.push_back(acc);
    }
    w.letters_.reserve(length);
    for (std::size_t k = 0; k < length; ++k) w.letters_.push_back(w.draw(k));
    return w;
  }

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t period() const { return kind_ == Kind::Periodic ? letters_.size() : 0; }

  /// Materialized letters (the whole word for explicit, one period for periodic).
  const std::vector<Letter>& stored() const { return letters_; }

  bool is_finite() const { return kind_ == Kind::Explicit; }
  std::size_t finite_length() const { return letters_.size(); }

  /// Zero-based letter access; explicit words throw past their end.
  Letter at(std::size_t k) const {
    switch (kind_) {
      case Kind::Explicit:
        if (k >= letters_.size())
          throw WordTooShort("explicit word of length " + std::to_string(letters_.size()) +
                             " has no letter " + std::to_string(k + 1));
        return letters_[k];
      case Kind::Periodic:
        return letters_[k % letters_.size()];
      case Kind::Sampled:
        return k < letters_.size() ? letters_[k] : draw(k);
    }
    return 0;
  }

  std::vector<Letter> prefix(std::size_t n) const {
    std::vector<Letter> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = at(k);
    return out;
  }

  /// L^n(omega); shift by 0 is the identity.
  Word shifted(std::size_t n) const {
    Word w = *this;
    switch (kind_) {
      case Kind::Explicit:
        w.letters_.erase(w.letters_.begin(), w.letters_.begin() + std::min(n, letters_.size()));
        break;
      case Kind::Periodic: {
        const std::size_t p = letters_.size();
        for (std::size_t k = 0; k < p; ++k) w.letters_[k] = letters_[(k + n) % p];
        break;
      }
      case Kind::Sampled:
        w.offset_ += n;
        w.letters_.erase(w.letters_.begin(), w.letters_.begin() + std::min(n, letters_.size()));
        break;
    }
    return w;
  }

  /// omega_n^p built from the first n letters of this word.
  Word periodized(std::size_t n) const { return periodic(prefix(n)); }

 private:
  Letter draw(std::size_t k) const {
    const double u = detail::counter_uniform(seed_, offset_ + k);
    for (std::size_t i = 0; i + 1 < cdf_.size(); ++i) {
      if (u < cdf_[i]) return static_cast<Letter>(i);
    }
    return static_cast<Letter>(cdf_.size() - 1);
  }

  Kind kind_ = Kind::Explicit;
  std::vector<Letter> letters_;
  std::vector<double> cdf_;
  std::uint64_t seed_ = 0;
  std::uint64_t offset_ = 0;
};

/// i.i.d. letters with P(letter = i) = zeta_i, reproducible from the seed.
inline Word sample_word(const RifsSpec& spec, std::uint64_t seed, std::size_t length) {
  return Word::sampled(spec.zeta, seed, length);
}

inline Word shift(const Word& word, std::size_t n) { return word.shifted(n); }

}  // namespace fquant
