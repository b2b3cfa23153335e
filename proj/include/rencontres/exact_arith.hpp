#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rencontres {

/// Raised when a value that is proven to hold (a divisibility, a seed, a
/// retry bound) turns out not to. Indicates a bug, never bad user input.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BigInt;

/// Arbitrary-precision nonnegative integer.
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t value);  // NOLINT(google-explicit-constructor)

  /// Parses a canonical decimal string: digits only, no sign, no leading
  /// zeros except "0" itself. Throws std::invalid_argument otherwise.
  static BigNat parse(std::string_view text);

  std::string to_string() const;
  std::size_t digit_count() const;
  bool is_zero() const { return sgn(value_) == 0; }

  /// Exact quotient; throws InternalConsistencyError if divisor does not
  /// divide *this, std::domain_error on division by zero.
  BigNat divide_exact(const BigNat& divisor) const;
  /// Remainder of *this / divisor.
  BigNat operator%(const BigNat& divisor) const;
  bool divisible_by(const BigNat& divisor) const;

  BigNat& operator+=(const BigNat& rhs);
  BigNat& operator*=(const BigNat& rhs);
  /// Throws std::domain_error when rhs > *this.
  BigNat& operator-=(const BigNat& rhs);

  friend BigNat operator+(BigNat lhs, const BigNat& rhs) { return lhs += rhs; }
  friend BigNat operator*(BigNat lhs, const BigNat& rhs) { return lhs *= rhs; }
  friend BigNat operator-(BigNat lhs, const BigNat& rhs) { return lhs -= rhs; }

  friend bool operator==(const BigNat& a, const BigNat& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    return cmp(a.value_, b.value_) <=> 0;
  }

  const mpz_class& raw() const { return value_; }

 private:
  friend class BigInt;
  friend class ExactRatio;
  explicit BigNat(mpz_class value) : value_(std::move(value)) {}

  mpz_class value_;
};

/// Arbitrary-precision signed integer.
class BigInt {
 public:
  BigInt() = default;
  BigInt(std::int64_t value);   // NOLINT(google-explicit-constructor)
  BigInt(const BigNat& value);  // NOLINT(google-explicit-constructor)

  /// Canonical decimal with optional leading '-'; "-0" is rejected.
  static BigInt parse(std::string_view text);

  std::string to_string() const;
  /// -1, 0 or +1.
  int sign() const { return sgn(value_); }
  BigNat magnitude() const;

  BigInt operator-() const;
  BigInt& operator+=(const BigInt& rhs);
  BigInt& operator-=(const BigInt& rhs);
  BigInt& operator*=(const BigInt& rhs);

  friend BigInt operator+(BigInt lhs, const BigInt& rhs) { return lhs += rhs; }
  friend BigInt operator-(BigInt lhs, const BigInt& rhs) { return lhs -= rhs; }
  friend BigInt operator*(BigInt lhs, const BigInt& rhs) { return lhs *= rhs; }

  friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    return cmp(a.value_, b.value_) <=> 0;
  }

  const mpz_class& raw() const { return value_; }

 private:
  friend class ExactRatio;
  explicit BigInt(mpz_class value) : value_(std::move(value)) {}

  mpz_class value_;
};

/// Exact rational number kept in lowest terms with a positive denominator.
/// Zero is always 0/1, so equality is structural.
class ExactRatio {
 public:
  ExactRatio() : denominator_(1) {}
  ExactRatio(BigInt numerator);  // NOLINT(google-explicit-constructor)
  ExactRatio(std::int64_t numerator) : ExactRatio(BigInt(numerator)) {}  // NOLINT
  /// Throws std::domain_error on a zero denominator.
  ExactRatio(BigInt numerator, BigNat denominator);

  /// "<int>/<nat>" in lowest terms, or a bare "<int>" (denominator 1).
  static ExactRatio parse(std::string_view text);

  const BigInt& numerator() const { return numerator_; }
  const BigNat& denominator() const { return denominator_; }

  /// The integer value when the denominator is 1.
  std::optional<BigInt> as_integer() const;

  ExactRatio operator-() const;
  ExactRatio abs() const;

  friend ExactRatio operator+(const ExactRatio& a, const ExactRatio& b);
  friend ExactRatio operator-(const ExactRatio& a, const ExactRatio& b);
  friend ExactRatio operator*(const ExactRatio& a, const ExactRatio& b);
  /// Throws std::domain_error when b is zero.
  friend ExactRatio operator/(const ExactRatio& a, const ExactRatio& b);
  ExactRatio& operator+=(const ExactRatio& rhs) { return *this = *this + rhs; }

  friend bool operator==(const ExactRatio&, const ExactRatio&) = default;
  friend std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b);

  /// Always "<num>/<den>", including "n/1" for integers.
  std::string to_string() const;

 private:
  BigInt numerator_;
  BigNat denominator_;
};

std::ostream& operator<<(std::ostream& os, const BigNat& v);
std::ostream& operator<<(std::ostream& os, const BigInt& v);
std::ostream& operator<<(std::ostream& os, const ExactRatio& v);

ExactRatio ratio_add(const ExactRatio& a, const ExactRatio& b);

struct IntegerCheck {
  bool is_integer;
  BigInt value;  // meaningful only when is_integer
};
IntegerCheck ratio_is_integer(const ExactRatio& a);

/// n!, memoized process-wide; safe to call concurrently.
BigNat factorial(std::uint64_t n);

/// n!/k! = n(n-1)...(k+1) for k <= n; 0 for k > n.
BigNat factorial_quotient(std::uint64_t n, std::uint64_t k);

/// C(n, k) by the multiplicative formula; 0 when k < 0 or k > n.
BigNat binomial(std::uint64_t n, std::int64_t k);

}  // namespace rencontres
