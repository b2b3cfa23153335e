#include "rencontres/exact_arith.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace rencontres {

namespace {

bool is_canonical_digits(std::string_view digits) {
  if (digits.empty()) return false;
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  return digits.size() == 1 || digits.front() != '0';
}

mpz_class parse_digits(std::string_view digits, std::string_view original) {
  if (!is_canonical_digits(digits)) {
    throw std::invalid_argument("not a canonical decimal integer: '" + std::string(original) + "'");
  }
  return mpz_class(std::string(digits), 10);
}

}  // namespace

// ---- BigNat ----

BigNat::BigNat(std::uint64_t value) : value_(static_cast<unsigned long>(value)) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "LP64 data model required");
}

BigNat BigNat::parse(std::string_view text) { return BigNat(parse_digits(text, text)); }

std::string BigNat::to_string() const { return value_.get_str(10); }

std::size_t BigNat::digit_count() const {
  // mpz_sizeinbase may overshoot by one for base 10.
  return to_string().size();
}

BigNat BigNat::divide_exact(const BigNat& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by zero");
  if (!divisible_by(divisor)) {
    throw InternalConsistencyError(divisor.to_string() + " does not divide " + to_string());
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), value_.get_mpz_t(), divisor.value_.get_mpz_t());
  return BigNat(std::move(q));
}

BigNat BigNat::operator%(const BigNat& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by zero");
  mpz_class r;
  mpz_tdiv_r(r.get_mpz_t(), value_.get_mpz_t(), divisor.value_.get_mpz_t());
  return BigNat(std::move(r));
}

bool BigNat::divisible_by(const BigNat& divisor) const {
  return mpz_divisible_p(value_.get_mpz_t(), divisor.value_.get_mpz_t()) != 0;
}

BigNat& BigNat::operator+=(const BigNat& rhs) {
  value_ += rhs.value_;
  return *this;
}

BigNat& BigNat::operator*=(const BigNat& rhs) {
  value_ *= rhs.value_;
  return *this;
}

BigNat& BigNat::operator-=(const BigNat& rhs) {
  if (cmp(value_, rhs.value_) < 0) throw std::domain_error("BigNat subtraction underflow");
  value_ -= rhs.value_;
  return *this;
}

// ---- BigInt ----

BigInt::BigInt(std::int64_t value) : value_(static_cast<long>(value)) {}

BigInt::BigInt(const BigNat& value) : value_(value.value_) {}

BigInt BigInt::parse(std::string_view text) {
  if (!text.empty() && text.front() == '-') {
    auto digits = text.substr(1);
    if (digits == "0") throw std::invalid_argument("negative zero is not canonical");
    return BigInt(mpz_class(-parse_digits(digits, text)));
  }
  return BigInt(parse_digits(text, text));
}

std::string BigInt::to_string() const { return value_.get_str(10); }

BigNat BigInt::magnitude() const { return BigNat(mpz_class(abs(value_))); }

BigInt BigInt::operator-() const { return BigInt(mpz_class(-value_)); }

BigInt& BigInt::operator+=(const BigInt& rhs) {
  value_ += rhs.value_;
  return *this;
}

BigInt& BigInt::operator-=(const BigInt& rhs) {
  value_ -= rhs.value_;
  return *this;
}

BigInt& BigInt::operator*=(const BigInt& rhs) {
  value_ *= rhs.value_;
  return *this;
}

// ---- ExactRatio ----

ExactRatio::ExactRatio(BigInt numerator) : numerator_(std::move(numerator)), denominator_(1) {}

ExactRatio::ExactRatio(BigInt numerator, BigNat denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_.is_zero()) throw std::domain_error("zero denominator");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), numerator_.value_.get_mpz_t(), denominator_.value_.get_mpz_t());
  if (g != 1) {
    mpz_divexact(numerator_.value_.get_mpz_t(), numerator_.value_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(denominator_.value_.get_mpz_t(), denominator_.value_.get_mpz_t(), g.get_mpz_t());
  }
}

ExactRatio ExactRatio::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return ExactRatio(BigInt::parse(text));
  ExactRatio parsed(BigInt::parse(text.substr(0, slash)), BigNat::parse(text.substr(slash + 1)));
  if (parsed.to_string() != text) {
    throw std::invalid_argument("ratio not in lowest terms: '" + std::string(text) + "'");
  }
  return parsed;
}

std::optional<BigInt> ExactRatio::as_integer() const {
  if (denominator_ == BigNat(1)) return numerator_;
  return std::nullopt;
}

ExactRatio ExactRatio::operator-() const {
  ExactRatio r = *this;
  r.numerator_ = -r.numerator_;
  return r;
}

ExactRatio ExactRatio::abs() const { return numerator_.sign() < 0 ? -*this : *this; }

ExactRatio operator+(const ExactRatio& a, const ExactRatio& b) {
  if (a.denominator_ == b.denominator_) {
    return ExactRatio(a.numerator_ + b.numerator_, a.denominator_);
  }
  return ExactRatio(a.numerator_ * BigInt(b.denominator_) + b.numerator_ * BigInt(a.denominator_),
                    a.denominator_ * b.denominator_);
}

ExactRatio operator-(const ExactRatio& a, const ExactRatio& b) { return a + (-b); }

ExactRatio operator*(const ExactRatio& a, const ExactRatio& b) {
  return ExactRatio(a.numerator_ * b.numerator_, a.denominator_ * b.denominator_);
}

ExactRatio operator/(const ExactRatio& a, const ExactRatio& b) {
  if (b.numerator_.sign() == 0) throw std::domain_error("division by zero ratio");
  BigInt num = a.numerator_ * BigInt(b.denominator_);
  if (b.numerator_.sign() < 0) num = -num;
  return ExactRatio(std::move(num), a.denominator_ * b.numerator_.magnitude());
}

std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) {
  return (a.numerator_ * BigInt(b.denominator_)) <=> (b.numerator_ * BigInt(a.denominator_));
}

std::string ExactRatio::to_string() const {
  return numerator_.to_string() + "/" + denominator_.to_string();
}

std::ostream& operator<<(std::ostream& os, const BigNat& v) { return os << v.to_string(); }
std::ostream& operator<<(std::ostream& os, const BigInt& v) { return os << v.to_string(); }
std::ostream& operator<<(std::ostream& os, const ExactRatio& v) { return os << v.to_string(); }

ExactRatio ratio_add(const ExactRatio& a, const ExactRatio& b) { return a + b; }

IntegerCheck ratio_is_integer(const ExactRatio& a) {
  if (auto value = a.as_integer()) return {true, *std::move(value)};
  return {false, BigInt()};
}

// ---- factorial / binomial ----

namespace {

class FactorialMemo {
 public:
  BigNat get(std::uint64_t n) {
    {
      std::shared_lock lock(mutex_);
      if (n < table_.size()) return table_[n];
    }
    std::unique_lock lock(mutex_);
    table_.reserve(n + 1);
    while (table_.size() <= n) {
      table_.push_back(table_.back() * BigNat(table_.size()));
    }
    return table_[n];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<BigNat> table_{BigNat(1)};
};

}  // namespace

BigNat factorial(std::uint64_t n) {
  static FactorialMemo memo;
  return memo.get(n);
}

BigNat factorial_quotient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigNat(0);
  BigNat product(1);
  for (std::uint64_t m = k + 1; m <= n; ++m) product *= BigNat(m);
  return product;
}

BigNat binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return BigNat(0);
  auto kk = std::min<std::uint64_t>(static_cast<std::uint64_t>(k), n - static_cast<std::uint64_t>(k));
  // After step i the running value is C(n - kk + i, i), always an integer.
  BigNat result(1);
  for (std::uint64_t i = 1; i <= kk; ++i) {
    result *= BigNat(n - kk + i);
    result = result.divide_exact(BigNat(i));
  }
  return result;
}

}  // namespace rencontres
