#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slab {

/// Integer code of an element of GF(p^r): sum c_i p^i for the element sum c_i t^i.
using Elem = std::uint32_t;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultMaxFieldOrder = 1u << 16;

bool is_prime(std::uint64_t n);

/// Prime factors of n (distinct, ascending), by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/**
 * Immutable description of GF(p^r).
 *
 * The modulus is the monic irreducible polynomial of degree r whose
 * lower-order coefficients, read as base-p digits, give the smallest integer.
 * Multiplication goes through log/antilog tables built from the smallest
 * primitive element; addition is digit-wise mod p (XOR for p = 2), with a full
 * table for q <= 256.
 */
class Field {
 public:
  static Field make(std::uint32_t p, std::uint32_t r,
                    std::uint64_t max_order = kDefaultMaxFieldOrder);

  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t q() const { return q_; }

  /// Coefficients low to high, length r + 1, leading coefficient 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  /// Integer encoding of the non-leading modulus coefficients.
  std::uint64_t modulus_code() const;
  std::string modulus_string() const;

  Elem primitive() const { return primitive_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem x, Elem y) const {
    if (p_ == 2) return x ^ y;
    if (r_ == 1) {
      Elem s = x + y;
      return s >= q_ ? s - q_ : s;
    }
    if (!add_table_.empty()) return add_table_[x * q_ + y];
    return add_digits(x, y);
  }
  Elem neg(Elem x) const {
    if (p_ == 2) return x;
    if (r_ == 1) return x == 0 ? 0 : q_ - x;
    return neg_table_[x];
  }
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    return exp_[log_[x] + log_[y]];
  }
  /// Throws FieldError on zero.
  Elem inv(Elem x) const;
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::uint64_t e) const;

  /// Discrete log base primitive(); x must be nonzero.
  std::uint32_t log(Elem x) const { return log_[x]; }
  Elem exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  /// Embeds an integer of the prime field (taken mod p).
  Elem from_int(std::int64_t v) const;

  bool contains(Elem x) const { return x < q_; }

 private:
  Field() = default;
  Elem add_digits(Elem x, Elem y) const;
  Elem mul_poly(Elem x, Elem y) const;

  std::uint32_t p_ = 0;
  std::uint32_t r_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  Elem primitive_ = 0;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;  // length 2(q-1) so log sums need no reduction
  std::vector<Elem> neg_table_;
  std::vector<Elem> add_table_;
};

/// The monic irreducible modulus chosen by Field::make, coefficients low to high.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t r);

bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p);

enum class ElemSetRole { Subfield, MultiplicativeSubgroup, Generic };

struct ElemSet {
  std::vector<Elem> members;  // ascending codes
  ElemSetRole role = ElemSetRole::Generic;

  std::size_t size() const { return members.size(); }
  bool contains(Elem x) const;
};

/// The copy of GF(p^sub_r) inside the field: {x : x^(p^sub_r) = x}.
ElemSet subfield_elements(const Field& field, std::uint32_t sub_r);

/// The subgroup of order (q-1)/c of the multiplicative group.
ElemSet mult_subgroup(const Field& field, std::uint32_t c);

}  // namespace slab
