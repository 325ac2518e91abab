#include "slab/gf.hpp"

#include <algorithm>
#include <sstream>

namespace slab {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  // a^(p-2) mod p
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

/// Remainder of a modulo a nonzero polynomial b over F_p.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint64_t factor = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly digits_of(std::uint64_t code, std::uint32_t p, std::uint32_t len) {
  Poly d(len, 0);
  for (std::uint32_t i = 0; i < len; ++i) {
    d[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return d;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
  if (deg == 1) return true;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::uint32_t d = 1; d <= deg / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g = digits_of(code, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t r) {
  const std::uint64_t count = ipow(p, r);
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f = digits_of(code, p, r);
    f.push_back(1);
    if (is_irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");  // unreachable for prime p
}

Field Field::make(std::uint32_t p, std::uint32_t r, std::uint64_t max_order) {
  if (!is_prime(p)) throw FieldError("p = " + std::to_string(p) + " is not prime");
  if (r < 1) throw FieldError("extension degree must be at least 1");
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    order *= p;
    if (order > max_order) {
      throw FieldError("field order " + std::to_string(p) + "^" + std::to_string(r) +
                       " exceeds maximum " + std::to_string(max_order));
    }
  }

  Field f;
  f.p_ = p;
  f.r_ = r;
  f.q_ = static_cast<std::uint32_t>(order);
  f.modulus_ = smallest_irreducible(p, r);

  const std::uint32_t q = f.q_;
  if (p != 2 && r > 1) {
    f.neg_table_.resize(q);
    for (Elem x = 0; x < q; ++x) {
      Poly d = digits_of(x, p, r);
      Elem code = 0, scale = 1;
      for (std::uint32_t i = 0; i < r; ++i, scale *= p) code += ((p - d[i]) % p) * scale;
      f.neg_table_[x] = code;
    }
    if (q <= 256) {
      f.add_table_.resize(static_cast<std::size_t>(q) * q);
      for (Elem x = 0; x < q; ++x)
        for (Elem y = 0; y < q; ++y) f.add_table_[x * q + y] = f.add_digits(x, y);
    }
  }

  // Smallest code generating the multiplicative group, by order testing.
  const auto factors = prime_factors(q - 1);
  auto slow_pow = [&](Elem x, std::uint64_t e) {
    Elem result = 1, base = x;
    while (e) {
      if (e & 1) result = f.mul_poly(result, base);
      base = f.mul_poly(base, base);
      e >>= 1;
    }
    return result;
  };
  f.primitive_ = 0;
  for (Elem g = 1; g < q; ++g) {
    bool generates = true;
    for (auto fac : factors) {
      if (slow_pow(g, (q - 1) / fac) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) {
      f.primitive_ = g;
      break;
    }
  }

  f.exp_.resize(2 * static_cast<std::size_t>(q - 1));
  f.log_.assign(q, 0);
  Elem x = 1;
  for (std::uint32_t k = 0; k < q - 1; ++k) {
    f.exp_[k] = x;
    f.exp_[k + q - 1] = x;
    f.log_[x] = k;
    x = f.mul_poly(x, f.primitive_);
  }
  return f;
}

Elem Field::add_digits(Elem x, Elem y) const {
  Elem code = 0, scale = 1;
  for (std::uint32_t i = 0; i < r_; ++i, scale *= p_) {
    code += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
  }
  return code;
}

Elem Field::mul_poly(Elem x, Elem y) const {
  Poly a = digits_of(x, p_, r_), b = digits_of(y, p_, r_);
  Poly prod(2 * r_, 0);
  for (std::uint32_t i = 0; i < r_; ++i)
    for (std::uint32_t j = 0; j < r_; ++j)
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p_);
  Poly rem = poly_mod(prod, modulus_, p_);
  Elem code = 0, scale = 1;
  for (std::size_t i = 0; i < rem.size(); ++i, scale *= p_) code += rem[i] * scale;
  return code;
}

Elem Field::inv(Elem x) const {
  if (x == 0) throw FieldError("inverse of zero");
  return exp_[(q_ - 1 - log_[x]) % (q_ - 1)];
}

Elem Field::pow(Elem x, std::uint64_t e) const {
  if (e == 0) return 1;
  if (x == 0) return 0;
  const std::uint64_t k = (static_cast<std::uint64_t>(log_[x]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[k];
}

Elem Field::from_int(std::int64_t v) const {
  const std::int64_t m = static_cast<std::int64_t>(p_);
  return static_cast<Elem>(((v % m) + m) % m);
}

std::uint64_t Field::modulus_code() const {
  std::uint64_t code = 0, scale = 1;
  for (std::uint32_t i = 0; i < r_; ++i, scale *= p_) code += modulus_[i] * scale;
  return code;
}

std::string Field::modulus_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = modulus_.size(); i-- > 0;) {
    const auto c = modulus_[i];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (i == 0 || c != 1) out << c;
    if (i >= 1) out << "t";
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

bool ElemSet::contains(Elem x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

ElemSet subfield_elements(const Field& field, std::uint32_t sub_r) {
  if (sub_r == 0 || field.r() % sub_r != 0) {
    throw FieldError("subfield degree " + std::to_string(sub_r) + " does not divide " +
                     std::to_string(field.r()));
  }
  const std::uint64_t frob = ipow(field.p(), sub_r);
  ElemSet out;
  out.role = ElemSetRole::Subfield;
  for (Elem x = 0; x < field.q(); ++x) {
    if (field.pow(x, frob) == x) out.members.push_back(x);
  }
  return out;
}

ElemSet mult_subgroup(const Field& field, std::uint32_t c) {
  const std::uint32_t n = field.q() - 1;
  if (c == 0 || n % c != 0) {
    throw FieldError(std::to_string(c) + " does not divide q - 1 = " + std::to_string(n));
  }
  ElemSet out;
  out.role = ElemSetRole::MultiplicativeSubgroup;
  for (std::uint32_t k = 0; k < n / c; ++k) out.members.push_back(field.exp(std::uint64_t{c} * k));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace slab
