#include "omegalab/dyadic.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace omegalab {
namespace {

BigInt shl(const BigInt& v, std::int64_t k) {
  BigInt out;
  mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return out;
}

BigInt shr_floor(const BigInt& v, std::int64_t k) {
  BigInt out;
  mpz_fdiv_q_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return out;
}

// Both mantissas brought to a common scale.
struct Aligned {
  BigInt a;
  BigInt b;
  std::int64_t scale;
};

Aligned align(const Dyadic& x, const Dyadic& y) {
  const std::int64_t s = std::max(x.scale(), y.scale());
  return {shl(x.mantissa(), s - x.scale()), shl(y.mantissa(), s - y.scale()), s};
}

}  // namespace

Dyadic::Dyadic(BigInt mantissa, std::int64_t scale)
    : mantissa_(std::move(mantissa)), scale_(scale) {
  if (mantissa_ < 0) throw Error("dyadic: negative mantissa");
  if (scale_ < 0) {
    mantissa_ = shl(mantissa_, -scale_);
    scale_ = 0;
  }
  canonicalize();
}

Dyadic Dyadic::pow2_neg(std::int64_t k) {
  if (k < 0) return Dyadic(shl(BigInt(1), -k), 0);
  return Dyadic(BigInt(1), k);
}

Dyadic Dyadic::ratio(std::uint64_t n, std::int64_t k) {
  return Dyadic(BigInt(static_cast<unsigned long>(n)), k);
}

void Dyadic::canonicalize() {
  if (mantissa_ == 0) {
    scale_ = 0;
    return;
  }
  if (scale_ == 0) return;
  const auto zeros = static_cast<std::int64_t>(mpz_scan1(mantissa_.get_mpz_t(), 0));
  const std::int64_t drop = std::min(zeros, scale_);
  if (drop > 0) {
    mantissa_ = shr_floor(mantissa_, drop);
    scale_ -= drop;
  }
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
  auto [a, b, s] = align(*this, other);
  mantissa_ = a + b;
  scale_ = s;
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) {
  auto [a, b, s] = align(*this, other);
  if (a < b) throw Error("dyadic: subtraction would go negative");
  mantissa_ = a - b;
  scale_ = s;
  canonicalize();
  return *this;
}

Dyadic Dyadic::shifted(std::int64_t k) const { return Dyadic(mantissa_, scale_ - k); }

Dyadic Dyadic::times(const BigInt& n) const {
  if (n < 0) throw Error("dyadic: negative multiplier");
  return Dyadic(mantissa_ * n, scale_);
}

std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
  if (x.scale() == y.scale()) {
    const int c = cmp(x.mantissa(), y.mantissa());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  const auto [a, b, s] = align(x, y);
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Dyadic::to_string() const {
  if (scale_ == 0) return mantissa_.get_str();
  return mantissa_.get_str() + "/2^" + std::to_string(scale_);
}

std::string Dyadic::to_binary() const {
  const BigInt whole = shr_floor(mantissa_, scale_);
  std::string out = whole.get_str() + ".";
  if (scale_ == 0) return out + "0";
  out += prefix_bits(*this, scale_);
  return out;
}

Dyadic Dyadic::parse(std::string_view text) {
  auto fail = [&] { return Error("dyadic: cannot parse '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    BigInt m;
    if (m.set_str(std::string(num), 10) != 0 || m < 0) throw fail();
    if (den.substr(0, 2) != "2^") {
      // Plain power-of-two denominator, as in "3/8".
      BigInt d;
      if (d.set_str(std::string(den), 10) != 0 || d <= 0) throw fail();
      const auto s = static_cast<std::int64_t>(mpz_scan1(d.get_mpz_t(), 0));
      if (d != shl(BigInt(1), s)) throw fail();
      return Dyadic(m, s);
    }
    std::int64_t s = 0;
    try {
      s = std::stoll(std::string(den.substr(2)));
    } catch (...) {
      throw fail();
    }
    if (s < 0) throw fail();
    return Dyadic(m, s);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto bits = text.substr(dot + 1);
    BigInt w(0);
    if (!whole.empty() && w.set_str(std::string(whole), 10) != 0) throw fail();
    BigInt m(0);
    if (!bits.empty() && m.set_str(std::string(bits), 2) != 0) throw fail();
    if (w < 0) throw fail();
    const auto s = static_cast<std::int64_t>(bits.size());
    return Dyadic(shl(w, s) + m, s);
  }
  BigInt m;
  if (m.set_str(std::string(text), 10) != 0 || m < 0) throw fail();
  return Dyadic(m, 0);
}

std::ostream& operator<<(std::ostream& os, const Dyadic& x) { return os << x.to_string(); }

BigInt prefix(const Dyadic& x, std::int64_t m) {
  if (m < 0) throw Error("prefix: negative length");
  if (m >= x.scale()) return shl(x.mantissa(), m - x.scale());
  return shr_floor(x.mantissa(), x.scale() - m);
}

int digit(const Dyadic& x, std::int64_t i) {
  if (i < 1) throw Error("digit: index must be >= 1");
  if (i > x.scale()) return 0;
  return mpz_tstbit(x.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(x.scale() - i));
}

Dyadic tail(const Dyadic& x, std::int64_t m) {
  if (x.scale() <= m) return Dyadic{};
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), x.mantissa().get_mpz_t(),
                  static_cast<mp_bitcnt_t>(x.scale() - m));
  return Dyadic(r, x.scale());
}

Position leftmost_change(const Dyadic& a, const Dyadic& b) {
  if (a == b) throw Error("leftmost_change: equal inputs");
  const auto [ma, mb, s] = align(a, b);
  if (shr_floor(ma, s) != shr_floor(mb, s)) return Position::integer_part();
  BigInt diff;
  mpz_xor(diff.get_mpz_t(), ma.get_mpz_t(), mb.get_mpz_t());
  const auto top = static_cast<std::int64_t>(mpz_sizeinbase(diff.get_mpz_t(), 2)) - 1;
  return Position{s - top};
}

Dyadic least_increment(const Dyadic& x, std::int64_t m) {
  if (m < 0) throw Error("least_increment: negative length");
  // Round up to the next multiple of 2^-m strictly above x.
  const Dyadic next(prefix(x, m) + 1, m);
  return next - x;
}

std::string prefix_bits(const Dyadic& x, std::int64_t m) {
  if (m < 0) throw Error("prefix_bits: negative length");
  std::string out(static_cast<std::size_t>(m), '0');
  const std::int64_t top = std::min(m, x.scale());
  for (std::int64_t i = 1; i <= top; ++i) {
    if (digit(x, i)) out[static_cast<std::size_t>(i - 1)] = '1';
  }
  return out;
}

}  // namespace omegalab
