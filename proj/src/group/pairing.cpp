#include "pufzk/group/curve.hpp"

namespace pufzk::group {

namespace {

// gamma_i = xi^(i (p - 1) / 6), the Frobenius twist for coefficient w^i.
const std::array<Fp2, 6>& frobenius_coefficients() {
  static const std::array<Fp2, 6> table = [] {
    std::array<Fp2, 6> g;
    g[0] = Fp2::one();
    const Fp2 xi{Fp::one(), Fp::one()};
    g[1] = xi.pow(div_small(sub_small(Fp::kModulus, 1), 6));
    for (std::size_t i = 2; i < 6; ++i) g[i] = g[i - 1] * g[1];
    return g;
  }();
  return table;
}

// Sparse line value c + c2 w^2 + c3 w^3 as a full Fp12 element.
Fp12 line_value(const Fp2& c, const Fp2& c2, const Fp2& c3) {
  return {Fp6{c, c2, Fp2::zero()}, Fp6{Fp2::zero(), c3, Fp2::zero()}};
}

Fp12 exp_by_x(const Fp12& a) {
  // x is negative; a is in the cyclotomic subgroup so conjugation inverts.
  return a.pow(UInt<1>::from_u64(kCurveXAbs)).conjugate();
}

}  // namespace

std::optional<Fp2> Fp2::sqrt() const {
  // p = 3 mod 4 (Adj & Rodriguez-Henriquez, Algorithm 9).
  const auto& p = Fp::kModulus;
  const Fp2 a1 = pow(shift_right(sub_small(p, 3), 2));
  const Fp2 alpha = a1 * (a1 * *this);
  const Fp2 a0 = alpha.conjugate() * alpha;
  const Fp2 minus_one = -Fp2::one();
  if (a0 == minus_one) return std::nullopt;
  const Fp2 x0 = a1 * *this;
  Fp2 x;
  if (alpha == minus_one) {
    x = Fp2{-x0.c1, x0.c0};  // u * x0
  } else {
    const Fp2 b = (Fp2::one() + alpha).pow(shift_right(sub_small(p, 1), 1));
    x = b * x0;
  }
  if (x.square() != *this) return std::nullopt;
  return x;
}

Fp12 Fp12::frobenius() const {
  const auto& g = frobenius_coefficients();
  return {Fp6{c0.c0.conjugate() * g[0], c0.c1.conjugate() * g[2], c0.c2.conjugate() * g[4]},
          Fp6{c1.c0.conjugate() * g[1], c1.c1.conjugate() * g[3], c1.c2.conjugate() * g[5]}};
}

// Lines are evaluated on the untwisted point (x / w^2, y / w^3) and scaled
// by factors in Fp4 (w^3 and Fp2 denominators), all of which the final
// exponentiation removes.
Fp12 miller_loop(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q) {
  if (p.infinity || q.infinity) return Fp12::one();
  const G2Point q_jac = G2Point::from_affine(q);
  G2Point t = q_jac;
  Fp12 f = Fp12::one();
  for (int i = 62; i >= 0; --i) {
    {
      const Fp2& x = t.x();
      const Fp2& y = t.y();
      const Fp2& z = t.z();
      const Fp2 x2 = x.square();
      const Fp2 z2 = z.square();
      const Fp2 three_x2 = x2.dbl() + x2;
      const Fp2 c = three_x2 * x - y.square().dbl();
      const Fp2 c2 = -(three_x2 * z2) * p.x;
      const Fp2 c3 = (y * z * z2).dbl() * p.y;
      f = f.square() * line_value(c, c2, c3);
      t = t.dbl();
    }
    if ((kCurveXAbs >> i) & 1U) {
      const Fp2& x = t.x();
      const Fp2& y = t.y();
      const Fp2& z = t.z();
      const Fp2 z2 = z.square();
      const Fp2 n = q.y * z2 * z - y;
      const Fp2 d = z * (q.x * z2 - x);
      const Fp2 c = n * q.x - d * q.y;
      const Fp2 c2 = -n * p.x;
      const Fp2 c3 = d * p.y;
      f = f * line_value(c, c2, c3);
      t = t + q_jac;
    }
  }
  return f.conjugate();
}

Fp12 final_exponentiation(const Fp12& f) {
  // Easy part: f^((p^6 - 1)(p^2 + 1)).
  const Fp12 f1 = f.conjugate() * f.inverse();
  const Fp12 f2 = f1.frobenius().frobenius() * f1;
  // Hard part: (p^4 - p^2 + 1) / r = k (x + p)(x^2 + p^2 - 1) + 1, k = (x - 1)^2 / 3.
  static constexpr UInt<2> kK = UInt<2>::from_hex("396c8c005555e1568c00aaab0000aaab");
  const Fp12 a = f2.pow(kK);
  const Fp12 b = exp_by_x(a) * a.frobenius();
  const Fp12 c = exp_by_x(exp_by_x(b)) * b.frobenius().frobenius() * b.conjugate();
  return c * f2;
}

}  // namespace pufzk::group
