#pragma once

// Short Weierstrass curves y^2 = x^3 + b in Jacobian coordinates
// (x = X/Z^2, y = Y/Z^3; Z = 0 is the point at infinity).

#include "pufzk/group/tower.hpp"

namespace pufzk::group {

template <class F>
struct AffinePoint {
  F x, y;
  bool infinity = true;
};

template <class F, class Curve>
class JacobianPoint {
 public:
  using Field = F;

  JacobianPoint() : x_(F::one()), y_(F::one()), z_(F::zero()) {}
  JacobianPoint(const F& x, const F& y, const F& z) : x_(x), y_(y), z_(z) {}

  static JacobianPoint from_affine(const AffinePoint<F>& p) {
    if (p.infinity) return {};
    return {p.x, p.y, F::one()};
  }

  bool is_identity() const { return z_.is_zero(); }
  const F& x() const { return x_; }
  const F& y() const { return y_; }
  const F& z() const { return z_; }

  static bool on_curve(const F& x, const F& y) { return y.square() == x.square() * x + Curve::b(); }

  bool on_curve() const {
    if (is_identity()) return true;
    const F z2 = z_.square();
    const F z6 = z2.square() * z2;
    return y_.square() == x_.square() * x_ + Curve::b() * z6;
  }

  AffinePoint<F> to_affine() const {
    if (is_identity()) return {};
    const F zinv = z_.inverse();
    const F zinv2 = zinv.square();
    return {x_ * zinv2, y_ * zinv2 * zinv, false};
  }

  JacobianPoint operator-() const { return {x_, -y_, z_}; }

  JacobianPoint dbl() const {
    if (is_identity()) return *this;
    const F a = x_.square();
    const F b = y_.square();
    const F c = b.square();
    const F d = ((x_ + b).square() - a - c).dbl();
    const F e = a.dbl() + a;
    const F f = e.square();
    const F x3 = f - d.dbl();
    const F c8 = c.dbl().dbl().dbl();
    const F y3 = e * (d - x3) - c8;
    const F z3 = (y_ * z_).dbl();
    return {x3, y3, z3};
  }

  friend JacobianPoint operator+(const JacobianPoint& p, const JacobianPoint& q) {
    if (p.is_identity()) return q;
    if (q.is_identity()) return p;
    const F z1z1 = p.z_.square();
    const F z2z2 = q.z_.square();
    const F u1 = p.x_ * z2z2;
    const F u2 = q.x_ * z1z1;
    const F s1 = p.y_ * q.z_ * z2z2;
    const F s2 = q.y_ * p.z_ * z1z1;
    const F h = u2 - u1;
    const F r = (s2 - s1).dbl();
    if (h.is_zero()) {
      if (r.is_zero()) return p.dbl();
      return {};
    }
    const F i = h.dbl().square();
    const F j = h * i;
    const F v = u1 * i;
    const F x3 = r.square() - j - v.dbl();
    const F y3 = r * (v - x3) - (s1 * j).dbl();
    const F z3 = ((p.z_ + q.z_).square() - z1z1 - z2z2) * h;
    return {x3, y3, z3};
  }

  friend JacobianPoint operator-(const JacobianPoint& p, const JacobianPoint& q) { return p + (-q); }

  friend bool operator==(const JacobianPoint& p, const JacobianPoint& q) {
    if (p.is_identity() || q.is_identity()) return p.is_identity() && q.is_identity();
    const F z1z1 = p.z_.square();
    const F z2z2 = q.z_.square();
    if (p.x_ * z2z2 != q.x_ * z1z1) return false;
    return p.y_ * q.z_ * z2z2 == q.y_ * p.z_ * z1z1;
  }

  // Fixed 4-bit window, most significant window first.
  template <std::size_t K>
  JacobianPoint mul(const UInt<K>& k) const {
    std::array<JacobianPoint, 16> table;
    table[1] = *this;
    for (std::size_t i = 2; i < 16; ++i) table[i] = table[i - 1] + *this;
    JacobianPoint acc;
    const std::size_t windows = (k.bit_length() + 3) / 4;
    for (std::size_t w = windows; w-- > 0;) {
      acc = acc.dbl().dbl().dbl().dbl();
      unsigned nibble = 0;
      for (unsigned b = 0; b < 4; ++b) nibble |= static_cast<unsigned>(k.bit(4 * w + b)) << b;
      if (nibble != 0) acc = acc + table[nibble];
    }
    return acc;
  }

 private:
  F x_, y_, z_;
};

struct G1Curve {
  static Fp b() { return Fp::from_u64(4); }
};

struct G2Curve {
  // 4 * (u + 1)
  static Fp2 b() { return {Fp::from_u64(4), Fp::from_u64(4)}; }
};

using G1Point = JacobianPoint<Fp, G1Curve>;
using G2Point = JacobianPoint<Fp2, G2Curve>;

// Internal pairing pieces, exposed for tests.
Fp12 miller_loop(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q);
Fp12 final_exponentiation(const Fp12& f);

}  // namespace pufzk::group
