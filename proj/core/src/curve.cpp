#include "ffs/curve.hpp"

#include <mutex>

namespace ffsuite {

namespace {

// Jacobian coordinates for scalar multiplication; one inversion at the end.
struct Jac {
    FieldElement x, y, z;
    bool inf;

    static Jac identity() { return {FieldElement(), FieldElement(), FieldElement(), true}; }
    static Jac from_affine(const CurvePoint& p) {
        if (p.is_infinity()) return identity();
        return {p.x(), p.y(), FieldElement::one(), false};
    }
};

Jac jac_double(const Jac& p) {
    if (p.inf || p.y.is_zero()) return Jac::identity();
    // a = 0 doubling
    FieldElement a = p.x.square();
    FieldElement b = p.y.square();
    FieldElement c = b.square();
    FieldElement t = (p.x + b).square() - a - c;
    FieldElement d = t + t;  // 4xy^2
    FieldElement e = a + a + a;
    FieldElement x3 = e.square() - d - d;
    FieldElement c8 = c + c;
    c8 += c8;
    c8 += c8;
    FieldElement y3 = e * (d - x3) - c8;
    FieldElement z3 = (p.y * p.z);
    z3 += z3;
    return {x3, y3, z3, false};
}

Jac jac_add_affine(const Jac& p, const CurvePoint& q) {
    if (q.is_infinity()) return p;
    if (p.inf) return Jac::from_affine(q);
    FieldElement z2 = p.z.square();
    FieldElement u2 = q.x() * z2;
    FieldElement s2 = q.y() * z2 * p.z;
    if (u2 == p.x) {
        if (s2 == p.y) return jac_double(p);
        return Jac::identity();
    }
    FieldElement h = u2 - p.x;
    FieldElement hh = h.square();
    FieldElement i = hh + hh;
    i += i;
    FieldElement j = h * i;
    FieldElement r = s2 - p.y;
    r += r;
    FieldElement v = p.x * i;
    FieldElement x3 = r.square() - j - v - v;
    FieldElement y3 = r * (v - x3);
    FieldElement t = p.y * j;
    y3 = y3 - t - t;
    FieldElement z3 = (p.z + h).square() - p.z.square() - hh;
    return {x3, y3, z3, false};
}

CurvePoint jac_to_affine(const Jac& p) {
    if (p.inf) return CurvePoint::infinity();
    FieldElement zi = p.z.inverse();
    FieldElement zi2 = zi.square();
    return CurvePoint(p.x * zi2, p.y * zi2 * zi);
}

void require_on_curve(const CurvePoint& p, const char* what) {
    if (!p.is_infinity() && !p.is_on_curve())
        throw Error(Errc::InvalidPoint, std::string(what) + " is not on the curve");
}

CurvePoint scan_point(unsigned skip) {
    FieldElement x = FieldElement::one();
    for (;;) {
        FieldElement rhs = x * x * x + curve_b();
        if (auto y = rhs.sqrt()) {
            if (skip == 0) {
                // of y and -y take the root with even canonical value
                FieldElement even = y->canonical().bit(0) ? -*y : *y;
                return CurvePoint(x, even);
            }
            --skip;
        }
        x += FieldElement::one();
    }
}

}  // namespace

FieldElement curve_b() {
    static const FieldElement b = -FieldElement::from_u64(17);
    return b;
}

CurvePoint CurvePoint::checked(const FieldElement& x, const FieldElement& y) {
    CurvePoint p(x, y);
    require_on_curve(p, "point");
    return p;
}

bool CurvePoint::is_on_curve() const {
    if (infinity_) return true;
    return y_.square() == x_ * x_ * x_ + curve_b();
}

CurvePoint CurvePoint::negate() const {
    if (infinity_) return *this;
    return CurvePoint(x_, -y_);
}

Bytes CurvePoint::serialize() const {
    if (infinity_) return Bytes{0x00};
    Bytes out;
    out.reserve(65);
    out.push_back(0x04);
    auto xb = x_.to_bytes(), yb = y_.to_bytes();
    append(out, xb);
    append(out, yb);
    return out;
}

CurvePoint CurvePoint::deserialize(std::span<const uint8_t> data) {
    CurvePoint p = deserialize_unchecked(data);
    if (!p.is_on_curve()) throw Error(Errc::InvalidPoint, "decoded point off-curve");
    return p;
}

CurvePoint CurvePoint::deserialize_unchecked(std::span<const uint8_t> data) {
    if (data.size() == 1 && data[0] == 0x00) return infinity();
    if (data.size() != 65 || data[0] != 0x04)
        throw Error(Errc::DeserializeError, "bad point encoding");
    FieldElement x = FieldElement::from_bytes(data.subspan(1, 32));
    FieldElement y = FieldElement::from_bytes(data.subspan(33, 32));
    return CurvePoint(x, y);
}

CurvePoint point_add(const CurvePoint& p, const CurvePoint& q) {
    require_on_curve(p, "left operand");
    require_on_curve(q, "right operand");
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    if (p.x() == q.x()) {
        if (p.y() == q.y()) {
            if (p.y().is_zero()) return CurvePoint::infinity();
            // doubling: lambda = 3x^2 / 2y
            FieldElement num = p.x().square();
            num = num + num + num;
            FieldElement lambda = num * (p.y() + p.y()).inverse();
            FieldElement x3 = lambda.square() - p.x() - p.x();
            return CurvePoint(x3, lambda * (p.x() - x3) - p.y());
        }
        return CurvePoint::infinity();
    }
    FieldElement lambda = (q.y() - p.y()) * (q.x() - p.x()).inverse();
    FieldElement x3 = lambda.square() - p.x() - q.x();
    return CurvePoint(x3, lambda * (p.x() - x3) - p.y());
}

CurvePoint scalar_mul(const Scalar& k, const CurvePoint& p) {
    require_on_curve(p, "point");
    if (p.is_infinity() || k.is_zero()) return CurvePoint::infinity();
    U256 bits = k.canonical();
    Jac acc = Jac::identity();
    for (int i = bits.bit_length() - 1; i >= 0; --i) {
        acc = jac_double(acc);
        if (bits.bit(i)) acc = jac_add_affine(acc, p);
    }
    return jac_to_affine(acc);
}

const CurvePoint& derive_generator() {
    static const CurvePoint g = [] {
        CurvePoint candidate = scan_point(0);
        if (!candidate.is_on_curve())
            throw Error(Errc::InvalidPoint, "generator scan produced an off-curve point");
        Scalar order_minus_1 = -Scalar::one();
        // q*G = O  <=>  (q-1)*G = -G; checks the published order constant
        if (scalar_mul(order_minus_1, candidate) != candidate.negate())
            throw Error(Errc::InvalidPoint, "derived generator fails the group-order check");
        return candidate;
    }();
    return g;
}

CurvePoint derive_point(unsigned skip) {
    if (skip == 0) return derive_generator();
    return scan_point(skip);
}

}  // namespace ffsuite
