#pragma once

// Embedded curve y^2 = x^3 - 17 over the circuit field, group order q.
// The base-field-equals-circuit-field construction is what makes in-circuit
// signature verification native.

#include "ffs/field.hpp"

namespace ffsuite {

class CurvePoint {
public:
    /// The point at infinity (group identity).
    CurvePoint() : x_(), y_(), infinity_(true) {}

    /// Affine point; callers are responsible for curve membership unless
    /// they go through checked().
    CurvePoint(const FieldElement& x, const FieldElement& y)
        : x_(x), y_(y), infinity_(false) {}

    static CurvePoint infinity() { return CurvePoint(); }

    /// Validating constructor: throws InvalidPoint when off-curve.
    static CurvePoint checked(const FieldElement& x, const FieldElement& y);

    bool is_infinity() const { return infinity_; }
    const FieldElement& x() const { return x_; }
    const FieldElement& y() const { return y_; }

    bool is_on_curve() const;
    CurvePoint negate() const;

    bool operator==(const CurvePoint& o) const {
        if (infinity_ || o.infinity_) return infinity_ == o.infinity_;
        return x_ == o.x_ && y_ == o.y_;
    }
    bool operator!=(const CurvePoint& o) const { return !(*this == o); }

    /// 0x04 || x || y (65 bytes), or the single byte 0x00 for infinity.
    Bytes serialize() const;
    static CurvePoint deserialize(std::span<const uint8_t> data);
    /// Parses coordinates without curve membership validation; for replaying
    /// stored records whose validity is re-checked at application time.
    static CurvePoint deserialize_unchecked(std::span<const uint8_t> data);

private:
    FieldElement x_, y_;
    bool infinity_;
};

/// Curve constant b in y^2 = x^3 + b.
FieldElement curve_b();

/// Affine group law with full case analysis (identity, inverse, doubling).
CurvePoint point_add(const CurvePoint& p, const CurvePoint& q);

/// k-fold sum of p (double-and-add over k's bits).
CurvePoint scalar_mul(const Scalar& k, const CurvePoint& p);

/// First valid curve point by x = 1, 2, 3, ... scan, even-y root; verified
/// against the group order on first use and cached.
const CurvePoint& derive_generator();

/// Subsequent points from the same scan (skip = 0 is the generator); used as
/// ladder offsets by the in-circuit gadgets.
CurvePoint derive_point(unsigned skip);

}  // namespace ffsuite
