#include "oracle.hpp"

#include <openssl/evp.h>

#include "ffs/curve.hpp"

namespace oracle {

using ffsuite::CurvePoint;
using ffsuite::FieldElement;
using ffsuite::Scalar;
using ffsuite::U256;

mpz_class to_mpz(const U256& v) {
    auto bytes = ffsuite::u256_to_be_bytes(v);
    mpz_class out;
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return out;
}

mpz_class to_mpz(const FieldElement& v) { return to_mpz(v.canonical()); }
mpz_class to_mpz_scalar(const Scalar& v) { return to_mpz(v.canonical()); }

namespace {

template <typename F>
F from_mpz(const mpz_class& v, const mpz_class& m) {
    mpz_class r = ((v % m) + m) % m;
    std::vector<uint8_t> bytes(32, 0);
    size_t count = 0;
    mpz_export(bytes.data() + 32 - (mpz_sizeinbase(r.get_mpz_t(), 256)), &count, 1, 1, 1, 0,
               r.get_mpz_t());
    return F::from_bytes(std::span<const uint8_t>(bytes.data(), 32));
}

}  // namespace

FieldElement to_field(const mpz_class& v) { return from_mpz<FieldElement>(v, field_modulus()); }
Scalar to_scalar(const mpz_class& v) { return from_mpz<Scalar>(v, curve_order()); }

const mpz_class& field_modulus() {
    static const mpz_class p(
        "21888242871839275222246405745257275088548364400416034343698204186575808495617");
    return p;
}

const mpz_class& curve_order() {
    static const mpz_class q(
        "21888242871839275222246405745257275088696311157297823662689037894645226208583");
    return q;
}

mpz_class mod_mul(const mpz_class& a, const mpz_class& b, const mpz_class& m) {
    return ((a * b) % m + m) % m;
}

mpz_class mod_inv(const mpz_class& a, const mpz_class& m) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::runtime_error("oracle: not invertible");
    return out;
}

bool on_curve(const Point& p) {
    if (p.inf) return true;
    const mpz_class& m = field_modulus();
    mpz_class lhs = mod_mul(p.y, p.y, m);
    mpz_class rhs = (mod_mul(mod_mul(p.x, p.x, m), p.x, m) - 17) % m;
    rhs = (rhs + m) % m;
    return lhs == rhs;
}

Point ec_double(const Point& p) {
    if (p.inf) return p;
    const mpz_class& m = field_modulus();
    if (p.y == 0) return {0, 0, true};
    mpz_class lambda = mod_mul(3 * mod_mul(p.x, p.x, m), mod_inv(2 * p.y % m, m), m);
    mpz_class x3 = (mod_mul(lambda, lambda, m) - 2 * p.x) % m;
    x3 = (x3 + m) % m;
    mpz_class y3 = (mod_mul(lambda, (p.x - x3 + m) % m, m) - p.y) % m;
    y3 = (y3 + m) % m;
    return {x3, y3, false};
}

Point ec_add(const Point& p, const Point& q) {
    if (p.inf) return q;
    if (q.inf) return p;
    const mpz_class& m = field_modulus();
    if (p.x == q.x) {
        if (p.y == q.y) return ec_double(p);
        return {0, 0, true};
    }
    mpz_class lambda = mod_mul((q.y - p.y + m) % m, mod_inv((q.x - p.x + m) % m, m), m);
    mpz_class x3 = (mod_mul(lambda, lambda, m) - p.x - q.x) % m;
    x3 = (x3 + m) % m;
    mpz_class y3 = (mod_mul(lambda, (p.x - x3 + m) % m, m) - p.y) % m;
    y3 = (y3 + m) % m;
    return {x3, y3, false};
}

Point ec_scalar_mul(const mpz_class& k, const Point& p) {
    Point acc{0, 0, true};
    for (long i = long(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; i >= 0; --i) {
        acc = ec_double(acc);
        if (mpz_tstbit(k.get_mpz_t(), i)) acc = ec_add(acc, p);
    }
    return acc;
}

Point from_core(const CurvePoint& p) {
    if (p.is_infinity()) return {0, 0, true};
    return {to_mpz(p.x()), to_mpz(p.y()), false};
}

CurvePoint to_core(const Point& p) {
    if (p.inf) return CurvePoint::infinity();
    return CurvePoint(to_field(p.x), to_field(p.y));
}

ffsuite::Digest openssl_sha256(std::span<const uint8_t> data) {
    ffsuite::Digest out{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

}  // namespace oracle
