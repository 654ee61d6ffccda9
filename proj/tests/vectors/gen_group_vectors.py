#!/usr/bin/env python3
"""Reference vectors for the group module, computed with py_ecc.

py_ecc is an independent pure-Python BLS12-381 implementation; nothing here
touches the C++ code. Output: one vector per line, `kind input_hex output_hex`.

    python3 tests/vectors/gen_group_vectors.py > tests/vectors/group_vectors.txt
"""
import hashlib
import random

from py_ecc.optimized_bls12_381 import G1, G2, curve_order, field_modulus, multiply, normalize, pairing

TAGS = {
    "response": b"PUFZK-V1_PUF-RESPONSE_XMD:SHA-256_FR_",
    "auth": b"PUFZK-V1_AUTH-CHALLENGE_XMD:SHA-256_FR_",
}


def be(n, size):
    return n.to_bytes(size, "big")


def expand_message_xmd(msg, dst, length):
    # RFC 9380, section 5.3.1, SHA-256.
    ell = (length + 31) // 32
    dst_prime = dst + bytes([len(dst)])
    b0 = hashlib.sha256(bytes(64) + msg + length.to_bytes(2, "big") + b"\x00" + dst_prime).digest()
    blocks = [hashlib.sha256(b0 + b"\x01" + dst_prime).digest()]
    for i in range(2, ell + 1):
        chained = bytes(x ^ y for x, y in zip(b0, blocks[-1]))
        blocks.append(hashlib.sha256(chained + bytes([i]) + dst_prime).digest())
    return b"".join(blocks)[:length]


HALF = (field_modulus - 1) // 2


def compress_G1(pt):
    x, y = normalize(pt)
    flags = 0x80 | (0x20 if int(y) > HALF else 0)
    out = bytearray(be(int(x), 48))
    out[0] |= flags
    return bytes(out)


def compress_G2(pt):
    x, y = normalize(pt)
    x0, x1 = (int(c) for c in x.coeffs)
    y0, y1 = (int(c) for c in y.coeffs)
    largest = y1 > HALF if y1 != 0 else y0 > HALF
    out = bytearray(be(x1, 48) + be(x0, 48))
    out[0] |= 0x80 | (0x20 if largest else 0)
    return bytes(out)


def g1_bytes(k):
    return compress_G1(multiply(G1, k))


def g2_bytes(k):
    return compress_G2(multiply(G2, k))


def gt_bytes(value):
    # py_ecc runs the Miller loop over |x| without the sign correction for the
    # negative BLS12-381 parameter, so its result is the inverse of the usual
    # pairing. Gt elements are unitary: inverse == conjugate (w -> -w).
    c = [int(x) % field_modulus for x in value.coeffs]
    value = type(value)([c[i] if i % 2 == 0 else -c[i] for i in range(12)])
    # py_ecc basis: w^j, j < 12, with w^6 = 1 + u. Ours: sum e_i w^i (i < 6),
    # e_i = a_i + b_i u, stored in the order e0 e2 e4 e1 e3 e5.
    c = [int(x) % field_modulus for x in value.coeffs]
    e = [((c[i] + c[i + 6]) % field_modulus, c[i + 6]) for i in range(6)]
    out = b""
    for i in (0, 2, 4, 1, 3, 5):
        out += be(e[i][0], 48) + be(e[i][1], 48)
    return out


def hash_to_scalar(msg, dst):
    return be(int.from_bytes(expand_message_xmd(msg, dst, 48), "big") % curve_order, 32)


def main():
    rng = random.Random(20240601)
    scalars = [1, 2, 3, 7, curve_order - 1] + [rng.randrange(1, curve_order) for _ in range(5)]
    for k in scalars:
        print("g1_mul", be(k, 32).hex(), g1_bytes(k).hex())
    for k in scalars:
        print("g2_mul", be(k, 32).hex(), g2_bytes(k).hex())
    for a, b in [(1, 1), (2, 3), (rng.randrange(1, curve_order), rng.randrange(1, curve_order))]:
        print("pair", (be(a, 32) + be(b, 32)).hex(), gt_bytes(pairing(multiply(G2, b), multiply(G1, a))).hex())
    for name, dst in TAGS.items():
        for msg in [b"", b"abc", bytes(range(64))]:
            print("hash_to_scalar", (be(len(dst), 1) + dst + msg).hex(), hash_to_scalar(msg, dst).hex())


if __name__ == "__main__":
    main()
