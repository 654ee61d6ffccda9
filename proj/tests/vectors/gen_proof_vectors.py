#!/usr/bin/env python3
"""Reference proofs and signatures, computed independently in Python.

Uses py_ecc for group arithmetic and the `cryptography` package's ChaCha20 to
reproduce the seeded prover randomness. Output format matches
gen_group_vectors.py: `kind input_hex output_hex`.

    python3 tests/vectors/gen_proof_vectors.py > tests/vectors/proof_vectors.txt
"""
import hashlib
import os
import struct
import sys

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms
from py_ecc.optimized_bls12_381 import G1, G2, FQ, add, curve_order, field_modulus, multiply

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from gen_group_vectors import HALF, be, compress_G1, compress_G2, expand_message_xmd  # noqa: E402

T_LIT_AUTH = b"PUFZK-V1_LITERAL-AUTH_BLS12381G1_XMD:SHA-256_TAI_"
T_LIT_TX = b"PUFZK-V1_LITERAL-TX_BLS12381G1_XMD:SHA-256_TAI_"
T_LIT_CH = b"PUFZK-V1_LITERAL-CHALLENGE_XMD:SHA-256_FR_"
T_AUTH = b"PUFZK-V1_AUTH-CHALLENGE_XMD:SHA-256_FR_"
T_TX = b"PUFZK-V1_TX-CHALLENGE_XMD:SHA-256_FR_"
T_SIG = b"PUFZK-V1_SIGNATURE_BLS12381G1_XMD:SHA-256_TAI_"
H_EFF = 0xD201000000010001


class Rng:
    def __init__(self, seed):
        key = hashlib.sha256(b"pufzk/rng/seed" + struct.pack(">Q", seed)).digest()
        self.enc = Cipher(algorithms.ChaCha20(key, bytes(16)), mode=None).encryptor()

    def bytes(self, n):
        return self.enc.update(bytes(n))

    def scalar(self):
        return int.from_bytes(self.bytes(64), "big") % curve_order


def h2s(msg, dst):
    return int.from_bytes(expand_message_xmd(msg, dst, 48), "big") % curve_order


def h2g1(msg, dst):
    for ctr in range(256):
        u = expand_message_xmd(msg + bytes([ctr]), dst, 65)
        x = int.from_bytes(u[:64], "big") % field_modulus
        rhs = (x ** 3 + 4) % field_modulus
        y = pow(rhs, (field_modulus + 1) // 4, field_modulus)
        if y * y % field_modulus != rhs:
            continue
        if (y > HALF) != bool(u[64] & 1):
            y = field_modulus - y
        p = multiply((FQ(x), FQ(y), FQ.one()), H_EFF)
        if p[2] != FQ.zero():
            return p
    raise ValueError("no point")


def field(data):
    return struct.pack(">I", len(data)) + data


def literal(base, rng):
    r = rng.scalar()
    S = multiply(base, r)
    U = multiply(G1, r)
    h = h2s(compress_G1(S) + compress_G1(U), T_LIT_CH)
    V = multiply(add(base, multiply(G1, h)), r)
    return b"\x01" + compress_G1(S) + compress_G1(U) + compress_G1(V)


def corrected_auth(rng, sk, rho, device_id, round_, nonce):
    pk, W = multiply(G2, sk), multiply(G1, rho)
    k_sk, k_puf = rng.scalar(), rng.scalar()
    A, B = multiply(G2, k_sk), multiply(G1, k_puf)
    transcript = (field(b"PUFZK-V1/auth") + device_id + compress_G2(pk) + compress_G1(W) + struct.pack(">I", round_)
                  + nonce + compress_G2(A) + compress_G1(B))
    c = h2s(transcript, T_AUTH)
    z_sk, z_puf = (k_sk + c * sk) % curve_order, (k_puf + c * rho) % curve_order
    return b"\x02" + compress_G2(A) + compress_G1(B) + be(c, 32) + be(z_sk, 32) + be(z_puf, 32) + nonce


def corrected_tx(rng, sk, device_id, digest, nonce):
    pk = multiply(G2, sk)
    k = rng.scalar()
    A = multiply(G2, k)
    c = h2s(field(b"PUFZK-V1/tx") + device_id + compress_G2(pk) + digest + nonce + compress_G2(A), T_TX)
    return b"\x02" + compress_G2(A) + be(c, 32) + be((k + c * sk) % curve_order, 32)


def main():
    for seed in (1, 2, 3):
        src = Rng(1000 + seed)
        sk = src.scalar()
        R = src.bytes(8)
        print("literal_auth", (be(seed, 8) + be(sk, 32) + R).hex(),
              literal(h2g1(R + be(sk, 32), T_LIT_AUTH), Rng(seed)).hex())
        T = b"payload-" + bytes([seed]) * seed
        print("literal_tx", (be(seed, 8) + T).hex(), literal(h2g1(T, T_LIT_TX), Rng(seed)).hex())
        msg = b"message " + str(seed).encode()
        print("signature", (be(sk, 32) + msg).hex(), compress_G1(multiply(h2g1(msg, T_SIG), sk)).hex())
        rho = src.scalar()
        device_id = src.bytes(32)
        nonce = src.bytes(16)
        round_ = seed
        print("corrected_auth",
              (be(seed, 8) + be(sk, 32) + be(rho, 32) + device_id + struct.pack(">I", round_) + nonce).hex(),
              corrected_auth(Rng(seed), sk, rho, device_id, round_, nonce).hex())
        digest = hashlib.sha256(T).digest()
        print("corrected_tx", (be(seed, 8) + be(sk, 32) + device_id + digest + nonce).hex(),
              corrected_tx(Rng(seed), sk, device_id, digest, nonce).hex())
    # Signature on the empty message with sk = 1 is H(""): a fixed point.
    print("signature", be(1, 32).hex(), compress_G1(h2g1(b"", T_SIG)).hex())


if __name__ == "__main__":
    main()
