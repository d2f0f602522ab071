# Copyright 2026 The Reverso Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates tests/data/crypto_vectors.txt from independent primitives.

HKDF is built from hmac/hashlib; AES comes from the `cryptography` package.
"""

import hashlib
import hmac
import sys

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

SALT = b"reverso-v1 key schedule salt"


def hkdf(secret, info, length):
    prk = hmac.new(SALT, secret, hashlib.sha256).digest()
    out, block, i = b"", b"", 1
    while len(out) < length:
        block = hmac.new(prk, block + info + bytes([i]), hashlib.sha256).digest()
        out += block
        i += 1
    return out[:length]


def schedule(secret, label):
    return (hkdf(secret, label + b" key", 32),
            hkdf(secret, label + b" iv", 12),
            hkdf(secret, label + b" hp", 32))


def nonce(iv, pn):
    tail = int.from_bytes(iv[4:], "big") ^ pn
    return iv[:4] + tail.to_bytes(8, "big")


def main():
    lines = []
    for name, secret in (("zero", bytes(32)), ("count", bytes(range(32)))):
        for label in (b"c2s", b"s2c"):
            key, iv, hp = schedule(secret, label)
            tag = f"{name}.{label.decode()}"
            lines += [f"{tag}.key {key.hex()}", f"{tag}.iv {iv.hex()}", f"{tag}.hp {hp.hex()}"]

    key, iv, hp = schedule(bytes(32), b"c2s")
    aad = bytes.fromhex("41") + b"reverso" + b"\x00" + b"\x07"
    plaintext = b"stream bytes land where they belong" * 3
    for pn in (0, 7, 0x1234567):
        sealed = AESGCM(key).encrypt(nonce(iv, pn), plaintext, aad)
        lines.append(f"seal.pn{pn} {sealed.hex()}")
    lines.append(f"seal.aad {aad.hex()}")
    lines.append(f"seal.plaintext {plaintext.hex()}")

    sample = bytes(range(0x10, 0x20))
    enc = Cipher(algorithms.AES(hp), modes.ECB()).encryptor()
    lines.append(f"hp.sample {sample.hex()}")
    lines.append(f"hp.mask {(enc.update(sample) + enc.finalize()).hex()}")

    sys.stdout.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
