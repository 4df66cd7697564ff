"""Why raw decryption access breaks the scheme: a single chosen
ciphertext hands over the whole secret key."""

import numpy as np

import bfvlab.bfv as bfv
from bfvlab import get_params
from bfvlab.attacks import DecryptionOracle, cca_one_query

params = get_params("cca-1024")
rng = np.random.default_rng(1)
sk, pk = bfv.keygen(params, rng)

# the victim decrypts anything it is handed, e.g. a misconfigured service
oracle = DecryptionOracle.honest(sk, params)

# the chosen ciphertext is (0, delta): decryption computes
#   round((0 + delta * s) * t / q) = s  coefficient by coefficient,
# because s is binary and delta * 1 rounds to exactly 1
recovered = cca_one_query(oracle, params)

print(f"oracle calls used: {oracle.calls}")
print(f"recovered == secret key: {recovered.s == sk.s}")
print(f"first key bits: {recovered.s.to_coeff_list()[:16]}")
print(f"actual key bits: {sk.s.to_coeff_list()[:16]}")

# this is exactly why BFV is only secure against chosen-plaintext
# adversaries; no decryption of attacker-chosen ciphertexts can be exposed
