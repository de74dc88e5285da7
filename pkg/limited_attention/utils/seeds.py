"""Index-based seed derivation.

Every random stream in the package is a PCG64 generator built from
``SeedSequence(root, spawn_key=keys)``. Streams depend only on the root seed
and the integer keys (menu position, replication number, ...), never on the
order in which work is scheduled, so parallel and sequential runs agree bit
for bit.
"""

import numpy as np


def seed_sequence(root_seed, *keys):
	"""SeedSequence for a root seed and a tuple of integer keys"""
	return np.random.SeedSequence(root_seed, spawn_key=tuple(int(k) for k in keys))


def make_rng(root_seed, *keys):
	"""PCG64 generator for a root seed and integer keys"""
	return np.random.Generator(np.random.PCG64(seed_sequence(root_seed, *keys)))


def derive_seed(root_seed, *keys):
	"""A new 63-bit integer root seed derived from a root seed and keys"""
	state = seed_sequence(root_seed, *keys).generate_state(2, dtype=np.uint32)
	return int((int(state[0]) << 31) ^ int(state[1]))
