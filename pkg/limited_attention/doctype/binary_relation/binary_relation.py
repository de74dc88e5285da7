import numpy as np

from limited_attention.exceptions import throw


class BinaryRelation:
	"""Irreflexive relation on alternative ids as a dense K x K boolean matrix"""

	def __init__(self, edges):
		edges = np.array(edges, dtype=bool)
		self.edges = edges
		self.validate()
		self.edges.flags.writeable = False

	def validate(self):
		if self.edges.ndim != 2 or self.edges.shape[0] != self.edges.shape[1]:
			throw("Relation matrix must be square")
		if self.edges.diagonal().any():
			throw("Relation must be irreflexive")

	@classmethod
	def empty(cls, size):
		return cls(np.zeros((size, size), dtype=bool))

	@classmethod
	def from_pairs(cls, size, pairs):
		edges = np.zeros((size, size), dtype=bool)
		for a, b in pairs:
			edges[a, b] = True
		return cls(edges)

	@property
	def size(self):
		return self.edges.shape[0]

	def pairs(self):
		"""Edges (a, b) in row-major order"""
		return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.edges))]

	def __contains__(self, pair):
		a, b = pair
		return bool(self.edges[a, b])

	def __or__(self, other):
		return BinaryRelation(self.edges | other.edges)

	def __eq__(self, other):
		if not isinstance(other, BinaryRelation):
			return NotImplemented
		return np.array_equal(self.edges, other.edges)

	__hash__ = None

	def __len__(self):
		return int(self.edges.sum())

	def __repr__(self):
		return f"BinaryRelation({self.pairs()})"

	def labelled(self, grand):
		return [f"{grand.labels[a]}>{grand.labels[b]}" for a, b in self.pairs()]


def transitive_closure(relation):
	"""Smallest transitive superset, diagonal dropped

	Floyd-Warshall style propagation; cycles make their members mutually
	related, and the self-loops they would create are removed to keep the
	relation irreflexive.
	"""
	reach = relation.edges.copy()
	for k in range(relation.size):
		reach |= reach[:, k:k + 1] & reach[k:k + 1, :]
	np.fill_diagonal(reach, False)
	return BinaryRelation(reach)


def has_cycle(relation):
	"""True iff the relation has a directed cycle (Kahn's topological peel)"""
	edges = relation.edges
	indegree = edges.sum(axis=0).astype(np.int64)
	alive = np.ones(relation.size, dtype=bool)

	while True:
		sources = np.flatnonzero(alive & (indegree == 0))
		if sources.size == 0:
			break
		alive[sources] = False
		indegree -= edges[sources].sum(axis=0)

	return bool(alive.any())
