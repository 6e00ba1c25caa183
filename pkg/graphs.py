# selmer/graphs.py
from enum import Enum
from typing import Sequence

from pydantic import BaseModel, ConfigDict

from arith import FactoredInteger, jacobi
from exceptions import DomainError
from f2linalg import BitMatrix, rank

MINUS_ONE = -1
TWO = 2
BRUTEFORCE_MAX_VERTICES = 24


class GraphKind(str, Enum):
    G = "G"
    G_NEG = "G_NEG"
    G_PRIME = "G_PRIME"


class PrimeGraph(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: GraphKind
    vertices: tuple[int, ...]
    adjacency: BitMatrix

    @property
    def size(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        masks = self.adjacency.row_masks()
        return [
            (self.vertices[i], self.vertices[j])
            for i in range(self.size)
            for j in range(self.size)
            if (masks[i] >> j) & 1
        ]

    def is_symmetric(self) -> bool:
        return self.adjacency == self.adjacency.transpose()

    def to_document(self) -> dict:
        return {
            "kind": self.kind.value,
            "vertices": list(self.vertices),
            "edges": [list(edge) for edge in self.edges()],
        }


def _symbol_masks(primes: Sequence[int], skip_3mod4_sources: bool, offset: int = 0) -> list[int]:
    masks = []
    for p in primes:
        mask = 0
        if not (skip_3mod4_sources and p % 4 == 3):
            for j, q in enumerate(primes):
                if q != p and jacobi(p, q) == -1:
                    mask |= 1 << (j + offset)
        masks.append(mask)
    return masks


def graph_G(primes: Sequence[int]) -> PrimeGraph:
    masks = _symbol_masks(primes, skip_3mod4_sources=False)
    return PrimeGraph(kind=GraphKind.G, vertices=tuple(primes), adjacency=BitMatrix.from_rows(masks, len(primes)))


def graph_G_neg(primes: Sequence[int]) -> PrimeGraph:
    size = len(primes) + 1
    minus_one = 0
    for j, r in enumerate(primes):
        if r % 8 in (3, 5):
            minus_one |= 1 << (j + 1)
    masks = [minus_one] + _symbol_masks(primes, skip_3mod4_sources=True, offset=1)
    return PrimeGraph(
        kind=GraphKind.G_NEG,
        vertices=(MINUS_ONE,) + tuple(primes),
        adjacency=BitMatrix.from_rows(masks, size),
    )


def graph_G_prime(primes: Sequence[int]) -> PrimeGraph:
    size = len(primes) + 1
    two = 1 << len(primes)
    masks = _symbol_masks(primes, skip_3mod4_sources=True)
    masks = [mask | two if r % 8 in (3, 5) else mask for mask, r in zip(masks, primes)]
    masks.append(0)
    return PrimeGraph(
        kind=GraphKind.G_PRIME,
        vertices=tuple(primes) + (TWO,),
        adjacency=BitMatrix.from_rows(masks, size),
    )


def _odd_primes(n: FactoredInteger, minimum: int) -> tuple[int, ...]:
    if n.is_even:
        raise DomainError(f"symbol graphs are built on odd n, got {n.value}")
    if n.value < minimum:
        raise DomainError(f"n must be at least {minimum}, got {n.value}")
    return n.factors


def build_G(n: FactoredInteger) -> PrimeGraph:
    return graph_G(_odd_primes(n, 3))


def build_G_neg(n: FactoredInteger) -> PrimeGraph:
    return graph_G_neg(_odd_primes(n, 1))


def build_G_prime(m: FactoredInteger) -> PrimeGraph:
    return graph_G_prime(_odd_primes(m, 1))


def laplace(graph: PrimeGraph) -> BitMatrix:
    masks = [mask | ((mask.bit_count() & 1) << i) for i, mask in enumerate(graph.adjacency.row_masks())]
    return BitMatrix.from_rows(masks, graph.size)


def even_partition_count(graph: PrimeGraph) -> int:
    return 2 ** (graph.size - rank(laplace(graph)))


def even_partition_count_bruteforce(graph: PrimeGraph) -> int:
    k = graph.size
    if k > BRUTEFORCE_MAX_VERTICES:
        raise DomainError(f"brute force is limited to {BRUTEFORCE_MAX_VERTICES} vertices, graph has {k}")
    masks = graph.adjacency.row_masks()
    full = (1 << k) - 1
    count = 0
    for side in range(1 << k):
        other = full ^ side
        # only out-edges crossing the cut are counted
        if all((masks[v] & (other if (side >> v) & 1 else side)).bit_count() % 2 == 0 for v in range(k)):
            count += 1
    return count


def is_odd_graph(graph: PrimeGraph) -> bool:
    return even_partition_count(graph) == 2
