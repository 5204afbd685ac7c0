"""Concrete two-dimensional realization of the diagram calculus.

Each letter is sent to a free module of rank 2 over an exact field, the
empty word to rank 1.  Arcs carry the pivotal weights that make every
closed loop evaluate to q + q^-1 for an invertible scalar q: reading an
arc's two endpoints left to right,

* a bottom arc (cap) takes value 1 on basis (0, 1) and q^-1 on (1, 0),
* a top arc (cup) creates q on (0, 1) and 1 on (1, 0),
* a through strand is an identity wire.

Both loop orientations then evaluate to q + q^-1, the snake identities
hold, and the assignment is a monoidal functor on the nose: composition
goes to matrix product (including all loop scalars) and juxtaposition to
the Kronecker product.  Homology of realized complexes is computed by
exact Gaussian elimination, so ranks remain meaningful at roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List

from .complexes import FormalComplex
from .linalg import ExactMatrix
from .rings import Ring, RingValue, Triple
from .tldiag import PlanarMatching, TLMorphism, Word


class ModelError(ValueError):
    """Realization preconditions violated."""


@dataclass(frozen=True)
class FiberParams:
    """An exact field together with an invertible scalar q."""

    ring: Ring
    q: RingValue

    def __post_init__(self):
        if self.q.ring != self.ring:
            raise ModelError("q must belong to the given field")
        if self.q.inverse() is None:
            raise ModelError("q must be invertible")

    @property
    def delta(self) -> RingValue:
        return self.q + self.q.inverse()

    def balanced_triple(self) -> Triple:
        """The triple with both loop values q + q^-1."""
        return Triple(self.ring, self.delta, self.delta)


def word_dimension(word: Word) -> int:
    return 2 ** len(word)


@lru_cache(maxsize=None)
def _matching_entries(matching: PlanarMatching):
    """Sparse (row, col, q-exponent) entries of one diagram's matrix.

    Each arc independently takes one of two index assignments whose weight
    is a power of q, so the non-zero entries are enumerated by walking the
    binary choice tree and summing exponents."""
    ns, nt = len(matching.source), len(matching.target)
    choices: List[List[tuple]] = []
    for a, b in matching.pairs:
        if a[0] == "b" and b[0] == "b":  # cap: 1 on (0,1), q^-1 on (1,0)
            choices.append([((a, 0), (b, 1), 0), ((a, 1), (b, 0), -1)])
        elif a[0] == "t" and b[0] == "t":  # cup: q on (0,1), 1 on (1,0)
            choices.append([((a, 0), (b, 1), 1), ((a, 1), (b, 0), 0)])
        else:  # through strand
            choices.append([((a, 0), (b, 0), 0), ((a, 1), (b, 1), 0)])

    entries = []
    src_bits = [0] * ns
    tgt_bits = [0] * nt

    def assemble(k: int, exponent: int):
        if k == len(choices):
            row = 0
            for bit in tgt_bits:
                row = row * 2 + bit
            col = 0
            for bit in src_bits:
                col = col * 2 + bit
            entries.append((row, col, exponent))
            return
        for (ep1, bit1), (ep2, bit2), weight in choices[k]:
            for ep, bit in (((ep1, bit1)), ((ep2, bit2))):
                side, idx = ep
                if side == "b":
                    src_bits[idx] = bit
                else:
                    tgt_bits[idx] = bit
            assemble(k + 1, exponent + weight)

    assemble(0, 0)
    return tuple(entries)


def realize_morphism(f: TLMorphism, params: FiberParams) -> ExactMatrix:
    """The matrix of a diagram morphism under the two-dimensional model.

    Requires the morphism's triple to be balanced at q + q^-1 over the
    model's field.
    """
    balanced = params.balanced_triple()
    if f.triple.ring != params.ring or f.triple != balanced:
        raise ModelError("morphism triple must be balanced at q + q^-1 over the model field")
    out = ExactMatrix.zeros(params.ring, word_dimension(f.target), word_dimension(f.source))
    qpow = {0: params.ring.one, 1: params.q, -1: params.q.inverse()}

    def power(k: int) -> RingValue:
        got = qpow.get(k)
        if got is None:
            got = params.q**k
            qpow[k] = got
        return got

    for matching, coeff in f.terms.items():
        scaled = {}
        for row, col, exponent in _matching_entries(matching):
            value = scaled.get(exponent)
            if value is None:
                value = coeff * power(exponent)
                scaled[exponent] = value
            out.rows[row][col] = out.rows[row][col] + value
    return out


def realized_trace(f: TLMorphism, params: FiberParams) -> RingValue:
    """Matrix trace of the realized endomorphism, computed without
    assembling the matrix.  For a realized idempotent over a field of
    characteristic zero this integer equals the rank of its image."""
    if f.source != f.target:
        raise ModelError("trace requires an endomorphism")
    balanced = params.balanced_triple()
    if f.triple.ring != params.ring or f.triple != balanced:
        raise ModelError("morphism triple must be balanced at q + q^-1 over the model field")
    total = params.ring.zero
    for matching, coeff in f.terms.items():
        diagonal = params.ring.zero
        for row, col, exponent in _matching_entries(matching):
            if row == col:
                diagonal = diagonal + params.q**exponent
        total = total + coeff * diagonal
    return total


def realize_object(obj, params: FiberParams) -> int:
    """Total dimension of a formal direct sum of words."""
    return sum(word_dimension(w) for w in obj.summands)


def _realize_formal(morphism, params: FiberParams) -> ExactMatrix:
    rows = realize_object(morphism.target, params)
    cols = realize_object(morphism.source, params)
    out = ExactMatrix.zeros(params.ring, rows, cols)
    row_offset = 0
    for i, wt in enumerate(morphism.target.summands):
        col_offset = 0
        for j, ws in enumerate(morphism.source.summands):
            block = realize_morphism(morphism.entries[i][j], params)
            for a in range(block.nrows):
                for b in range(block.ncols):
                    out.rows[row_offset + a][col_offset + b] = block.rows[a][b]
            col_offset += word_dimension(ws)
        row_offset += word_dimension(wt)
    return out


@dataclass(frozen=True)
class DegreeHomology:
    dimension: int
    rank_out: int  # rank of the differential leaving this degree
    kernel: int
    image_in: int  # rank of the differential arriving from one degree up
    homology: int


@dataclass(frozen=True)
class HomologyReport:
    """Exact per-degree homology of a realized complex."""

    degrees: Dict[int, DegreeHomology]
    euler_terms: int
    euler_homology: int

    def homology_dimensions(self) -> Dict[int, int]:
        return {i: d.homology for i, d in self.degrees.items() if d.homology}

    def concentrated_in(self) -> List[int]:
        return sorted(i for i, d in self.degrees.items() if d.homology)

    def __str__(self):
        lines = ["degree  dim  rank d  dim H"]
        for i in sorted(self.degrees, reverse=True):
            d = self.degrees[i]
            lines.append(f"{i:6d}  {d.dimension:3d}  {d.rank_out:6d}  {d.homology:5d}")
        lines.append(f"euler: terms {self.euler_terms}, homology {self.euler_homology}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "degrees": {
                str(i): {
                    "dimension": d.dimension,
                    "rank_out": d.rank_out,
                    "kernel": d.kernel,
                    "homology": d.homology,
                }
                for i, d in self.degrees.items()
            },
            "euler_terms": self.euler_terms,
            "euler_homology": self.euler_homology,
        }


def homology(complex_: FormalComplex, params: FiberParams) -> HomologyReport:
    """Exact homology of a realized complex of formal word sums."""
    dims = {i: realize_object(obj, params) for i, obj in complex_.terms.items()}
    matrices = {i: _realize_formal(d, params) for i, d in complex_.diffs.items()}
    for i, mat in matrices.items():
        upper = matrices.get(i + 1)
        if upper is not None and not (mat * upper).is_zero():
            raise ModelError(f"realized differentials do not square to zero at degree {i + 1}")
    ranks = {i: mat.rank() for i, mat in matrices.items()}
    degrees = {}
    euler_terms = 0
    euler_homology = 0
    for i, dim in dims.items():
        rank_out = ranks.get(i, 0)
        image_in = ranks.get(i + 1, 0)
        kernel = dim - rank_out
        h = kernel - image_in
        degrees[i] = DegreeHomology(dim, rank_out, kernel, image_in, h)
        sign = 1 if i % 2 == 0 else -1
        euler_terms += sign * dim
        euler_homology += sign * h
    return HomologyReport(degrees, euler_terms, euler_homology)
