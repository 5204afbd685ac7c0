"""Bounded chain complexes of formal direct sums of words, with mapping
cones, shifts, and the iterated-cone construction of the continuant
complexes.

Homological (lower) indexing throughout: a complex C has terms C_i and
differentials d_i: C_i -> C_{i-1}.  The shift is C[1]_i = C_{i-1} with
negated differentials; the cone of a chain map f: C -> D has
Cone(f)_i = C_{i-1} (+) D_i with differential ((-d^C, 0), (-f, d^D)).
No other sign conventions enter: the continuant complexes are produced
literally as Cone(f_{n-1})[-1] from the evaluation chain maps.

Summands of the n-th continuant complex in degree -k are labelled by the
subsets of {0, ..., n-1} that are disjoint unions of k adjacent pairs; the
word attached to a label is the full alternating word with the labelled
positions deleted (positions are read right to left).  Labels are kept in
lexicographic order per degree, which fixes all matrices deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .contpoly import IntPolynomial
from .rings import Triple
from .tldiag import (
    DOWN,
    UP,
    TLMorphism,
    Word,
    compose,
    flip_letter,
    tensor,
)


class ComplexError(ValueError):
    """Ill-formed complex, morphism matrix, or chain map."""


@dataclass(frozen=True)
class FormalObject:
    """A formal direct sum of words, in a fixed order."""

    summands: Tuple[Word, ...]

    @staticmethod
    def unit() -> "FormalObject":
        return FormalObject((Word.empty(),))

    @staticmethod
    def of(*words: Word) -> "FormalObject":
        return FormalObject(tuple(words))

    def __len__(self):
        return len(self.summands)

    def tensor_letter(self, letter: str) -> "FormalObject":
        return FormalObject(tuple(Word.single(letter) + w for w in self.summands))

    def dual(self) -> "FormalObject":
        return FormalObject(tuple(w.dual() for w in self.summands))

    def __str__(self):
        return " (+) ".join(str(w) for w in self.summands) if self.summands else "0"


class FormalMorphism:
    """A matrix of diagram morphisms between formal direct sums.

    Entry (i, j) maps source summand j to target summand i.
    """

    __slots__ = ("triple", "source", "target", "entries")

    def __init__(self, triple: Triple, source: FormalObject, target: FormalObject, entries):
        self.triple = triple
        self.source = source
        self.target = target
        self.entries = [list(row) for row in entries]
        if len(self.entries) != len(target):
            raise ComplexError("entry rows do not match target summands")
        for i, row in enumerate(self.entries):
            if len(row) != len(source):
                raise ComplexError("entry columns do not match source summands")
            for j, entry in enumerate(row):
                if entry.source != source.summands[j] or entry.target != target.summands[i]:
                    raise ComplexError(f"entry ({i},{j}) has wrong boundary words")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(triple: Triple, source: FormalObject, target: FormalObject) -> "FormalMorphism":
        return FormalMorphism(
            triple,
            source,
            target,
            [
                [TLMorphism.zero(triple, src, tgt) for src in source.summands]
                for tgt in target.summands
            ],
        )

    @staticmethod
    def identity(triple: Triple, obj: FormalObject) -> "FormalMorphism":
        out = FormalMorphism.zero(triple, obj, obj)
        for i, w in enumerate(obj.summands):
            out.entries[i][i] = TLMorphism.identity(triple, w)
        return out

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "FormalMorphism") -> "FormalMorphism":
        if self.source != other.source or self.target != other.target:
            raise ComplexError("cannot add morphisms with different boundaries")
        return FormalMorphism(
            self.triple,
            self.source,
            self.target,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(len(self.source))]
                for i in range(len(self.target))
            ],
        )

    def __neg__(self) -> "FormalMorphism":
        return FormalMorphism(
            self.triple,
            self.source,
            self.target,
            [[-e for e in row] for row in self.entries],
        )

    def __mul__(self, other: "FormalMorphism") -> "FormalMorphism":
        """Matrix product self * other (other applied first)."""
        if other.target != self.source:
            raise ComplexError("matrix shapes do not compose")
        rows = []
        for i in range(len(self.target)):
            row = []
            for j in range(len(other.source)):
                acc = TLMorphism.zero(
                    self.triple, other.source.summands[j], self.target.summands[i]
                )
                for k in range(len(self.source)):
                    left = self.entries[i][k]
                    right = other.entries[k][j]
                    if left.is_zero() or right.is_zero():
                        continue
                    acc = acc + compose(left, right)
                row.append(acc)
            rows.append(row)
        return FormalMorphism(self.triple, other.source, self.target, rows)

    def tensor_letter(self, letter: str) -> "FormalMorphism":
        ident = TLMorphism.identity(self.triple, Word.single(letter))
        return FormalMorphism(
            self.triple,
            self.source.tensor_letter(letter),
            self.target.tensor_letter(letter),
            [[tensor(ident, e) for e in row] for row in self.entries],
        )

    def dual(self) -> "FormalMorphism":
        """Entrywise 180-degree rotation; the matrix transposes."""
        rows = []
        for j in range(len(self.source)):
            rows.append([self.entries[i][j].dual() for i in range(len(self.target))])
        return FormalMorphism(self.triple, self.target.dual(), self.source.dual(), rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, FormalMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def term_counts(self) -> List[List[int]]:
        return [[len(e.terms) for e in row] for row in self.entries]


class FormalComplex:
    """A bounded complex of formal objects with matrix differentials."""

    def __init__(
        self,
        triple: Triple,
        terms: Dict[int, FormalObject],
        diffs: Dict[int, FormalMorphism],
        labels: Optional[Dict[int, Tuple[Tuple[int, ...], ...]]] = None,
    ):
        self.triple = triple
        self.terms = {i: obj for i, obj in terms.items() if len(obj)}
        self.diffs = dict(diffs)
        self.labels = labels
        for i, d in self.diffs.items():
            if i not in self.terms or (i - 1) not in self.terms:
                raise ComplexError(f"differential d_{i} has no matching terms")
            if d.source != self.terms[i] or d.target != self.terms[i - 1]:
                raise ComplexError(f"differential d_{i} has wrong boundaries")

    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def term(self, i: int) -> FormalObject:
        return self.terms.get(i, FormalObject(()))

    def differential(self, i: int) -> Optional[FormalMorphism]:
        return self.diffs.get(i)

    def check_d_squared(self) -> bool:
        for i in self.degrees():
            d_i = self.diffs.get(i)
            d_next = self.diffs.get(i + 1)
            if d_i is not None and d_next is not None and not (d_i * d_next).is_zero():
                return False
        return True

    def dual(self) -> "FormalComplex":
        """Termwise dual with reversed degrees; no extra signs are needed."""
        terms = {-i: obj.dual() for i, obj in self.terms.items()}
        diffs = {}
        for i, d in self.diffs.items():
            diffs[-(i - 1)] = d.dual()
        labels = None
        if self.labels is not None:
            labels = {-i: lab for i, lab in self.labels.items()}
        return FormalComplex(self.triple, terms, diffs, labels)

    def summary(self) -> str:
        lines = []
        for i in sorted(self.terms, reverse=True):
            lines.append(f"degree {i}: {self.terms[i]}")
            d = self.diffs.get(i)
            if d is not None:
                lines.append(f"  d_{i} term counts: {d.term_counts()}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        out = {"degrees": {}}
        for i in sorted(self.terms, reverse=True):
            entry = {"summands": [str(w) for w in self.terms[i].summands]}
            if self.labels is not None and i in self.labels:
                entry["labels"] = [list(lab) for lab in self.labels[i]]
            d = self.diffs.get(i)
            if d is not None:
                entry["differential"] = [[str(e) for e in row] for row in d.entries]
            out["degrees"][str(i)] = entry
        return out


@dataclass
class ChainMap:
    """A degreewise morphism commuting with the differentials."""

    source: FormalComplex
    target: FormalComplex
    parts: Dict[int, FormalMorphism] = field(default_factory=dict)

    def part(self, i: int) -> Optional[FormalMorphism]:
        return self.parts.get(i)

    def verify(self) -> bool:
        for i in self.source.degrees():
            f_i = self.parts.get(i)
            d_src = self.source.diffs.get(i)
            d_tgt = self.target.diffs.get(i)
            lhs = None
            if f_i is not None and d_tgt is not None:
                lhs = d_tgt * f_i
            rhs = None
            if d_src is not None:
                f_prev = self.parts.get(i - 1)
                if f_prev is not None:
                    rhs = f_prev * d_src
            if lhs is None and rhs is None:
                continue
            if lhs is None:
                if not rhs.is_zero():
                    return False
            elif rhs is None:
                if not lhs.is_zero():
                    return False
            elif not (lhs + (-rhs)).is_zero():
                return False
        return True


def shift(complex_: FormalComplex, k: int = 1) -> FormalComplex:
    """The k-fold shift: terms move up by k, differentials pick up (-1)^k."""
    terms = {i + k: obj for i, obj in complex_.terms.items()}
    diffs = {}
    for i, d in complex_.diffs.items():
        diffs[i + k] = d if k % 2 == 0 else -d
    labels = None
    if complex_.labels is not None:
        labels = {i + k: lab for i, lab in complex_.labels.items()}
    return FormalComplex(complex_.triple, terms, diffs, labels)


def cone(f: ChainMap) -> FormalComplex:
    """Mapping cone with terms C_{i-1} (+) D_i and the displayed signs."""
    if not f.verify():
        raise ComplexError("cone requires a chain map")
    C, D = f.source, f.target
    triple = C.triple
    degrees = sorted(set(i + 1 for i in C.terms) | set(D.terms))
    terms = {}
    for i in degrees:
        summands = C.term(i - 1).summands + D.term(i).summands
        terms[i] = FormalObject(summands)
    diffs = {}
    for i in degrees:
        if (i - 1) not in terms or not len(terms[i - 1]):
            continue
        src, tgt = terms[i], terms[i - 1]
        out = FormalMorphism.zero(triple, src, tgt)
        nc_src, nc_tgt = len(C.term(i - 1)), len(C.term(i - 2))
        d_c = C.diffs.get(i - 1)
        if d_c is not None:
            for a in range(len(d_c.target)):
                for b in range(len(d_c.source)):
                    out.entries[a][b] = -d_c.entries[a][b]
        f_part = f.parts.get(i - 1)
        if f_part is not None:
            for a in range(len(f_part.target)):
                for b in range(len(f_part.source)):
                    out.entries[nc_tgt + a][b] = -f_part.entries[a][b]
        d_d = D.diffs.get(i)
        if d_d is not None:
            for a in range(len(d_d.target)):
                for b in range(len(d_d.source)):
                    out.entries[nc_tgt + a][nc_src + b] = d_d.entries[a][b]
        if not out.is_zero():
            diffs[i] = out
    return FormalComplex(triple, terms, diffs)


# ---------------------------------------------------------------------------
# continuant complexes


def _letter_of(base: str, i: int) -> str:
    """The i-th iterated dual of the base letter (duals alternate)."""
    return base if i % 2 == 0 else flip_letter(base)


def _label_word(base: str, n: int, label: Tuple[int, ...]) -> Word:
    """Word of the summand labelled by a twinned subset: positions run
    n-1, ..., 1, 0 from left to right and labelled ones are deleted."""
    letters = [
        _letter_of(base, i) for i in range(n - 1, -1, -1) if i not in label
    ]
    return Word(tuple(letters))


def twinned_subsets(n: int, k: int) -> List[Tuple[int, ...]]:
    """All subsets of {0..n-1} that are unions of k disjoint adjacent pairs,
    lexicographically ordered."""
    out: List[Tuple[int, ...]] = []

    def place(start: int, remaining: int, acc: Tuple[int, ...]):
        if remaining == 0:
            out.append(acc)
            return
        for i in range(start, n - 1):
            place(i + 2, remaining - 1, acc + (i, i + 1))
    place(0, k, ())
    return sorted(out)


@dataclass
class ContinuantBuild:
    """A continuant complex together with the maps used to build it.

    ``f_maps[k]`` is the evaluation chain map letter(k) (x) E_k -> E_{k-1}
    and ``phi_maps[k]`` the projection E_k -> letter(k-1) (x) E_{k-1}; both
    are recorded for 1 <= k <= n.  For the upper variant the recorded maps
    are those of the mirrored lower build that was dualised.
    """

    complex: FormalComplex
    n: int
    variant: str
    letter: str
    f_maps: Dict[int, ChainMap]
    phi_maps: Dict[int, ChainMap]


def _tensor_letter_complex(C: FormalComplex, letter: str) -> FormalComplex:
    terms = {i: obj.tensor_letter(letter) for i, obj in C.terms.items()}
    diffs = {i: d.tensor_letter(letter) for i, d in C.diffs.items()}
    return FormalComplex(C.triple, terms, diffs, C.labels)


def _sort_by_labels(C: FormalComplex, labels: Dict[int, List[Tuple[int, ...]]]) -> FormalComplex:
    """Reorder each degree's summands lexicographically by label."""
    perms = {}
    new_terms = {}
    new_labels = {}
    for i, obj in C.terms.items():
        order = sorted(range(len(obj)), key=lambda j: labels[i][j])
        perms[i] = order
        new_terms[i] = FormalObject(tuple(obj.summands[j] for j in order))
        new_labels[i] = tuple(labels[i][j] for j in order)
    new_diffs = {}
    for i, d in C.diffs.items():
        src_perm, tgt_perm = perms[i], perms[i - 1]
        entries = [
            [d.entries[a][b] for b in src_perm]
            for a in tgt_perm
        ]
        new_diffs[i] = FormalMorphism(C.triple, new_terms[i], new_terms[i - 1], entries)
    return FormalComplex(C.triple, new_terms, new_diffs, new_labels)


def build_continuant(
    n: int, variant: str = "lower", triple: Triple = None, letter: str = UP
) -> ContinuantBuild:
    """Construct the n-th continuant complex of a single letter.

    The lower variant iterates E_n = Cone(f_{n-1})[-1] from E_0 = unit and
    E_1 = letter, where f_k is obtained from the projection phi_k by
    whiskering with the evaluation of the k-th dual letter.  The upper
    variant is the dual complex of the lower variant of the flipped letter.
    """
    if triple is None:
        raise ComplexError("a coefficient triple is required")
    if variant not in ("lower", "upper"):
        raise ComplexError(f"unknown variant {variant!r}")
    if n < 0:
        raise ComplexError("n must be a natural number")
    if variant == "upper":
        mirrored = build_continuant(n, "lower", triple, flip_letter(letter))
        dualised = mirrored.complex.dual()
        if mirrored.complex.labels is not None:
            relabelled = {
                i: tuple(
                    tuple(sorted(n - 1 - p for p in lab)) for lab in labs
                )
                for i, labs in dualised.labels.items()
            }
            dualised = _sort_by_labels(dualised, {i: list(l) for i, l in relabelled.items()})
        return ContinuantBuild(dualised, n, "upper", letter, mirrored.f_maps, mirrored.phi_maps)

    complexes: List[FormalComplex] = []
    f_maps: Dict[int, ChainMap] = {}
    phi_maps: Dict[int, ChainMap] = {}

    e0 = FormalComplex(triple, {0: FormalObject.unit()}, {}, {0: ((),)})
    complexes.append(e0)
    if n >= 1:
        e1 = FormalComplex(
            triple, {0: FormalObject.of(Word.single(letter))}, {}, {0: ((),)}
        )
        complexes.append(e1)
        # f_1: letter^(1) (x) E_1 -> E_0 is the evaluation of the letter
        ev = TLMorphism.ev(triple, letter)
        f1_source = _tensor_letter_complex(e1, _letter_of(letter, 1))
        f_maps[1] = ChainMap(
            f1_source,
            e0,
            {0: FormalMorphism(triple, f1_source.term(0), e0.term(0), [[ev]])},
        )
        phi_maps[1] = ChainMap(
            e1, e1, {0: FormalMorphism.identity(triple, e1.term(0))}
        )

    for m in range(2, n + 1):
        prev = complexes[m - 1]  # E_{m-1}
        prev2 = complexes[m - 2]  # E_{m-2}
        cone_raw = cone(f_maps[m - 1])
        em_raw = shift(cone_raw, -1)
        # labels: the C-part keeps the labels of E_{m-1} (subsets avoiding
        # position m-1), the D-part adjoins the pair {m-2, m-1}
        labels: Dict[int, List[Tuple[int, ...]]] = {}
        for i in em_raw.terms:
            c_labels = list(prev.labels.get(i, ())) if prev.labels else []
            d_labels = [
                tuple(sorted(lab + (m - 2, m - 1)))
                for lab in (prev2.labels.get(i + 1, ()) if prev2.labels else ())
            ]
            labels[i] = c_labels + d_labels
        em = _sort_by_labels(em_raw, labels)
        complexes.append(em)

        # phi_m: E_m -> letter(m-1) (x) E_{m-1}, projection onto the C-part
        c_part = _tensor_letter_complex(prev, _letter_of(letter, m - 1))
        phi_parts = {}
        for i, obj in em.terms.items():
            if i not in c_part.terms:
                continue
            target_obj = c_part.term(i)
            entries = []
            for a, tgt_label in enumerate(prev.labels.get(i, ())):
                row = []
                for b, src_label in enumerate(em.labels[i]):
                    if src_label == tgt_label:
                        row.append(TLMorphism.identity(triple, obj.summands[b]))
                    else:
                        row.append(
                            TLMorphism.zero(
                                triple, obj.summands[b], target_obj.summands[a]
                            )
                        )
                entries.append(row)
            phi_parts[i] = FormalMorphism(triple, obj, target_obj, entries)
        phi_maps[m] = ChainMap(em, c_part, phi_parts)

        # f_m = (ev (x) id) after (letter(m) (x) phi_m)
        ev = TLMorphism.ev(triple, _letter_of(letter, m - 1))
        f_source = _tensor_letter_complex(em, _letter_of(letter, m))
        f_parts = {}
        for i, phi_part in phi_parts.items():
            padded = phi_part.tensor_letter(_letter_of(letter, m))
            collapse_entries = []
            for a, w in enumerate(prev.term(i).summands):
                row = []
                for b, src_w in enumerate(padded.target.summands):
                    if b == a:
                        row.append(tensor(ev, TLMorphism.identity(triple, w)))
                    else:
                        row.append(TLMorphism.zero(triple, src_w, w))
                collapse_entries.append(row)
            collapse = FormalMorphism(triple, padded.target, prev.term(i), collapse_entries)
            f_parts[i] = collapse * padded
        f_maps[m] = ChainMap(f_source, prev, f_parts)

    final = complexes[n] if n < len(complexes) else complexes[-1]
    return ContinuantBuild(final, n, "lower", letter, f_maps, phi_maps)


# ---------------------------------------------------------------------------
# K-theory class and validation


@dataclass(frozen=True)
class K0Class:
    """Signed monomial count of a complex: each summand word contributes
    x^(number of ^) * y^(number of v) with sign (-1)^degree."""

    xy: IntPolynomial
    x: IntPolynomial


def k0_class(complex_: FormalComplex) -> K0Class:
    total = IntPolynomial({})
    for i, obj in complex_.terms.items():
        sign = 1 if i % 2 == 0 else -1
        for w in obj.summands:
            ups = w.count_up()
            downs = len(w) - ups
            total = total + IntPolynomial({(ups, downs): sign})
    return K0Class(total, total.substitute_y_with_x())


@dataclass
class ValidationReport:
    ok: bool
    issues: List[str]
    census: Dict[int, Tuple[int, int]]  # degree -> (found, expected)

    def __str__(self):
        head = "pass" if self.ok else "fail"
        body = "".join(f"\n  - {msg}" for msg in self.issues)
        return f"validation: {head}{body}"


def validate(build_or_complex) -> ValidationReport:
    """Check differential shapes, d^2 = 0, and (for labelled continuant
    builds) the twinned-subset census and the label/word correspondence."""
    issues: List[str] = []
    census: Dict[int, Tuple[int, int]] = {}
    if isinstance(build_or_complex, ContinuantBuild):
        complex_ = build_or_complex.complex
        n = build_or_complex.n
        base = build_or_complex.letter if build_or_complex.variant == "lower" else None
    else:
        complex_, n, base = build_or_complex, None, None

    for i in complex_.degrees():
        d_i = complex_.diffs.get(i)
        d_next = complex_.diffs.get(i + 1)
        if d_i is not None and d_next is not None:
            if not (d_i * d_next).is_zero():
                issues.append(f"d^2 != 0 out of degree {i + 1}")

    if n is not None and complex_.labels is not None:
        for i, obj in complex_.terms.items():
            labels = complex_.labels.get(i, ())
            k = -i if base is not None else i
            expected = len(twinned_subsets(n, k)) if k >= 0 else 0
            census[i] = (len(labels), expected)
            if len(labels) != expected:
                issues.append(
                    f"degree {i}: {len(labels)} summands, expected {expected}"
                )
            if list(labels) != sorted(labels):
                issues.append(f"degree {i}: labels not in lexicographic order")
            if base is not None:
                for lab, w in zip(labels, obj.summands):
                    if _label_word(base, n, lab) != w:
                        issues.append(
                            f"degree {i}: summand {w} does not match label {lab}"
                        )
    return ValidationReport(not issues, issues, census)
