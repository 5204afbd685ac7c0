import pytest

from tlab.complexes import (
    ChainMap,
    ComplexError,
    ContinuantBuild,
    FormalComplex,
    FormalMorphism,
    FormalObject,
    build_continuant,
    cone,
    k0_class,
    shift,
    twinned_subsets,
    validate,
)
from tlab.contpoly import IntPolynomial, kappa, mu
from tlab.tldiag import DOWN, UP, TLMorphism, Word, compose, jw, tensor


def unit_complex(triple):
    return FormalComplex(triple, {0: FormalObject.unit()}, {})


def ev_chain_map(triple):
    src = FormalComplex(triple, {0: FormalObject.of(Word.of("v^"))}, {})
    tgt = unit_complex(triple)
    part = FormalMorphism(
        triple, src.term(0), tgt.term(0), [[TLMorphism.ev(triple, UP)]]
    )
    return ChainMap(src, tgt, {0: part})


# -- cones and shifts ---------------------------------------------------------


def test_shift_conventions(tower):
    c2 = build_continuant(2, "lower", tower).complex
    sh = shift(c2, 1)
    assert sh.term(1).summands == (Word.of("v^"),)
    assert sh.term(0).summands == (Word.empty(),)
    assert sh.differential(1) == -c2.differential(0)
    assert shift(sh, 1).differential(2) == c2.differential(0)
    assert shift(shift(c2, 1), -1).differential(0) == c2.differential(0)


def test_cone_of_identity(tower):
    ident = ChainMap(
        unit_complex(tower),
        unit_complex(tower),
        {0: FormalMorphism.identity(tower, FormalObject.unit())},
    )
    c = cone(ident)
    assert c.term(1).summands == (Word.empty(),)
    assert c.term(0).summands == (Word.empty(),)
    entry = c.differential(1).entries[0][0]
    assert entry == -TLMorphism.identity(tower, Word.empty())


def test_cone_of_zero_is_shift_plus_target(tower):
    c2 = build_continuant(2, "lower", tower).complex
    zero_map = ChainMap(c2, unit_complex(tower), {})
    c = cone(zero_map)
    assert c.term(1).summands == c2.term(0).summands
    assert c.term(0).summands == c2.term(-1).summands + (Word.empty(),)
    assert c.check_d_squared()


def test_cone_requires_chain_map(tower):
    c2 = build_continuant(2, "lower", tower).complex
    # identity in degree 0 and zero in degree -1 does not commute with d
    bad = ChainMap(c2, c2, {0: FormalMorphism.identity(tower, c2.term(0))})
    with pytest.raises(ComplexError):
        cone(bad)


def test_cone_of_ev_is_second_continuant(tower):
    built = build_continuant(2, "lower", tower).complex
    direct = shift(cone(ev_chain_map(tower)), -1)
    assert direct.term(0) == built.term(0)
    assert direct.term(-1) == built.term(-1)
    assert direct.differential(0) == built.differential(0)


# -- the continuant complexes ---------------------------------------------------


def test_continuant_base_cases(tower):
    b0 = build_continuant(0, "lower", tower)
    assert b0.complex.term(0) == FormalObject.unit()
    b1 = build_continuant(1, "lower", tower)
    assert b1.complex.term(0).summands == (Word.single(UP),)


def test_continuant_two(tower):
    c2 = build_continuant(2, "lower", tower).complex
    assert c2.term(0).summands == (Word.of("v^"),)
    assert c2.term(-1).summands == (Word.empty(),)
    assert c2.differential(0).entries[0][0] == TLMorphism.ev(tower, UP)


def test_continuant_three(tower):
    c3 = build_continuant(3, "lower", tower).complex
    assert [len(c3.term(0)), len(c3.term(-1))] == [1, 2]
    assert c3.term(0).summands == (Word.of("^v^"),)
    d0 = c3.differential(0)
    id_up = TLMorphism.identity(tower, Word.single(UP))
    assert d0.entries[0][0] == tensor(id_up, TLMorphism.ev(tower, UP))
    assert d0.entries[1][0] == tensor(TLMorphism.ev(tower, DOWN), id_up)


def test_continuant_four(tower):
    c4 = build_continuant(4, "lower", tower).complex
    assert [len(c4.term(0)), len(c4.term(-1)), len(c4.term(-2))] == [1, 3, 1]
    assert c4.labels[-1] == ((0, 1), (1, 2), (2, 3))
    dm1 = c4.differential(-1)
    ev_up = TLMorphism.ev(tower, UP)
    assert dm1.entries[0][0] == ev_up
    assert dm1.entries[0][1].is_zero()
    assert dm1.entries[0][2] == -ev_up


def test_validate_and_d_squared(tower, zeta10_balanced):
    for triple in (tower, zeta10_balanced):
        for n in range(0, 9):
            report = validate(build_continuant(n, "lower", triple))
            assert report.ok, (n, report.issues)


def test_validate_flags_corrupted_sign(tower):
    build = build_continuant(4, "lower", tower)
    c4 = build.complex
    bad_dm1 = FormalMorphism(
        tower,
        c4.term(-1),
        c4.term(-2),
        [[-e for e in c4.differential(-1).entries[0][:1]]
         + list(c4.differential(-1).entries[0][1:])],
    )
    corrupted = FormalComplex(
        tower,
        dict(c4.terms),
        {0: c4.differential(0), -1: bad_dm1},
        c4.labels,
    )
    report = validate(corrupted)
    assert not report.ok
    assert any("d^2" in issue for issue in report.issues)


def brute_twinned(n, k):
    out = []
    for mask in range(1 << n):
        bits = [i for i in range(n) if mask >> i & 1]
        if len(bits) != 2 * k:
            continue
        rest = list(bits)
        while len(rest) >= 2 and rest[1] == rest[0] + 1:
            rest = rest[2:]
        if not rest:
            out.append(tuple(bits))
    return sorted(out)


def test_twinned_census_against_brute_force(tower):
    for n in range(0, 11):
        for k in range(0, n // 2 + 1):
            assert twinned_subsets(n, k) == brute_twinned(n, k), (n, k)
    for n in range(0, 11):
        build = build_continuant(n, "lower", tower)
        for i, labels in build.complex.labels.items():
            assert len(labels) == len(twinned_subsets(n, -i)), (n, i)


def test_k0_classes(tower):
    k2 = k0_class(build_continuant(2, "lower", tower).complex)
    assert k2.xy == IntPolynomial({(1, 1): 1, (0, 0): -1})
    assert k2.x == kappa(2)
    assert k0_class(unit_complex(tower)).x == kappa(0)
    for n in range(0, 9):
        k = k0_class(build_continuant(n, "lower", tower).complex)
        assert k.x == kappa(n), n
        assert k.xy == mu(n), n


def test_triangle_shadow_identities(tower):
    ks = {}
    for base in (UP, DOWN):
        for n in range(0, 9):
            ks[(base, n)] = k0_class(build_continuant(n, "lower", tower, base).complex).xy

    def letter_for(m):
        return UP if m % 2 == 0 else DOWN

    for n in range(2, 9):
        for l in range(2, n + 1):
            rhs = ks[(letter_for(n - l + 1), l - 1)] * ks[(UP, n - l + 1)] - ks[
                (letter_for(n - l + 2), l - 2)
            ] * ks[(UP, n - l)]
            assert ks[(UP, n)] == rhs, (n, l)


def test_upper_variant_duality(tower):
    # the mirrored letter swaps x and y, and dualizing swaps them back, so
    # the two variants of the same letter carry equal classes
    for n in range(0, 8):
        upper = build_continuant(n, "upper", tower)
        lower = build_continuant(n, "lower", tower)
        assert validate(upper).ok, n
        assert k0_class(upper.complex).x == k0_class(lower.complex).x, n
        assert k0_class(upper.complex).xy == k0_class(lower.complex).xy, n
        mirrored = k0_class(build_continuant(n, "lower", tower, DOWN).complex).xy
        swapped = IntPolynomial(
            {(j, i): c for (i, j), c in k0_class(lower.complex).xy.coeffs.items()}
        )
        assert mirrored == swapped, n


def test_recorded_maps_are_chain_maps(tower):
    build = build_continuant(5, "lower", tower)
    for k in range(1, 6):
        assert build.f_maps[k].verify(), k
        assert build.phi_maps[k].verify(), k


def test_jw_killed_by_degree_zero_differential(tower, zeta10_balanced):
    for triple, span in ((tower, range(2, 6)), (zeta10_balanced, range(2, 5))):
        for n in span:
            jw_n = jw(triple, n)
            d0 = build_continuant(n, "lower", triple).complex.differential(0)
            for row in d0.entries:
                assert compose(row[0], jw_n).is_zero(), (triple, n)


def test_json_dump_shape(tower):
    data = build_continuant(3, "lower", tower).complex.to_json_dict()
    assert set(data["degrees"]) == {"0", "-1"}
    assert data["degrees"]["0"]["summands"] == ["∧∨∧"]
    assert "differential" in data["degrees"]["0"]
