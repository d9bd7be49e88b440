"""Form class-group arithmetic against classical tables and group axioms."""

import pytest

from massey_datagen import forms

# classical class numbers of imaginary quadratic fields
KNOWN_CLASS_NUMBERS = {
    -3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -20: 2, -23: 3, -24: 2,
    -31: 3, -47: 5, -71: 7, -84: 4, -95: 8, -119: 10, -159: 10,
    -231: 12, -255: 12,
}


def test_class_numbers_match_tables():
    for d, h in KNOWN_CLASS_NUMBERS.items():
        assert forms.class_number(d) == h, d


def test_reduced_forms_are_reduced_and_distinct():
    for d in (-23, -47, -231, -3299):
        fs = forms.reduced_forms(d)
        assert len(set(fs)) == len(fs)
        for a, b, c in fs:
            assert b * b - 4 * a * c == d
            assert -a < b <= a <= c
            if abs(b) == a or a == c:
                assert b >= 0
            assert forms._reduce(a, b, c) == (a, b, c)


def test_rejects_non_discriminants():
    for d in (5, 0, -5, -6, -10):
        with pytest.raises(ValueError):
            forms.reduced_forms(d)


@pytest.mark.parametrize("d", [-23, -47, -84, -95, -231])
def test_composition_group_axioms(d):
    fs = forms.reduced_forms(d)
    ident = forms.identity_form(d)
    assert ident in fs
    table = {}
    for f in fs:
        for g in fs:
            h = forms.compose(f, g, d)
            assert h in fs, (f, g, h)
            table[(f, g)] = h
    for f in fs:
        assert table[(f, ident)] == f
        assert table[(ident, f)] == f
        assert any(table[(f, g)] == ident for g in fs)      # inverses
        for g in fs:
            assert table[(f, g)] == table[(g, f)]           # abelian
    for f in fs[:3]:
        for g in fs[:3]:
            for h in fs[:3]:
                assert (table[(table[(f, g)], h)]
                        == table[(f, table[(g, h)])])       # associative


def test_form_pow_matches_repeated_composition():
    d = -47
    f = forms.reduced_forms(d)[1]
    acc = forms.identity_form(d)
    for k in range(12):
        assert forms.form_pow(f, k, d) == acc
        acc = forms.compose(acc, f, d)


def test_invariants_of_cyclic_groups():
    assert forms.class_group_invariants(-23) == [3]
    assert forms.class_group_invariants(-47) == [5]
    assert forms.class_group_invariants(-84) == [2, 2]
    assert forms.class_group_invariants(-95) == [8]


def test_invariants_of_three_rank_two_fields():
    # the three smallest |d| with 3-rank 2, with their class groups
    assert forms.class_group_invariants(-3299) == [3, 9]
    assert forms.class_group_invariants(-3896) == [3, 12]
    assert forms.class_group_invariants(-4027) == [3, 3]


def test_three_rank_values():
    assert forms.three_rank(-23) == 1
    assert forms.three_rank(-47) == 0
    assert forms.three_rank(-84) == 0
    assert forms.three_rank(-3299) == 2


def test_screen_finds_smallest_rank_two_fields():
    assert forms.screen_range(-4100, -3, rank=2) == [-3299, -3896, -4027]


def test_screen_only_fundamental():
    # -27 = -3 * 9 and -75 = -3 * 25 are not fundamental
    hits = forms.screen_range(-100, -3, rank=1)
    assert -23 in hits and -31 in hits
    assert -27 not in hits and -75 not in hits
