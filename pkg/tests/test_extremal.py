import pytest
from fractions import Fraction
from markoff_lab.errors import PrecisionExhausted
from markoff_lab.exactnum import IDENTITY, M, Mat2, RatInterval, quadirr_make
from markoff_lab.extremal import (
    ExtremalSpec,
    approx_diagnostics,
    associated_form_min,
    balance_with_retry,
    best_approx,
    conjugate_translation,
    extremality_witness,
    gamma_interval,
    in_band,
    ratio_bracket,
    reduce_and_balance,
    spec_enclosures,
    xi_conjugates,
    xi_enclosure,
    zigzag_matrices,
)
from markoff_lab.markoff import CohnMatrix, as_triple, fricke_check, maximal_zigzag
from markoff_lab.words import Word

PRECISION = Fraction(1, 10**60)


def test_zigzag_matrices():
    # Test
    assert zigzag_matrices((5, 1, 2), 2) == [CohnMatrix(5, 3, 2), CohnMatrix(13, 8, 5)]
    assert zigzag_matrices((5, 1, 2), 3)[2] == CohnMatrix(194, 119, 73)
    assert zigzag_matrices((2, 1, 1), 3) == [CohnMatrix(2, 1, 1), CohnMatrix(5, 3, 2), CohnMatrix(29, 17, 10)]
    with pytest.raises(ValueError):
        zigzag_matrices((5, 1, 2), 0)


def test_long_zigzag_matrices():
    # Setup
    xs = zigzag_matrices((5, 1, 2), 22)
    nodes = maximal_zigzag((5, 1, 2), 22)

    # Test
    assert len(xs) == 22
    assert xs[-1].m > 10**4300
    assert [x.m for x in xs] == [node.m for node in nodes]
    assert all(x.det() == 1 for x in xs)
    assert fricke_check(xs[-3:])


def test_zigzag_matrices_are_cohn_matrices():
    # Test
    for x in zigzag_matrices((13, 1, 5), 8):
        assert x.det() == 1
        assert x.violations() == []


def test_ratio_bracket():
    # Test
    assert ratio_bracket(CohnMatrix(13, 8, 5)) == RatInterval(Fraction(19, 31), Fraction(27, 44))


def test_xi_enclosure():
    # Test
    coarse = xi_enclosure((5, 1, 2), Fraction(1, 100))
    assert coarse.contains(Fraction(19, 31))
    assert coarse.width() <= Fraction(1, 100)

    fine = xi_enclosure((5, 1, 2), PRECISION)
    assert fine.width() <= PRECISION
    assert coarse.contains(fine)
    assert Fraction(6134, 10000) < fine.lo and fine.hi < Fraction(6135, 10000)


def test_xi_enclosure_extended_root():
    # Test
    box = xi_enclosure((2, 1, 1), Fraction(1, 100))
    assert box.contains(Fraction(17, 29))
    assert Fraction(58, 100) < box.lo and box.hi < Fraction(59, 100)


def test_xi_enclosure_limits():
    # Test
    with pytest.raises(PrecisionExhausted):
        xi_enclosure((5, 1, 2), PRECISION, max_steps=3)
    with pytest.raises(ValueError):
        xi_enclosure((5, 1, 2), Fraction(0))


def test_conjugate_translation():
    # Test
    assert conjugate_translation(M) == Mat2(1, 3, 0, 1)


def test_xi_conjugates():
    # Setup
    pair = xi_conjugates((5, 1, 2), Fraction(1, 10**6))

    # Test
    assert pair.prime == pair.xi + 3
    assert pair.double_prime == pair.xi - 3
    assert Fraction(36134, 10000) < pair.prime.lo and pair.prime.hi < Fraction(36135, 10000)
    assert Fraction(-23866, 10000) < pair.double_prime.lo and pair.double_prime.hi < Fraction(-23865, 10000)
    assert pair.prime_matrix @ pair.double_prime_matrix == IDENTITY


def test_associated_form_min():
    # Test
    minimum = associated_form_min((5, 1, 2), 50, PRECISION)
    assert Fraction(99, 100) < minimum.lo
    assert minimum.hi < Fraction(1001, 1000)
    assert minimum.hi <= 1
    with pytest.raises(ValueError):
        associated_form_min((5, 1, 2), 0, PRECISION)


def test_best_approx():
    # Test
    assert best_approx((5, 1, 2), 1) == quadirr_make(21, -1, 221, 10)
    assert best_approx((5, 1, 2), 2) == quadirr_make(-23, 1, 1517, 26)
    with pytest.raises(ValueError):
        best_approx((5, 1, 2), 0)


def test_best_approx_closes_in_on_xi():
    # Setup
    xi = xi_enclosure((5, 1, 2), PRECISION)

    # Test
    gaps = [abs(xi - best_approx((5, 1, 2), i, check=False).enclosure(256)).hi for i in range(1, 5)]
    assert gaps == sorted(gaps, reverse=True)


def test_gamma_interval():
    # Setup
    golden = quadirr_make(1, 1, 5, 2)
    gamma = gamma_interval()

    # Test
    assert golden.compare(gamma.lo) >= 0
    assert golden.compare(gamma.hi) <= 0
    assert gamma.width() <= Fraction(1, 2**40)


def test_in_band():
    # Test
    assert in_band(RatInterval(Fraction(1, 2), Fraction(2)))
    assert not in_band(RatInterval(Fraction(1, 10**4), Fraction(2)))
    assert in_band(RatInterval(Fraction(1, 10**4), Fraction(2)), (Fraction(1, 10**5), Fraction(10)))


def test_approx_diagnostics_offsets():
    # Setup
    rows = approx_diagnostics((5, 1, 2), range(2, 6))

    # Test
    assert [row.i for row in rows] == [2, 3, 4, 5]
    assert [row.offset for row in rows] == [-3, 3, -3, 3]
    assert [row.height for row in rows] == sorted(row.height for row in rows)
    assert all(row.growth is not None for row in rows)
    with pytest.raises(ValueError):
        approx_diagnostics((5, 1, 2), [])


def test_approx_diagnostics_bands_up_to_twelve():
    # Setup
    rows = approx_diagnostics((5, 1, 2), range(4, 13))

    # Test
    assert [row.i for row in rows] == list(range(4, 13))
    assert all(row.in_band for row in rows)
    assert {row.offset for row in rows if row.i % 2} == {3}
    assert {row.offset for row in rows if not row.i % 2} == {-3}


def test_extremality_witness():
    # Setup
    rows = extremality_witness((5, 1, 2), [1, 13, 194])

    # Test
    assert [row.X for row in rows] == [1, 13, 194]
    assert rows[0].row[0] == 1
    assert rows[1].row == (13, 8, 5)
    assert rows[2].row == (194, 119, 73)
    with pytest.raises(ValueError):
        extremality_witness((5, 1, 2), [0])


def test_extremal_spec_translate_and_json():
    # Setup
    spec = ExtremalSpec(as_triple((5, 1, 2)))

    # Test
    moved = spec.translate(Mat2(-1, 0, 0, -1))
    assert moved.moebius == IDENTITY
    assert spec.to_json() == {"triple": [5, 1, 2], "moebius": [[1, 0], [0, 1]]}
    assert ExtremalSpec.from_json(spec.translate(Mat2(2, 1, 1, 1)).to_json()) == spec.translate(Mat2(2, 1, 1, 1))
    assert spec.digits(6) == Word.parse("111122")


def test_reduce_and_balance():
    # Setup
    spec = ExtremalSpec(as_triple((5, 1, 2)))
    balanced = reduce_and_balance(spec, PRECISION)

    # Test
    value, c1, c2 = spec_enclosures(balanced, PRECISION)
    assert 0 < value.lo and value.hi < 1
    assert c1.hi < -1 and c2.hi < -1
    assert (-c1).floor() != (-c2).floor()


def test_balance_idempotent_and_shift_invariant():
    # Setup
    spec = ExtremalSpec(as_triple((2, 1, 1)))
    balanced = balance_with_retry(spec, PRECISION)

    # Test
    assert balance_with_retry(balanced, PRECISION) == balanced
    assert balance_with_retry(spec.translate(Mat2(1, 7, 0, 1)), PRECISION) == balanced
