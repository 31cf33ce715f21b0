import numpy as np
import pytest

from vzopt.cfo import DecisionSpace, init_probe_lines
from vzopt.errors import RangeError
from vzopt.quasirandom import MAX_INDEX, halton_ipd, primes_up_to, radical_inverse

BASE2 = [(0, 0.0), (2, 0.25), (3, 0.75), (4, 0.125), (6, 0.375), (7, 0.875), (15, 0.9375),
         (120, 0.1171875), (121, 0.6171875), (532, 0.1572265625)]
# the printed decimal for 532 (0.422496570544719) disagrees with its own
# mirrored digits 0.102102 (base 3) = 308/729; the digits are used here
BASE3 = [(0, 0.0), (2, 2 / 3), (3, 1 / 9), (7, 5 / 9), (120, 0.164609053497942), (532, 308 / 729)]
BASE5 = [(0, 0.0), (1, 0.2), (2, 0.4), (3, 0.6), (4, 0.8), (5, 0.04), (7, 0.44), (17, 0.52),
         (121, 0.392), (532, 0.4544)]


@pytest.mark.parametrize("n,want", BASE2)
def test_base2_check_values_exact(n, want):
    assert radical_inverse(n, 2) == want


@pytest.mark.parametrize("n,want", BASE5)
def test_base5_check_values_exact(n, want):
    assert radical_inverse(n, 5) == want


@pytest.mark.parametrize("n,want", BASE3)
def test_base3_check_values(n, want):
    assert radical_inverse(n, 3) == pytest.approx(want, abs=1e-12)


def test_base3_printed_decimal_is_a_typo():
    assert abs(308 / 729 - 0.422496570544719) > 9e-11
    assert radical_inverse(532, 3) == 308 / 729


def test_digit_mirror_by_hand():
    # 532 = 4112 in base 5, mirrored 0.2114 in base 5
    assert radical_inverse(532, 5) == (2 * 125 + 1 * 25 + 1 * 5 + 4) / 625


def test_range_and_injectivity():
    for b in (2, 3, 5, 7):
        k = 6 if b < 5 else 4
        vals = [radical_inverse(n, b) for n in range(b**k)]
        assert all(0.0 <= v < 1.0 for v in vals)
        assert len(set(vals)) == len(vals)


def test_near_one_stays_below_one():
    assert radical_inverse(2**62 - 1, 2) < 1.0
    assert radical_inverse(MAX_INDEX, 2) < 1.0


@pytest.mark.parametrize("n,b", [(-1, 2), (MAX_INDEX + 1, 2), (3, 1), (3, 0)])
def test_bad_arguments_raise(n, b):
    with pytest.raises(RangeError):
        radical_inverse(n, b)


def test_prime_counts():
    assert len(primes_up_to(2000)) == 303
    assert len(primes_up_to(7919)) == 1000
    assert primes_up_to(7919)[-1] == 7919
    assert primes_up_to(2) == [2]


def test_primes_against_trial_division():
    def is_prime(k):
        return k >= 2 and all(k % d for d in range(2, int(k**0.5) + 1))

    got = primes_up_to(10_000)
    assert got == [k for k in range(10_001) if is_prime(k)]


def test_primes_bad_limit():
    with pytest.raises(RangeError):
        primes_up_to(1)


def test_halton_ipd_is_probe_lines():
    sp = DecisionSpace([-1, 0, 2], [1, 4, 3])
    assert np.array_equal(halton_ipd(sp, 4, 0.3), init_probe_lines(sp, 4, 0.3))
