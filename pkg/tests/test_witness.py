import random

import pytest

from utimage import errors
from utimage.fields import FieldSpec
from utimage.freealg import MultilinearPoly, Permutation, parse_poly, symmetric_group
from utimage.sampling import random_pivot_coeffs
from utimage.witness import (
    AssignmentTable,
    StabilizerChain,
    base_assignment,
    eval_pivot,
    step_extend,
    witness_scalars,
)


def poly_from(coeff_map, m, spec):
    return MultilinearPoly(
        m, spec, {Permutation(k): spec.scalar(v) for k, v in coeff_map.items()}
    )


class TestStabilizerChain:
    def test_smallest_layer(self):
        chain = StabilizerChain(4)
        assert {p.images for p in chain.fixing_above(4)} == {
            (1, 2, 3, 4),
            (1, 3, 2, 4),
        }

    def test_fixing_first_size(self):
        for m in (2, 3, 4, 5):
            assert len(StabilizerChain(m).fixing_first()) == len(
                symmetric_group(m - 1)
            )

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_steps_partition_fixing_first(self, m):
        # Everything fixing 1 is the smallest layer plus the permutations
        # entering at each step, with no overlap.
        chain = StabilizerChain(m)
        seen = {p.images for p in chain.fixing_above(4)}
        for j in range(2, m - 1):
            entering = {p.images for p in chain.step_remainder(j)}
            assert not entering & seen
            seen |= entering
        assert seen == {p.images for p in chain.fixing_first()}


class TestAssignmentTable:
    def test_bounds(self, rational):
        table = AssignmentTable(5, 3, rational)
        with pytest.raises(errors.BadIndex):
            table.put(1, 2, rational.one)
        with pytest.raises(errors.BadIndex):
            table.put(2, 4, rational.one)

    def test_diagonal_matrix_skips_first_slot(self, rational):
        table = AssignmentTable(4, 2, rational)
        table.put(2, 2, rational.scalar(5))
        table.put(3, 2, rational.zero)
        d = table.diagonal_matrix(2)
        assert d.get(2, 3) == rational.scalar(5)
        assert d.get(1, 2).is_zero and d.get(3, 4).is_zero


class TestBaseAssignment:
    def test_degree_two_all_ones(self, rational):
        core = poly_from({(1, 2): 1}, 2, rational)
        table = base_assignment(core, 4)
        assert all(table.get(slot, 2).is_one for slot in (2, 3))

    def test_degree_three_without_swap(self, rational):
        core = poly_from({(1, 2, 3): 1, (1, 3, 2): 0}, 3, rational)
        table = base_assignment(core, 5)
        for slot in range(2, 5):
            assert table.get(slot, 2).is_one and table.get(slot, 3).is_one
        # every head sum is 1
        for k in (1, 2):
            assert eval_pivot(table, core, k).is_one

    def test_degree_three_with_swap_gf2(self, gf2):
        core = poly_from({(1, 2, 3): 1, (1, 3, 2): 1}, 3, gf2)
        table = base_assignment(core, 5)
        for slot in range(2, 5):
            if slot % 2 == 1:
                assert table.get(slot, 2).is_zero and table.get(slot, 3).is_one
            else:
                assert table.get(slot, 2).is_one and table.get(slot, 3).is_zero
        assert [eval_pivot(table, core, k).to_text() for k in (1, 2)] == ["1", "1"]

    def test_head_sums_are_one_or_swap_coeff(self, gf5):
        core = poly_from({(1, 2, 3): 1, (1, 3, 2): 3}, 3, gf5)
        table = base_assignment(core, 7)
        values = {eval_pivot(table, core, k).to_text() for k in range(1, 5)}
        assert values <= {"1", "3"}

    def test_requires_normalized(self, rational):
        core = poly_from({(1, 2): 2}, 2, rational)
        with pytest.raises(errors.NotNormalized):
            base_assignment(core, 4)


class TestStepExtend:
    def test_degenerate_remainder_keeps_partials(self, rational):
        # Support only on {identity, swap of 2 and 3}: every remainder sum
        # is empty, so the probe value 1 is always chosen.
        core = poly_from({(1, 2, 3, 4, 5): 1, (1, 3, 2, 4, 5): 2}, 5, rational)
        n = 8
        table = base_assignment(core, n)
        heads = [eval_head(table, core, k) for k in range(1, n - 4)]
        out = heads
        for j in (2, 3):
            out = step_extend(table, core, n, j, out)
            assert out == heads
            for k in range(1, n - 4):
                assert table.get(k + j + 1, j + 2).is_one

    def test_gf2_fallback_to_zero_probe(self, gf2):
        # Degree 4 over GF(2) with an extra monomial moving position 4:
        # at the second equation the probe 1 would cancel the head, so the
        # staircase must fall back to 0.  Values computed by hand.
        core = poly_from({(1, 2, 3, 4): 1, (1, 2, 4, 3): 1}, 4, gf2)
        n = 6
        table, pivots = witness_scalars(core, n)
        assert table.get(4, 4).is_one
        assert table.get(5, 4).is_zero
        assert [v.to_text() for v in pivots.values] == ["1", "1"]

    def test_step_bounds(self, rational):
        core = poly_from({(1, 2, 3, 4): 1}, 4, rational)
        table = base_assignment(core, 6)
        with pytest.raises(errors.BadIndex):
            step_extend(table, core, 6, 3, [rational.one, rational.one])

    def test_zero_partial_is_a_bug_signal(self, rational):
        core = poly_from({(1, 2, 3, 4): 1}, 4, rational)
        table = base_assignment(core, 6)
        with pytest.raises(errors.InternalInvariantViolation):
            step_extend(table, core, 6, 2, [rational.zero, rational.one])


def eval_head(table, core, k):
    """Length-2 head sum computed directly, for test-side comparisons."""
    swap = core.coefficient(Permutation.transposition(core.m, 2, 3))
    value = table.get(k + 1, 2) * table.get(k + 2, 3)
    return value + swap * table.get(k + 1, 3) * table.get(k + 2, 2)


def eval_staircase(table, core, k, depth):
    """The nested head value at a given depth, evaluated from scratch.

    Depth 1 is the length-2 head sum; each further level multiplies by the
    staircase cell and adds the remainder sum of permutations entering at
    that step.
    """
    chain = StabilizerChain(core.m)
    value = eval_head(table, core, k)
    for j in range(2, depth + 1):
        value = value * table.get(k + j + 1, j + 2)
        for sigma in chain.step_remainder(j):
            coeff = core.coefficient(sigma)
            if coeff.is_zero:
                continue
            prod = coeff
            for t in range(2, j + 3):
                prod = prod * table.get(k + t - 1, sigma(t))
            value = value + prod
    return value


class TestWitnessScalars:
    def test_degree_two_pivots_all_one(self, gf3):
        core = poly_from({(1, 2): 1}, 2, gf3)
        _table, pivots = witness_scalars(core, 5)
        assert [v.to_text() for v in pivots.values] == ["1", "1", "1"]

    def test_degree_three_swap_gf2(self, gf2):
        core = poly_from({(1, 2, 3): 1, (1, 3, 2): 1}, 3, gf2)
        _table, pivots = witness_scalars(core, 5)
        assert [v.to_text() for v in pivots.values] == ["1", "1"]

    def test_degree_four_plain_product(self, rational):
        core = parse_poly("x1*x2*x3*x4", rational).normalize().core
        table, pivots = witness_scalars(core, 6)
        assert [v.to_text() for v in pivots.values] == ["1", "1"]
        assert table.is_complete

    def test_requires_degree_below_dimension(self, rational):
        core = poly_from({(1, 2): 1}, 2, rational)
        with pytest.raises(errors.BadIndex):
            witness_scalars(core, 2)

    @pytest.mark.parametrize("field_text", ["gf:2", "gf:3", "gf:5", "rational"])
    def test_pivots_nonzero_randomized(self, field_text):
        # The module's central property: whatever the coefficients on the
        # permutations fixing 1 (identity coefficient one), the chosen
        # table makes every pivot sum nonzero.
        spec = FieldSpec.from_text(field_text)
        rng = random.Random("pivots:" + field_text)
        for _ in range(25):
            m = rng.randint(2, 6)
            core = random_pivot_coeffs(
                rng, spec, m, force_swap23=(m >= 3 and rng.random() < 0.5)
            )
            for n in range(m + 1, 9):
                table, pivots = witness_scalars(core, n)
                for k in range(1, n - m + 1):
                    direct = eval_pivot(table, core, k)
                    assert not direct.is_zero
                    assert direct == pivots.at(k)

    @pytest.mark.parametrize("field_text", ["gf:2", "rational"])
    def test_staircase_matches_direct_sums_at_every_depth(self, field_text):
        # Nested evaluation from the finished table must stay nonzero at
        # every depth and agree with the flat pivot sum at full depth.
        spec = FieldSpec.from_text(field_text)
        rng = random.Random("stairs:" + field_text)
        for _ in range(10):
            m = rng.randint(4, 6)
            n = rng.randint(m + 1, 8)
            core = random_pivot_coeffs(rng, spec, m, force_swap23=(m >= 3))
            table, pivots = witness_scalars(core, n)
            for k in range(1, n - m + 1):
                for depth in range(1, m - 1):
                    assert not eval_staircase(table, core, k, depth).is_zero
                assert eval_staircase(table, core, k, m - 2) == pivots.at(k)


class TestProbeCompleteness:
    @pytest.mark.parametrize("p", [2, 3])
    def test_exhaustive_over_small_fields(self, p):
        spec = FieldSpec.gf(p)
        for a in range(1, p):
            for b in range(p):
                head = spec.scalar(a)
                rem = spec.scalar(b)
                assert not (head + rem).is_zero or not rem.is_zero

    def test_random_rationals(self, rational):
        rng = random.Random("probe")
        for _ in range(200):
            head = rational.scalar(rng.randint(1, 9))
            rem = rational.scalar(rng.randint(-9, 9))
            assert not (head + rem).is_zero or not rem.is_zero
