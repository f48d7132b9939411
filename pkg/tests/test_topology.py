"""Tests for cylinders, clopen sets, separation and convergence."""
import numpy as np
import pytest

from ultrashift.errors import InvalidCylinder, LengthZeroPoint, PointsEqual
from ultrashift.literals import parse_cylinder
from ultrashift.oracle import TruncatedGraph, distinct_pairs, enumerate_points, naive_cylinder_member
from ultrashift.setcalc import UPSet
from ultrashift.topology import (
    FullCylinder,
    RestrictedCylinder,
    clopen_op,
    converges,
    cyl_to_clopen,
    density_sequence,
    empty,
    exterior_neighborhood,
    graft,
    neighborhood,
    separate,
    shift_image,
    subtree,
    union_all,
    vertex_clopen,
    whole,
)
from ultrashift.ultrapath import InfinitePath, Ultrapath

COFIN3 = UPSet.periodic(3, 1, "1")
ODDS = UPSet.periodic(1, 2, "10")
EVENS = UPSet.periodic(2, 2, "10")

CYLINDERS = [
    "full e1:[ap(3,1,1)]",
    "restricted :[ap(3,1,1)] without e3",
    "full :[fin{1,2}]",
    "full e2.e4:[all]",
]
SPACES = ["example1", "matrix_a", "matrix_b"]
OPERATIONS = {
    "union": lambda a, b: a or b,
    "intersect": lambda a, b: a and b,
    "difference": lambda a, b: a and not b,
}


@pytest.fixture(scope="module")
def sample(example1):
    return enumerate_points(example1, prefix_len=3, cycle_len=2, cap=4)


class TestCylinders:
    """Normal forms of basis elements."""

    def test_restricted_plus_excluded_edges(self, example1):
        """D_(alpha,A) is D_(alpha,A),F together with D_(alpha e, r(e)) for e in F."""
        full = cyl_to_clopen(example1, FullCylinder((), COFIN3))
        pieces = [cyl_to_clopen(example1, RestrictedCylinder((), COFIN3, UPSet.finite([3, 4])))]
        pieces += [cyl_to_clopen(example1, FullCylinder((e,), example1.range(e))) for e in (3, 4)]
        assert union_all(example1, pieces) == full

    @pytest.mark.parametrize("name", SPACES)
    def test_restricted_plus_excluded_edges_everywhere(self, request, name):
        """The same decomposition for every (beta, A) with |beta| <= 3 and up to two excluded edges."""
        space = request.getfixturevalue(name)
        bases = [x for x in enumerate_points(space, prefix_len=3, cycle_len=1, cap=6)
                 if isinstance(x, Ultrapath)]
        assert bases
        for x in bases:
            full = cyl_to_clopen(space, FullCylinder(x.edges, x.terminal))
            following = list(space.epsilon(x.terminal).members_upto(6))
            for size in range(3):
                excluded = following[:size]
                restricted = RestrictedCylinder(x.edges, x.terminal, UPSet.finite(excluded))
                pieces = [cyl_to_clopen(space, restricted)]
                pieces += [cyl_to_clopen(space, FullCylinder(x.edges + (e,), space.range(e)))
                           for e in excluded]
                assert union_all(space, pieces) == full, (str(x), excluded)

    def test_normal_form_is_unique(self, example1):
        """Different descriptions of one set give equal clopens."""
        first = cyl_to_clopen(example1, parse_cylinder("full e1:[ap(3,1,1)]"))
        second = cyl_to_clopen(example1, parse_cylinder("restricted e1:[ap(3,1,1)]"))
        assert first == second
        assert str(first) == ".: next fin{1}"

    def test_empty_rendering(self, example1):
        """The empty clopen prints as empty."""
        assert str(empty(example1)) == "empty"

    def test_range_not_contained(self, example1):
        """The vertex set must lie inside r(alpha)."""
        with pytest.raises(InvalidCylinder, match="not contained"):
            cyl_to_clopen(example1, FullCylinder((1,), UPSet.full()))

    def test_restricted_needs_emitter(self, example1):
        """Restricted cylinders sit on minimal infinite emitters."""
        with pytest.raises(InvalidCylinder, match="minimal infinite emitter"):
            cyl_to_clopen(example1, RestrictedCylinder((), UPSet.full(), UPSet.empty()))

    def test_excluded_edges_from_emitter(self, example1):
        """Excluded edges leave the emitter."""
        with pytest.raises(InvalidCylinder, match="epsilon"):
            cyl_to_clopen(example1, RestrictedCylinder((), COFIN3, UPSet.finite([1])))

    def test_vertex_clopen(self, example1):
        """X_v holds the points leaving v."""
        x1 = vertex_clopen(example1, 1)
        assert x1.member(InfinitePath((1,), (3,)))
        assert not x1.member(InfinitePath((2,), (3,)))


class TestClopenCalculus:
    """Boolean operations checked against membership by definition."""

    @pytest.mark.parametrize("kind", sorted(OPERATIONS))
    def test_matches_pointwise(self, example1, sample, kind):
        """Membership in a combination agrees with the combined memberships."""
        graph = TruncatedGraph(example1, 4)
        cylinders = [parse_cylinder(text) for text in CYLINDERS]
        for a in cylinders:
            for b in cylinders:
                combined = clopen_op(kind, cyl_to_clopen(example1, a), cyl_to_clopen(example1, b))
                for x in sample:
                    expected = OPERATIONS[kind](naive_cylinder_member(graph, a, x),
                                                naive_cylinder_member(graph, b, x))
                    assert combined.member(x) == expected, (kind, str(a), str(b), str(x))

    def test_complement(self, example1, sample):
        """Complements partition the space."""
        c = cyl_to_clopen(example1, parse_cylinder("full e2.e4:[all]"))
        rest = c.complement()
        assert (c | rest) == whole(example1)
        assert c.is_disjoint(rest)
        assert all(c.member(x) != rest.member(x) for x in sample)

    def test_unknown_operation(self, example1):
        """Only the three set operations exist."""
        with pytest.raises(ValueError, match="unknown clopen operation"):
            clopen_op("xor", empty(example1), empty(example1))

    def test_subtree_and_graft(self, example1):
        """Cutting a prefix and putting it back is the identity."""
        c = cyl_to_clopen(example1, FullCylinder((1, 3), UPSet.full()))
        inner = subtree(c, (1,))
        assert inner == cyl_to_clopen(example1, FullCylinder((), UPSet.finite([3])))
        assert graft(inner, (1,)) == c

    def test_shift_image(self, example1):
        """sigma(D_(e1, r(e1))) = D_r(e1)."""
        c = cyl_to_clopen(example1, parse_cylinder("full e1:[ap(3,1,1)]"))
        assert shift_image(c) == cyl_to_clopen(example1, FullCylinder((), COFIN3))

    def test_shift_image_needs_positive_length(self, example1):
        """Length-zero points are fixed, so their image is not computed."""
        with pytest.raises(LengthZeroPoint):
            shift_image(whole(example1))


class TestSeparation:
    """Hausdorff separation and neighborhoods."""

    def test_separates_sample(self, example1):
        """Every pair of distinct sample points gets disjoint neighborhoods."""
        points = enumerate_points(example1, prefix_len=1, cycle_len=1, cap=4)
        for x, y in distinct_pairs(points):
            first, second = separate(example1, x, y)
            a, b = cyl_to_clopen(example1, first), cyl_to_clopen(example1, second)
            assert a.member(x) and b.member(y), (str(x), str(y))
            assert a.is_disjoint(b), (str(x), str(y))

    @pytest.mark.parametrize("name", SPACES)
    def test_separates_random_pairs(self, request, name):
        """Seeded pairs of points with prefixes up to 3, cycles up to 2 and edges up to 6."""
        space = request.getfixturevalue(name)
        points = enumerate_points(space, prefix_len=3, cycle_len=2, cap=6)
        rng = np.random.default_rng(20)
        checked = 0
        for i, j in rng.integers(0, len(points), size=(3000, 2)):
            x, y = points[i], points[j]
            if x == y:
                continue
            first, second = separate(space, x, y)
            a, b = cyl_to_clopen(space, first), cyl_to_clopen(space, second)
            assert a.member(x) and b.member(y), (str(x), str(y))
            assert a.is_disjoint(b), (str(x), str(y))
            checked += 1
        assert checked > 2900

    def test_distinct_emitters(self, matrix_b):
        """Length-zero points on disjoint emitters."""
        first, second = separate(matrix_b, Ultrapath((), ODDS), Ultrapath((), EVENS))
        assert first == FullCylinder((), ODDS)
        assert second == FullCylinder((), EVENS)

    def test_equal_points(self, example1):
        """A point cannot be separated from itself."""
        x = InfinitePath((1,), (3,))
        with pytest.raises(PointsEqual):
            separate(example1, x, x)

    def test_neighborhood(self, example1):
        """Infinite paths get full cylinders on their first edges."""
        x = InfinitePath((1,), (3,))
        assert neighborhood(example1, x, 2) == FullCylinder((1, 3), UPSet.full())
        finite = Ultrapath((1,), COFIN3)
        assert neighborhood(example1, finite, excluded=UPSet.finite([1, 3])) == RestrictedCylinder(
            (1,), COFIN3, UPSet.finite([3])
        )

    def test_exterior_neighborhood(self, example1):
        """A basis element around a point outside a clopen set misses the set."""
        clopen = cyl_to_clopen(example1, parse_cylinder("full e1:[ap(3,1,1)]"))
        for x in (InfinitePath((2,), (3,)), Ultrapath((), COFIN3)):
            around = cyl_to_clopen(example1, exterior_neighborhood(example1, x, clopen))
            assert around.member(x)
            assert around.is_disjoint(clopen)
        with pytest.raises(ValueError):
            exterior_neighborhood(example1, InfinitePath((1,), (3,)), clopen)


class TestConvergence:
    """Sequences approaching points."""

    def test_density_sequence_converges(self, example1):
        """Infinite paths through ever later edges approach the finite point."""
        target = Ultrapath((1,), COFIN3)
        sequence = density_sequence(example1, target, 100)
        assert sequence[0] == InfinitePath((1,), (3, 1))
        verdict = converges(example1, sequence, target)
        assert verdict.verdict == "certificate"
        assert verdict.horizon == 100
        assert verdict.witness is None

    def test_constant_sequence_does_not_converge(self, example1):
        """A fixed path through e_3 stays out of the neighborhood excluding e_3."""
        sequence = [InfinitePath((1,), (3,))] * 20
        verdict = converges(example1, sequence, Ultrapath((1,), COFIN3))
        assert verdict.verdict == "counterexample"
        assert verdict.witness.description == "F = {e_3}"

    def test_eventually_constant_rule(self, example1):
        """A callable sequence that settles on an infinite target."""
        target = InfinitePath((1,), (3,))

        def term(n):
            return target if n > 3 else InfinitePath((2,), (3,))

        verdict = converges(example1, term, target, horizon=10)
        assert verdict.verdict == "certificate"
        assert all(t.settled_from == 4 for t in verdict.tests)
