from fractions import Fraction

import pytest

from k3glue.gluing import (
    GlueComponent,
    GlueMap,
    NoGlueMapError,
    anti_isometry_scalars,
    extend_isometry,
    find_glue_map,
    glue,
    verify_glue_map,
)
from k3glue.lattices import (
    Lattice,
    TorsionValue,
    check_isometry,
    glue_group,
    induced_glue_action,
)
from k3glue.matrices import IntMatrix


def tv(value):
    return TorsionValue.reduce(Fraction(value), 2)


def identity_action(lattice):
    iso = check_isometry(lattice, IntMatrix.identity(lattice.rank))
    return induced_glue_action(iso)


def glue_with_identities(l1, l2):
    gmap = find_glue_map(
        glue_group(l1), glue_group(l2), identity_action(l1), identity_action(l2)
    )
    return gmap, glue(l1, l2, gmap)


def test_anti_isometry_scalars():
    # opposite values: c^2 (8/5) + 2/5 = 0 mod 2 iff c^2 = 1 mod 5
    assert anti_isometry_scalars(tv(Fraction(2, 5)), tv(Fraction(8, 5)), 5) == (1, 4)
    # equal values: c^2 (2/5) + 2/5 = 0 mod 2 iff c^2 = -1 mod 5
    assert anti_isometry_scalars(tv(Fraction(2, 5)), tv(Fraction(2, 5)), 5) == (2, 3)
    assert anti_isometry_scalars(tv(Fraction(1, 2)), tv(Fraction(1, 2)), 2) == ()
    assert anti_isometry_scalars(tv(Fraction(1, 2)), tv(Fraction(3, 2)), 2) == (1,)
    with pytest.raises(ValueError):
        anti_isometry_scalars(TorsionValue.reduce(Fraction(1, 2), 1), tv(1), 2)


def test_toy_glue_rank_one():
    l1, l2 = Lattice([[2]]), Lattice([[-2]])
    gmap, result = glue_with_identities(l1, l2)
    amb = result.ambient
    assert amb.rank == 2
    assert amb.is_even() and amb.is_unimodular()
    assert amb.signature() == (1, 1)
    assert result.index == 2
    assert result.index**2 * abs(amb.det) == abs(l1.det) * abs(l2.det)
    assert verify_glue_map(gmap, identity_action(l1), identity_action(l2)) is None


def test_toy_glue_order_six():
    l1, l2 = Lattice([[6]]), Lattice([[-6]])
    gmap, result = glue_with_identities(l1, l2)
    assert result.ambient.invariants() == {
        "rank": 2,
        "even": True,
        "unimodular": True,
        "det": -1,
        "signature": (1, 1),
    }
    assert result.index == 6


def test_glue_exhaustive_two_generator_component():
    # 2-parts of shape (2, 2) take the exhaustive search path
    l1 = Lattice([[2, 0], [0, 2]])
    l2 = Lattice([[-2, 0], [0, -2]])
    _, result = glue_with_identities(l1, l2)
    assert result.ambient.rank == 4
    assert result.ambient.is_even() and result.ambient.is_unimodular()
    assert result.ambient.signature() == (2, 2)
    assert result.index == 4


def test_glue_trivial_groups():
    h = Lattice([[0, 1], [1, 0]])
    gmap, result = glue_with_identities(h, h)
    assert gmap.components == ()
    assert result.index == 1
    assert result.ambient.rank == 4
    assert result.ambient.is_unimodular()


def test_no_glue_map_form_obstruction():
    l = Lattice([[2]])
    with pytest.raises(NoGlueMapError) as exc:
        find_glue_map(glue_group(l), glue_group(l), identity_action(l), identity_action(l))
    assert exc.value.obstruction == "form mismatch"


def test_no_glue_map_equivariance_obstruction():
    l1, l2 = Lattice([[6]]), Lattice([[-6]])
    neg = check_isometry(l1, [[-1]])
    with pytest.raises(NoGlueMapError) as exc:
        find_glue_map(
            glue_group(l1),
            glue_group(l2),
            induced_glue_action(neg),
            identity_action(l2),
        )
    assert exc.value.obstruction == "equivariance mismatch"


def test_group_shape_rejections():
    l2, l6 = Lattice([[2]]), Lattice([[6]])
    with pytest.raises(ValueError, match="different orders"):
        find_glue_map(glue_group(l2), glue_group(l6), identity_action(l2), identity_action(l6))
    odd = Lattice([[1]])
    modd = Lattice([[-1]])
    with pytest.raises(ValueError, match="even"):
        find_glue_map(glue_group(odd), glue_group(modd), identity_action(odd), identity_action(modd))
    with pytest.raises(ValueError, match="do not belong"):
        find_glue_map(glue_group(l2), glue_group(l2), identity_action(l6), identity_action(l2))


def test_sylow_shape_mismatch():
    # same order 16, different 2-part shapes: (4, 4) vs (2, 8)
    l1 = Lattice([[4, 0], [0, 4]])
    l2 = Lattice([[-2, 0], [0, -8]])
    with pytest.raises(NoGlueMapError) as exc:
        find_glue_map(glue_group(l1), glue_group(l2), identity_action(l1), identity_action(l2))
    assert exc.value.obstruction == "group mismatch"


def test_graph_pairs_and_matches_classes():
    l1, l2 = Lattice([[6]]), Lattice([[-6]])
    gmap, _ = glue_with_identities(l1, l2)
    for x, y in gmap.graph_pairs():
        assert l1.in_dual(x) and l2.in_dual(y)
        assert gmap.matches_classes(x, y)
        # the pairing must be anti-isometric on the graph
        q1 = glue_group(l1).quadratic(x).value
        q2 = glue_group(l2).quadratic(y).value
        assert (q1 + q2) % 2 == 0
    assert not gmap.matches_classes((Fraction(1, 6),), (Fraction(5, 6),))


def test_verify_glue_map_detects_corruption():
    l1, l2 = Lattice([[10]]), Lattice([[-10]])
    gmap, _ = glue_with_identities(l1, l2)
    a1, a2 = identity_action(l1), identity_action(l2)
    assert verify_glue_map(gmap, a1, a2) is None
    assert [gc.prime for gc in gmap.components] == [2, 5]
    gc = next(c for c in gmap.components if c.prime == 5)
    valid = anti_isometry_scalars(
        glue_group(l1).quadratic(gc.comp1.lifts[0]),
        glue_group(l2).quadratic(gc.comp2.lifts[0]),
        5,
    )
    bad_scalar = next(c for c in range(1, 5) if c not in valid)
    components = [
        GlueComponent(c.prime, IntMatrix([[bad_scalar]]), c.comp1, c.comp2)
        if c.prime == 5
        else c
        for c in gmap.components
    ]
    bad = GlueMap(gmap.group1, gmap.group2, components)
    assert verify_glue_map(bad, a1, a2) == "5: form mismatch"


def test_extend_isometry_diagonal():
    l1, l2 = Lattice([[6]]), Lattice([[-6]])
    gmap, result = glue_with_identities(l1, l2)
    neg1 = check_isometry(l1, [[-1]])
    neg2 = check_isometry(l2, [[-1]])
    ext = extend_isometry(result, neg1, neg2)
    assert ext.matrix == -1 * IntMatrix.identity(2)
    with pytest.raises(ValueError, match="not integral"):
        extend_isometry(result, neg1, check_isometry(l2, [[1]]))
