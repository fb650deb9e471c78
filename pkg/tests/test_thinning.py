import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import surf
from ghs.complexity import Order, compare_width, net_chi, width
from ghs.core import Crossing, Hosted, TrackedSphere, validate
from ghs.digraph import is_acyclic
from ghs.errors import (
    DegenerateConsolidation,
    EmptyPlan,
    GenusMismatch,
    MalformedTree,
    MissingAssignment,
    NotProduct,
    NotThinningMove,
    RealizabilityViolation,
    TrackedObjectConflict,
)
from ghs.generate import Limits, insert_product_pair, random_surface, random_tree
from ghs.io import parse_tree
from ghs.thinning import (
    Consolidate,
    Kind,
    Side,
    SplitTree,
    Untelescope,
    consolidate,
    enumerate_trees,
    greedy_consolidation,
    is_syntactically_thin,
    leaves,
    product_pairs,
    project,
    realizable_assignments,
    replay,
    small_plan_strategy,
    thin_to_local,
    type_ii_move,
    untelescope,
)

TWO_NONSEP = "[below,nonsep,[above,nonsep,.]]"


def genera(comps):
    return [c.genus for c in comps]


# -- split trees ---------------------------------------------------------------


@pytest.mark.parametrize(
    "text, root, expected",
    [
        ("[below,nonsep,.]", 3, [2]),
        (TWO_NONSEP, 3, [1]),
        ("[above,semi,.,.]", 2, [2, 0]),
        ("[below,sep:1,[above,semi,.,.],.]", 2, [1, 0, 1]),
    ],
)
def test_leaves(text, root, expected):
    assert [g for _, g in leaves(parse_tree(text, root))] == expected


@pytest.mark.parametrize(
    "text, root, side, expected",
    [
        ("[below,nonsep,.]", 3, Side.ABOVE, [3]),
        (TWO_NONSEP, 3, Side.BELOW, [2]),
        ("[above,semi,.,.]", 2, Side.BELOW, [2]),
        ("[below,sep:1,[above,semi,.,.],.]", 2, Side.BELOW, [1, 1]),
        ("[below,sep:1,[above,semi,.,.],.]", 2, Side.ABOVE, [2, 0]),
    ],
)
def test_project(text, root, side, expected):
    assert genera(project(parse_tree(text, root), side)) == expected


def test_project_groups_leaves():
    t = parse_tree("[above,semi,.,.]", 2)
    (comp,) = project(t, Side.BELOW)
    assert comp.leaves == (0, 1)


@pytest.mark.parametrize(
    "text, root",
    [
        ("[below,nonsep,.]", 0),
        ("[below,sep:2,.,.]", 2),
        ("[below,sep:0,.,.]", 2),
        ("[below,nonsep,.,.]", 2),
        ("[below,semi,.]", 2),
        ("[sideways,semi,.,.]", 2),
        ("[below,twist,.]", 2),
        ("[below,nonsep,.", 2),
    ],
)
def test_malformed_trees(text, root):
    with pytest.raises(MalformedTree):
        parse_tree(text, root)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 6), st.integers(0, 10_000))
def test_genus_arithmetic(genus, seed):
    t = random_tree(random.Random(seed), genus, max_events=5)
    leaf_total = sum(g for _, g in leaves(t))
    nonsep = sum(1 for e in t.events() if e.kind is Kind.NONSEP)
    assert genus == leaf_total + nonsep
    for side in Side:
        # projections satisfy the same bookkeeping with only their own events
        own = sum(1 for e in t.side_events(side) if e.kind is Kind.NONSEP)
        assert sum(genera(project(t, side))) + own == genus


# -- untelescoping --------------------------------------------------------------


def test_untelescope_genus_three():
    g = surf("edge H thick genus=3 tail=A head=B\n")
    out = untelescope(g, "H", parse_tree(TWO_NONSEP, 3))
    assert width(out) == (2, 2)
    assert [e.genus for e in out.thin_edges] == [1]
    assert net_chi(g) == net_chi(out) == 4
    assert is_acyclic(out)


def test_untelescope_sep_and_semi():
    g = surf("edge H thick genus=2 tail=A head=B\n")
    out = untelescope(g, "H", parse_tree("[below,sep:1,[above,semi,.,.],.]", 2))
    lower = sorted(e.genus for e in out.thick_edges if e.tail == "A" or e.tail.startswith("A_"))
    upper = sorted(e.genus for e in out.thick_edges if e.head == "B" or e.head.startswith("B_"))
    assert lower == [1, 1]
    assert upper == [0, 2]
    assert sorted(e.genus for e in out.thin_edges) == [0, 1, 1]
    assert net_chi(out) == net_chi(g)


def test_untelescope_keeps_endpoint_ids(chain):
    out = untelescope(chain, "H2", parse_tree(TWO_NONSEP, 3))
    assert {"M2", "L2"} <= out.vertices
    assert "H2" not in out.edge_map
    assert out.edge("F").head == "M2"


def test_untelescope_errors(chain):
    with pytest.raises(EmptyPlan):
        untelescope(chain, "H2", parse_tree("[above,nonsep,.]", 3))
    with pytest.raises(GenusMismatch):
        untelescope(chain, "H2", parse_tree(TWO_NONSEP, 2))
    with pytest.raises(NotThinningMove):
        untelescope(chain, "F", parse_tree("[below,nonsep,[above,semi,.,.]]", 1))
    # F (genus 1) lies below H2; a below separation 1+2 puts it on either piece
    split = "[below,sep:1,[above,nonsep,.],.]"
    with pytest.raises(MissingAssignment):
        untelescope(chain, "H2", parse_tree(split, 3))
    out = untelescope(chain, "H2", parse_tree(split, 3, {"F": 1}))
    assert validate(out).ok
    # a genus 3 edge carrying a genus 3 thin surface cannot compress below
    g = surf("""
    edge K thick genus=3 tail=a head=b
    edge T thin genus=3 tail=b head=c
    edge H thick genus=3 tail=c head=d
    """)
    with pytest.raises(RealizabilityViolation):
        untelescope(g, "H", parse_tree(TWO_NONSEP, 3))


def test_untelescope_tracked_objects():
    g = surf("""
    edge K thick genus=1 tail=a head=b
    edge P thin genus=0 tail=b head=c
    edge H thick genus=2 tail=c head=d
    sphere S host=c encloses=P
    """)
    out = untelescope(g, "H", parse_tree("[below,nonsep,[above,nonsep,.]]", 2))
    assert out.sphere_map["S"].location == Hosted("c", frozenset({"P"}))
    crossing = g.replace(spheres=[TrackedSphere("S", Crossing("H", 1))])
    with pytest.raises(TrackedObjectConflict):
        untelescope(crossing, "H", parse_tree("[below,nonsep,[above,nonsep,.]]", 2))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10_000))
def test_type_one_untelescoping_properties(seed):
    rng = random.Random(seed)
    g = random_surface(seed, Limits())
    big = [H for H in g.thick_edges if H.genus >= 2]
    if not big:
        return
    H = rng.choice(big)
    trees = [t for t in enumerate_trees(H.genus, 3) if t.is_type_one]
    t = rng.choice(trees)
    options = list(realizable_assignments(g, H.id, t))
    if not options:
        return
    out = untelescope(g, H.id, t.with_assignment(rng.choice(options)))
    assert validate(out).ok
    assert compare_width(width(out), width(g)) is Order.LT
    assert net_chi(out) == net_chi(g)
    assert is_acyclic(out)
    old = {e.id for e in g.edges}
    assert all(e.genus < H.genus for e in out.thin_edges if e.id not in old)


# -- consolidation ---------------------------------------------------------------

PRODUCT_CHAIN = """
    edge H1 thick genus=3 tail=A head=B
    edge F thin genus=2 tail=B head=C
    edge K thick genus=2 tail=C head=D
    edge G thin genus=1 tail=D head=E
    edge H2 thick genus=2 tail=E head=X
"""


def test_consolidate_shortens_chain():
    g = surf(PRODUCT_CHAIN)
    assert product_pairs(g) == [("K", "F")]
    out = consolidate(g, "K", "F")
    assert sorted(e.id for e in out.edges) == ["G", "H1", "H2"]
    assert out.edge("G").tail == "B"
    assert width(out) == (3, 2)
    assert net_chi(out) == net_chi(g)
    assert compare_width(width(out), width(g)) is Order.LT


def test_consolidate_errors(chain):
    with pytest.raises(NotProduct):
        consolidate(chain, "H1", "F")
    degenerate = surf("""
    edge H thick genus=0 tail=A head=B
    edge P thin genus=0 tail=B head=A
    """)
    assert product_pairs(degenerate) == []
    with pytest.raises(DegenerateConsolidation):
        consolidate(degenerate, "H", "P")


def test_consolidate_rehosts_spheres():
    g = surf(PRODUCT_CHAIN.replace("edge G thin genus=1", "edge G thin genus=0")
             + "    sphere S host=D encloses=G\n")
    out = consolidate(g, "K", "F")
    assert out.sphere_map["S"].location == Hosted("B", frozenset({"G"}))


def test_insert_then_consolidate_restores(chain):
    g2, h, f = insert_product_pair(chain, "F")
    assert len(product_pairs(g2)) == 2
    back = consolidate(g2, h, f)
    assert sorted((e.id, e.genus, e.role) for e in back.edges) == \
        sorted((e.id, e.genus, e.role) for e in chain.edges)


# -- type II ---------------------------------------------------------------------

TYPE_TWO = """
    edge Q thick genus=2 tail=q0 head=q1
    edge T thin genus=2 tail=q1 head=a
    edge H thick genus=2 tail=a head=b
"""


def test_type_two_move():
    g = surf(TYPE_TWO)
    t = parse_tree("[below,semi,[above,nonsep,.],.]", 2)
    assert t.semi_side() is Side.BELOW
    out = type_ii_move(g, "H", t, "T")
    assert width(out) == (2, 1, 0)
    assert compare_width(width(out), width(g)) is Order.LT
    assert net_chi(out) == net_chi(g)
    assert "T" not in out.edge_map and "Q" in out.edge_map


@pytest.mark.parametrize("text", [TWO_NONSEP, "[below,semi,[above,semi,.,.],.]"])
def test_type_two_rejects_other_plans(text):
    g = surf(TYPE_TWO)
    with pytest.raises(NotThinningMove):
        type_ii_move(g, "H", parse_tree(text, 2), "T")


# -- search ----------------------------------------------------------------------


def test_greedy_consolidation_on_two_products(chain):
    g, _, _ = insert_product_pair(chain, "F", "p")
    g, _, _ = insert_product_pair(g, "F", "q")
    out, log = thin_to_local(g, greedy_consolidation)
    assert len(log) == 2
    assert all(isinstance(m, Consolidate) for m in log.moves)
    assert is_syntactically_thin(out)
    assert replay(g, log) == out
    assert width(out) == width(chain)


def test_small_plan_strategy_genus_three():
    g = surf("edge H thick genus=3 tail=A head=B\n")
    out, log = thin_to_local(g, small_plan_strategy())
    rounds = sum(isinstance(m, Untelescope) for m in log.moves)
    assert 1 <= rounds <= 3
    chain = [tuple(width(g))] + log.widths
    assert all(compare_width(b, a) is Order.LT for a, b in zip(chain, chain[1:]))
    assert replay(g, log) == out
    assert small_plan_strategy()(out) is None


def test_empty_strategy(chain):
    out, log = thin_to_local(chain)
    assert out == chain and len(log) == 0


def test_failed_move_keeps_partial_log():
    g = surf(PRODUCT_CHAIN)
    moves = iter([Consolidate("K", "F"), Consolidate("K", "F")])
    with pytest.raises(Exception) as err:
        thin_to_local(g, lambda s: next(moves, None))
    assert len(err.value.partial_log) == 1


def test_apply_rejects_one_sided_untelescoping():
    g = surf("edge H thick genus=2 tail=A head=B\n")
    t = parse_tree("[below,semi,[above,nonsep,.],.]", 2)
    with pytest.raises(NotThinningMove):
        thin_to_local(g, lambda s: Untelescope("H", t) if s == g else None)


def test_split_tree_assignment_normalized():
    t = SplitTree(2, assignment={"b": 1, "a": 0})
    assert t.assignment == (("a", 0), ("b", 1))
    assert t.with_assignment({"c": 2}).assignment_map == {"c": 2}
