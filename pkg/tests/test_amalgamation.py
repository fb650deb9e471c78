import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FAN_IN, FAN_IN_HEIGHT, TWO_SUMMANDS, surf
from ghs.amalgamation import (
    AmalgSide,
    AmalgSpec,
    amalgamate,
    amalgamation_candidates,
    amalgamation_obtained,
    canonical_data,
    consistent_partners,
    crossed_edges,
    fully_amalgamate,
    induced_height,
    merge_all,
    merge_tubes,
    self_amalgamate,
    spec_at,
)
from ghs.complexity import net_chi, predicted_genus
from ghs.core import Crossing, Hosted, is_heegaard, validate
from ghs.digraph import compute_height, is_acyclic, is_sphere_collection, verify_height
from ghs.errors import (
    CyclicInput,
    InconsistentSpec,
    NotAdjacent,
    NothingToMerge,
    NotSelfAmalgamatable,
    OrientationMismatch,
    TubeBudgetExceeded,
    UnknownId,
)
from ghs.generate import Limits, insert_product_pair, random_surface
from ghs.thinning import consolidate

THREE_CHAIN = """
    edge H1 thick genus=2 tail=a head=b
    edge T1 thin genus=1 tail=b head=c
    edge H2 thick genus=1 tail=c head=d
    edge T2 thin genus=1 tail=d head=e
    edge H3 thick genus=2 tail=e head=f
"""


def genus_of(g):
    assert is_heegaard(g)
    return g.thick_edges[0].genus


# -- amalgamate -----------------------------------------------------------------


@pytest.mark.parametrize("thin_genus, expected", [(0, 5), (1, 4)])
def test_amalgamate_genus(thin_genus, expected):
    g = surf(TWO_SUMMANDS.replace("edge F thin genus=0", f"edge F thin genus={thin_genus}"))
    out = amalgamate(g, AmalgSpec("H2", ("H1",)))
    assert genus_of(out) == expected
    assert net_chi(out) == net_chi(g)


def test_amalgamate_either_direction(two_summands):
    a = amalgamate(two_summands, AmalgSpec("H2", ("H1",)))
    b = amalgamate(two_summands, AmalgSpec("H1", ("H2",)))
    assert genus_of(a) == genus_of(b) == 5
    assert crossed_edges(two_summands, AmalgSpec("H1", ("H2",))) == ["F"]


def test_amalgamate_across_product_is_consolidation(chain):
    g2, h, f = insert_product_pair(chain, "F")
    partner = g2.plus_edge(g2.edge(f).head).id
    out = amalgamate(g2, AmalgSpec(h, (partner,)))
    cons = consolidate(g2, h, f)
    assert sorted((e.genus, e.role) for e in out.edges) == sorted((e.genus, e.role) for e in cons.edges)
    J = [e for e in out.edges if e.id not in g2.edge_map][0]
    assert J.genus == g2.edge(partner).genus == 3


def test_amalgamate_errors(two_summands):
    with pytest.raises(NotAdjacent):
        amalgamate(two_summands, AmalgSpec("H2", ("F",)))
    with pytest.raises(NotAdjacent):
        amalgamate(two_summands, AmalgSpec("H2", ("H2",)))
    with pytest.raises(OrientationMismatch):
        amalgamate(two_summands, AmalgSpec("H2", ("H1",), AmalgSide.PLUS_SIDE_BELOW))
    far = surf(THREE_CHAIN)
    with pytest.raises(NotAdjacent):
        amalgamate(far, AmalgSpec("H1", ("H3",)))
    with pytest.raises(OrientationMismatch):
        amalgamate(far, AmalgSpec("H2", ("H1", "H3")))
    with pytest.raises(UnknownId):
        amalgamate(two_summands, AmalgSpec("H2", ("H1",), tubes={"nope": 2}))
    # H2's near vertex C has handle count 3, so at most 6 extra tubes
    with pytest.raises(TubeBudgetExceeded):
        amalgamate(two_summands, AmalgSpec("H2", ("H1",), tubes={"F": 8}))


def test_tracked_objects_follow_amalgamation():
    g = surf(TWO_SUMMANDS + """
    edge G thin genus=0 tail=B head=C
    boundary dM genus=1 vertex=D
    sphere S host=C encloses=F,G
    sphere R edge=H1 count=2
    disc K edge=H2 count=1 boundary=dM
    """)
    out = amalgamate(g, AmalgSpec("H2", ("H1",)))
    J = out.thick_edges[0].id
    assert out.sphere_map["S"].location == Crossing(J, 2)
    assert out.sphere_map["R"].location == Crossing(J, 2)
    assert out.disc_map["K"].crossing == J and out.disc_map["K"].count == 1
    tubed = amalgamate(g, AmalgSpec("H2", ("H1",), tubes={"F": 2}))
    assert tubed.sphere_map["S"].location.count == 3


# -- height-consistent amalgamation ----------------------------------------------


def test_consistent_partners_examples(chain):
    f = compute_height(chain)
    assert consistent_partners(chain, f, "M2") == {"H1"}
    assert consistent_partners(chain, f, "M1") == {"H2"}
    assert consistent_partners(chain, f, "L1") == frozenset()
    g = surf(FAN_IN)
    assert consistent_partners(g, FAN_IN_HEIGHT, "t0") == {"L1", "L2"}


def test_consistent_partners_errors(chain, self_loop):
    with pytest.raises(CyclicInput):
        consistent_partners(self_loop, {"H": 1, "P": 2}, "A")
    with pytest.raises(InconsistentSpec):
        consistent_partners(chain, {"H1": 1, "F": 4, "H2": 3}, "M2")


def test_induced_height_chain(chain):
    f = compute_height(chain)
    spec = AmalgSpec("H2", ("H1",))
    out = amalgamate(chain, spec)
    f2 = induced_height(chain, f, spec)
    assert f2 == {out.thick_edges[0].id: 1}
    assert verify_height(out, f2)


def test_induced_height_fan_in():
    g = surf(FAN_IN)
    spec = spec_at(g, FAN_IN_HEIGHT, "t0")
    assert spec.partners == ("L1", "L2")
    f2 = induced_height(g, FAN_IN_HEIGHT, spec)
    assert f2["J"] == 15
    assert f2["F98"] == 14
    assert "F18" not in f2 and "F26" not in f2
    assert {k: f2[k] for k in ("B", "a", "c", "d", "L3")} == {"B": 1, "a": 6, "c": 6, "d": 10, "L3": 13}
    assert verify_height(amalgamate(g, spec), f2)


def test_induced_height_rejects_partial_partners():
    g = surf(FAN_IN)
    with pytest.raises(InconsistentSpec):
        induced_height(g, FAN_IN_HEIGHT, AmalgSpec("T", ("L1",)))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_height_induction(seed, data):
    g = random_surface(seed, Limits(max_thick=5))
    if len(g.thick_edges) < 2:
        return
    f = compute_height(g)
    c = data.draw(st.sampled_from(amalgamation_candidates(g)))
    spec = spec_at(g, f, c)
    out = amalgamate(g, spec)
    assert validate(out).ok
    assert is_acyclic(out)
    assert verify_height(out, induced_height(g, f, spec))
    assert net_chi(out) == net_chi(g)


# -- full amalgamation ------------------------------------------------------------


def test_fully_amalgamate_examples(two_summands, minimal):
    out, log = fully_amalgamate(two_summands)
    assert genus_of(out) == 5 and len(log) == 1
    g = surf(THREE_CHAIN)
    out, _ = fully_amalgamate(g)
    assert genus_of(out) == predicted_genus(g) == 3
    same, log = fully_amalgamate(minimal)
    assert same == minimal and log == []


def test_fully_amalgamate_cyclic(self_loop):
    with pytest.raises(CyclicInput):
        fully_amalgamate(self_loop)


def test_fully_amalgamate_keeps_boundary_marks():
    g = surf(THREE_CHAIN + """
    boundary x genus=1 vertex=a
    boundary y genus=2 vertex=f
    """)
    out, _ = fully_amalgamate(g)
    data = canonical_data(out)
    assert data[:3] == (predicted_genus(g), (1,), (2,))


# -- self-amalgamation and tubes -----------------------------------------------------


def test_self_amalgamate_examples(self_loop, minimal):
    assert genus_of(self_amalgamate(self_loop, ["P"])) == 3
    g = surf("""
    edge H thick genus=0 tail=A head=B
    edge P thin genus=0 tail=B head=A
    edge Q thin genus=0 tail=B head=A
    """)
    assert genus_of(self_amalgamate(g, ["P", "Q"])) == 2
    assert self_amalgamate(minimal, []) == minimal


def test_self_amalgamate_tracked(self_loop):
    g = surf("""
    edge H thick genus=1 tail=A head=B
    edge P thin genus=0 tail=B head=A
    edge Q thin genus=0 tail=B head=A
    sphere S host=A encloses=P,Q
    """)
    out = self_amalgamate(g, ["P", "Q"])
    assert out.sphere_map["S"].location.count == 2
    merged, steps = merge_all(out)
    assert merged.sphere_map["S"].location.count == 1 and len(steps) == 1


def test_self_amalgamate_errors(self_loop, two_summands):
    with pytest.raises(NotSelfAmalgamatable):
        self_amalgamate(two_summands, ["F"])
    with pytest.raises(NotSelfAmalgamatable):
        self_amalgamate(self_loop, [])
    torus = surf("""
    edge H thick genus=2 tail=A head=B
    edge T thin genus=1 tail=B head=A
    """)
    with pytest.raises(NotSelfAmalgamatable):
        self_amalgamate(torus, ["T"])


def test_merge_tubes(minimal):
    g = surf("edge H thick genus=2 tail=A head=B\nsphere S edge=H count=3\n")
    assert merge_tubes(g, "S").sphere_map["S"].location.count == 1
    once = surf("edge H thick genus=2 tail=A head=B\nsphere S edge=H count=1\n")
    with pytest.raises(NothingToMerge):
        merge_tubes(once, "S")
    with pytest.raises(UnknownId):
        merge_tubes(once, "nope")


# -- amalgamation obtained --------------------------------------------------------


def test_amalgamation_obtained_examples(two_summands, self_loop):
    assert amalgamation_obtained(two_summands)[0] == fully_amalgamate(two_summands)[0]
    assert genus_of(amalgamation_obtained(self_loop)[0]) == 3
    g = surf("""
    edge H thick genus=1 tail=A head=B
    edge P thin genus=0 tail=B head=A
    edge Q thin genus=0 tail=B head=A
    """)
    out, log = amalgamation_obtained(g)
    assert genus_of(out) == 3
    assert [step.op for step in log] == ["selfamalg"]


def _minimal_collections(g):
    spheres = sorted(e.id for e in g.thin_edges if e.genus == 0)
    good = [frozenset(c) for r in range(len(spheres) + 1)
            for c in itertools.combinations(spheres, r) if is_sphere_collection(g, c)]
    return [p for p in good if not any(q < p for q in good)]


def test_collection_choice_does_not_matter():
    compared = 0
    for seed in range(150):
        g = random_surface(seed, Limits(max_thick=4, loops=1 + seed % 3, spheres=2))
        options = _minimal_collections(g)
        if len(options) < 2:
            continue
        results = {canonical_data(amalgamation_obtained(g, collection=p)[0]) for p in options}
        assert len(results) == 1, (seed, options, results)
        compared += 1
    assert compared >= 20


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_amalgamation_obtained_reaches_predicted_genus(seed, loops):
    g = random_surface(seed, Limits(loops=loops, spheres=2, discs=1))
    out, _ = amalgamation_obtained(g)
    assert genus_of(out) == predicted_genus(g)
    before = {d.id: d.count for d in g.discs}
    assert {d.id: d.count for d in out.discs} == before


def test_monopod_counts():
    # with all tube counts 1 a sphere meets J once per crossed sphere it enclosed
    rng = random.Random(7)
    for seed in range(200):
        g = random_surface(seed, Limits(spheres=3))
        if len(g.thick_edges) < 2:
            continue
        f = compute_height(g)
        spec = spec_at(g, f, rng.choice(amalgamation_candidates(g)))
        crossed = set(crossed_edges(g, spec))
        out = amalgamate(g, spec)
        for s in g.spheres:
            if isinstance(s.location, Hosted) and s.location.encloses & crossed:
                assert out.sphere_map[s.id].location.count == len(s.location.encloses & crossed)
