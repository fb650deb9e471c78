"""Shared surface builders for the test suite."""
import textwrap

from ghs.core import require_valid
from ghs.io import parse_surface


def surf(body: str, validate: bool = True):
    """Parse a surface file body (header added); vertex lines may be left out."""
    g = parse_surface("ghs v1\n" + textwrap.dedent(body), validate=False)
    ends = {v for e in g.edges for v in (e.tail, e.head)} | {b.vertex for b in g.boundaries}
    g = g.replace(vertices=g.vertices | ends)
    return require_valid(g) if validate else g


MINIMAL = """
    edge H thick genus=2 tail=A head=B
    vertex A
    vertex B
"""

# L1 -H1-> M1 -F-> M2 -H2-> L2 with genera (2, 1, 3)
CHAIN = """
    vertex L1
    vertex M1
    vertex M2
    vertex L2
    edge H1 thick genus=2 tail=L1 head=M1
    edge F thin genus=1 tail=M1 head=M2
    edge H2 thick genus=3 tail=M2 head=L2
"""

# one thick surface and a thin sphere closing a loop
SELF_LOOP = """
    vertex A
    vertex B
    edge H thick genus=2 tail=A head=B
    edge P thin genus=0 tail=B head=A
"""

TWO_SUMMANDS = """
    vertex A
    vertex B
    vertex C
    vertex D
    edge H1 thick genus=2 tail=A head=B
    edge F thin genus=0 tail=B head=C
    edge H2 thick genus=3 tail=C head=D
"""

# top thick T over three thick neighbours at heights 15, 15, 13, which in
# turn sit over a bottom thick B
FAN_IN = """
    vertex b0
    vertex b1
    vertex l1
    vertex u1
    vertex l2
    vertex u2
    vertex l3
    vertex u3
    vertex t0
    vertex t1
    edge B thick genus=1 tail=b0 head=b1
    edge a thin genus=0 tail=b1 head=l1
    edge c thin genus=0 tail=b1 head=l2
    edge d thin genus=0 tail=b1 head=l3
    edge L1 thick genus=1 tail=l1 head=u1
    edge L2 thick genus=1 tail=l2 head=u2
    edge L3 thick genus=1 tail=l3 head=u3
    edge F18 thin genus=0 tail=u1 head=t0
    edge F26 thin genus=0 tail=u2 head=t0
    edge F98 thin genus=0 tail=u3 head=t0
    edge T thick genus=2 tail=t0 head=t1
"""

FAN_IN_HEIGHT = {
    "B": 1, "a": 6, "c": 6, "d": 10,
    "L1": 15, "L2": 15, "L3": 13,
    "F18": 18, "F26": 26, "F98": 98, "T": 101,
}


def random_height(g, rng, spread=2):
    """A random valid height function built along the edge order.

    Each edge gets the least value of the right parity above every edge it
    must exceed, plus a random even offset.
    """
    import graphlib

    before = {e.id: set() for e in g.edges}
    for v in g.vertices:
        plus = g.plus_edge(v)
        for e in g.thin_at(v):
            if plus.tail == v:
                before[plus.id].add(e.id)
            else:
                before[e.id].add(plus.id)
    f = {}
    for eid in graphlib.TopologicalSorter(before).static_order():
        low = max((f[p] for p in before[eid]), default=0) + 1
        want = 1 if g.edge(eid).is_thick else 0
        if low % 2 != want:
            low += 1
        f[eid] = low + 2 * rng.randint(0, spread)
    return f
