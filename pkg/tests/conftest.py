from hypothesis import strategies as st

from kforge.graph import INFINITY, Graph


@st.composite
def graphs(draw, max_vertices=4):
    n = draw(st.integers(1, max_vertices))
    vs = tuple(f"v{i}" for i in range(n))
    mult = {}
    for src in vs:
        for dst in vs:
            m = draw(st.sampled_from((0, 0, 0, 0, 1, 1, 2, 3, INFINITY)))
            if m != 0:
                mult[(src, dst)] = m
    return Graph(vs, mult)


def wv_graph():
    """Two loops at w, one loop at v, one edge v -> w."""
    return Graph(("w", "v"), {("w", "w"): 2, ("v", "v"): 1, ("v", "w"): 1})
