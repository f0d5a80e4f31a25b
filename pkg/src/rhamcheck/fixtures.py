"""Reusable geometric fixtures: rational circle arcs and their products.

Nonconstant polynomial maps into a compact variety like the circle do
not exist, so the circle is covered by four rational quarter arcs via
the half-tangent parametrization

    arc(u) = ((1 - u^2)/(1 + u^2), 2u/(1 + u^2)),

rotated by multiples of a quarter turn.  Each arc carries angle pi/2
against the winding form x dy - y dx; four of them close up into a loop
with total period 2 pi, and products of two loops triangulate the torus
into 32 rational triangles.
"""

from __future__ import annotations

from .comparison import ParamSimplex, SingularFamily, VarietyPresentation
from .derham import FpAlgebra


def arc_component_texts(k, u):
    """Component strings of the k-th quarter arc at parameter expression u."""
    u = "(%s)" % u
    den = "(1 + %s^2)" % u
    cos_like = "(1 - %s^2)/%s" % (u, den)
    sin_like = "2*%s/%s" % (u, den)
    k = k % 4
    if k == 0:
        return [cos_like, sin_like]
    if k == 1:
        return ["-%s" % sin_like, cos_like]
    if k == 2:
        return ["-%s" % cos_like, "-%s" % sin_like]
    return [sin_like, "-%s" % cos_like]


def circle_algebra():
    return FpAlgebra(("x", "y"), ["x^2 + y^2 - 1"])


def two_points_algebra():
    return FpAlgebra(("x",), ["x^2 - 1"])


def circle_times_points_algebra():
    return FpAlgebra(("x", "y", "s"), ["x^2 + y^2 - 1", "s^2 - s"])


def torus_algebra():
    return FpAlgebra(("x", "y", "z", "w"), ["x^2 + y^2 - 1", "z^2 + w^2 - 1"])


def circle_loop_family(variety=None):
    """The four-arc loop; returns (family, cycle)."""
    variety = variety or VarietyPresentation(circle_algebra())
    arcs = [
        ParamSimplex(1, variety, arc_component_texts(k, "t1"), name="arc%d" % k)
        for k in range(4)
    ]
    family = SingularFamily(arcs)
    cycle = family.chain(1, {a.name: 1 for a in arcs})
    return family, cycle


def circle_times_points_loops():
    """(family, cycle at s=1, cycle at s=0) on the circle-times-points variety."""
    variety = VarietyPresentation(circle_times_points_algebra())
    simplices = []
    cycles = {}
    for level in (1, 0):
        names = []
        for k in range(4):
            comps = arc_component_texts(k, "t1") + [str(level)]
            name = "arc%d_s%d" % (k, level)
            simplices.append(ParamSimplex(1, variety, comps, name=name))
            names.append(name)
        cycles[level] = names
    family = SingularFamily(simplices)
    z1 = family.chain(1, {n: 1 for n in cycles[1]})
    z0 = family.chain(1, {n: 1 for n in cycles[0]})
    return family, z1, z0


def torus_triangle_components(i, j, kind):
    """Components of one triangle of the 32-triangle torus triangulation.

    Each grid square (i, j) splits along its diagonal into triangle 'a'
    (vertices at (i,j), (i+1,j), (i+1,j+1)) and triangle 'b' (vertices
    at (i,j), (i,j+1), (i+1,j+1)); the fundamental cycle is the sum of
    the a-triangles minus the b-triangles.
    """
    if kind == "a":
        first, second = "t1 + t2", "t2"
    else:
        first, second = "t2", "t1 + t2"
    return arc_component_texts(i, first) + arc_component_texts(j, second)


def torus_fundamental_cycle():
    """(family, 2-cycle) for the product-of-two-loops triangulation."""
    variety = VarietyPresentation(torus_algebra())
    simplices = []
    coeffs = {}
    for i in range(4):
        for j in range(4):
            for kind, sign in (("a", 1), ("b", -1)):
                name = "tri_%s_%d_%d" % (kind, i, j)
                simplices.append(
                    ParamSimplex(
                        2, variety, torus_triangle_components(i, j, kind), name=name
                    )
                )
                coeffs[name] = sign
    family = SingularFamily(simplices)
    cycle = family.chain(2, coeffs)
    return family, cycle
