"""Explicit lower-bound graphs.

* regular triangle-free graphs whose independence number equals the degree
  (``OmegaPair``) and their blow-ups;
* the odd-clique composite: ``r`` complete-joined copies of a blown-up pair;
* a seeded sphere graph in the spirit of Bollobas-Erdos, with two sides of
  nearly antipodal inner edges and a cap-threshold bipartite graph across;
* the X/Y modification that trades sparse sides for full joins;
* the even-clique composite built from the two previous pieces.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import betainc

from .certify import has_clique, independence_number
from .checks import Report, exact, verdict
from .generate import generate_levels, rt_admit
from .graph import Graph, VertexPartition, blow_up, cycle, join_complete, mask_of

# -- Omega pairs ----------------------------------------------------------------


@dataclass(frozen=True)
class OmegaPair:
    d: int
    n: int
    witness: Graph = field(compare=False)

    def certify(self) -> Report:
        g = self.witness
        rep = Report(f"omega-pair ({self.d},{self.n})")
        rep.add(verdict("vertex-count", g.n == self.n))
        rep.add(verdict("triangle-free", not has_clique(g, 3).found))
        rep.add(verdict("regular", all(x == self.d for x in g.degrees()), witness=g.degrees()))
        alpha, cert = independence_number(g)
        rep.add(verdict("alpha=d", alpha == self.d, margin=alpha - self.d, witness=list(cert.vertices)))
        return rep

    def scaled(self, a: int) -> "OmegaPair":
        """``(a d, a n)`` via the ``a``-fold blow-up."""
        return OmegaPair(a * self.d, a * self.n, blow_up(self.witness, a))

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "edges": [list(e) for e in self.witness.edges()]}


C5_PAIR = OmegaPair(2, 5, cycle(5))


def find_omega_pairs(max_n: int = 10) -> list[OmegaPair]:
    """Every ``(d, n)`` with ``n <= max_n`` realised by a triangle-free
    ``d``-regular graph with independence number ``d`` (``d >= 1``).

    Such a graph has ``d <= n/2``, so generating triangle-free graphs with
    independence number at most ``max_n // 2`` covers every candidate.
    """
    if max_n > 10:
        raise ValueError("exhaustive Omega search is limited to max_n <= 10")
    levels = generate_levels(max_n, rt_admit(3, max_n // 2))
    out = []
    for n, level in enumerate(levels):
        found: dict[int, Graph] = {}
        for g in level:
            degs = set(g.degrees())
            if len(degs) != 1:
                continue
            d = degs.pop()
            if d < 1 or d in found:
                continue
            if independence_number(g)[0] == d:
                found[d] = g
        out.extend(OmegaPair(d, n, found[d]) for d in sorted(found))
    return out


def closure_note(pairs: list[OmegaPair], max_factor: int = 3) -> list[tuple[int, int]]:
    """Blow-up multiples ``(a d, a n)`` for ``2 <= a <= max_factor``."""
    return sorted({(a * p.d, a * p.n) for p in pairs for a in range(2, max_factor + 1)})


# -- odd composite ----------------------------------------------------------------


def odd_construction(r: int, pair: OmegaPair = C5_PAIR, a: int = 1) -> Graph:
    """``r`` classes each inducing ``blow_up(witness, a)``, complete across."""
    if r < 1:
        raise ValueError("r must be >= 1")
    h = blow_up(pair.witness, a)
    g = join_complete([h] * r)
    return g.with_labels([f"V{int(lab.split('.')[0]) + 1}" for lab in g.labels])


def odd_construction_edges(r: int, pair: OmegaPair, a: int) -> Fraction:
    """Closed form ``((r-1)/r + d/(r n)) (a r n)^2 / 2``."""
    return (Fraction(r - 1, r) + Fraction(pair.d, r * pair.n)) * (a * r * pair.n) ** 2 / 2


# -- sphere graph -------------------------------------------------------------------

# An odd cycle of length l inside one side needs l * theta_in >= pi, so inner
# thresholds below this value exclude C3, C5 and C7 for every point set.
SIDE_ODD_GIRTH_THRESHOLD = math.pi / 7


@dataclass(frozen=True)
class SphereGraphParams:
    dim: int = 2
    points_per_side: int = 100
    cross_angle_slack: float = 0.15
    inner_angle_slack: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.points_per_side < 1:
            raise ValueError("points_per_side must be >= 1")
        for name in ("cross_angle_slack", "inner_angle_slack"):
            v = getattr(self, name)
            if not 0 < v < math.pi / 4:
                raise ValueError(f"{name} must lie in (0, pi/4), got {v}")

    def to_json(self) -> dict:
        return {"dim": self.dim, "points_per_side": self.points_per_side,
                "cross_angle_slack": self.cross_angle_slack, "inner_angle_slack": self.inner_angle_slack,
                "seed": self.seed}


def sphere_points(p: SphereGraphParams) -> np.ndarray:
    rng = np.random.default_rng(p.seed)
    pts = rng.standard_normal((p.points_per_side, p.dim))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def sphere_graph(p: SphereGraphParams) -> Graph:
    """Vertices ``0..N-1`` form side A and ``N..2N-1`` side B, both carrying
    the same points.  Same-side pairs are adjacent when their angle exceeds
    ``pi - theta_in``; cross pairs when it is below ``pi/2 - theta_cross``.
    """
    pts = sphere_points(p)
    cos = np.clip(pts @ pts.T, -1.0, 1.0)
    inner = cos < -math.cos(p.inner_angle_slack)
    np.fill_diagonal(inner, False)
    cross = cos > math.sin(p.cross_angle_slack)
    n = p.points_per_side
    adj = []
    for i in range(n):
        adj.append(_row(inner[i]) | (_row(cross[i]) << n))
    for i in range(n):
        adj.append(_row(cross[:, i]) | (_row(inner[i]) << n))
    return Graph(2 * n, tuple(adj), ("A",) * n + ("B",) * n)


def _row(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask[::-1]).tobytes(), "big") >> ((-len(mask)) % 8)


def cross_density_target(p: SphereGraphParams) -> float:
    """Probability that two uniform points on the sphere are closer than
    ``pi/2 - theta_cross``; in dimension 2 this is ``1/2 - theta_cross/pi``."""
    phi = math.pi / 2 - p.cross_angle_slack
    return 0.5 * float(betainc((p.dim - 1) / 2, 0.5, math.sin(phi) ** 2))


def inner_density_target(p: SphereGraphParams) -> float:
    return 0.5 * float(betainc((p.dim - 1) / 2, 0.5, math.sin(p.inner_angle_slack) ** 2))


def sides(g: Graph) -> tuple[list[int], list[int]]:
    if g.labels is None:
        raise ValueError("graph carries no side labels")
    a = [v for v, lab in enumerate(g.labels) if str(lab).split("/")[0] in ("A", "V1")]
    b = [v for v, lab in enumerate(g.labels) if str(lab).split("/")[0] in ("B", "V2")]
    if not a or not b:
        raise ValueError("graph needs both an A and a B side")
    return a, b


def sphere_sidecar(g: Graph, p: SphereGraphParams) -> dict:
    a, b = sides(g)
    e_ab = g.edges_between(mask_of(a), mask_of(b))
    return {
        "construction": "sphere",
        "params": p.to_json(),
        "seed": p.seed,
        "cross_density_target": cross_density_target(p),
        "cross_density": e_ab / (len(a) * len(b)),
        "inner_density_target": inner_density_target(p),
        "side_odd_girth_guarantee": p.inner_angle_slack < SIDE_ODD_GIRTH_THRESHOLD,
        "triangle_free_guarantee": p.inner_angle_slack <= 2 * p.cross_angle_slack,
    }


# -- X/Y modification -------------------------------------------------------------


def round_half_up(x: Fraction) -> int:
    """Round a non-negative rational to the nearest integer, halves away from zero."""
    if x < 0:
        return -round_half_up(-x)
    return math.floor(x + Fraction(1, 2))


def flz_modify(g: Graph, delta, xi, seed=0, n_ref: int | None = None) -> tuple[Graph, dict]:
    """Pick random ``X`` in A and ``Y`` in B of size ``round((delta - xi) n_ref)``,
    delete every edge touching ``X`` or ``Y``, then join ``X`` to all of B and
    ``Y`` to all of A.  ``n_ref`` defaults to the vertex count of ``g``.

    Returns the graph, whose labels gain a ``/X`` or ``/Y`` suffix, and a
    provenance dictionary.
    """
    delta, xi = exact(delta), exact(xi)
    a, b = sides(g)
    n_ref = g.n if n_ref is None else n_ref
    raw = (delta - xi) * n_ref
    if raw < 0:
        raise ValueError("delta must be at least xi")
    k = round_half_up(raw)
    if k > len(a) or k > len(b):
        raise ValueError(f"set size {k} exceeds side sizes {len(a)}, {len(b)}")
    rng = random.Random(seed)
    xs = sorted(rng.sample(a, k))
    ys = sorted(rng.sample(b, k))
    xm, ym, am, bm = mask_of(xs), mask_of(ys), mask_of(a), mask_of(b)
    touched = xm | ym
    adj = [row & ~touched for row in g.adj]
    for v in xs:
        adj[v] = bm
    for v in ys:
        adj[v] = am
    for v in b:
        adj[v] |= xm
    for v in a:
        adj[v] |= ym
    labels = list(g.labels)
    for v in xs:
        labels[v] = f"{labels[v]}/X"
    for v in ys:
        labels[v] = f"{labels[v]}/Y"
    out = Graph(g.n, tuple(adj), tuple(labels))
    info = {"construction": "flz", "delta": delta, "xi": xi, "n_ref": n_ref, "raw_size": raw,
            "set_size": k, "rounding": "half-away-from-zero", "X": xs, "Y": ys, "seed": seed}
    return out, info


# -- even composite ---------------------------------------------------------------


@dataclass(frozen=True)
class EvenParams:
    sphere: SphereGraphParams = field(default_factory=SphereGraphParams)
    xi: Fraction = Fraction(1, 50)
    pair: OmegaPair = C5_PAIR
    seed: int = 0


def even_construction(r: int, delta, n: int, params: EvenParams | None = None) -> tuple[Graph, dict]:
    """Blocks ``V1, V2`` of size ``2n/(3r-2)`` carry a modified sphere graph
    (``V1`` as side A); blocks ``V3..Vr`` of size ``3n/(3r-2)`` each induce a
    blow-up of the pair witness; every other cross pair is complete.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if n % (3 * r - 2):
        raise ValueError(f"n={n} is not divisible by 3r-2={3 * r - 2}")
    params = params or EvenParams()
    unit = n // (3 * r - 2)
    sp = SphereGraphParams(params.sphere.dim, 2 * unit, params.sphere.cross_angle_slack,
                           params.sphere.inner_angle_slack, params.sphere.seed)
    base = sphere_graph(sp)
    core, flz = flz_modify(base, delta, params.xi, params.seed, n_ref=n)
    parts = [core]
    if r >= 3:
        size = 3 * unit
        if size % params.pair.n:
            raise ValueError(f"class size {size} is not a multiple of the pair order {params.pair.n}")
        cls = blow_up(params.pair.witness, size // params.pair.n)
        parts.extend([cls] * (r - 2))
    g = join_complete(parts)
    labels = []
    for lab in g.labels:
        head, _, rest = lab.partition(".")
        if head == "0":
            side, _, role = rest.partition("/")
            labels.append(("V1" if side == "A" else "V2") + (f"/{role}" if role else ""))
        else:
            labels.append(f"V{int(head) + 2}")
    # the join made V1-V2 complete; restore the modified sphere graph there
    core_mask = (1 << core.n) - 1
    adj = [(row & ~core_mask) | core.adj[v] if v < core.n else row for v, row in enumerate(g.adj)]
    g = Graph(g.n, tuple(adj), tuple(labels))
    info = {"construction": "even", "r": r, "delta": exact(delta), "n": n, "xi": params.xi,
            "sphere": sp.to_json(), "pair": [params.pair.d, params.pair.n], "flz": flz}
    return g, info


def natural_partition(g: Graph) -> VertexPartition:
    """Blocks ``V1, V2, ...`` read off the construction labels."""
    if g.labels is None:
        raise ValueError("graph carries no block labels")
    heads = [str(lab).split("/")[0] for lab in g.labels]
    names = sorted(set(heads), key=lambda s: int(s[1:]))
    return VertexPartition.from_labels(heads, names)


def even_target_density(r: int, delta) -> Fraction:
    d = exact(delta)
    return Fraction(3 * r - 5, 3 * r - 2) + d - d * d
