"""Pointed Heegaard diagrams encoded as region lists.

A diagram is handed to us as the list of regions cut out by the alpha and
beta curves.  Each region is an even-length cyclic sequence of intersection
point labels read counter-clockwise around the region:

    corners  c0, c1, ..., c_{2n-1}
    arcs     (c_{2j}   -> c_{2j+1})          alpha arcs
             (c_{2j+1} -> c_{2j+2 mod 2n})   beta arcs

so the first two corners lie on the same alpha curve.  Pointed regions (the
ones carrying a basepoint) sit at the END of the list.  A multiply connected
region may be written in nested form as a list of circuits; its interior is
assumed planar (genus 0), which is all the corner data can express.

Everything global is reconstructed from this: the curves are the cycles of
the arc adjacency multigraphs, each point lies on one alpha and one beta
curve, and the distinguished point of each alpha curve is its lowest label.
Beta curves are re-indexed so the tuple of distinguished points, when it is
a generator, has the identity permutation.
"""

from __future__ import annotations

import json
from ast import literal_eval
from collections import Counter
from dataclasses import dataclass

from .linalg import integer_kernel_basis


class DiagramError(Exception):
    """Base class for everything this module raises on bad input."""


class RegionListError(DiagramError):
    """Structural problem in the raw region list (parse level)."""


class ValidationError(DiagramError):
    """The region list does not describe a closed oriented surface diagram."""


class PointDegreeError(ValidationError):
    """Some point label does not occur exactly four times as a corner."""


class ArcPairingError(ValidationError):
    """Directed arc sides do not pair up reversed (orientation inconsistency)."""


class CurveCountError(ValidationError):
    """Number of alpha curves differs from number of beta curves."""


class MassFormulaError(ValidationError):
    """Euler measures do not add up to twice an even Euler characteristic."""


class ContactConventionError(ValidationError):
    """The per-curve minima do not form a generator, so the labeling does not
    follow the distinguished-point convention."""


# ---------------------------------------------------------------------------
# region lists


@dataclass(frozen=True)
class RegionList:
    """Raw input: regions as tuples of circuits, pointed regions last."""

    name: str
    num_pointed: int
    regions: tuple  # tuple of regions; region = tuple of circuits; circuit = tuple of ints

    @property
    def num_regions(self):
        return len(self.regions)


def _normalize_region(raw, idx):
    if not isinstance(raw, (list, tuple)) or len(raw) == 0:
        raise RegionListError("region %d is not a nonempty sequence" % idx)
    if isinstance(raw[0], (list, tuple)):
        circuits = raw
    else:
        circuits = [raw]
    out = []
    for cir in circuits:
        if not isinstance(cir, (list, tuple)) or len(cir) == 0:
            raise RegionListError("region %d has an empty circuit" % idx)
        if len(cir) % 2:
            raise RegionListError(
                "region %d has an odd-length circuit %r" % (idx, list(cir))
            )
        for c in cir:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise RegionListError(
                    "region %d has a bad point index %r" % (idx, c)
                )
        out.append(tuple(cir))
    return tuple(out)


def make_region_list(regions, num_pointed, name="diagram"):
    """Validate raw sequences structurally and freeze them into a RegionList."""
    if not isinstance(regions, (list, tuple)) or not regions:
        raise RegionListError("empty region list")
    if not isinstance(num_pointed, int) or isinstance(num_pointed, bool):
        raise RegionListError("num_pointed must be an integer")
    if not 1 <= num_pointed <= len(regions):
        raise RegionListError(
            "num_pointed=%r out of range 1..%d" % (num_pointed, len(regions))
        )
    regs = tuple(_normalize_region(r, i) for i, r in enumerate(regions))
    labels = sorted({c for reg in regs for cir in reg for c in cir})
    if labels != list(range(len(labels))):
        missing = sorted(set(range(labels[-1] + 1)) - set(labels))
        raise RegionListError(
            "point labels are not the contiguous range 0..%d (missing %r)"
            % (labels[-1], missing)
        )
    return RegionList(name=str(name), num_pointed=num_pointed, regions=regs)


def parse_region_list(text, name=None, num_pointed=None):
    """Read a region list from text.

    Accepted forms: a JSON object {"name":..., "num_pointed":..., "regions":...},
    or a bare bracketed list of regions (JSON or python literal syntax), in
    which case `num_pointed` must be supplied by the caller.
    """
    data = None
    try:
        data = json.loads(text)
    except ValueError:
        try:
            data = literal_eval(text.strip())
        except (ValueError, SyntaxError) as exc:
            raise RegionListError("cannot parse input: %s" % exc) from None
    if isinstance(data, dict):
        if "regions" not in data:
            raise RegionListError('input object lacks a "regions" field')
        regions = data["regions"]
        np_ = data.get("num_pointed", num_pointed)
        nm = data.get("name", name)
    elif isinstance(data, (list, tuple)):
        regions, np_, nm = data, num_pointed, name
    else:
        raise RegionListError("input is neither an object nor a region list")
    if np_ is None:
        raise RegionListError("num_pointed missing (not in input, not supplied)")
    return make_region_list(regions, int(np_), nm if nm is not None else "diagram")


def region_list_to_json(rl, indent=2):
    regions = []
    for reg in rl.regions:
        if len(reg) == 1:
            regions.append(list(reg[0]))
        else:
            regions.append([list(c) for c in reg])
    doc = {"name": rl.name, "num_pointed": rl.num_pointed, "regions": regions}
    return json.dumps(doc, indent=indent)


# ---------------------------------------------------------------------------
# per-region measures


def euler_measure_2(region):
    """Twice the Euler measure of a region: 2*chi - corners/2, chi = 2 - #circuits.

    A disk with 2n corners gives 2 - n: bigon 1, square 0, hexagon -1.
    Accepts a flat circuit or a tuple of circuits.
    """
    if region and isinstance(region[0], int):
        region = (region,)
    corners = sum(len(c) for c in region)
    return 2 * (2 - len(region)) - corners // 2


def point_measure_4(region, point):
    """Four times the local corner measure: the number of corner occurrences
    of `point` in the region (each occurrence is one quadrant)."""
    if region and isinstance(region[0], int):
        region = (region,)
    return sum(1 for c in region for x in c if x == point)


def circuit_alpha_arcs(circuit):
    return [(circuit[i], circuit[i + 1]) for i in range(0, len(circuit), 2)]


def circuit_beta_arcs(circuit):
    n = len(circuit)
    return [(circuit[i], circuit[(i + 1) % n]) for i in range(1, n, 2)]


# ---------------------------------------------------------------------------
# curve reconstruction


def _undirected_edges(directed, kind):
    """Turn a reversal-symmetric multiset of directed arcs into undirected
    edge instances; each surface arc appears twice directed, once undirected."""
    edges = []
    for (a, b), cnt in sorted(directed.items()):
        if a < b:
            if directed.get((b, a), 0) != cnt:
                raise ArcPairingError(
                    "%s arc (%d,%d) sides do not pair up reversed" % (kind, a, b)
                )
            edges.extend([(a, b)] * cnt)
        elif a == b:
            if cnt % 2:
                raise ArcPairingError(
                    "%s arc (%d,%d) has an odd number of sides" % (kind, a, a)
                )
            edges.extend([(a, a)] * (cnt // 2))
    return edges


def _cycles_of_multigraph(edges, points):
    """Cycle decomposition of a 2-regular multigraph; returns point tuples."""
    incident = {p: [] for p in points}
    for eid, (a, b) in enumerate(edges):
        incident[a].append(eid)
        if b != a:
            incident[b].append(eid)
        else:
            incident[a].append(eid)
    for p in points:
        if len(incident[p]) != 2:
            raise ArcPairingError(
                "point %d has %d arc ends, want 2" % (p, len(incident[p]))
            )
    used = [False] * len(edges)
    cycles = []
    for start in points:
        if all(used[e] for e in incident[start]):
            continue
        walk = [start]
        cur = start
        while True:
            eid = next(e for e in incident[cur] if not used[e])
            used[eid] = True
            a, b = edges[eid]
            cur = b if cur == a else a
            if cur == start:
                break
            walk.append(cur)
        cycles.append(walk)
    return cycles


def _canonical_cycle(walk):
    """Rotate a cycle of distinct points to start at its minimum, taking the
    direction whose second element is smaller."""
    i = walk.index(min(walk))
    walk = walk[i:] + walk[:i]
    if len(walk) > 2 and walk[-1] < walk[1]:
        walk = [walk[0]] + walk[:0:-1]
    return tuple(walk)


# ---------------------------------------------------------------------------
# the diagram


class HeegaardDiagram:
    """Validated pointed Heegaard diagram built from a RegionList.

    Treat instances as immutable. Attributes:

      name, regions, num_pointed, num_points, num_regions, num_unpointed
      alpha_curves, beta_curves : tuples of cyclic point tuples
      alpha_of, beta_of         : point -> curve index
      contact_points            : per alpha curve, its minimum point
      contact_aligned           : whether beta indexing realizes the identity
                                  permutation on the contact tuple
      euler_measures_2          : per region
      point_measures_4          : [region][point]
      boundary_mat              : [point][region], built from beta arcs
      b1_diagram                : rank of the unpointed kernel
    """

    def __init__(self, region_list):
        rl = region_list
        self.name = rl.name
        self.regions = rl.regions
        self.num_pointed = rl.num_pointed
        self.num_regions = len(rl.regions)
        self.num_unpointed = self.num_regions - rl.num_pointed

        corners = Counter(
            c for reg in rl.regions for cir in reg for c in cir
        )
        self.num_points = len(corners)
        bad = [p for p in range(self.num_points) if corners[p] != 4]
        if bad:
            raise PointDegreeError(
                "points %r occur %r times as corners, want 4"
                % (bad, [corners[p] for p in bad])
            )

        alpha_dir = Counter()
        beta_dir = Counter()
        for reg in rl.regions:
            for cir in reg:
                alpha_dir.update(circuit_alpha_arcs(cir))
                beta_dir.update(circuit_beta_arcs(cir))
        for directed, kind in ((alpha_dir, "alpha"), (beta_dir, "beta")):
            for (a, b), cnt in directed.items():
                if directed.get((b, a), 0) != cnt:
                    raise ArcPairingError(
                        "%s arc (%d,%d) occurs %d times but reversed %d times"
                        % (kind, a, b, cnt, directed.get((b, a), 0))
                    )

        pts = list(range(self.num_points))
        a_edges = _undirected_edges(alpha_dir, "alpha")
        b_edges = _undirected_edges(beta_dir, "beta")
        a_cycles = sorted(
            (_canonical_cycle(w) for w in _cycles_of_multigraph(a_edges, pts))
        )
        b_cycles = sorted(
            (_canonical_cycle(w) for w in _cycles_of_multigraph(b_edges, pts))
        )
        if len(a_cycles) != len(b_cycles):
            raise CurveCountError(
                "%d alpha curves vs %d beta curves" % (len(a_cycles), len(b_cycles))
            )
        self.alpha_curves = tuple(a_cycles)
        self.contact_points = tuple(c[0] for c in a_cycles)  # each starts at its min

        beta_of_prov = {}
        for i, cyc in enumerate(b_cycles):
            for p in cyc:
                beta_of_prov[p] = i
        # index beta curves so the contact tuple, when a generator, is the identity
        order = []
        taken = set()
        aligned = True
        for cp in self.contact_points:
            j = beta_of_prov[cp]
            if j in taken:
                aligned = False
                break
            taken.add(j)
            order.append(j)
        if aligned:
            self.beta_curves = tuple(b_cycles[j] for j in order)
        else:
            self.beta_curves = tuple(b_cycles)
        self.contact_aligned = aligned

        self.alpha_of = [None] * self.num_points
        self.beta_of = [None] * self.num_points
        for i, cyc in enumerate(self.alpha_curves):
            for p in cyc:
                self.alpha_of[p] = i
        for i, cyc in enumerate(self.beta_curves):
            for p in cyc:
                self.beta_of[p] = i
        self.alpha_of = tuple(self.alpha_of)
        self.beta_of = tuple(self.beta_of)

        self.euler_measures_2 = tuple(euler_measure_2(reg) for reg in rl.regions)
        self.point_measures_4 = tuple(
            tuple(point_measure_4(reg, p) for p in range(self.num_points))
            for reg in rl.regions
        )

        bmat = [[0] * self.num_regions for _ in range(self.num_points)]
        amat = [[0] * self.num_regions for _ in range(self.num_points)]
        for r, reg in enumerate(rl.regions):
            for cir in reg:
                for a, b in circuit_beta_arcs(cir):
                    bmat[b][r] += 1
                    bmat[a][r] -= 1
                for a, b in circuit_alpha_arcs(cir):
                    amat[b][r] += 1
                    amat[a][r] -= 1
        for p in range(self.num_points):
            for r in range(self.num_regions):
                assert amat[p][r] == -bmat[p][r], "alpha/beta boundary mismatch"
        assert all(sum(col) == 0 for col in zip(*bmat)), "column sums nonzero"
        self.boundary_mat = tuple(tuple(row) for row in bmat)

        # mass formula: sum of doubled Euler measures = 2*chi(surface);
        # chi must be even (closed oriented surface)
        total = sum(self.euler_measures_2)
        circuits = sum(len(reg) for reg in rl.regions)
        chi2 = 2 * (sum(2 - len(reg) for reg in rl.regions) - self.num_points)
        if total != chi2:
            raise MassFormulaError(
                "euler measure mass %d != %d" % (total, chi2)
            )
        if circuits == self.num_regions and total != 2 * (
            self.num_regions - self.num_points
        ):
            raise MassFormulaError(
                "euler measure mass %d != 2(regions - points) = %d"
                % (total, 2 * (self.num_regions - self.num_points))
            )
        if total % 4:
            raise MassFormulaError(
                "odd Euler characteristic %d: not a closed oriented surface"
                % (total // 2)
            )

        unpointed_cols = [
            [bmat[p][r] for r in range(self.num_unpointed)]
            for p in range(self.num_points)
        ]
        self.b1_diagram = len(
            integer_kernel_basis(unpointed_cols, ncols=self.num_unpointed)
        )

        self._generators = None

    # -- simple views -----------------------------------------------------

    @property
    def num_curves(self):
        return len(self.alpha_curves)

    def is_pointed(self, r):
        return r >= self.num_unpointed

    def region_circuits(self, r):
        return self.regions[r]

    def alpha_arcs_of_region(self, r):
        return [a for cir in self.regions[r] for a in circuit_alpha_arcs(cir)]

    def beta_arcs_of_region(self, r):
        return [a for cir in self.regions[r] for a in circuit_beta_arcs(cir)]

    def corner_occurrences(self, p):
        """All (region, circuit, position) corner occurrences of point p."""
        out = []
        for r, reg in enumerate(self.regions):
            for ci, cir in enumerate(reg):
                for i, c in enumerate(cir):
                    if c == p:
                        out.append((r, ci, i))
        return out

    def intersection_matrix(self):
        n = self.num_curves
        mat = [[0] * n for _ in range(n)]
        for p in range(self.num_points):
            mat[self.alpha_of[p]][self.beta_of[p]] += 1
        return mat

    def to_region_list(self):
        return RegionList(
            name=self.name, num_pointed=self.num_pointed, regions=self.regions
        )

    # -- generators -------------------------------------------------------

    def generators(self):
        """All generators, one point per alpha curve with the beta curves hit
        bijectively, in lexicographic point-tuple order."""
        if self._generators is not None:
            return self._generators
        n = self.num_curves
        per_alpha = [sorted(cyc) for cyc in self.alpha_curves]
        out = []

        def grow(i, chosen, used_beta):
            if i == n:
                perm = tuple(self.beta_of[p] for p in chosen)
                out.append(Generator(tuple(chosen), perm, len(out)))
                return
            for p in per_alpha[i]:
                j = self.beta_of[p]
                if j not in used_beta:
                    chosen.append(p)
                    used_beta.add(j)
                    grow(i + 1, chosen, used_beta)
                    used_beta.discard(j)
                    chosen.pop()

        grow(0, [], set())
        self._generators = tuple(out)
        return self._generators

    def generator_by_points(self, points):
        key = tuple(sorted(points))
        for g in self.generators():
            if tuple(sorted(g.points)) == key:
                return g
        raise DiagramError("no generator with points %r" % (list(points),))

    def contact_generator(self):
        """The distinguished generator made of the per-curve minimum points."""
        if not self.contact_aligned:
            raise ContactConventionError(
                "per-curve minima do not hit all beta curves; labels violate "
                "the distinguished-point convention"
            )
        g = self.generator_by_points(self.contact_points)
        assert g.permutation == tuple(range(self.num_curves))
        return g


@dataclass(frozen=True)
class Generator:
    """One point per alpha curve; permutation[i] = beta index of points[i]."""

    points: tuple
    permutation: tuple
    index: int

    def cycles(self):
        """Number of disjoint cycles of the permutation."""
        seen = set()
        out = 0
        for i in range(len(self.permutation)):
            if i in seen:
                continue
            out += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = self.permutation[j]
        return out

    def point_set(self):
        return frozenset(self.points)

    def __str__(self):
        return "{" + ",".join(str(p) for p in self.points) + "}"


def build_diagram(region_list):
    """Reconstruct and fully validate the diagram a region list describes."""
    return HeegaardDiagram(region_list)


def diagram_from_json(text, name=None, num_pointed=None):
    return build_diagram(parse_region_list(text, name, num_pointed))
