"""Hierarchical checkerboard densities.

Each level plants a rescaled checkerboard patch in a thin rectangular
neighborhood of every segment produced by the previous level; the marked
horizontal edges of the patch become the next level's segments.  The
total neighborhood area of level i must stay below half of the previous
level's mismatch budget, which is what forces the neighborhoods (and the
patches inside them) to get thinner: patches are clipped vertically when
the budget does not allow their natural height.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import CertificateConstants, schedule_constants
from .density import DensityField, constant_field
from .geometry import Rect, UNIT_SQUARE

Segment = tuple[tuple[float, float], tuple[float, float]]

# Materializing a level-1 patch needs N explicit cells; anything past this
# cannot be represented, so refuse instead of thrashing.
MAX_MATERIALIZED_N = 10 ** 6


class HierarchyDepthError(RuntimeError):
    """Raised when neighborhood widths underflow or cell counts explode."""


@dataclass(frozen=True)
class HierarchyLevel:
    segments: tuple[Segment, ...]        # segments generated at this level
    neighborhoods: tuple[Rect, ...]      # patch neighborhoods used to build it
    epsilon: float                       # mismatch budget of this level


@dataclass(frozen=True)
class SegmentHierarchy:
    levels: tuple[HierarchyLevel, ...]

    def validate(self) -> None:
        """Check disjointness and the per-level area budget."""
        for i, lvl in enumerate(self.levels):
            for a in range(len(lvl.neighborhoods)):
                for b in range(a + 1, len(lvl.neighborhoods)):
                    if lvl.neighborhoods[a].overlaps_interior(lvl.neighborhoods[b]):
                        raise AssertionError(f"level {i}: overlapping neighborhoods")
            if i >= 1:
                total = sum(r.area for r in lvl.neighborhoods)
                budget = self.levels[i - 1].epsilon / 2.0
                if not total < budget:
                    raise AssertionError(
                        f"level {i}: neighborhood area {total} >= budget {budget}")

    def neighborhood_area(self, level: int) -> float:
        return sum(r.area for r in self.levels[level].neighborhoods)


def _segment_span(seg: Segment) -> tuple[float, float, float]:
    (ax, ay), (bx, by) = seg
    if ay != by:
        raise ValueError("segment must be horizontal")
    if not ax < bx:
        raise ValueError("segment endpoints must be ordered left to right")
    return ax, bx, ay


def embed_in_neighborhood(seg: Segment, U: Rect, N: int, c: float,
                          M: int, L: float) -> tuple[DensityField, list[Segment], float]:
    """Plant a rescaled checkerboard over a horizontal segment.

    The thin rectangle [0,1] x [0,1/N] is scaled by the segment length and
    translated so its bottom edge coincides with `seg`.  If U is shorter
    than the natural patch height, the patch is clipped to U's height
    (this is how the hierarchy meets its area budget).  Returns the patch
    field, the rescaled marked pairs that fall inside the patch, and the
    mismatch budget eps scaled by (segment length)^2.
    """
    ax, bx, y = _segment_span(seg)
    lam = bx - ax
    if not (U.x0 <= ax and bx <= U.x1 and U.y0 <= y):
        raise ValueError("segment not contained in neighborhood")
    room = U.y1 - y
    if room <= 0:
        raise ValueError("neighborhood has no positive thickness above the segment")
    h = min(lam / N, room)
    patch_rect = Rect(ax, y, bx, y + h)
    cells = []
    for j in range(N):
        r = Rect(ax + j * lam / N, y, ax + (j + 1) * lam / N, y + h)
        cells.append((r, 1.0 if j % 2 == 0 else 1.0 + c))
    patch = DensityField(patch_rect, 1.0, tuple(cells))

    NM = N * M
    pairs: list[Segment] = []
    for s in range(M + 1):
        py = y + lam * s / NM
        if py > y + h:
            break
        for p in range(NM):
            pairs.append(((ax + lam * p / NM, py), (ax + lam * (p + 1) / NM, py)))

    eps = lam * lam * 0.5 * c / (8.0 * N * N * L * L)
    return patch, pairs, eps


def _disjoint_pairs(pairs: list[Segment], NM: int) -> list[Segment]:
    """Keep every other edge in each row so segments never share endpoints."""
    out = []
    for idx, seg in enumerate(pairs):
        if (idx % NM) % 2 == 0:
            out.append(seg)
    return out


def build_hierarchy(L: float, c: float, depth: int,
                    consts: CertificateConstants | None = None,
                    ) -> tuple[DensityField, SegmentHierarchy]:
    """Run the inductive construction for `depth` levels on the unit square.

    Level 0 is the constant-1 field with the single base segment
    (0,0)-(1,0) and budget 1.  Each later level replaces the field inside
    a thin neighborhood of every current segment by an embedded
    checkerboard patch and takes the patch pairs (alternating, so they
    stay disjoint) as the new segments.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if consts is None:
        consts = schedule_constants(L, c)
    N, M = consts.N, consts.M
    if N > MAX_MATERIALIZED_N:
        raise HierarchyDepthError(
            f"N={N} cannot be materialized as explicit cells; "
            "pass toy constants for desk-scale runs")

    field = constant_field(1.0)
    base: Segment = ((0.0, 0.0), (1.0, 0.0))
    levels = [HierarchyLevel(segments=(base,), neighborhoods=(), epsilon=1.0)]

    for level in range(1, depth + 1):
        prev = levels[-1]
        segs = prev.segments
        total_len = sum(b[0] - a[0] for a, b in segs)
        budget = prev.epsilon / 2.0
        # uniform thickness cap: half the budget, spread over total length
        h_cap = budget / (2.0 * total_len)
        if h_cap <= 0 or h_cap < 5e-324 * 4:
            raise HierarchyDepthError(
                f"level {level}: neighborhood thickness underflows ({h_cap})")

        new_segments: list[Segment] = []
        neighborhoods: list[Rect] = []
        eps_level = None
        for seg in segs:
            ax, bx, y = _segment_span(seg)
            lam = bx - ax
            if lam < 1e-12:
                raise HierarchyDepthError(
                    f"level {level}: segment length {lam} below resolution")
            h = min(lam / N, h_cap)
            U = Rect(ax, y, bx, y + h)
            if not UNIT_SQUARE.contains_rect(U):
                raise HierarchyDepthError(
                    f"level {level}: neighborhood {U} leaves the unit square")
            patch, pairs, eps_patch = embed_in_neighborhood(seg, U, N, c, M, L)
            field = field.replace_region(patch.domain, list(patch.cells))
            new_segments.extend(_disjoint_pairs(pairs, N * M))
            neighborhoods.append(patch.domain)
            eps_level = eps_patch if eps_level is None else min(eps_level, eps_patch)

        levels.append(HierarchyLevel(
            segments=tuple(new_segments),
            neighborhoods=tuple(neighborhoods),
            epsilon=eps_level,
        ))

    hierarchy = SegmentHierarchy(tuple(levels))
    return field, hierarchy


def assemble_limit_density(c: float, squares: list[tuple[Rect, int]],
                           consts: CertificateConstants | None = None,
                           ) -> DensityField:
    """Glue transplanted hierarchy fields into the unit square.

    The k-th square carries the depth-k hierarchy field with amplitude
    min(c, 1/k); the field is 1 elsewhere.  Desk-scale grid constants are
    used per square unless an override is given (the scheduled constants
    cannot be materialized).
    """
    from .certificate import toy_constants
    from .density import transplant
    from .geometry import Similarity

    if not c > 0:
        raise ValueError("c must be positive")
    for idx, (r, _) in enumerate(squares):
        if not UNIT_SQUARE.contains_rect(r):
            raise ValueError(f"square {r} not contained in the unit square")
        for r2, _ in squares[idx + 1:]:
            if r.overlaps_interior(r2):
                raise ValueError(f"overlapping squares: {r} and {r2}")

    cells: list[tuple[Rect, float]] = []
    for r, k in squares:
        if k < 1:
            raise ValueError("square index k must be >= 1")
        if abs(r.width - r.height) > 1e-12:
            raise ValueError(f"region {r} is not a square")
        ck = min(c, 1.0 / k)
        Lk = float(k + 1)
        kc = consts if consts is not None else toy_constants(L=Lk, c=ck)
        hfield, _ = build_hierarchy(Lk, ck, depth=k, consts=kc)
        sim = Similarity(scale=r.width, tx=r.x0, ty=r.y0)
        cells.extend(transplant(hfield, sim).cells)
    return DensityField(UNIT_SQUARE, 1.0, tuple(cells))
