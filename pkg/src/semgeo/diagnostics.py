"""Geometric diagnostics: clustering, branching, spiral, collapse,
script separation, and emoji-text integration.

Every score is ratio- or rank-based, so all of them are invariant under
rigid motions and uniform rescaling of the coordinates.  Flags derive
from scores through the engineering thresholds in THRESHOLDS, and every
report carries those thresholds so downstream readers never guess.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.stats

from . import kernels
from .datasets import LexiconDataset
from .errors import SingleLabel, TooFewPairs, TooFewPoints
from .projdoc import doc_id
from .projection import Projection

THRESHOLDS = {
    "collapsed.effective_rank": 1.5,
    "collapsed.duplicate_fraction": 0.5,
    "separated.ratio": 0.9,
    "spiral.sweep_gate": math.pi,
}

MODALITY_NULL_SAMPLES = 1000
MODALITY_NULL_SEED = 0


def silhouette_score(points: np.ndarray, labels) -> float:
    """Mean silhouette with Euclidean distances.

    Singleton-cluster points score 0, and a 0/0 term (all distances
    zero) is also 0: collapse is collapse_score's job, not a reason to
    blow up here.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    labs = list(labels)
    if len(labs) != n:
        raise ValueError(f"{len(labs)} labels for {n} points")
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    order: dict = {}
    for lab in labs:
        order.setdefault(lab, len(order))
    if len(order) < 2:
        raise SingleLabel("all points share one label")

    d = kernels.pairwise_dists(pts)
    groups = [np.array([i for i, lab in enumerate(labs) if lab == g])
              for g in order]
    sums = np.column_stack([d[:, idx].sum(axis=1) for idx in groups])
    sizes = np.array([len(idx) for idx in groups])
    own = np.array([order[lab] for lab in labs])

    total = 0.0
    for i in range(n):
        c = own[i]
        if sizes[c] == 1:
            continue  # singleton convention: s = 0
        a = sums[i, c] / (sizes[c] - 1)
        b = math.inf
        for c2 in range(len(groups)):
            if c2 != c:
                b = min(b, sums[i, c2] / sizes[c2])
        denom = max(a, b)
        if denom > 0.0:
            total += (b - a) / denom
    return total / n


def _domain_label(category: str) -> str:
    """Category prefix up to the second dot: the semantic domain."""
    parts = category.split(".")
    return ".".join(parts[:2])


def clustering_score(proj: Projection, ds: LexiconDataset) -> float:
    """Mean silhouette over semantic domains, word-level items only."""
    _check_aligned(proj, ds)
    idx = [i for i, it in enumerate(ds.items) if it.level == "word"]
    if len(idx) < 3:
        raise TooFewPoints(3, len(idx))
    labels = [_domain_label(ds.items[i].category) for i in idx]
    return silhouette_score(proj.coords[idx], labels)


def branching_score(points: np.ndarray) -> float:
    """Linearity ratio lambda_1 / sum(lambda) of the covariance spectrum.

    1.0 means perfectly collinear; 1/m is the isotropic floor.  A
    zero-variance family counts as collinear.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] < 3:
        raise TooFewPoints(3, pts.shape[0])
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / (pts.shape[0] - 1)
    vals = np.linalg.eigvalsh(cov)
    total = float(vals.sum())
    if total <= 0.0:
        return 1.0
    return float(vals[-1] / total)


def ordinal_sequences(ds: LexiconDataset) -> dict[str, tuple]:
    """Per-category (item index, rank) sequences for items with order
    set, sorted by rank; only categories with >= 5 ordered items."""
    by_cat: dict[str, list] = {}
    for i, it in enumerate(ds.items):
        if it.order is not None:
            by_cat.setdefault(it.category, []).append((i, it.order))
    out = {}
    for cat, seq in by_cat.items():
        seq.sort(key=lambda t: t[1])
        if len(seq) >= 5:
            out[cat] = tuple(seq)
    return out


def spiral_score(points: np.ndarray, seq) -> float:
    """Spirality of an ordered sequence inside a projection.

    Centered on the sequence's own centroid.  Polar angles unwrap along
    rank order; a net sweep of at most pi radians is no spiral at all
    and scores exactly 0.  Otherwise the score is the geometric mean of
    |Spearman(unwrapped angle, rank)| and |Spearman(radius, rank)|,
    damped by turning consistency: |net sweep| over total absolute
    turning.  A true spiral turns one way only, so the factor is 1; a
    shuffled order doubles back constantly and the factor collapses.
    Without it, the unwrapped angles of a random visiting order form a
    random walk, and random walks correlate spuriously with time, so
    shuffled sequences would often score far above chance.
    A rank-degenerate (collinear) sequence scores 0.
    """
    seq = tuple(seq)
    if len(seq) < 5:
        raise TooFewPoints(5, len(seq))
    ranks = [r for _, r in seq]
    if any(b <= a for a, b in zip(ranks, ranks[1:])):
        raise ValueError("sequence ranks must be strictly increasing")
    pts = np.asarray(points, dtype=np.float64)[[i for i, _ in seq]]
    centered = pts - pts.mean(axis=0)
    if pts.shape[1] > 2:
        # the spiral plane: top-2 principal directions of the sequence
        cov = centered.T @ centered
        vals, vecs = np.linalg.eigh(cov)
        centered = centered @ vecs[:, ::-1][:, :2]
    cov2 = centered.T @ centered
    vals2 = np.linalg.eigvalsh(cov2)
    if vals2[-1] <= 0.0 or vals2[0] <= 1e-12 * vals2[-1]:
        return 0.0  # collinear or fully degenerate: angles ill-defined

    angles = np.unwrap(np.arctan2(centered[:, 1], centered[:, 0]))
    sweep = abs(float(angles[-1] - angles[0]))
    if sweep <= math.pi:
        return 0.0
    turning = float(np.abs(np.diff(angles)).sum())
    consistency = sweep / turning if turning > 0.0 else 0.0
    radius = np.hypot(centered[:, 0], centered[:, 1])
    rho_a = scipy.stats.spearmanr(angles, ranks).statistic
    rho_r = scipy.stats.spearmanr(radius, ranks).statistic
    if not (np.isfinite(rho_a) and np.isfinite(rho_r)):
        return 0.0
    return float(math.sqrt(abs(rho_a) * abs(rho_r)) * consistency)


@dataclass(frozen=True)
class CollapseResult:
    effective_rank: float
    duplicate_fraction: float
    collapsed: bool


def collapse_score(points: np.ndarray) -> CollapseResult:
    """Participation ratio of the covariance spectrum plus a duplicate
    census.

    effective_rank = (sum lambda)^2 / sum lambda^2, which is 1 for
    rank-1 variance and m for isotropic m-D variance; an all-identical
    configuration counts as rank 1.  duplicate_fraction is the share of
    points whose nearest neighbor sits within 1e-3 of the median
    pairwise distance.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n < 3:
        raise TooFewPoints(3, n)
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    vals = np.linalg.eigvalsh(cov)
    total = float(vals.sum())
    if total <= 0.0:
        rank = 1.0
    else:
        rank = float(total * total / np.sum(vals * vals))

    d = kernels.pairwise_dists(pts)
    iu = np.triu_indices(n, 1)
    median = float(np.median(d[iu]))
    dd = d.copy()
    np.fill_diagonal(dd, np.inf)
    nn = dd.min(axis=1)
    dup = float(np.mean(nn <= 1e-3 * median))

    collapsed = (rank < THRESHOLDS["collapsed.effective_rank"]
                 or dup > THRESHOLDS["collapsed.duplicate_fraction"])
    return CollapseResult(rank, dup, collapsed)


def _script_label(item) -> str:
    if item.category.startswith("script."):
        return item.category.split(".", 1)[1]
    return item.lang


def script_separation(proj: Projection, ds: LexiconDataset
                      ) -> dict[tuple[str, str], float]:
    """Pairwise silhouette between writing systems, char-level items.

    Scripts come from script.* categories when present, else the item
    language stands in.  Pairs with fewer than 3 points total are left
    out rather than reported as noise.
    """
    _check_aligned(proj, ds)
    by_script: dict[str, list[int]] = {}
    for i, it in enumerate(ds.items):
        if it.level == "char":
            by_script.setdefault(_script_label(it), []).append(i)
    if len(by_script) < 2:
        raise SingleLabel("need char items from at least 2 scripts")
    out = {}
    names = sorted(by_script)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            idx = by_script[a] + by_script[b]
            if len(idx) < 3:
                continue
            labels = [a] * len(by_script[a]) + [b] * len(by_script[b])
            out[(a, b)] = silhouette_score(proj.coords[idx], labels)
    return out


def modality_integration_score(points: np.ndarray, ds: LexiconDataset
                               ) -> float:
    """Paired emoji-text distance against a random cross-modality null.

    ratio = mean distance within true pairs / mean distance over 1000
    seeded random emoji-text combinations that are not true pairs.
    0 means every emoji sits on its gloss; around 1 means pairing tells
    you nothing; the separated flag trips at >= 0.9.
    """
    pts = np.asarray(points, dtype=np.float64)
    by_pair: dict[str, list[int]] = {}
    for i, it in enumerate(ds.items):
        if it.pair_id is not None:
            by_pair.setdefault(it.pair_id, []).append(i)
    emoji_side, text_side, true_pairs = [], [], set()
    for pid, members in sorted(by_pair.items()):
        if len(members) != 2:
            continue
        a, b = members
        if ds.items[a].level == "emoji" and ds.items[b].level != "emoji":
            e, t = a, b
        elif ds.items[b].level == "emoji" and ds.items[a].level != "emoji":
            e, t = b, a
        else:
            continue
        emoji_side.append(e)
        text_side.append(t)
        true_pairs.add((e, t))
    if len(emoji_side) < 5:
        raise TooFewPairs(5, len(emoji_side))

    paired = np.mean([np.linalg.norm(pts[e] - pts[t])
                      for e, t in zip(emoji_side, text_side)])
    rng = np.random.default_rng(MODALITY_NULL_SEED)
    null_dists = []
    while len(null_dists) < MODALITY_NULL_SAMPLES:
        e = emoji_side[rng.integers(len(emoji_side))]
        t = text_side[rng.integers(len(text_side))]
        if (e, t) in true_pairs:
            continue
        null_dists.append(np.linalg.norm(pts[e] - pts[t]))
    null_mean = float(np.mean(null_dists))
    if null_mean == 0.0:
        return 0.0
    return float(paired / null_mean)


@dataclass(frozen=True)
class DiagnosticsReport:
    projection_id: str
    scores: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    per_category: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DiagnosticsReport":
        raw = json.loads(text)
        return cls(**raw)


def _check_aligned(proj: Projection, ds: LexiconDataset) -> None:
    if proj.n != len(ds.items):
        raise ValueError(
            f"projection has {proj.n} rows but dataset has "
            f"{len(ds.items)} items"
        )


def diagnose(proj: Projection, ds: LexiconDataset) -> DiagnosticsReport:
    """Run every applicable metric; inapplicable ones become skip
    entries with their reason, never exceptions."""
    _check_aligned(proj, ds)
    scores: dict = {}
    flags: dict = {}
    skipped: dict = {}
    per_category: dict = {}

    try:
        scores["clustering_score"] = clustering_score(proj, ds)
    except Exception as exc:  # noqa: BLE001 - skip reasons by contract
        skipped["clustering_score"] = str(exc) or type(exc).__name__

    families = sorted({it.category for it in ds.items
                       if it.category.startswith("network.")})
    family_scores = []
    for fam in families:
        idx = [i for i, it in enumerate(ds.items) if it.category == fam]
        try:
            val = branching_score(proj.coords[idx])
        except Exception as exc:  # noqa: BLE001
            skipped[f"branching:{fam}"] = str(exc) or type(exc).__name__
            continue
        per_category[f"branching:{fam}"] = val
        family_scores.append(val)
    if family_scores:
        scores["branching_score"] = float(np.mean(family_scores))
    elif not families:
        skipped["branching_score"] = "no morphological families (network.*)"

    seqs = ordinal_sequences(ds)
    seq_scores = []
    for cat, seq in sorted(seqs.items()):
        try:
            val = spiral_score(proj.coords, seq)
        except Exception as exc:  # noqa: BLE001
            skipped[f"spiral:{cat}"] = str(exc) or type(exc).__name__
            continue
        per_category[f"spiral:{cat}"] = val
        seq_scores.append(val)
    if seq_scores:
        scores["spiral_score"] = float(np.mean(seq_scores))
    else:
        skipped.setdefault("spiral_score",
                           "no ordered sequence of at least 5 items")

    try:
        col = collapse_score(proj.coords)
        scores["effective_rank"] = col.effective_rank
        scores["duplicate_fraction"] = col.duplicate_fraction
        flags["collapsed"] = col.collapsed
    except Exception as exc:  # noqa: BLE001
        skipped["collapse_score"] = str(exc) or type(exc).__name__

    try:
        pairs = script_separation(proj, ds)
        for (a, b), val in sorted(pairs.items()):
            per_category[f"script:{a}|{b}"] = val
        if pairs:
            scores["script_separation"] = float(np.mean(list(pairs.values())))
        else:
            skipped["script_separation"] = "no script pair with enough points"
    except Exception as exc:  # noqa: BLE001
        skipped["script_separation"] = str(exc) or type(exc).__name__

    try:
        ratio = modality_integration_score(proj.coords, ds)
        scores["modality_integration"] = ratio
        flags["separated"] = bool(ratio >= THRESHOLDS["separated.ratio"])
    except Exception as exc:  # noqa: BLE001
        skipped["modality_integration"] = str(exc) or type(exc).__name__

    for name, val in scores.items():
        if not math.isfinite(val):
            raise AssertionError(f"non-finite score {name}={val}")

    return DiagnosticsReport(
        projection_id=doc_id(ds.id, proj.model_id, proj.method,
                             proj.params, proj.seed),
        scores=scores,
        flags=flags,
        thresholds=dict(THRESHOLDS),
        skipped=skipped,
        per_category=per_category,
    )
