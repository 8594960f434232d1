"""Per-frame output choice: affinity-only baseline or the hybrid motion blend.

Both selectors only consider candidates whose object score is strictly
positive. The hybrid rule scores gated candidates by
alpha * s_kf + (1 - alpha) * s_mask, with alpha forced to zero while the
motion state is not yet trusted. Ties go to the lowest index so reruns and
ablations are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import BBox, RleMask, mask_to_bbox


@dataclass(eq=False)
class CandidateMask:
    """One proposer output: mask, affinity score, object logit, latent."""

    mask: RleMask
    s_mask: float
    s_obj: float
    appearance: np.ndarray | None = None
    box: BBox | None = field(default=None, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.s_mask <= 1.0:
            raise ValueError(f"s_mask must be in [0,1], got {self.s_mask}")

    def bbox(self) -> BBox:
        """Tight box of the mask, memoized (proposers may pre-fill it)."""
        if self.box is None:
            self.box = mask_to_bbox(self.mask)
        return self.box


@dataclass(frozen=True)
class SelectionOutcome:
    """Chosen candidate with its scores, or a target-absent marker."""

    chosen_index: int | None
    chosen_box: BBox
    s_mask: float
    s_obj: float
    s_kf: float
    hybrid_score: float
    target_absent: bool

    def __post_init__(self):
        if self.target_absent != (self.chosen_index is None) or self.target_absent != self.chosen_box.empty:
            raise ValueError("target_absent must match a missing index and an empty box")


def _absent(candidates: list[CandidateMask], kf_scores, eff_alpha: float) -> SelectionOutcome:
    # No candidate passed the object gate; keep the strongest observation's
    # scores on record (they will fail the memory gate downstream).
    if candidates:
        i = min(range(len(candidates)), key=lambda k: (-candidates[k].s_mask, k))
        c = candidates[i]
        kf = kf_scores[i] if kf_scores is not None else 0.0
        hybrid = eff_alpha * kf + (1.0 - eff_alpha) * c.s_mask
        return SelectionOutcome(None, BBox.make_empty(), c.s_mask, c.s_obj, kf, hybrid, True)
    return SelectionOutcome(None, BBox.make_empty(), 0.0, 0.0, 0.0, 0.0, True)


def select_baseline(candidates: list[CandidateMask]) -> SelectionOutcome:
    """Highest affinity score among candidates with positive object score."""
    best = None
    for i, c in enumerate(candidates):
        if c.s_obj > 0.0 and (best is None or c.s_mask > candidates[best].s_mask):
            best = i
    if best is None:
        return _absent(candidates, None, 0.0)
    c = candidates[best]
    return SelectionOutcome(best, c.bbox(), c.s_mask, c.s_obj, 0.0, c.s_mask, False)


def select_hybrid(
    candidates: list[CandidateMask],
    kf_scores: list[float],
    alpha_kf: float,
    motion_is_active: bool,
) -> SelectionOutcome:
    """Weighted motion/affinity argmax over object-gated candidates."""
    if len(candidates) != len(kf_scores):
        raise ValueError(
            f"candidates and kf_scores length mismatch: {len(candidates)} vs {len(kf_scores)}"
        )
    if not 0.0 <= alpha_kf <= 1.0:
        raise ValueError(f"alpha_kf must be in [0,1], got {alpha_kf}")
    alpha = alpha_kf if motion_is_active else 0.0
    beta = 1.0 - alpha
    best = None
    best_score = 0.0
    for i, c in enumerate(candidates):
        if c.s_obj <= 0.0:
            continue
        score = alpha * kf_scores[i] + beta * c.s_mask
        if best is None or score > best_score:
            best = i
            best_score = score
    if best is None:
        return _absent(candidates, kf_scores, alpha)
    c = candidates[best]
    return SelectionOutcome(best, c.bbox(), c.s_mask, c.s_obj, kf_scores[best], best_score, False)
