"""Per-frame appearance history and the conditioning-bank builders.

Two bank policies: a plain FIFO window over the most recent frames, and the
score-gated variant that walks backward and only admits frames whose mask,
object, and motion scores all clear their thresholds. The prompt (first)
frame is always kept: it is the one record whose content is ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .selection import SelectionOutcome


@dataclass(frozen=True, eq=False)
class MemoryEntry:
    """Scores and latent recorded when a frame was processed."""

    frame_index: int
    appearance: np.ndarray
    s_mask: float
    s_obj: float
    s_kf: float
    is_prompt_frame: bool = False


@dataclass(frozen=True)
class MemoryGate:
    """Admission thresholds and bank sizing."""

    tau_mask: float = 0.6
    tau_obj: float = 0.0
    tau_kf_mem: float = 0.3
    n_mem: int = 7
    n_max: int = 64

    def __post_init__(self):
        if not 1 <= self.n_mem <= self.n_max:
            raise ValueError(f"need 1 <= n_mem <= n_max, got n_mem={self.n_mem} n_max={self.n_max}")


def gate(entry: MemoryEntry, g: MemoryGate) -> bool:
    """All three scores must clear their thresholds; the prompt always passes."""
    if entry.is_prompt_frame:
        return True
    return entry.s_mask >= g.tau_mask and entry.s_obj >= g.tau_obj and entry.s_kf >= g.tau_kf_mem


def build_bank_fifo(history: list[MemoryEntry], n_mem: int) -> list[MemoryEntry]:
    """The n_mem most recent entries plus the prompt frame, oldest first."""
    if not history:
        return []
    bank = history[-n_mem:]
    if history[0].is_prompt_frame and not bank[0].is_prompt_frame:
        bank = [history[0]] + bank
    return list(bank)


def build_bank_motion_aware(history: list[MemoryEntry], g: MemoryGate) -> list[MemoryEntry]:
    """Walk back up to n_max frames collecting gate-passers, newest first.

    Collection stops after n_mem admitted entries. The prompt frame is always
    included; if nothing else qualifies the most recent entry is kept so the
    bank never degenerates to the prompt alone.
    """
    if not history:
        return []
    picked = []
    for e in reversed(history[-g.n_max:]):
        if gate(e, g):
            picked.append(e)
            if len(picked) >= g.n_mem:
                break
    if not any(not e.is_prompt_frame for e in picked) and not history[-1].is_prompt_frame:
        picked.append(history[-1])
    if history[0].is_prompt_frame and not any(e.is_prompt_frame for e in picked):
        picked.append(history[0])
    picked.sort(key=lambda e: e.frame_index)
    return picked


def record(
    history: list[MemoryEntry],
    outcome: SelectionOutcome,
    appearance: np.ndarray,
    frame_index: int | None = None,
) -> list[MemoryEntry]:
    """Append one entry carrying the outcome's scores; returns a new history.

    Target-absent frames are recorded too, with their scores as observed;
    they are expected to fail the admission gate.
    """
    expected = history[-1].frame_index + 1 if history else 0
    if frame_index is None:
        frame_index = expected
    elif history and frame_index <= history[-1].frame_index:
        raise ValueError(
            f"frame {frame_index} already recorded (last is {history[-1].frame_index})"
        )
    entry = MemoryEntry(
        frame_index=frame_index,
        appearance=appearance,
        s_mask=outcome.s_mask,
        s_obj=outcome.s_obj,
        s_kf=outcome.s_kf,
        is_prompt_frame=frame_index == 0,
    )
    return history + [entry]
