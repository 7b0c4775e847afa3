"""The Projection record every reduction method returns."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteInput


@dataclass(frozen=True)
class Projection:
    """Low-dimensional coordinates plus full provenance.

    coords is float64 n×m with m in {1,2,3}; item_ids aligns rows with
    dataset items (stringified indices when no dataset is attached);
    stress is the final MDS stress where the method has one, else None.
    metadata carries method-specific notes (clipped eigenvalue counts,
    connectivity warnings, iteration counts).
    """

    coords: np.ndarray
    method: str
    params: dict
    model_id: str
    item_ids: tuple[str, ...]
    seed: int
    stress: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim != 2:
            raise ValueError(f"coords must be 2-D, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise NonFiniteInput("projection coordinates contain nan or inf")
        if len(self.item_ids) != coords.shape[0]:
            raise ValueError(
                f"{len(self.item_ids)} item_ids for {coords.shape[0]} rows"
            )
        coords = coords.copy()
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "item_ids", tuple(self.item_ids))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def out_dims(self) -> int:
        return self.coords.shape[1]


def default_item_ids(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def item_id_for(item) -> str:
    """Stable readable id for a lexical item inside one dataset."""
    return f"{item.lang}/{item.level}/{item.text}"
