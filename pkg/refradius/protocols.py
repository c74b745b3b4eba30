"""Protocol definitions used for static type checking."""

from __future__ import annotations

from typing import Protocol

import numpy as np


class ConfigStoreOwner(Protocol):
    """
    Describes classes whose settings are :class:`~refradius.field.ConfigField` descriptors.

    Attributes
    ----------
    store : dict of str to str
        Raw textual values keyed by setting name.
    """

    store: dict[str, str]


class DynamicalSystem(Protocol):
    """
    Describes the benchmark systems of :mod:`refradius.systems`.

    Flows implement ``rhs``; maps implement ``step``.

    Attributes
    ----------
    name : str
        Lowercase system name.
    is_flow : bool
        ``True`` for continuous-time systems.
    state_dim : int
        Dimension of the state.
    dt : float
        Time per output sample.
    """

    name: str
    is_flow: bool
    state_dim: int
    dt: float

    def initial_box(self) -> tuple[np.ndarray, np.ndarray]: ...
