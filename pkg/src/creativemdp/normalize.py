"""Normalization of value/reward tables onto the unit interval.

Evaluation functions must map concepts into [0, 1], while value estimates and
rewards live on the real line. The strategy is explicit configuration: pick a
tag, get a total function. ``min_max`` is the parameter-free default; its
constant-input rule (everything maps to 0.5) keeps strict threshold cuts empty
at thresholds >= 0.5 instead of dividing by zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MinMax:
    """Rescale to [0, 1] by range; a constant input maps to 0.5 everywhere."""


@dataclass(frozen=True)
class Affine:
    """x -> scale * x + offset, clamped to [0, 1]."""

    scale: float = 1.0
    offset: float = 0.0


@dataclass(frozen=True)
class Logistic:
    """x -> 1 / (1 + exp(-slope * (x - center)))."""

    center: float = 0.0
    slope: float = 1.0


NormalizationTag = MinMax | Affine | Logistic


def normalize(xs, tag: NormalizationTag) -> np.ndarray:
    """Map an array of finite reals onto [0, 1] under the given tag.

    Raises ValueError on NaN or infinite input. The output has the same shape
    as the input.
    """
    arr = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("normalize requires finite inputs")
    if isinstance(tag, MinMax):
        lo = float(arr.min())
        hi = float(arr.max())
        if lo == hi:
            return np.full(arr.shape, 0.5)
        return (arr - lo) / (hi - lo)
    if isinstance(tag, Affine):
        return np.clip(tag.scale * arr + tag.offset, 0.0, 1.0)
    if isinstance(tag, Logistic):
        z = tag.slope * (arr - tag.center)
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    raise TypeError(f"unknown normalization tag: {tag!r}")


def tag_to_string(tag: NormalizationTag) -> str:
    if isinstance(tag, MinMax):
        return "min-max"
    if isinstance(tag, Affine):
        return f"affine:{tag.scale:g},{tag.offset:g}"
    if isinstance(tag, Logistic):
        return f"logistic:{tag.center:g},{tag.slope:g}"
    raise TypeError(f"unknown normalization tag: {tag!r}")


def tag_from_string(text: str) -> NormalizationTag:
    """Parse a CLI-style tag: ``min-max``, ``affine[:scale,offset]``,
    ``logistic[:center,slope]``."""
    name, _, params = text.partition(":")
    name = name.strip().lower().replace("_", "-")
    if name == "min-max":
        if params:
            raise ValueError("min-max takes no parameters")
        return MinMax()
    if name in ("affine", "logistic"):
        if params:
            try:
                a, b = (float(p) for p in params.split(","))
            except ValueError as exc:
                raise ValueError(f"bad parameters for {name}: {params!r}") from exc
            return Affine(a, b) if name == "affine" else Logistic(a, b)
        return Affine() if name == "affine" else Logistic()
    raise ValueError(f"unknown normalization: {text!r}")
