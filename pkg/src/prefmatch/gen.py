"""Random instance generators: uniform (UNI) and highly correlated (HC)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .instance import Instance

MODELS = ("UNI", "HC")


def as_density(d: Union[str, float, Fraction]) -> Fraction:
    # via str so that 0.29 means 29/100, not the nearest binary float
    d = d if isinstance(d, Fraction) else Fraction(str(d))
    if not 0 <= d <= 1:
        raise ValueError(f"density {d} outside [0, 1]")
    return d


@dataclass(frozen=True)
class GenSpec:
    model: str
    n_applicants: int
    n_posts: int
    density: Fraction
    seed: int

    def __post_init__(self):
        model = self.model.upper()
        if model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "density", as_density(self.density))
        if self.n_applicants < 1 or self.n_posts < 1:
            raise ValueError("sizes must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def gen_uniform(spec: GenSpec) -> Instance:
    """Every applicant ranks l = floor(n_posts * d) distinct posts in random order."""
    rng = np.random.default_rng(spec.seed)
    length = math.floor(spec.n_posts * spec.density)
    prefs = tuple(
        tuple(int(p) for p in rng.choice(spec.n_posts, size=length, replace=False))
        for _ in range(spec.n_applicants)
    )
    return Instance(spec.n_applicants, spec.n_posts, prefs)


def gen_highly_correlated(spec: GenSpec) -> Instance:
    """Edges appear independently with probability d; lists follow one global order."""
    rng = np.random.default_rng(spec.seed)
    order = rng.permutation(spec.n_posts)  # order[0] is the globally best post
    mask = rng.random((spec.n_applicants, spec.n_posts)) < float(spec.density)
    ranked = mask[:, order]
    prefs = tuple(tuple(int(p) for p in order[row]) for row in ranked)
    return Instance(spec.n_applicants, spec.n_posts, prefs)


def generate(spec: GenSpec) -> Instance:
    return gen_uniform(spec) if spec.model == "UNI" else gen_highly_correlated(spec)


def cell_seed(master_seed: int, model: str, n: int, density, replicate: int) -> int:
    """Seed for one grid cell, mixed through numpy's SeedSequence."""
    d_milli = round(as_density(density) * 1000)
    ss = np.random.SeedSequence([master_seed, MODELS.index(model.upper()), n, d_milli, replicate])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
