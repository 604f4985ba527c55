"""Orbit enumeration of matrix-generated actions on finite abelian groups.

States are mixed-radix encodings of model coefficient vectors (big-endian in
the fixed basis order, so numeric order on states is lexicographic order on
coefficient vectors).  Orbits come from a breadth-first closure under the
generator matrices, vectorized over whole frontiers; scanning seeds in
increasing state order makes every seed the lexicographically minimal member
of its orbit, which is the canonical representative contract the Morita graph
relies on.
"""

from dataclasses import dataclass

import numpy as np

from .groups import FAMILIES, Family
from .h4_models import ActionGenerator, CohClass, H4Model, action_generators, h4_model

DEFAULT_MAX_STATES = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Orbit:
    rep: CohClass
    size: int


@dataclass
class OrbitIndex:
    """Orbit decomposition of a whole model under a fixed generator set."""

    model: H4Model
    generators: tuple[ActionGenerator, ...]
    orbit_id: np.ndarray  # int32, len == model.total_order
    orbits: list[Orbit]

    def orbit_of(self, cls: CohClass) -> Orbit:
        if cls.model != self.model:
            raise ValueError("class belongs to a different model")
        return self.orbits[int(self.orbit_id[self.model.encode(cls.coeffs)])]

    def rep_of(self, cls: CohClass) -> CohClass:
        return self.orbit_of(cls).rep

    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]


def enumerate_orbit_ids(moduli, matrices, max_states: int = DEFAULT_MAX_STATES):
    """Core BFS: orbit ids, seed states and sizes for matrices acting mod moduli.

    Seeds are scanned in increasing state order, so each seed is the smallest
    encoded state of its orbit.
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    total = int(np.prod(moduli))
    if total > max_states:
        raise ValueError(f"state space {total} above the bound {max_states}")
    weights = np.ones(len(moduli), dtype=np.int64)
    for i in range(len(moduli) - 2, -1, -1):
        weights[i] = weights[i + 1] * moduli[i + 1]
    mats = np.stack([np.asarray(m, dtype=np.int64) for m in matrices])

    orbit_id = np.full(total, -1, dtype=np.int32)
    seeds: list[int] = []
    sizes: list[int] = []
    ptr = 0
    while ptr < total:
        if orbit_id[ptr] != -1:
            ptr += 1
            continue
        oid = len(seeds)
        orbit_id[ptr] = oid
        frontier = np.array([ptr], dtype=np.int64)
        size = 1
        while frontier.size:
            new_parts = []
            for lo in range(0, frontier.size, _CHUNK):
                chunk = frontier[lo : lo + _CHUNK]
                coords = (chunk[None, :] // weights[:, None]) % moduli[:, None]
                for mat in mats:
                    out = (mat @ coords) % moduli[:, None]
                    states = weights @ out
                    states = states[orbit_id[states] == -1]
                    if states.size:
                        new_parts.append(states)
            if not new_parts:
                break
            cand = np.unique(np.concatenate(new_parts))
            cand = cand[orbit_id[cand] == -1]
            orbit_id[cand] = oid
            size += cand.size
            frontier = cand
        seeds.append(ptr)
        sizes.append(size)
        ptr += 1
    return orbit_id, seeds, sizes


def enumerate_orbits(
    model: H4Model,
    generators=None,
    max_states: int = DEFAULT_MAX_STATES,
) -> OrbitIndex:
    """BFS closure from each unvisited state, deterministic orbit numbering."""
    if generators is None:
        generators = action_generators(model.family, model.p)
    orbit_id, seeds, sizes = enumerate_orbit_ids(
        model.moduli, [g.array for g in generators], max_states
    )
    orbits = [
        Orbit(rep=model.cls(model.decode(seed)), size=size)
        for seed, size in zip(seeds, sizes)
    ]
    return OrbitIndex(model, tuple(generators), orbit_id, orbits)


def expected_orbit_count(family: Family, p: int) -> int:
    """Published per-family orbit counts used by the --check mode."""
    return {
        Family.CYCLIC: 7,
        Family.P2XP: 16,
        Family.ELEM_ABELIAN: p + 11,
        Family.HEISENBERG: 2 * p + 9,
        Family.GP: 3 * p,
    }[Family(family)]


def orbit_counts(p: int, families=None, max_states: int = DEFAULT_MAX_STATES) -> dict[Family, int]:
    families = tuple(families) if families else FAMILIES
    return {
        fam: len(enumerate_orbits(h4_model(fam, p), max_states=max_states).orbits)
        for fam in families
    }


def orbit_rows(index: OrbitIndex) -> list[dict]:
    """One serializable row per orbit: representative coefficients, label, size."""
    model = index.model
    rows = []
    for oid, orbit in enumerate(index.orbits):
        rows.append(
            {
                "family": model.family.value,
                "p": model.p,
                "orbit": oid,
                "rep_coeffs": list(orbit.rep.coeffs),
                "rep_label": orbit.rep.label(),
                "size": orbit.size,
            }
        )
    return rows
