"""Vectorized truth tables for Boolean-lattice fragments.

A fragment over an n-atom Boolean algebra admits full pairwise tables
MEM[x, v] = [[x ∈ v]] and EQ[u, v] = [[u = v]] stored as uint8 bitmasks,
one bit per atom. Statements quantified over all pairs or triples of the
fragment then reduce to bitwise identities and per-atom-plane relation
properties, which is what makes whole-fragment theorem sweeps feasible:
the tables replace |F|³ evaluator calls with O(|F|²) vector work.

Soundness of the plane reductions: a Boolean truth value equals 1 exactly
when its restriction to every atom plane is classically true, so
"[[phi]] = 1 for all tuples" is equivalent to a classical statement about
each 0/1 plane of the tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lattice import BooleanLattice, LatticeError
from .universe import UniverseFragment


@dataclass
class TruthTables:
    """Pairwise truth values over one fragment, as atom bitmasks."""

    fragment: UniverseFragment
    atoms: int
    top: int
    fwd: np.ndarray  # fwd[u, v] = [[forall x in u . x in v]]
    mem: np.ndarray  # mem[x, v] = [[x in v]]
    eq: np.ndarray   # eq[u, v] = [[u = v]]

    def plane(self, table: np.ndarray, atom: int) -> np.ndarray:
        return (table >> atom) & 1


def boolean_truth_tables(fragment: UniverseFragment) -> TruthTables:
    """Compute FWD/EQ/MEM for every pair, layered by rank sum.

    The mutual recursion of membership and equality strictly decreases the
    rank sum of the pair, so filling blocks in rank-sum order needs only
    already-computed entries.
    """
    lattice = fragment.lattice
    if not isinstance(lattice, BooleanLattice):
        raise LatticeError("truth tables require a Boolean-lattice fragment")
    top = lattice.top()
    n = len(fragment)
    members = fragment.members
    pos = fragment.position

    doms = []
    for m in members:
        doms.append([(pos[k], v) for k, v in m.entries])

    ranks = sorted({m.rank for m in members})
    layers = {r: np.array([i for i, m in enumerate(members) if m.rank == r], dtype=np.int64)
              for r in ranks}

    fwd = np.zeros((n, n), dtype=np.uint8)
    mem = np.zeros((n, n), dtype=np.uint8)
    eq = np.zeros((n, n), dtype=np.uint8)

    pairs_by_sum: dict = {}
    for ra in ranks:
        for rb in ranks:
            pairs_by_sum.setdefault(ra + rb, []).append((ra, rb))

    for s in sorted(pairs_by_sum):
        blocks = pairs_by_sum[s]
        # forward inclusion first: depends on mem entries of smaller rank sum
        for ra, rb in blocks:
            rows, cols = layers[ra], layers[rb]
            for u in rows:
                acc = np.full(len(cols), top, dtype=np.uint8)
                for x_idx, value in doms[u]:
                    acc &= (top ^ value) | mem[x_idx, cols]
                fwd[u, cols] = acc
        # equality: both forward directions of this same rank sum
        for ra, rb in blocks:
            rows, cols = layers[ra], layers[rb]
            eq[np.ix_(rows, cols)] = fwd[np.ix_(rows, cols)] & fwd[np.ix_(cols, rows)].T
        # membership: depends on equality entries of this or smaller rank sum
        for ra, rb in blocks:
            rows, cols = layers[ra], layers[rb]
            for v in cols:
                acc = np.zeros(len(rows), dtype=np.uint8)
                for y_idx, value in doms[v]:
                    acc |= value & eq[y_idx, rows]
                mem[rows, v] = acc

    return TruthTables(fragment=fragment, atoms=lattice.atoms, top=top,
                       fwd=fwd, mem=mem, eq=eq)


def equivalence_labels(plane: np.ndarray) -> Optional[np.ndarray]:
    """Class labels if the reflexive symmetric 0/1 relation is transitive,
    else None. label[u] = least related index; the relation is an
    equivalence exactly when it equals the label-agreement relation."""
    labels = np.argmax(plane, axis=1)
    if np.array_equal(plane, (labels[:, None] == labels[None, :]).astype(plane.dtype)):
        return labels
    return None


def find_transitivity_counterexample(plane: np.ndarray) -> Optional[tuple]:
    """A triple (u, v, w) with u~v and v~w but not u~w, if one exists."""
    if equivalence_labels(plane) is not None:
        return None
    n = len(plane)
    for u in range(n):
        related = plane[u].astype(bool)
        # any v ~ u whose row covers something u's row misses
        reach = plane[related].astype(bool).any(axis=0)
        gaps = reach & ~related
        if gaps.any():
            w = int(np.argmax(gaps))
            vs = np.nonzero(related & plane[:, w].astype(bool))[0]
            return (u, int(vs[0]), w)
    return None


def check_transitivity_everywhere(tables: TruthTables) -> Optional[tuple]:
    """None if [[u=v & v=w -> u=w]] = 1 for all |F|³ triples, else a triple
    index witness. Per-plane equivalence is exactly this statement."""
    for atom in range(tables.atoms):
        witness = find_transitivity_counterexample(tables.plane(tables.eq, atom))
        if witness is not None:
            return witness
    return None


def check_substitutivity_everywhere(tables: TruthTables) -> Optional[tuple]:
    """None if equal sets are everywhere intersubstitutable in membership:
    [[u=v & u in w -> v in w]] = 1 and [[u=v & w in u -> w in v]] = 1 over
    all triples. Reduces to membership rows/columns being constant on the
    equality classes of every plane. Returns (kind, u, v, w) on failure."""
    for atom in range(tables.atoms):
        eq_plane = tables.plane(tables.eq, atom)
        labels = equivalence_labels(eq_plane)
        if labels is None:
            triple = find_transitivity_counterexample(eq_plane)
            return ("transitivity", *triple)
        mem_plane = tables.plane(tables.mem, atom)
        rep_rows = mem_plane[labels, :]
        row_bad = np.argwhere(mem_plane != rep_rows)
        if len(row_bad):
            u, w = (int(x) for x in row_bad[0])
            v = int(labels[u])
            if not mem_plane[u, w]:  # orient so the first set is the member
                u, v = v, u
            return ("membership-left", u, v, w)
        rep_cols = mem_plane[:, labels]
        col_bad = np.argwhere(mem_plane != rep_cols)
        if len(col_bad):
            w, u = (int(x) for x in col_bad[0])
            v = int(labels[u])
            if not mem_plane[w, u]:
                u, v = v, u
            return ("membership-right", u, v, w)
    return None
