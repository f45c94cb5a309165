"""Quantum reals and Born-rule probabilities at finite dimension.

A self-adjoint operator with rational spectrum becomes a QReal: the left
spectral cuts E(r) = sum of eigenprojections with eigenvalue <= r, indexed
by a finite rational grid containing the spectrum. Equality of two quantum
reals is the grid-pointwise biconditional meet

    [[a = b]] = big_meet over r of (E_a(r) <-> E_b(r)),
    x <-> y := (x ∧ y) ∨ (x⊥ ∧ y⊥)

which reduces to the agreement subspace in the commuting case; noncommuting
outputs are flagged model-dependent because only the commuting case has a
quantum-mechanical oracle. The order truth value reads cut containment:
[[a <= b]] = big_meet over r of (E_b(r) → E_a(r)), fixed by the scalar case
c·I vs d·I.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import exactmat as xm
from .exactnum import GQ, format_rational, parse_entry, format_entry
from .formula import Environment, eval_formula, parse
from .lattice import Lattice, LatticeError, ProjectionLattice
from .projections import Projection, SpectralData
from .universe import check_embed, make_qset

DECIMAL_NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QReal:
    """A Dedekind-cut real over a finite rational grid."""

    lattice: Lattice
    grid: tuple  # strictly increasing Fractions
    cuts: tuple  # lattice elements, parallel to grid

    def __post_init__(self):
        grid = tuple(Fraction(g) for g in self.grid)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "cuts", tuple(self.cuts))
        if len(grid) != len(self.cuts) or not grid:
            raise LatticeError("grid and cuts must be nonempty and parallel")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise LatticeError("grid must be strictly increasing")
        lat = self.lattice
        for c in self.cuts:
            lat.check_element(c)
        for a, b in zip(self.cuts, self.cuts[1:]):
            if not lat.leq(a, b):
                raise LatticeError("cuts must be monotone along the grid")
        if self.cuts[-1] != lat.top():
            raise LatticeError("the last cut must be the whole space")
        n = len(self.cuts)
        for i in range(n):
            for j in range(i + 1, n):
                if not lat.commutes(self.cuts[i], self.cuts[j]):
                    raise LatticeError("cuts must pairwise commute")

    def cut(self, r) -> object:
        r = Fraction(r)
        for g, c in zip(self.grid, self.cuts):
            if g == r:
                return c
        raise LatticeError(f"{r} is not a grid point")

    def refined(self, extra_points: Iterable) -> "QReal":
        """Extend to a larger grid by the step rule E(r) = E(pred(r)).

        Exact as long as the original grid contains every jump of the
        spectral family, which qreal_from_spectral guarantees.
        """
        points = sorted(set(self.grid) | {Fraction(p) for p in extra_points})
        cuts = []
        for p in points:
            value = self.lattice.bottom()
            for g, c in zip(self.grid, self.cuts):
                if g <= p:
                    value = c
                else:
                    break
            cuts.append(value)
        return QReal(self.lattice, tuple(points), tuple(cuts))


def qreal_from_spectral(sd: SpectralData, grid: Sequence,
                        lattice: Optional[ProjectionLattice] = None) -> QReal:
    """E(r) = sum of eigenprojections with eigenvalue <= r."""
    lattice = lattice or ProjectionLattice(sd.dim)
    if lattice.dim != sd.dim:
        raise LatticeError("spectral data dimension does not match the lattice")
    points = sorted({Fraction(g) for g in grid})
    spectrum = sd.eigenvalues()
    for ev in spectrum:
        if ev not in points:
            raise LatticeError(f"grid is missing the eigenvalue {ev}")
    cuts = []
    for r in points:
        total = xm.zeros(sd.dim, sd.dim)
        for value, proj in sd.eigen:
            if value <= r:
                total = xm.mat_add(total, proj.matrix)
        cuts.append(Projection(total))
    return QReal(lattice, tuple(points), tuple(cuts))


def common_grid(a: QReal, b: QReal) -> tuple:
    if a.lattice != b.lattice:
        raise LatticeError("quantum reals live in different lattices")
    grid = sorted(set(a.grid) | set(b.grid))
    return a.refined(grid), b.refined(grid)


def _biconditional(lat: Lattice, x, y):
    return lat.join(lat.meet(x, y), lat.meet(lat.ortho(x), lat.ortho(y)))


def truth_eq(a: QReal, b: QReal):
    """[[a = b]]: pointwise biconditional meet over the common grid."""
    a, b = common_grid(a, b)
    lat = a.lattice
    return lat.big_meet(
        _biconditional(lat, ca, cb) for ca, cb in zip(a.cuts, b.cuts)
    )


def truth_leq(a: QReal, b: QReal):
    """[[a <= b]]: cut containment, E_b(r) → E_a(r) met over the grid."""
    a, b = common_grid(a, b)
    lat = a.lattice
    return lat.big_meet(
        lat.sasaki_arrow(cb, ca) for ca, cb in zip(a.cuts, b.cuts)
    )


def spectral_commutes(a: SpectralData, b: SpectralData) -> bool:
    return all(
        pa.commutes_with(pb)
        for _, pa in a.eigen
        for _, pb in b.eigen
    )


def observational_atom(sd: SpectralData, value) -> Projection:
    """The projection for 'the observable takes this exact value'."""
    return sd.projection_for(Fraction(value))


# ----------------------------------------------------------------- states

class StateVector:
    """A pure state, exact or 12-digit decimal.

    Exact states are stored as a raw Gaussian-rational ray representative;
    probabilities divide by the squared norm, which equals using the unit
    vector without ever introducing square roots. Decimal states must be
    normalized to within 1e-9.
    """

    __slots__ = ("dim", "exact", "entries")

    def __init__(self, entries, exact: bool = True):
        if exact:
            vec = tuple(e if isinstance(e, GQ) else GQ(*e) if isinstance(e, tuple) else GQ(Fraction(e))
                        for e in entries)
            if all(x.is_zero() for x in vec):
                raise LatticeError("state vector must be nonzero")
        else:
            vec = tuple(complex(e) for e in entries)
            norm = sum(abs(x) ** 2 for x in vec)
            if abs(norm - 1.0) > DECIMAL_NORM_TOLERANCE:
                raise LatticeError(f"decimal state is not normalized: squared norm = {norm!r}")
        self.dim = len(vec)
        self.exact = exact
        self.entries = vec

    def norm_sq(self):
        if self.exact:
            return xm.inner(self.entries, self.entries).re
        return sum(abs(x) ** 2 for x in self.entries)

    @classmethod
    def from_json(cls, doc) -> "StateVector":
        if isinstance(doc, dict):
            kind = doc.get("kind", "exact")
            entries = doc["entries"]
        else:
            kind, entries = "exact", doc
        if kind == "exact":
            return cls([parse_entry(e) for e in entries], exact=True)
        if kind == "decimal":
            return cls([complex(*e) if isinstance(e, (list, tuple)) else float(e)
                        for e in entries], exact=False)
        raise LatticeError(f"unknown state kind {kind!r}")

    def to_json(self) -> dict:
        if self.exact:
            return {"kind": "exact", "entries": [format_entry(x) for x in self.entries]}
        return {"kind": "decimal",
                "entries": [[x.real, x.imag] for x in self.entries]}

    def __repr__(self):
        mode = "exact" if self.exact else "decimal"
        return f"StateVector(dim={self.dim}, {mode})"


def born_probability(p: Projection, state: StateVector):
    """Pr = ‖Pψ‖²; a Fraction for exact states, a float for decimal ones."""
    if p.dim != state.dim:
        raise LatticeError(f"projection dimension {p.dim} != state dimension {state.dim}")
    if state.exact:
        image = xm.mat_vec(p.matrix, state.entries)
        value = xm.inner(image, image).re / state.norm_sq()
        return value
    rows = [[complex(x) for x in row] for row in p.matrix]
    image = [sum(row[j] * state.entries[j] for j in range(state.dim)) for row in rows]
    return sum(abs(x) ** 2 for x in image)


def format_probability(value) -> str:
    """Exact rationals verbatim, floats at 12 significant digits."""
    if isinstance(value, Fraction):
        return format_rational(value)
    return f"{float(value):.12g}"


@dataclass(frozen=True)
class ProbabilityResult:
    value: object  # Fraction or float
    exact: bool
    model_dependent: bool  # True when the operators do not commute
    element: object = None  # the truth-value projection, when available

    def render(self) -> str:
        text = format_probability(self.value)
        if self.model_dependent:
            text += "  (model-dependent: operators do not commute)"
        return text


def prob_equal(a: SpectralData, b: SpectralData, state: StateVector,
               extra_grid: Iterable = ()) -> ProbabilityResult:
    """Pr{a = b ‖ ψ} = ‖ [[a = b]] ψ ‖²."""
    if a.dim != b.dim:
        raise LatticeError("spectral data dimensions differ")
    grid = sorted(set(a.eigenvalues()) | set(b.eigenvalues()) | {Fraction(g) for g in extra_grid})
    qa = qreal_from_spectral(a, grid)
    qb = qreal_from_spectral(b, grid)
    element = truth_eq(qa, qb)
    return ProbabilityResult(
        value=born_probability(element, state),
        exact=state.exact,
        model_dependent=not spectral_commutes(a, b),
        element=element,
    )


def classical_equal_value_probability(a: SpectralData, b: SpectralData,
                                      state: StateVector):
    """Commuting-case oracle: sum of ‖(P_i ∧ Q_j)ψ‖² over equal-value pairs,
    with the meet realized as the product of commuting projections."""
    if not spectral_commutes(a, b):
        raise LatticeError("classical oracle only applies to commuting observables")
    total = Fraction(0) if state.exact else 0.0
    for va, pa in a.eigen:
        for vb, pb in b.eigen:
            if va == vb:
                joint = Projection(xm.mat_mul(pa.matrix, pb.matrix))
                total += born_probability(joint, state)
    return total


# --------------------------------------- the real-number predicate R(x)

def _numeral_lists(n: int) -> list:
    """Nested-list von Neumann numerals 0..n-1."""
    out: list = []
    for _ in range(n):
        out.append(list(out))
    return out


def qreal_as_qset(q: QReal):
    """Encode the cut as a lattice-valued set over numeral check-sets:
    u(ǩ) = E(grid[k]), so [[ǩ ∈ u]] = E(grid[k]) exactly."""
    lattice = q.lattice
    numerals = [check_embed(lst, lattice) for lst in _numeral_lists(len(q.grid))]
    u = make_qset(lattice, [(num, cut) for num, cut in zip(numerals, q.cuts)])
    return u, numerals


def real_predicate_truth(q: QReal):
    """[[R(u)]]: the cut is monotone along the grid and attains the top.

    Rendered as a quantifier-free formula over numeral constants g0..g{n-1}
    and evaluated by the formula module: monotonicity contributes
    (gi in u -> gj in u) for every i < j, attainment contributes
    (g0 in u | ... | g{n-1} in u).
    """
    u, numerals = qreal_as_qset(q)
    n = len(numerals)
    names = [f"g{k}" for k in range(n)]
    conjuncts = [
        f"(g{i} in u -> g{j} in u)"
        for i in range(n)
        for j in range(i + 1, n)
    ]
    conjuncts.append("(" + " | ".join(f"{name} in u" for name in names) + ")")
    text = " & ".join(conjuncts)
    env = Environment(q.lattice, {"u": u, **dict(zip(names, numerals))})
    return eval_formula(parse(text), env)
