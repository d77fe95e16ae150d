"""Algebraic sets with implicit generators and polynomial parametrizations.

A Variety holds the ambient dimension, the pure dimension, implicit
generators, and optionally a polynomial parametrization phi assumed to be
generically one-to-one onto the set.  Loading validates exactly that
every generator vanishes identically after substituting phi.

A CAMap is a tuple of rational-function components on the ambient space;
its continuity contract is that each component, composed with phi,
divides exactly, i.e. the rational function extends polynomially along
the parametrization.  The resulting pullbacks are cached eagerly and are
the workhorse of every downstream computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import rng as _rng
from .errors import (
    DegenerateSlice,
    GeneratorNotAnnihilated,
    NotCAlgebraic,
    NotDivisible,
    ParamRequired,
    SchemaError,
)
from .numroots import roots_univariate
from .polycore import MPoly, compose, evaluate, exact_divide, poly_from_json, poly_to_json


@dataclass(frozen=True)
class Param:
    var_names: list[str]
    components: list[MPoly]  # m polynomials in k parameters

    @property
    def k(self) -> int:
        return len(self.var_names)


@dataclass(frozen=True)
class Variety:
    ambient_vars: list[str]
    dim: int
    generators: list[MPoly]
    param: Param | None = None

    @property
    def m(self) -> int:
        return len(self.ambient_vars)

    @property
    def k(self) -> int:
        return self.dim

    def require_param(self) -> Param:
        if self.param is None:
            raise ParamRequired("operation requires a polynomial parametrization")
        return self.param

    def contains(self, point) -> bool:
        """Exact membership test against the implicit generators."""
        return all(evaluate(g, point) == 0 for g in self.generators)


@dataclass(frozen=True)
class CAMap:
    """c-algebraic map given by rational components with polynomial pullbacks."""

    domain: Variety
    components: list[tuple[MPoly, MPoly]]  # (num, den) in ambient variables
    pullbacks: list[MPoly] = field(default_factory=list)  # in the k parameters

    @property
    def n(self) -> int:
        return len(self.components)


def load_variety(spec: dict) -> Variety:
    """Validated Variety from its JSON form."""
    if not isinstance(spec, dict):
        raise SchemaError("variety document must be a JSON object")
    names = spec.get("ambient_vars")
    if not isinstance(names, list) or not names or not all(isinstance(v, str) for v in names):
        raise SchemaError("'ambient_vars' must be a nonempty list of strings")
    dim = spec.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError("'dim' must be a positive integer")
    if dim > len(names):
        raise SchemaError("dim exceeds ambient dimension")
    gens = []
    for g in spec.get("generators", []):
        poly, _ = poly_from_json(g, expected_vars=names)
        gens.append(poly)
    param = None
    if spec.get("param") is not None:
        pspec = spec["param"]
        pvars = pspec.get("vars")
        if not isinstance(pvars, list) or len(pvars) != dim:
            raise SchemaError("'param.vars' must list exactly dim parameter names")
        comps = pspec.get("components")
        if not isinstance(comps, list) or len(comps) != len(names):
            raise SchemaError("'param.components' must give one polynomial per ambient variable")
        components = []
        for c in comps:
            poly, _ = poly_from_json(c, expected_vars=pvars)
            components.append(poly)
        if all(p.is_constant() for p in components):
            raise SchemaError("parametrization is constant")
        param = Param(var_names=list(pvars), components=components)
        for g in gens:
            if not compose(g, components).is_zero():
                raise GeneratorNotAnnihilated(
                    "a generator does not vanish along the parametrization"
                )
    return Variety(ambient_vars=list(names), dim=dim, generators=gens, param=param)


def variety_to_json(v: Variety) -> dict:
    out = {
        "ambient_vars": list(v.ambient_vars),
        "dim": v.dim,
        "generators": [poly_to_json(g, v.ambient_vars) for g in v.generators],
    }
    if v.param is not None:
        out["param"] = {
            "vars": list(v.param.var_names),
            "components": [poly_to_json(c, v.param.var_names) for c in v.param.components],
        }
    return out


def load_map(domain: Variety, spec: dict) -> CAMap:
    """Validated CAMap; computes and caches the pullbacks when phi exists."""
    if not isinstance(spec, dict) or "components" not in spec:
        raise SchemaError("map document must have 'components'")
    comps = []
    for item in spec["components"]:
        if not isinstance(item, dict) or "num" not in item:
            raise SchemaError("each map component needs 'num' (and optional 'den')")
        num, _ = poly_from_json(item["num"], expected_vars=domain.ambient_vars)
        if item.get("den") is None:
            den = MPoly.const(domain.m, 1)
        else:
            den, _ = poly_from_json(item["den"], expected_vars=domain.ambient_vars)
        if den.is_zero():
            raise SchemaError("zero denominator")
        comps.append((num, den))
    if not comps:
        raise SchemaError("map needs at least one component")
    return make_map(domain, comps)


def make_map(domain: Variety, comps: list[tuple[MPoly, MPoly]]) -> CAMap:
    pullbacks = []
    if domain.param is not None:
        phi = domain.param.components
        for num, den in comps:
            num_t = compose(num, phi)
            den_t = compose(den, phi)
            if den_t.is_zero():
                raise NotCAlgebraic("denominator vanishes identically on the set")
            try:
                pullbacks.append(exact_divide(num_t, den_t))
            except NotDivisible as exc:
                raise NotCAlgebraic(
                    "component does not extend polynomially along the parametrization"
                ) from exc
    return CAMap(domain=domain, components=comps, pullbacks=pullbacks)


def map_to_json(f: CAMap) -> dict:
    names = f.domain.ambient_vars
    return {
        "components": [
            {"num": poly_to_json(num, names), "den": poly_to_json(den, names)}
            for num, den in f.components
        ]
    }


def pullback(f: CAMap) -> list[MPoly]:
    """Component pullbacks along phi (cached at load time)."""
    f.domain.require_param()
    return list(f.pullbacks)


def degree_by_slicing(v: Variety, seed: int = 0, prec: int = 256) -> int:
    """Degree of a parametrized curve: points on a random affine hyperplane.

    Counts distinct clustered roots of <lam, phi(t)> - c for random
    rational (lam, c); the maximum over 3 independent slices is reported,
    retrying non-generic draws within a fixed budget.
    """
    param = v.require_param()
    if param.k != 1:
        raise ParamRequired("slicing degree implemented for curves (one parameter)")
    best = 0
    successes = 0
    for attempt in range(15):
        gen = _rng.child_rng(seed, f"slice:{attempt}")
        lam = _rng.rand_nonzero_vector(gen, v.m)
        c = _rng.rand_rational(gen)
        sliced = MPoly(1, {})
        for coeff, comp in zip(lam, param.components):
            sliced = sliced + comp.scale(coeff)
        sliced = sliced - MPoly.const(1, c)
        if sliced.is_zero() or sliced.is_constant():
            continue
        count = roots_univariate(sliced, prec).distinct()
        best = max(best, count)
        successes += 1
        if successes >= 3:
            return best
    raise DegenerateSlice("no generic slice found within the retry budget")


def sample_point(v: Variety, seed: int = 0) -> list[Fraction]:
    """phi(t0) for a pseudo-random rational parameter point of height <= 100."""
    param = v.require_param()
    gen = _rng.child_rng(seed, "sample")
    t0 = _rng.rand_rational_vector(gen, param.k)
    return [evaluate(c, t0) for c in param.components]
