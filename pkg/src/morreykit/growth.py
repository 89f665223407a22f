"""Growth functions phi and the parameter bookkeeping for the space norms.

A growth function maps a scale t > 0 to a positive weight phi(t).  All class
checks (monotonicity, the decay condition behind the vector-valued maximal
estimates, trace summability) are performed on a finite dyadic scale grid
{2^-J, ..., 2^J}; stability of the answer as the grid deepens is the
computable surrogate for the continuous statement.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

INF = math.inf

# relative tolerance for monotonicity checks (closed-form double precision)
MONO_TOL = 1e-12


def dyadic_scales(jmin: int = -10, jmax: int = 10) -> list[float]:
    """Scale grid {2^jmin, ..., 2^jmax}, ascending."""
    return [2.0 ** e for e in range(jmin, jmax + 1)]


class GrowthFunction:
    """phi: (0, inf) -> (0, inf), one of a few closed-form families.

    family 'power'     : phi(t) = t^(n/p)
    family 'powerlog'  : phi(t) = t^(n/p) * log(3 + t)^(-exponent)
    family 'loginv'    : phi(t) = log(2 + 1/t)^(-exponent)
    family 'table'     : values tabulated on dyadic scales t = 2^j
    family 'powershift': phi(t) = base(t) * t^shift   (trace transform)
    family 'powerof'   : phi(t) = base(t)^exponent    (power-identity helper)
    """

    def __init__(self, family: str, n: int = 1, *, p: float = None,
                 exponent: float = None, entries: dict = None,
                 base: "GrowthFunction" = None, shift: float = None):
        if n < 1:
            raise ValueError("dimension must be positive")
        self.family = family
        self.n = n
        self.p = p
        self.exponent = exponent
        self.base = base
        self.shift = shift
        if entries is not None:
            self.entries = {int(j): float(v) for j, v in dict(entries).items()}
        else:
            self.entries = None
        if family == "power" and (p is None or p <= 0):
            raise ValueError("power family needs p > 0")
        if family == "powerlog" and (p is None or exponent is None):
            raise ValueError("powerlog family needs p and exponent")
        if family == "loginv" and exponent is None:
            raise ValueError("loginv family needs exponent")
        if family == "table" and not self.entries:
            raise ValueError("table family needs entries")
        if family == "powershift" and (base is None or shift is None):
            raise ValueError("powershift family needs base and shift")
        if family == "powerof" and (base is None or exponent is None):
            raise ValueError("powerof family needs base and exponent")

    def __call__(self, t: float) -> float:
        if t <= 0:
            raise ValueError("scale must be positive")
        if self.family == "power":
            v = t ** (self.n / self.p)
        elif self.family == "powerlog":
            v = t ** (self.n / self.p) * math.log(3.0 + t) ** (-self.exponent)
        elif self.family == "loginv":
            v = math.log(2.0 + 1.0 / t) ** (-self.exponent)
        elif self.family == "table":
            j = round(math.log2(t))
            if abs(t - 2.0 ** j) > 1e-9 * t or j not in self.entries:
                raise ValueError(f"table family not defined at t={t}")
            v = self.entries[j]
        elif self.family == "powershift":
            v = self.base(t) * t ** self.shift
        elif self.family == "powerof":
            v = self.base(t) ** self.exponent
        else:
            raise ValueError(f"unknown family {self.family}")
        if v <= 0:
            raise ValueError(f"phi({t}) = {v} is not positive")
        return v

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        d = {"family": self.family, "n": self.n}
        if self.family == "power":
            d["p"] = self.p
        elif self.family == "powerlog":
            d["p"] = self.p
            d["exponent"] = self.exponent
        elif self.family == "loginv":
            d["exponent"] = self.exponent
        elif self.family == "table":
            d["entries"] = [[j, v] for j, v in sorted(self.entries.items())]
        elif self.family == "powershift":
            d["base"] = self.base.to_json()
            d["shift"] = self.shift
        elif self.family == "powerof":
            d["base"] = self.base.to_json()
            d["exponent"] = self.exponent
        return d

    @staticmethod
    def from_json(d) -> "GrowthFunction":
        if isinstance(d, str):
            d = json.loads(d)
        fam = d["family"]
        n = int(d.get("n", 1))
        if fam == "power":
            return GrowthFunction("power", n, p=d["p"])
        if fam == "powerlog":
            return GrowthFunction("powerlog", n, p=d["p"], exponent=d["exponent"])
        if fam == "loginv":
            return GrowthFunction("loginv", n, exponent=d["exponent"])
        if fam == "table":
            return GrowthFunction("table", n, entries={j: v for j, v in d["entries"]})
        if fam == "powershift":
            return GrowthFunction("powershift", n,
                                  base=GrowthFunction.from_json(d["base"]),
                                  shift=d["shift"])
        if fam == "powerof":
            return GrowthFunction("powerof", n,
                                  base=GrowthFunction.from_json(d["base"]),
                                  exponent=d["exponent"])
        raise ValueError(f"unknown family {fam}")

    def __repr__(self):
        return f"GrowthFunction({self.to_json()})"


def power(p: float, n: int = 1) -> GrowthFunction:
    return GrowthFunction("power", n, p=p)


def powerlog(p: float, exponent: float, n: int = 1) -> GrowthFunction:
    return GrowthFunction("powerlog", n, p=p, exponent=exponent)


def loginv(exponent: float, n: int = 1) -> GrowthFunction:
    return GrowthFunction("loginv", n, exponent=exponent)


def table(entries: dict, n: int = 1) -> GrowthFunction:
    return GrowthFunction("table", n, entries=entries)


def power_of(phi: GrowthFunction, exponent: float) -> GrowthFunction:
    """phi^exponent as a derived growth function."""
    return GrowthFunction("powerof", phi.n, base=phi, exponent=exponent)


# -- class checks ------------------------------------------------------------

def is_in_Gq(phi: GrowthFunction, q: float, scales: list[float]) -> bool:
    """True iff phi is nondecreasing and phi(t) t^(-n/q) is nonincreasing
    on the scale grid (relative tolerance MONO_TOL)."""
    if any(t <= 0 for t in scales):
        raise ValueError("scales must be positive")
    scales = sorted(scales)
    vals = [phi(t) for t in scales]
    for a, b in zip(vals, vals[1:]):
        if b < a * (1.0 - MONO_TOL):
            return False
    damp = [v * t ** (-phi.n / q) for v, t in zip(vals, scales)]
    for a, b in zip(damp, damp[1:]):
        if b > a * (1.0 + MONO_TOL):
            return False
    return True


def check_nakai(phi: GrowthFunction, scales: list[float],
                stability: float = 1.25) -> tuple[bool, float, float]:
    """Search epsilon in {2^-k, k=0..10} such that

        sup_{t >= r} t^eps phi(r) / (r^eps phi(t))

    is finite.  On a finite grid every sup is a number; "finite" means the
    sup does not grow when the grid is extended, which we test by comparing
    against the sup over the grid trimmed by one scale at each end.  Returns
    (found, epsilon, C)."""
    if not scales:
        raise ValueError("scales must be nonempty")
    scales = sorted(scales)
    if len(scales) < 8:
        raise ValueError("need at least 8 scales")
    vals = [phi(t) for t in scales]

    def double_sup(ts, vs, eps):
        # sup over pairs t >= r; g(t) = t^eps/phi(t) must be quasi-decreasing
        best = 0.0
        g = [t ** eps / v for t, v in zip(ts, vs)]
        run_min = math.inf
        # sup_{t>=r} g(t)/g(r) = max over t of g(t)/min_{r<=t} g(r)
        for gt in g:
            run_min = min(run_min, gt)
            best = max(best, gt / run_min)
        return best

    for k in range(0, 11):
        eps = 2.0 ** (-k)
        c_full = double_sup(scales, vals, eps)
        c_trim = double_sup(scales[1:-1], vals[1:-1], eps)
        if c_full <= c_trim * stability:
            return True, eps, c_full
    return False, 0.0, math.inf


def normalize_star(phi: GrowthFunction, q: float, scales: list[float]) -> GrowthFunction:
    """phi*(t) = sup_{s >= t} t^(n/q) s^(-n/q) phi(s), tabulated on scales.

    The result is always in G_q on the same grid."""
    scales = sorted(scales)
    n = phi.n
    entries = {}
    # run the sup from the top scale downwards: phi*(t)/t^(n/q) is the
    # running max of phi(s)/s^(n/q) over s >= t
    run = 0.0
    for t in reversed(scales):
        run = max(run, phi(t) * t ** (-n / q))
        j = round(math.log2(t))
        entries[j] = run * t ** (n / q)
    return GrowthFunction("table", n, entries=entries)


# -- space parameters --------------------------------------------------------

@dataclass
class SpaceParams:
    """Parameter tuple (q, r, s, phi, variant, homogeneous, n).

    variant 'N': ell^r over levels of Morrey norms.
    variant 'E': Morrey norm of the pointwise ell^r aggregate.
    """
    q: float
    r: float  # may be math.inf
    s: float
    phi: GrowthFunction
    variant: str = "N"
    homogeneous: bool = False
    n: int = 1

    def __post_init__(self):
        if not (0 < self.q < INF):
            raise ValueError("q must be finite and positive")
        if self.r <= 0:
            raise ValueError("r must be positive")
        if self.variant not in ("N", "E"):
            raise ValueError("variant must be 'N' or 'E'")
        if self.phi.n != self.n:
            raise ValueError("phi dimension does not match params dimension")

    @property
    def sigma_q(self) -> float:
        return self.n * max(1.0 / self.q - 1.0, 0.0)

    @property
    def sigma_r(self) -> float:
        if self.r == INF:
            return 0.0
        return self.n * max(1.0 / self.r - 1.0, 0.0)

    @property
    def sigma_qr(self) -> float:
        return max(self.sigma_q, self.sigma_r)

    @property
    def w(self) -> float:
        """Exponent of the quasi-triangle inequality for the space norm."""
        return min(1.0, self.q, self.r if self.r != INF else 1.0)

    def with_(self, **kw) -> "SpaceParams":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "r": "inf" if self.r == INF else self.r,
            "s": self.s,
            "phi": self.phi.to_json(),
            "variant": self.variant,
            "homogeneous": self.homogeneous,
            "n": self.n,
        }

    @staticmethod
    def from_json(d) -> "SpaceParams":
        if isinstance(d, str):
            d = json.loads(d)
        r = d["r"]
        if r in ("inf", "Infinity", None):
            r = INF
        return SpaceParams(q=float(d["q"]), r=float(r), s=float(d["s"]),
                           phi=GrowthFunction.from_json(d["phi"]),
                           variant=d.get("variant", "N"),
                           homogeneous=bool(d.get("homogeneous", False)),
                           n=int(d.get("n", 1)))


def trace_transform(params: SpaceParams) -> SpaceParams:
    """Trace parameters: n-1 dimensions, s* = s - 1/q, phi*(t) = phi(t) t^(-1/q).

    The E-variant lands in the r = q scale; the N-variant keeps r."""
    if params.n < 2:
        raise ValueError("trace needs n >= 2")
    phi_star = GrowthFunction("powershift", params.n - 1,
                              base=_with_dim(params.phi, params.n - 1),
                              shift=-1.0 / params.q)
    r_out = params.q if params.variant == "E" else params.r
    return SpaceParams(q=params.q, r=r_out, s=params.s - 1.0 / params.q,
                       phi=phi_star, variant=params.variant,
                       homogeneous=params.homogeneous, n=params.n - 1)


def _with_dim(phi: GrowthFunction, n: int) -> GrowthFunction:
    """Same evaluator, relabelled dimension (the formula keeps phi verbatim;
    power-family exponents n/p are frozen to their original value)."""
    if phi.family == "power":
        # keep t^(n_old/p) literally: t^(n_new/p') with p' = p*n_new/n_old
        return GrowthFunction("power", n, p=phi.p * n / phi.n)
    if phi.family == "powerlog":
        return GrowthFunction("powerlog", n, p=phi.p * n / phi.n,
                              exponent=phi.exponent)
    if phi.family == "loginv":
        return GrowthFunction("loginv", n, exponent=phi.exponent)
    if phi.family == "table":
        return GrowthFunction("table", n, entries=phi.entries)
    if phi.family == "powershift":
        return GrowthFunction("powershift", n, base=_with_dim(phi.base, n),
                              shift=phi.shift)
    if phi.family == "powerof":
        return GrowthFunction("powerof", n, base=_with_dim(phi.base, n),
                              exponent=phi.exponent)
    raise ValueError(phi.family)


def check_trace_summability(phi_star: GrowthFunction, scales: list[float],
                            stability: float = 1.25) -> tuple[bool, float]:
    """C = sup_s phi*(s) * sum_{j>=0, 2^j s <= 1} 1/phi*(2^j s) over scales <= 1.

    Finiteness surrogate: the sup must not keep growing as the grid deepens,
    tested by comparing against the grid with the three smallest scales
    dropped (a constant phi* makes the sum grow like the depth and fails)."""
    scales = sorted(t for t in scales if t <= 1.0 + 1e-15)
    if not scales:
        raise ValueError("need scales <= 1")

    def the_sup(ts):
        best = 0.0
        for t in ts:
            total = 0.0
            j = 0
            while t * 2.0 ** j <= 1.0 + 1e-12:
                total += 1.0 / phi_star(t * 2.0 ** j)
                j += 1
            best = max(best, phi_star(t) * total)
        return best

    c_full = the_sup(scales)
    c_trim = the_sup(scales[3:]) if len(scales) > 5 else c_full
    return c_full <= c_trim * stability, c_full


def check_s_condition(params: SpaceParams, depth: int = 40) -> bool:
    """True iff the partial sums of sum_j 1/(2^{js} phi(2^{-j})) are Cauchy
    on the grid: the tail increments must decay geometrically."""
    a = [1.0 / (2.0 ** (j * params.s) * params.phi(2.0 ** (-j)))
         for j in range(1, depth + 1)]
    k = depth // 4
    tail_new = sum(a[depth - k:])
    tail_old = sum(a[depth - 2 * k:depth - k])
    if tail_old == 0.0:
        return True
    return tail_new <= 0.9 * tail_old
