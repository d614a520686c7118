"""One-loop scalar functions as single-pole Laurent series in the regulator eps.

Conventions: d = 4 - 2 eps, integrals normalised as
mu^{2 eps} / Gamma(1 + eps) * int d^d k / (i pi^{d/2}), so that
B0 = 1/eps + finite.  Only the 1/eps and eps^0 coefficients are kept.
"""

import math
from dataclasses import dataclass

import cmath

from decoq.states import Coupling, CouplingKind, DomainError, KinematicPoint

PI2_6 = math.pi**2 / 6

# first Bernoulli numbers B_0..B_22 (B_1 = -1/2, odd ones beyond vanish)
_BERNOULLI = [1.0, -0.5, 1 / 6, 0.0, -1 / 30, 0.0, 1 / 42, 0.0, -1 / 30, 0.0, 5 / 66, 0.0,
              -691 / 2730, 0.0, 7 / 6, 0.0, -3617 / 510, 0.0, 43867 / 798, 0.0,
              -174611 / 330, 0.0, 854513 / 138]


def _dilog_core(x: float) -> float:
    # Li2(x) = sum_n B_n u^(n+1) / (n+1)!,  u = -ln(1-x); fine for |u| <= ln 2
    u = -math.log1p(-x)
    total, term = 0.0, u
    for n, b in enumerate(_BERNOULLI):
        # term = u^(n+1) / (n+1)!
        total += b * term
        term *= u / (n + 2)
    return total


def dilog(x: float) -> float:
    """Real dilogarithm Li2(x) for x <= 1."""
    x = float(x)
    if x > 1:
        raise DomainError(f"dilog is complex for x > 1 (got {x})")
    if x == 1.0:
        return PI2_6
    if x == 0.0:
        return 0.0
    if x < -1:
        # inversion
        return -PI2_6 - 0.5 * math.log(-x) ** 2 - dilog(1 / x)
    if x > 0.5:
        # reflection
        return PI2_6 - math.log(x) * math.log1p(-x) - _dilog_core(1 - x)
    return _dilog_core(x)


@dataclass(frozen=True)
class LaurentSeries:
    """pole / eps + finite, evaluated at renormalisation scale `scale_mu`."""

    pole: complex = 0j
    finite: complex = 0j
    scale_mu: float = float("nan")

    def __post_init__(self):
        object.__setattr__(self, "pole", complex(self.pole))
        object.__setattr__(self, "finite", complex(self.finite))

    def _mu(self, other):
        if isinstance(other, LaurentSeries):
            a, b = self.scale_mu, other.scale_mu
            if math.isnan(a):
                return b
            if math.isnan(b) or a == b:
                return a
            raise ValueError(f"cannot combine series at scales {a} and {b}")
        return self.scale_mu

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return LaurentSeries(self.pole + other.pole, self.finite + other.finite, self._mu(other))

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return LaurentSeries(-self.pole, -self.finite, self.scale_mu)

    def __mul__(self, c):
        if isinstance(c, LaurentSeries):
            return NotImplemented
        return LaurentSeries(self.pole * c, self.finite * c, self.scale_mu)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / c)

    @property
    def real(self) -> "LaurentSeries":
        return LaurentSeries(self.pole.real, self.finite.real, self.scale_mu)

    def isclose(self, other, rtol=1e-9, atol=0.0) -> bool:
        def close(a, b):
            return abs(a - b) <= atol + rtol * max(abs(a), abs(b))
        return close(self.pole, other.pole) and close(self.finite, other.finite)

    def to_dict(self) -> dict:
        return {"pole": [self.pole.real, self.pole.imag],
                "finite": [self.finite.real, self.finite.imag],
                "scale_mu": self.scale_mu}


def _b0_massless_massive(p2, m2, mu):
    # B0(p2; 0, m2), finite part -int_0^1 ln((x m2 - x(1-x) p2 - i0)/mu^2) dx
    if p2 == 0:
        return 1 - math.log(m2 / mu**2)
    r = (m2 - p2) / p2
    if p2 == m2:
        tail = 0.0
    elif p2 < m2:
        tail = r * math.log((m2 - p2) / m2)
    else:
        tail = r * complex(math.log((p2 - m2) / m2), -math.pi)
    return 2 - math.log(m2 / mu**2) + tail


def _b0_equal_masses(p2, m2, mu):
    base = 2 - math.log(m2 / mu**2)
    if p2 == 0:
        return base - 2
    if p2 > 4 * m2:
        b = math.sqrt(1 - 4 * m2 / p2)
        return base - b * math.log((1 + b) / (1 - b)) + 1j * math.pi * b
    if p2 < 0:
        b = math.sqrt(1 - 4 * m2 / p2)
        return base - b * math.log((b + 1) / (b - 1))
    if p2 == 4 * m2:
        return base
    w = math.sqrt(4 * m2 / p2 - 1)
    return base - 2 * w * math.atan(1 / w)


def b0(p2: float, m1sq: float, m2sq: float, mu: float) -> LaurentSeries:
    """Scalar two-point function B0(p2; m1sq, m2sq) for the two configurations used here."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    if m1sq == 0 and m2sq > 0:
        fin = _b0_massless_massive(p2, m2sq, mu)
    elif m2sq == 0 and m1sq > 0:
        fin = _b0_massless_massive(p2, m1sq, mu)
    elif m1sq == m2sq and m1sq > 0:
        fin = _b0_equal_masses(p2, m1sq, mu)
    else:
        raise NotImplementedError(f"B0 mass configuration ({m1sq}, {m2sq}) not supported")
    return LaurentSeries(1.0, fin, mu)


def c0_ir(mt2: float, mphi2: float, mu: float) -> LaurentSeries:
    """C0(mt2, mt2, mphi2; mt2, 0, mt2): the soft-divergent vertex triangle.

    Closed form in x_s = -(1 - beta)/(1 + beta) + i0 with
    beta = sqrt(1 - 4 mt2/mphi2).  The 1/eps coefficient is of infrared origin.
    """
    if not mphi2 > 4 * mt2 > 0:
        raise DomainError("c0_ir needs mphi2 > 4 mt2 > 0")
    beta = math.sqrt(1 - 4 * mt2 / mphi2)
    x = (1 - beta) / (1 + beta)
    ln_xs = complex(math.log(x), math.pi)  # ln(-x + i0)
    pref = -x / (mt2 * (1 - x * x))  # x_s / (m^2 (1 - x_s^2))
    li2_x2 = dilog(x * x)
    # Li2(1 - x_s) = Li2(1 + x) continued through the reflection formula
    li2_1mxs = PI2_6 - math.log1p(x) * ln_xs - dilog(-x)
    pole = -pref * ln_xs
    bracket = (ln_xs * (-0.5 * ln_xs + 2 * math.log1p(-x * x) + math.log(mt2 / mu**2))
               - PI2_6 + li2_x2 + 2 * li2_1mxs)
    return LaurentSeries(pole, pref * bracket, mu)


@dataclass(frozen=True)
class VirtualCoefficient:
    kind: CouplingKind
    value: LaurentSeries


def virtual_coefficient(c: Coupling, kin: KinematicPoint, mu: float = None) -> VirtualCoefficient:
    """Renormalised one-loop virtual weight multiplying the identity map.

    Assembles the vertex combination of B0/C0 for the coupling, subtracts the
    ultraviolet pole together with its ln(mu^2/m^2) (on-shell scheme), and
    returns 2 Re of the result, the tree/one-loop interference.
    """
    if not isinstance(c, Coupling):
        raise ValueError("c must be a Coupling")
    mu = kin.m_phi if mu is None else mu
    m2, s, b2 = kin.m_f**2, kin.s, kin.beta**2
    a4pi = c.alpha / (4 * math.pi)
    b0_on = b0(m2, 0.0, m2, mu)
    b0_s = b0(s, m2, m2, mu)
    c0 = c0_ir(m2, s, mu)
    zero = LaurentSeries(0, 0, mu)

    if c.kind is CouplingKind.SCALAR:
        uv = (8 * m2 / s * b0_on - b2 * b0_s) * (a4pi / b2)
        ir = c0 * (-4 * m2 * b2) * (a4pi / b2)
    elif c.kind is CouplingKind.PSEUDOSCALAR:
        uv = b0_s * (a4pi / 9)
        ir = zero
    elif c.kind is CouplingKind.VECTOR:
        k = a4pi / (b2 * s)
        uv = (b0_on * (4 * (s - 2 * m2)) - b0_s * (8 * m2)) * k
        ir = c0 * (-2 * (s - 2 * m2) * b2 * s) * k
    elif c.kind is CouplingKind.AXIAL:
        k = a4pi / (b2 * s)
        uv = (b0_on * (4 * (s - 6 * m2)) + b0_s * (8 * m2)) * k
        ir = c0 * (-2 * (s - 6 * m2) * b2 * s) * k
    else:  # pragma: no cover
        raise ValueError(f"unsupported coupling {c.kind}")

    counterterm = LaurentSeries(uv.pole, uv.pole * math.log(mu**2 / m2), mu)
    total = (uv - counterterm + ir).real * 2
    return VirtualCoefficient(c.kind, total)
