"""Radiative maps on the f fbar spin pair.

The real emission is split at the soft energy cutoff omega0.  Above it the
emission is treated in the collinear approximation, where the spin action
of each leg is read off the q -> q g splitting functions:

* helicity-conserving strength ``gamma^2 (1 + z^2) / (1 - z)`` acts as the
  identity on the emitting leg;
* the helicity-flip strength ``(1 - z) m^2 / (z^2 q^2)`` is routed by
  coupling: identity (scalar), phase flip sigma_3 (pseudoscalar),
  ladder operators sigma_+- (vector), both (axial).

Weights are integrated over z with the fixed collinear phase-space factor
``alpha/(2 pi) * (1/gamma) ln((1 - gamma cos theta_max)/(1 - gamma))``.
Everything here uses fixed Gauss-Legendre rules, so results are
bit-reproducible and independent of evaluation order.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from decoq.channels import Channel, KrausOperator, apply, choi_min_eigenvalue, completeness_defect
from decoq.entanglement import partial_trace
from decoq.loopfns import LaurentSeries, virtual_coefficient
from decoq.states import Coupling, CouplingKind, DomainError, KinematicPoint, bell_state
from decoq.tensor import I2, dagger

KLN_TOL = 1e-8
N_Z_NODES = 48
N_PHI_NODES = 8
N_ANGLE_NODES = 16

DEFAULT_OMEGA0_FRAC = 0.05
DEFAULT_ZMIN = 0.1
DEFAULT_THETA_MAX = math.pi / 2


class PhysicsConsistencyError(RuntimeError):
    """A physics cross-check (pole cancellation, Delta-rho pattern) failed."""


@dataclass(frozen=True)
class UnresolvedRegion:
    """Soft cutoff `omega0` (GeV), collinear z window and opening-angle cutoff (rad)."""

    omega0: float
    zmin: float
    zmax: float
    theta_max: float = DEFAULT_THETA_MAX
    z_nodes: int = N_Z_NODES

    def __post_init__(self):
        if int(self.z_nodes) != self.z_nodes or self.z_nodes < 2:
            raise DomainError("z_nodes must be an integer >= 2")
        if not 0 < self.zmin < self.zmax < 1:
            raise DomainError(f"need 0 < zmin < zmax < 1, got [{self.zmin}, {self.zmax}]")
        if not self.omega0 > 0:
            raise DomainError("omega0 must be positive")
        if not 0 < self.theta_max <= math.pi:
            raise DomainError("theta_max must lie in (0, pi]")

    @classmethod
    def default(cls, kin: KinematicPoint, omega0_frac=DEFAULT_OMEGA0_FRAC,
                zmin=DEFAULT_ZMIN, theta_max=DEFAULT_THETA_MAX, zmax=None,
                z_nodes=N_Z_NODES) -> "UnresolvedRegion":
        omega0 = omega0_frac * kin.m_phi
        zmax = 1 - 2 * omega0 / kin.m_phi if zmax is None else zmax
        return cls(omega0, zmin, zmax, theta_max, z_nodes)

    def check(self, kin: KinematicPoint) -> None:
        if not self.omega0 < kin.m_phi / 2:
            raise DomainError("omega0 must be below m_phi / 2")


@dataclass
class MapCoefficients:
    p_lo: float
    p_v: LaurentSeries
    p_r_soft: LaurentSeries
    p_r_hard: float
    q_hard: float
    q5_soft: float
    p_id: float
    pole_residual: float
    normalization: float = 1.0

    @property
    def q(self) -> float:
        return self.q_hard + self.q5_soft


def hard_scale(kin: KinematicPoint) -> float:
    return kin.m_phi / 2


def leg_scale(legs: str) -> float:
    if legs == "both":
        return 0.5
    if legs == "one":
        return 1.0
    raise ValueError(f"legs must be 'one' or 'both', got {legs!r}")


def _legs(legs: str):
    # which qubits radiate; the single-leg option radiates off fbar (qubit b)
    return ("a", "b") if legs == "both" else ("b",)


# --- splitting functions -------------------------------------------------

def _gamma(z, m, q):
    g2 = 1 - (m / (z * q)) ** 2
    if np.any(g2 < -1e-14):
        raise DomainError(f"gamma is imaginary: z q <= m (z={z}, m={m}, q={q})")
    return np.sqrt(np.clip(g2, 0.0, None))


def splitting_f(z, m: float, q: float, pattern) -> float:
    """q -> q g splitting function F for helicities (emitter, daughter, emitted), each +-1."""
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0, 1), got {z}")
    if q <= 0:
        raise DomainError("q must be positive")
    lt, li, lk = (int(np.sign(h)) for h in pattern)
    g = _gamma(z, m, q) if m > 0 else 1.0
    pre = 1 / math.sqrt(1 - z)
    if lt == li == lk:
        return float(pre * g)
    if lt == li == -lk:
        return float(pre * z * g)
    if lt == -li == lk:
        return float(pre * (1 - z) / z * m / q)
    return 0.0


def nonflip_strength(z, m, q):
    """|F_{+++}|^2 + |F_{++-}|^2 = gamma^2 (1 + z^2) / (1 - z)."""
    return _gamma(z, m, q) ** 2 * (1 + z * z) / (1 - z)


def flip_strength(z, m, q):
    """|F_{+-+}|^2 = (1 - z) m^2 / (z^2 q^2)."""
    return (1 - z) * m * m / (z * z * q * q)


def collinear_log(z, m, q, theta_max):
    """Angular integral of dt/t up to theta_max, with gamma the daughter velocity."""
    g = _gamma(z, m, q)
    c = math.cos(theta_max)
    small = g < 1e-6
    gs = np.where(small, 1.0, g)
    full = np.log((1 - gs * c) / (1 - gs)) / gs
    return np.where(small, 1 - c + 0.5 * g * (1 - c * c), full)


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def collinear_nodes(kin: KinematicPoint, region: UnresolvedRegion):
    """Nodes and weights in z for the hard-collinear window.

    The lower end is raised to m/q where the daughter is produced at rest;
    z = z_lo + t^2 removes the square-root edge of gamma.  Returns empty
    arrays when the window is kinematically closed.
    """
    region.check(kin)
    m, q = kin.m_f, hard_scale(kin)
    z_lo = max(region.zmin, m / q)
    if z_lo >= region.zmax:
        return np.empty(0), np.empty(0)
    x, w = _gauss_legendre(int(region.z_nodes))
    t_hi = math.sqrt(region.zmax - z_lo)
    t = 0.5 * t_hi * (x + 1)
    z = z_lo + t * t
    return z, w * 0.5 * t_hi * 2 * t


def _integrate(kin, region, strength):
    z, w = collinear_nodes(kin, region)
    if z.size == 0:
        return 0.0
    m, q = kin.m_f, hard_scale(kin)
    return float(np.sum(w * strength(z, m, q) * collinear_log(z, m, q, region.theta_max)))


@dataclass(frozen=True)
class LegWeights:
    """Per-leg hard weights (already including alpha/(2 pi) and the leg share)."""

    identity: float
    phase_flip: float   # weight of sigma_3
    ladder: float       # weight of each of sigma_+ and sigma_-


def hard_leg_weights(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion,
                     legs: str = "both") -> LegWeights:
    norm = c.alpha / (2 * math.pi) * leg_scale(legs)
    n_int = norm * _integrate(kin, region, nonflip_strength)
    f_int = norm * _integrate(kin, region, flip_strength)
    kind = c.kind
    if kind is CouplingKind.SCALAR:
        return LegWeights(n_int + f_int, 0.0, 0.0)
    if kind is CouplingKind.PSEUDOSCALAR:
        return LegWeights(n_int, f_int, 0.0)
    if kind is CouplingKind.VECTOR:
        return LegWeights(n_int, 0.0, f_int / 4)
    return LegWeights(n_int, f_int, f_int / 4)


def _leg_ops(leg: str, phase_flip: float, ladder: float):
    ops = []
    for tag, w in (("3", phase_flip), ("+", ladder), ("-", ladder)):
        if w > 0:
            label = ("0", tag) if leg == "b" else (tag, "0")
            ops.append((label, w))
    return ops


def _trace_factor(label) -> float:
    # sigma_+^dag sigma_+ + sigma_-^dag sigma_- = 4, so 2 per ladder operator
    return 2.0 if ("+" in label or "-" in label) else 1.0


def hard_collinear_channel(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion,
                           legs: str = "both"):
    """Partial channel of the non-identity hard-collinear Kraus operators.

    Returns ``(channel, q_hard, p_r_hard)``: ``q_hard`` is the total trace
    weight of the non-identity operators and ``p_r_hard`` the identity
    weight from the helicity-conserving integral, both summed over legs.
    """
    lw = hard_leg_weights(c, kin, region, legs)
    ops, q_hard = [], 0.0
    for leg in _legs(legs):
        for label, w in _leg_ops(leg, lw.phase_flip, lw.ladder):
            ops.append(KrausOperator.structured(label, w))
            q_hard += _trace_factor(label) * w
    p_r_hard = lw.identity * len(_legs(legs))
    return Channel(tuple(ops)), q_hard, p_r_hard


# --- soft emission -------------------------------------------------------

def eikonal_numerator(kind: CouplingKind, kin: KinematicPoint) -> float:
    """Interference numerator of the soft current for each coupling (GeV^2)."""
    m2, s = kin.m_f**2, kin.s
    return {
        CouplingKind.SCALAR: 2 * m2,
        CouplingKind.PSEUDOSCALAR: 0.0,
        CouplingKind.VECTOR: s - 2 * m2,
        CouplingKind.AXIAL: s - 6 * m2,
    }[kind]


def eikonal_angular_average(beta: float, n=N_ANGLE_NODES) -> float:
    """<1 / (1 - beta^2 cos^2 theta)> over the sphere, back-to-back emitters.

    Integrated in u = artanh(beta cos theta), where the integrand is flat.
    """
    x, w = _gauss_legendre(n)
    umax = math.atanh(beta)
    u = umax * x
    c = np.tanh(u) / beta
    jac = umax / (beta * np.cosh(u) ** 2)
    return float(0.5 * np.sum(w * jac / (1 - beta**2 * c**2)))


def soft_identity_weight(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion,
                         mu: float) -> LaurentSeries:
    """Eikonal emission below omega0, int_0^omega0 dE E^(-1-2eps) mu^(2eps) times the current."""
    amp = (4 * c.alpha / math.pi) * eikonal_numerator(c.kind, kin) / kin.s \
        * eikonal_angular_average(kin.beta)
    return LaurentSeries(-0.5 * amp, amp * math.log(region.omega0 / mu), mu)


def soft_flip_weight(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion,
                     legs: str = "both") -> float:
    """Per-leg sigma_3 weight from the soft end (E_k <= omega0) of the flip term.

    In the soft limit the flip strength is (1 - z) (m/q)^2 and the daughter
    velocity is beta, so the z integral over [1 - omega0/q, 1] is closed form.
    """
    if c.kind not in (CouplingKind.PSEUDOSCALAR, CouplingKind.AXIAL):
        return 0.0
    q = hard_scale(kin)
    delta = region.omega0 / q
    r2 = (kin.m_f / q) ** 2
    beta = kin.beta
    lg = math.log((1 - beta * math.cos(region.theta_max)) / (1 - beta)) / beta
    return c.alpha / (2 * math.pi) * leg_scale(legs) * r2 * lg * delta**2 / 2


def soft_channel(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion,
                 mu: float = None, legs: str = "both"):
    """Returns ``(partial channel, p_r_soft, q5_soft)``."""
    region.check(kin)
    mu = kin.m_phi if mu is None else mu
    p_soft = soft_identity_weight(c, kin, region, mu)
    w = soft_flip_weight(c, kin, region, legs)
    ops = []
    if w > 0:
        for leg in _legs(legs):
            label = ("0", "3") if leg == "b" else ("3", "0")
            ops.append(KrausOperator.structured(label, w))
    return Channel(tuple(ops)), p_soft, w * len(ops)


# --- full map ------------------------------------------------------------

def full_map(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion = None,
             mu: float = None, legs: str = "both"):
    """Trace-preserving map rho_LO -> normalised NLO spin state.

    The unnormalised identity weight is 1 + p_V + p_R^soft + p_R^hard (pole
    free by construction of the soft term); dividing every weight by the
    total trace gives the full channel.
    """
    region = UnresolvedRegion.default(kin) if region is None else region
    mu = kin.m_phi if mu is None else mu
    pv = virtual_coefficient(c, kin, mu).value
    soft_ch, p_soft, q5 = soft_channel(c, kin, region, mu, legs)
    hard_ch, q_hard, p_hard = hard_collinear_channel(c, kin, region, legs)

    residual = abs(pv.pole + p_soft.pole)
    if residual > KLN_TOL:
        raise PhysicsConsistencyError(
            f"IR poles do not cancel for {c.kind.name}: residual {residual:.3e}")

    identity_unnorm = 1.0 + pv.finite.real + p_soft.finite.real + p_hard
    if identity_unnorm <= 0:
        raise PhysicsConsistencyError(
            f"identity weight {identity_unnorm:.4g} is not positive; region too wide for alpha")
    total = identity_unnorm + q_hard + q5

    ops = [KrausOperator.structured(("0", "0"), identity_unnorm / total)]
    for k in hard_ch.kraus_ops + soft_ch.kraus_ops:
        ops.append(KrausOperator(k.matrix / math.sqrt(total), k.label))
    # merge duplicate labels (hard and soft sigma_3 on the same leg)
    merged = {}
    for k in ops:
        merged[k.label] = merged.get(k.label, 0.0) + k.weight
    ch = Channel(tuple(KrausOperator.structured(l, w) for l, w in merged.items()))

    coeffs = MapCoefficients(
        p_lo=1 / total,
        p_v=pv / total,
        p_r_soft=p_soft / total,
        p_r_hard=p_hard / total,
        q_hard=q_hard / total,
        q5_soft=q5 / total,
        p_id=identity_unnorm / total,
        pole_residual=residual,
        normalization=total,
    )
    assembled = coeffs.p_lo + coeffs.p_v.finite.real + coeffs.p_r_soft.finite.real + coeffs.p_r_hard
    if abs(assembled - coeffs.p_id) > 1e-10 or abs(coeffs.p_id + coeffs.q - 1) > 1e-10:
        raise PhysicsConsistencyError("map probabilities do not sum to one")
    return ch, coeffs


# --- checks --------------------------------------------------------------

@dataclass
class DeltaRhoPattern:
    kind: CouplingKind
    delta: np.ndarray
    d11: float
    d22: float
    d23: float
    relations: dict = field(default_factory=dict)


def delta_rho_pattern(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion = None,
                      mu: float = None, legs: str = "both", rtol: float = 1e-10) -> DeltaRhoPattern:
    """Change E_full[rho_LO] - rho_LO and its per-coupling entry relations.

    Relations are on magnitudes: the trace-preserving change carries
    opposite signs on the corner and central blocks.
    """
    ch, _ = full_map(c, kin, region, mu, legs)
    rho = bell_state("psi+").m
    d = apply(ch, rho) - rho
    scale = max(np.abs(d).max(), 1e-300)
    tol = rtol * scale

    def eq(a, b):
        return abs(a - b) <= tol

    off = d.copy()
    for i, j in ((0, 0), (3, 3), (1, 1), (2, 2), (1, 2), (2, 1)):
        off[i, j] = 0
    rel = {
        "sparsity": bool(np.abs(off).max() <= tol),
        "corners_equal": eq(d[0, 0], d[3, 3]),
        "central_symmetric": eq(d[1, 1], d[2, 2]) and eq(d[1, 2], d[2, 1]),
    }
    a11, a22, a23 = abs(d[0, 0]), abs(d[1, 1]), abs(d[1, 2])
    kind = c.kind
    if kind is CouplingKind.PSEUDOSCALAR:
        rel["coupling"] = a11 <= tol and a22 <= tol and a23 > tol
    elif kind is CouplingKind.VECTOR:
        rel["coupling"] = eq(a11, a22) and eq(a22, a23)
    elif kind is CouplingKind.AXIAL:
        rel["coupling"] = eq(a11, a22) and not eq(a22, a23)
    else:
        rel["coupling"] = bool(np.abs(d).max() <= 1e-12)
    out = DeltaRhoPattern(kind, d.real, d[0, 0].real, d[1, 1].real, d[1, 2].real, rel)
    if not all(rel.values()):
        bad = [k for k, v in rel.items() if not v]
        raise PhysicsConsistencyError(f"Delta-rho pattern violated for {kind.name}: {bad}")
    return out


# Winding numbers of the azimuthal spinor phase per amplitude component.
# Distinct windings do not interfere once the azimuth is integrated.
_W_NONFLIP, _W_FLIP, _W_ODD = 1, 0, 2


def splitting_amplitude(z, m, q, helicities, phi, kind: CouplingKind) -> complex:
    """Collinear splitting amplitude f~ -> f + radiation, stripped of coupling and propagator.

    `helicities` is (emitter, daughter, emitted); for (pseudo)scalar
    radiation the emitted label is a channel index.  Normalised so that
    summing |S|^2 over the emitted label gives the strengths above.
    """
    lt, li, lk = helicities
    nonflip = math.sqrt(nonflip_strength(z, m, q) / 2)
    flip = math.sqrt(flip_strength(z, m, q))
    ph = lambda w: complex(math.cos(w * phi), math.sin(w * phi))  # noqa: E731
    if lt == li:
        amp = nonflip * ph(_W_NONFLIP)
        if kind is CouplingKind.SCALAR:
            amp += flip / math.sqrt(2) * ph(_W_ODD)
        elif kind is CouplingKind.PSEUDOSCALAR:
            amp += lt * flip / math.sqrt(2) * ph(_W_ODD)
        elif kind is CouplingKind.AXIAL:
            amp += lt * flip / math.sqrt(2) * ph(_W_ODD)
        return amp
    # helicity flip, carried by the emitted helicity for spin-1 radiation
    if kind in (CouplingKind.VECTOR, CouplingKind.AXIAL) and lk == lt:
        return flip * ph(_W_FLIP)
    return 0j


def splitting_matrix(z, m, q, emitted, phi, kind) -> np.ndarray:
    """2x2 matrix <daughter| S |emitter> in the (+, -) helicity basis."""
    hel = (1, -1)
    s = np.zeros((2, 2), dtype=complex)
    for a, li in enumerate(hel):
        for b, lt in enumerate(hel):
            s[a, b] = splitting_amplitude(z, m, q, (lt, li, emitted), phi, kind)
    return s


def direct_hard_map(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion, rho,
                    legs: str = "both", only: str = None) -> np.ndarray:
    """Hard-collinear map built straight from splitting amplitudes.

    Sums S rho S^dag over the emitted label and an azimuth grid, then
    integrates over z with the collinear phase-space factor.
    """
    rho = np.asarray(rho, dtype=complex)
    z_nodes, z_w = collinear_nodes(kin, region)
    m, q = kin.m_f, hard_scale(kin)
    norm = c.alpha / (2 * math.pi) * leg_scale(legs)
    phis = 2 * math.pi * np.arange(N_PHI_NODES) / N_PHI_NODES
    out = np.zeros((4, 4), dtype=complex)
    for z, wz in zip(z_nodes, z_w):
        lg = float(collinear_log(z, m, q, region.theta_max))
        acc = np.zeros((4, 4), dtype=complex)
        for phi in phis:
            for sigma in (1, -1):
                s = splitting_matrix(z, m, q, sigma, phi, c.kind)
                for leg in (_legs(legs) if only is None else (only,)):
                    k = np.kron(I2, s) if leg == "b" else np.kron(s, I2)
                    acc += k @ rho @ dagger(k)
        out += wz * lg * acc / N_PHI_NODES
    return norm * out


@dataclass
class APCheck:
    deviation: float
    locality_deviation: float
    kraus_map: np.ndarray
    direct_map: np.ndarray


def ap_correspondence_check(c: Coupling, kin: KinematicPoint, region: UnresolvedRegion = None,
                            legs: str = "both", rho=None,
                            kraus_weight_scale: float = 1.0) -> APCheck:
    """Compare the Kraus-built and splitting-amplitude-built hard maps.

    `kraus_weight_scale` perturbs the Kraus weights (negative control).
    """
    region = UnresolvedRegion.default(kin) if region is None else region
    rho = bell_state("psi+").m if rho is None else np.asarray(rho, dtype=complex)
    ch, _, p_hard = hard_collinear_channel(c, kin, region, legs)
    ch = Channel(tuple(KrausOperator(k.matrix * math.sqrt(kraus_weight_scale), k.label)
                       for k in ch.kraus_ops))
    kraus = p_hard * rho + apply(ch, rho)
    direct = direct_hard_map(c, kin, region, rho, legs)
    dev = float(np.abs(kraus - direct).max())

    # each leg's map leaves the other qubit's reduced state alone
    loc = 0.0
    for leg in _legs(legs):
        d_leg = direct_hard_map(c, kin, region, rho, legs, only=leg)
        keep = "a" if leg == "b" else "b"
        loc = max(loc, float(np.abs(partial_trace(d_leg, keep)
                                    - np.trace(d_leg) * partial_trace(rho, keep)).max()))
    return APCheck(dev, loc, kraus, direct)


def channel_report(ch: Channel) -> dict:
    return {
        "completeness_defect": completeness_defect(ch),
        "choi_min_eigenvalue": choi_min_eigenvalue(ch),
    }
