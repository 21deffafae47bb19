"""Central moments, triple-correlator sums, and the S parameter.

The third central moments of Jx' and Jy' decompose, after all bipartite
correlation terms cancel, into weighted sums of ten tripartite correlator
patterns

    xxx yyy zzz xyz xxy xxz xyy yyz xzz yzz

where each pattern value is the sum over ordered triples of distinct atoms
(p, q, r) of <J_pa J_qb J_rc>.  This module computes the moments two ways:

* the *direct* route: central moments of the explicitly rotated collective
  operators (fewer cancellation sites; the source of truth for S), and
* the *sum* route: the ten-term (four-term for y') weighted correlator sums,
  kept as a machine check of the cancellation result.

S is half the root of the sum of squared third moments, computed from the
direct route.  The two routes must agree to ``ROUTE_REL_TOL`` (with an
absolute floor ``ROUTE_ABS_FLOOR``) on every state with a defined frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import math
import numpy as np

from .errors import DimensionMismatchError
from .frame import (
    EPSILON_FRAME,
    MeanSpin,
    RotationAngles,
    mean_spin,
    rotated_ops,
    rotation_angles,
    rotation_matrix,
)
from .operators import apply_axis_combination, apply_single_atom
from .states import (
    FullState,
    ProductState,
    SymmetricState,
    as_symmetric,
    dicke_to_full,
    product_to_full,
)

ROUTE_REL_TOL = 1e-9
ROUTE_ABS_FLOOR = 1e-12

_IMAG_TOL = 1e-10

# Canonical correlator pattern order (axis word applies to atom slots in order).
PATTERNS = ("xxx", "yyy", "zzz", "xyz", "xxy", "xxz", "xyy", "yyz", "xzz", "yzz")


@dataclass(frozen=True)
class TripleCorrelatorSet:
    """Ordered-triple correlator sums for the ten axis patterns.

    Each field already contains the full sum over the N(N-1)(N-2) ordered
    triples of distinct atoms.
    """

    xxx: float
    yyy: float
    zzz: float
    xyz: float
    xxy: float
    xxz: float
    xyy: float
    yyz: float
    xzz: float
    yzz: float

    def as_dict(self):
        return {name: getattr(self, name) for name in PATTERNS}


@dataclass(frozen=True)
class MomentReport:
    """Everything the compute pipeline knows about one state."""

    n_atoms: int
    mean_spin: MeanSpin
    angles: RotationAngles
    var_xp: float
    var_yp: float
    m3_xp_direct: float
    m3_yp_direct: float
    m3_xp_sum: float
    m3_yp_sum: float
    s_parameter: float

    def max_rel_dev(self):
        """Worst scaled route deviation across the two axes."""
        return max(
            route_deviation(self.m3_xp_direct, self.m3_xp_sum),
            route_deviation(self.m3_yp_direct, self.m3_yp_sum),
        )

    def to_dict(self):
        return {
            "n_atoms": self.n_atoms,
            "mean_spin": {
                "jx": self.mean_spin.jx,
                "jy": self.mean_spin.jy,
                "jz": self.mean_spin.jz,
                "magnitude": self.mean_spin.magnitude,
            },
            "angles": {"theta": self.angles.theta, "phi": self.angles.phi},
            "var_xp": self.var_xp,
            "var_yp": self.var_yp,
            "m3_xp_direct": self.m3_xp_direct,
            "m3_yp_direct": self.m3_yp_direct,
            "m3_xp_sum": self.m3_xp_sum,
            "m3_yp_sum": self.m3_yp_sum,
            "s_parameter": self.s_parameter,
            "routes": {
                "direct": {"xp": self.m3_xp_direct, "yp": self.m3_yp_direct},
                "sum": {"xp": self.m3_xp_sum, "yp": self.m3_yp_sum},
                "max_rel_dev": self.max_rel_dev(),
            },
        }


def route_deviation(direct, summed, rel=ROUTE_REL_TOL, floor=ROUTE_ABS_FLOOR):
    """Scaled relative deviation between the two routes.

    A value at most ``rel`` is equivalent to
    ``|direct - summed| <= max(rel*|direct|, floor)``.
    """
    return abs(direct - summed) / max(abs(direct), floor / rel)


def _real(value, what):
    if abs(value.imag) > _IMAG_TOL:
        raise RuntimeError(f"internal error: {what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def _matching_vector(state, op):
    """State vector living in the operator's space, or a loud mismatch."""
    if op.space_tag == "dicke":
        if isinstance(state, SymmetricState) and state.n_atoms + 1 == op.dim:
            return state.coeffs
        raise DimensionMismatchError(
            f"ladder-space operator of dim {op.dim} needs a symmetric state of "
            f"{op.dim - 1} atoms, got {type(state).__name__}"
        )
    if isinstance(state, ProductState):
        state = product_to_full(state)
    if isinstance(state, SymmetricState):
        state = dicke_to_full(state)
    if isinstance(state, FullState) and (1 << state.n_atoms) == op.dim:
        return state.amplitudes
    raise DimensionMismatchError(
        f"full-space operator of dim {op.dim} does not match {type(state).__name__}"
    )


def central_moment(state, op, order):
    """``<(A - <A>)**order>`` for a hermitian operator, order 2 or 3.

    The mean is always subtracted; nothing assumes ``<A> = 0``.
    """
    if order not in (2, 3):
        raise ValueError(f"order must be 2 or 3, got {order}")
    if not op.hermitian:
        raise ValueError("central moments need a hermitian operator")
    vec = _matching_vector(state, op)
    return _central_moment_dense(vec, op.entries, order)


def _central_moment_dense(vec, entries, order):
    mean = _real(np.vdot(vec, entries @ vec), "<A>")
    shifted = vec
    for _ in range(order):
        shifted = entries @ shifted - mean * shifted
    return _real(np.vdot(vec, shifted), f"<(A-<A>)^{order}>")


def _central_moment_matrix_free(amplitudes, weights, n_atoms, order):
    """Central moment of an axis combination, without forming the operator."""
    applied = apply_axis_combination(amplitudes, weights, n_atoms)
    mean = _real(np.vdot(amplitudes, applied), "<A>")
    shifted = amplitudes
    for _ in range(order):
        shifted = (
            apply_axis_combination(shifted, weights, n_atoms) - mean * shifted
        )
    return _real(np.vdot(amplitudes, shifted), f"<(A-<A>)^{order}>")


def _triple_value(amplitudes, atoms, axes, n_atoms):
    """<J_pa J_qb J_rc> for one ordered atom triple (rightmost applied first)."""
    work = amplitudes
    for atom, axis in zip(reversed(atoms), reversed(axes)):
        work = apply_single_atom(work, atom, axis, n_atoms)
    return np.vdot(amplitudes, work)


def triple_correlators(state, allow_large=False, use_fast_path=True):
    """Correlator sums over all ordered triples of distinct atoms.

    Symmetric input takes the fast path: exchange symmetry makes every
    ordered triple contribute the same value, so one triple times
    N(N-1)(N-2) suffices.  ``use_fast_path=False`` forces the explicit sum
    (the validation reference for the fast path).
    """
    if isinstance(state, ProductState):
        full = product_to_full(state, allow_large)
        symmetric = None
    elif isinstance(state, SymmetricState):
        full = dicke_to_full(state, allow_large)
        symmetric = state
    elif isinstance(state, FullState):
        full = state
        symmetric = None
    else:
        raise TypeError(f"not a state: {type(state).__name__}")
    n = full.n_atoms
    if n < 3:
        raise DimensionMismatchError(f"triple correlators need N >= 3, got N={n}")

    values = {}
    if symmetric is not None and use_fast_path:
        count = n * (n - 1) * (n - 2)
        for pattern in PATTERNS:
            single = _triple_value(full.amplitudes, (1, 2, 3), pattern, n)
            values[pattern] = _real(count * single, f"correlator {pattern}")
    else:
        triples = [
            (p, q, r)
            for p in range(1, n + 1)
            for q in range(1, n + 1)
            for r in range(1, n + 1)
            if p != q and q != r and p != r
        ]
        for pattern in PATTERNS:
            total = 0.0 + 0.0j
            for atoms in triples:
                total += _triple_value(full.amplitudes, atoms, pattern, n)
            values[pattern] = _real(total, f"correlator {pattern}")
    return TripleCorrelatorSet(**values)


def correlator_weights_xp(cos_theta, sin_theta, cos_phi, sin_phi):
    """Angle-form weights of the ten patterns in the x' third moment."""
    ct, st, cp, sp = cos_theta, sin_theta, cos_phi, sin_phi
    return {
        "xxx": ct**3 * cp**3,
        "yyy": ct**3 * sp**3,
        "zzz": -(st**3),
        "xyz": -6.0 * st * ct**2 * sp * cp,
        "xxy": 3.0 * ct**3 * sp * cp**2,
        "xxz": -3.0 * st * ct**2 * cp**2,
        "xyy": 3.0 * ct**3 * sp**2 * cp,
        "yyz": -3.0 * st * ct**2 * sp**2,
        "xzz": 3.0 * st**2 * ct * cp,
        "yzz": 3.0 * st**2 * ct * sp,
    }


def correlator_weights_yp(cos_phi, sin_phi):
    """Angle-form weights of the four patterns in the y' third moment."""
    cp, sp = cos_phi, sin_phi
    return {
        "xxx": -(sp**3),
        "yyy": cp**3,
        "xxy": 3.0 * sp**2 * cp,
        "xyy": -3.0 * sp * cp**2,
    }


def third_moment_sum_xp(state, angles, correlators):
    """Third moment of Jx' from the ten-term tripartite correlator sum.

    Uses the mean-value weights when the transverse mean spin is resolvable;
    with the mean spin along +-z that form is 0/0, so the equivalent
    angle-form weights (regular in theta, phi) take over.
    """
    mean = mean_spin(state)
    jx, jy, jz = mean.jx, mean.jy, mean.jz
    t_sq = jx * jx + jy * jy
    corr = correlators
    if math.sqrt(t_sq) <= EPSILON_FRAME:
        weights = correlator_weights_xp(
            angles.cos_theta, angles.sin_theta, angles.cos_phi, angles.sin_phi
        )
        return sum(weights[p] * getattr(corr, p) for p in weights)
    numerator = (
        corr.xxx * jz**3 * jx**3
        + corr.yyy * jz**3 * jy**3
        - corr.zzz * (jx**6 + jy**6 + 3 * jx**4 * jy**2 + 3 * jx**2 * jy**4)
        - 6.0 * corr.xyz * t_sq * jz**2 * jx * jy
        + 3.0 * corr.xxy * jz**3 * jx**2 * jy
        - 3.0 * corr.xxz * t_sq * jx**2 * jz**2
        + 3.0 * corr.xyy * jz**3 * jx * jy**2
        - 3.0 * corr.yyz * t_sq * jy**2 * jz**2
        + 3.0 * corr.xzz * jx * jz * (jx**4 + jy**4 + 2 * jx**2 * jy**2)
        + 3.0 * corr.yzz * jy * jz * (jx**4 + jy**4 + 2 * jx**2 * jy**2)
    )
    return numerator / (mean.magnitude**3 * t_sq**1.5)


def third_moment_sum_yp(state, angles, correlators):
    """Third moment of Jy' from the four-term tripartite correlator sum."""
    mean = mean_spin(state)
    jx, jy = mean.jx, mean.jy
    t_sq = jx * jx + jy * jy
    corr = correlators
    if math.sqrt(t_sq) <= EPSILON_FRAME:
        weights = correlator_weights_yp(angles.cos_phi, angles.sin_phi)
        return sum(weights[p] * getattr(corr, p) for p in weights)
    numerator = (
        -corr.xxx * jy**3
        + corr.yyy * jx**3
        + 3.0 * corr.xxy * jx * jy**2
        - 3.0 * corr.xyy * jx**2 * jy
    )
    return numerator / t_sq**1.5


def direct_moments(state, space_tag="dicke", allow_large=False):
    """Mean spin, frame angles, and the direct-route central moments.

    Returns ``(mean, angles, var_xp, var_yp, m3_xp, m3_yp)``.  The ladder
    path works on N+1 dimensions; the full path applies the rotated
    combinations matrix-free in the 2**N space.
    """
    if isinstance(state, ProductState):
        state = product_to_full(state, allow_large)
    mean = mean_spin(state)
    angles = rotation_angles(mean)
    if space_tag == "dicke":
        sym = as_symmetric(state, allow_large)
        op_xp, op_yp, _ = rotated_ops(angles, sym.n_atoms, "dicke")
        var_xp = central_moment(sym, op_xp, 2)
        var_yp = central_moment(sym, op_yp, 2)
        m3_xp = central_moment(sym, op_xp, 3)
        m3_yp = central_moment(sym, op_yp, 3)
    elif space_tag == "full":
        full = dicke_to_full(state, allow_large) if isinstance(state, SymmetricState) else state
        rot = rotation_matrix(angles)
        var_xp = _central_moment_matrix_free(full.amplitudes, rot[0], full.n_atoms, 2)
        var_yp = _central_moment_matrix_free(full.amplitudes, rot[1], full.n_atoms, 2)
        m3_xp = _central_moment_matrix_free(full.amplitudes, rot[0], full.n_atoms, 3)
        m3_yp = _central_moment_matrix_free(full.amplitudes, rot[1], full.n_atoms, 3)
    else:
        raise ValueError(f"unknown space tag {space_tag!r}")
    return mean, angles, var_xp, var_yp, m3_xp, m3_yp


def entanglement_s(state, allow_large=False):
    """Full moment report, including S, for a symmetric pure state.

    S is half the root-mean-square combination of the two third moments and
    is computed from the direct route; the correlator-sum route is carried
    along as a cross check.

    Raises
    ------
    FrameUndefinedError
        For zero mean spin (the construction needs a direction to rotate to).
    NotSymmetricError
        If a full-space input leaves the symmetric subspace.
    """
    sym = as_symmetric(state, allow_large)
    mean, angles, var_xp, var_yp, m3_xp, m3_yp = direct_moments(
        sym, "dicke", allow_large
    )
    corr = triple_correlators(sym, allow_large)
    m3_xp_sum = third_moment_sum_xp(sym, angles, corr)
    m3_yp_sum = third_moment_sum_yp(sym, angles, corr)
    s_value = 0.5 * math.hypot(m3_xp, m3_yp)
    return MomentReport(
        n_atoms=sym.n_atoms,
        mean_spin=mean,
        angles=angles,
        var_xp=var_xp,
        var_yp=var_yp,
        m3_xp_direct=m3_xp,
        m3_yp_direct=m3_yp,
        m3_xp_sum=m3_xp_sum,
        m3_yp_sum=m3_yp_sum,
        s_parameter=s_value,
    )
