"""Purity conservation relations for measurements in mutually unbiased bases.

Given a bipartite state rho on dims (d, D) and M MUBs on the d-dimensional
side, a non-selective projective measurement of side A in basis theta
pinches rho into ``rho_thetaB``. The relation checked here balances the
purity lost across the M measurement choices:

    sum_theta (Tr rho_B^2 - Tr rho_thetaB^2)
        >= (M - 1) * (Tr rho_B^2 - Tr rho_AB^2 / d),

with equality whenever M = d + 1. Both sides are tied to the operator

    gamma = I_A (x) rho_B + (M-1)/d * rho_AB - sum_theta rho_thetaB,

which vanishes at M = d + 1 and is positive semidefinite for M <= d. The
module computes gamma both from that definition and through an independent
projector/partial-transpose route, which serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityMatrix,
    PureState,
    frobenius_norm,
    hermitian_eigenvalues,
    partial_trace_matrix,
    partial_transpose,
    purity,
)
from .mub import MubSet, MubValidationError, validate_mubs
from .tolerances import TOL_NULLSPACE, TOL_PSD, TOL_SPECTRAL, TOL_STRUCTURAL


@dataclass(frozen=True)
class BipartiteBasis:
    """Orthonormal basis of the d*d space built from a MUB set.

    ``phi`` is the maximally entangled state over basis 1, ``phis[t][k-1]``
    its phase-twisted companions for basis t+1 and twist k = 1..d-1, and
    ``complement`` the (d-1)(d+1-M) states completing the basis.
    ``projector`` projects onto the complement span.
    """

    d: int
    M: int
    phi: PureState
    phis: tuple[tuple[PureState, ...], ...]
    complement: tuple[PureState, ...]
    projector: np.ndarray
    mubs: MubSet

    @property
    def p(self) -> int:
        return len(self.complement)

    def constructed_states(self) -> np.ndarray:
        """All M(d-1)+1 constructed states, stacked as rows."""
        rows = [self.phi.amplitudes]
        rows.extend(s.amplitudes for group in self.phis for s in group)
        return np.stack(rows)

    def all_states(self) -> np.ndarray:
        """Constructed plus complement states, stacked as rows."""
        rows = [self.constructed_states()]
        if self.complement:
            rows.append(np.stack([s.amplitudes for s in self.complement]))
        return np.concatenate(rows)


def _orthonormal_complement(span_rows: np.ndarray, dim: int) -> list[np.ndarray]:
    """Orthonormal null-space basis via Gram-Schmidt over candidates e_0..e_{dim-1}.

    Candidates whose residual norm drops below the null-space pivot
    threshold are considered inside the span and skipped. One
    re-orthogonalization pass keeps residual overlaps at rounding level.
    """
    basis = [row for row in span_rows]
    out: list[np.ndarray] = []
    for j in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[j] = 1.0
        for _ in range(2):
            for u in basis:
                v = v - u * (u.conj() @ v)
        nrm = np.linalg.norm(v)
        if nrm >= TOL_NULLSPACE:
            v = v / nrm
            basis.append(v)
            out.append(v)
    return out


def build_bipartite_basis(mubs: MubSet) -> BipartiteBasis:
    """Construct the entangled basis states, their complement and its projector.

    The second factor of every constructed state carries the complex
    conjugate (taken in the computational basis) of the first factor's
    vector. All invariants (pairwise orthonormality, projector idempotency
    and rank, agreement of the two projector expressions) are verified
    before returning.
    """
    report = validate_mubs(mubs)
    if not report.passed:
        raise MubValidationError(f"basis set failed validation:\n{report.summary()}", report)
    d, m = mubs.d, mubs.M
    omega = np.exp(2j * np.pi / d)

    b1 = mubs.bases[0]
    phi_vec = np.zeros(d * d, dtype=complex)
    for i in range(d):
        phi_vec += np.kron(b1[i], b1[i].conj())
    phi_vec /= np.sqrt(d)

    phis: list[tuple[PureState, ...]] = []
    for t in range(m):
        group = []
        for k in range(1, d):
            v = np.zeros(d * d, dtype=complex)
            for i in range(d):
                v += omega ** (k * i) * np.kron(mubs.bases[t, i], mubs.bases[t, i].conj())
            group.append(PureState(v / np.sqrt(d)))
        phis.append(tuple(group))

    constructed = [phi_vec] + [s.amplitudes for group in phis for s in group]
    span = np.stack(constructed)
    complement = _orthonormal_complement(span, d * d)
    p = (d - 1) * (d + 1 - m)
    if len(complement) != p:
        raise RuntimeError(
            f"complement sweep found {len(complement)} states, expected {p}"
        )

    projector = np.eye(d * d, dtype=complex) - span.conj().T @ span

    basis = BipartiteBasis(
        d=d,
        M=m,
        phi=PureState(phi_vec),
        phis=tuple(phis),
        complement=tuple(PureState(v) for v in complement),
        projector=projector,
        mubs=mubs,
    )
    _check_basis_invariants(basis)
    return basis


def _check_basis_invariants(basis: BipartiteBasis) -> None:
    states = basis.all_states()
    gram = states.conj() @ states.T
    gram_dev = float(np.abs(gram - np.eye(states.shape[0])).max())
    if gram_dev > TOL_STRUCTURAL:
        raise RuntimeError(f"basis states not orthonormal: max deviation {gram_dev:.3e}")
    p_mat = basis.projector
    if basis.complement:
        comp = np.stack([s.amplitudes for s in basis.complement])
        alt = comp.conj().T @ comp
    else:
        alt = np.zeros_like(p_mat)
    if float(np.abs(p_mat - alt).max()) > TOL_STRUCTURAL:
        raise RuntimeError("projector disagrees with the sum over complement states")
    if frobenius_norm(p_mat @ p_mat - p_mat) > TOL_PSD:
        raise RuntimeError("projector is not idempotent within tolerance")
    if abs(np.trace(p_mat).real - basis.p) > TOL_SPECTRAL:
        raise RuntimeError("projector rank disagrees with complement count")


@dataclass(frozen=True)
class PtIdentityReport:
    """Frobenius deviations of the partial-transpose identities.

    ``phi_deviation`` compares the partial transpose of |phi><phi| against
    (1/d) sum_ij |i1><j1| (x) |j1><i1|; ``theta_deviations[t]`` compares,
    for basis t+1, the partial transpose of sum_k |phi_{t,k}><phi_{t,k}|
    against sum_i P_i (x) P_i - (1/d) sum_ij |i><j| (x) |j><i|.
    """

    phi_deviation: float
    theta_deviations: tuple[float, ...]
    tolerance: float = TOL_STRUCTURAL

    @property
    def max_deviation(self) -> float:
        return max(self.phi_deviation, *self.theta_deviations)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def check_pt_identities(basis: BipartiteBasis) -> PtIdentityReport:
    """Verify the partial-transpose rewrites of the constructed projectors."""
    d = basis.d
    dims = (d, d)
    mubs = basis.mubs

    lhs = partial_transpose(basis.phi.projector(), dims, subsystem=1)
    b1 = mubs.bases[0]
    rhs = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            rhs += np.kron(np.outer(b1[i], b1[j].conj()), np.outer(b1[j], b1[i].conj()))
    phi_dev = frobenius_norm(lhs - rhs / d)

    theta_devs = []
    for t in range(basis.M):
        acc = np.zeros((d * d, d * d), dtype=complex)
        for s in basis.phis[t]:
            acc += s.projector()
        lhs = partial_transpose(acc, dims, subsystem=1)
        vecs = mubs.bases[t]
        rhs = np.zeros_like(acc)
        for i in range(d):
            pi = np.outer(vecs[i], vecs[i].conj())
            rhs += np.kron(pi, pi)
        for i in range(d):
            for j in range(d):
                rhs -= np.kron(
                    np.outer(vecs[i], vecs[j].conj()), np.outer(vecs[j], vecs[i].conj())
                ) / d
        theta_devs.append(frobenius_norm(lhs - rhs))

    return PtIdentityReport(float(phi_dev), tuple(float(v) for v in theta_devs))


def _check_bipartite_input(rho: DensityMatrix, d: int) -> int:
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    if rho.dims[0] != d:
        raise ValueError(f"state A-dimension {rho.dims[0]} does not match basis dimension {d}")
    return rho.dims[1]


def post_measurement_state(rho: DensityMatrix, mubs: MubSet, theta: int) -> DensityMatrix:
    """State after a non-selective measurement of side A in basis ``theta`` (1-based).

    Returns sum_i |i><i| (x) <i|rho|i> for the vectors |i> of the chosen
    basis; the trace and the B marginal are preserved.
    """
    big_d = _check_bipartite_input(rho, mubs.d)
    if not 1 <= int(theta) <= mubs.M:
        raise ValueError(f"basis label {theta} out of range 1..{mubs.M}")
    d = mubs.d
    out = np.zeros((d * big_d, d * big_d), dtype=complex)
    eye_b = np.eye(big_d)
    for i in range(d):
        ket = mubs.bases[int(theta) - 1, i]
        bra_embed = np.kron(ket.conj().reshape(1, d), eye_b)
        block = bra_embed @ rho.matrix @ bra_embed.conj().T
        out += np.kron(np.outer(ket, ket.conj()), block)
    return DensityMatrix(out, rho.dims)


def _post_measurement_all(rho: DensityMatrix, mubs: MubSet) -> list[DensityMatrix]:
    return [post_measurement_state(rho, mubs, t) for t in mubs.labels]


def gamma_direct(rho: DensityMatrix, mubs: MubSet) -> np.ndarray:
    """The measurement-defect operator from its definition.

    gamma = I_A (x) rho_B + (M-1)/d * rho - sum_theta rho_thetaB. Hermitian;
    zero when M = d+1, positive semidefinite when M <= d.
    """
    big_d = _check_bipartite_input(rho, mubs.d)
    d, m = mubs.d, mubs.M
    rho_b = partial_trace_matrix(rho.matrix, rho.dims, keep=(1,))
    g = np.kron(np.eye(d), rho_b) + (m - 1) / d * rho.matrix
    for pm in _post_measurement_all(rho, mubs):
        g = g - pm.matrix
    return g


def gamma_via_projector(rho: DensityMatrix, basis: BipartiteBasis) -> np.ndarray:
    """The same operator through the complement projector.

    Relabels side A of rho as an auxiliary factor C, embeds the partially
    transposed projector as P^{T_C} (x) I_B and the state as I_A (x) rho_CB
    on A (x) C (x) B, multiplies, and traces out C. Agrees with
    :func:`gamma_direct` up to rounding; the agreement is a two-route check
    of both implementations.
    """
    d = basis.d
    big_d = _check_bipartite_input(rho, d)
    ptc = partial_transpose(basis.projector, (d, d), subsystem=1)
    left = np.kron(ptc, np.eye(big_d))
    right = np.kron(np.eye(d), rho.matrix)
    return partial_trace_matrix(left @ right, (d, d, big_d), keep=(0, 2))


@dataclass(frozen=True)
class RelationReport:
    """All purities and both sides of the conservation relation for one state."""

    d: int
    D: int
    M: int
    purity_AB: float
    purity_B: float
    purity_thetaB: tuple[float, ...]
    purity_B_given_theta: tuple[float, ...]
    lhs: float
    rhs: float
    gap: float
    gamma_expectation: float
    gamma_min_eig: float
    equality_expected: bool

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "M": self.M,
            "purity_AB": self.purity_AB,
            "purity_B": self.purity_B,
            "purity_thetaB": list(self.purity_thetaB),
            "purity_B_given_theta": list(self.purity_B_given_theta),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "gamma_expectation": self.gamma_expectation,
            "gamma_min_eig": self.gamma_min_eig,
            "equality_expected": self.equality_expected,
        }


def relation_report(rho: DensityMatrix, mubs: MubSet) -> RelationReport:
    """Evaluate every quantity entering the conservation relation.

    lhs = sum_theta (Tr rho_B^2 - Tr rho_thetaB^2) and
    rhs = (M-1) (Tr rho_B^2 - Tr rho_AB^2 / d); their gap is nonnegative up
    to rounding and vanishes when M = d+1. ``gamma_expectation`` is the
    contraction Tr(gamma rho), which equals
    Tr rho_B^2 + (M-1)/d Tr rho_AB^2 - sum_theta Tr rho_thetaB^2.
    """
    big_d = _check_bipartite_input(rho, mubs.d)
    d, m = mubs.d, mubs.M
    p_ab = purity(rho)
    rho_b = partial_trace_matrix(rho.matrix, rho.dims, keep=(1,))
    p_b = purity(rho_b)

    pms = _post_measurement_all(rho, mubs)
    p_theta = tuple(purity(pm) for pm in pms)
    p_b_given = tuple(
        purity(partial_trace_matrix(pm.matrix, pm.dims, keep=(1,))) for pm in pms
    )

    lhs = sum(p_b - p for p in p_theta)
    rhs = (m - 1) * (p_b - p_ab / d)

    g = np.kron(np.eye(d), rho_b) + (m - 1) / d * rho.matrix
    for pm in pms:
        g = g - pm.matrix
    gamma_expectation = float(np.trace(g @ rho.matrix).real)
    gamma_min = float(hermitian_eigenvalues(g)[0])

    return RelationReport(
        d=d,
        D=big_d,
        M=m,
        purity_AB=p_ab,
        purity_B=p_b,
        purity_thetaB=p_theta,
        purity_B_given_theta=p_b_given,
        lhs=float(lhs),
        rhs=float(rhs),
        gap=float(lhs - rhs),
        gamma_expectation=gamma_expectation,
        gamma_min_eig=gamma_min,
        equality_expected=(m == d + 1),
    )
