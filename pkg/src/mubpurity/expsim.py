"""Deviation-matrix simulation of the five-qubit swap-test purity protocol.

Register layout: qubit 0 is the probe, qubits 1-4 are A, B, A', B'. The
simulator evolves the traceless deviation part sigma_z^probe (x) rho (x) rho
of the register. A protocol run prepares two copies of the depolarized
family state, optionally pinches A and A' in a chosen Pauli basis, and
reads a purity through controlled-SWAP gates conditioned on the probe:
with both pair swaps the probe coherence returns Tr(rho rho'), with the
BB' swap alone Tr(rho_B rho'_B).

Sites for noise: a one-parameter depolarizing channel acts on every qubit
touched by a controlled-SWAP, immediately after the gate. Rescaling divides
each measured value by the attenuation observed on a reference state whose
ideal panel is computed noiselessly by the same pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import PAULI_Z, partial_trace_matrix
from .states import _check_alpha, _check_x, psi_alpha
from .tolerances import TOL_STRUCTURAL

N_QUBITS = 5
DIM = 2 ** N_QUBITS

# Panel entries in readout order: full-pair purity, pair purity after each
# axis pinch, B purity, and B purity after each axis pinch.
PANEL_FIELDS = (
    "purity_AB",
    "purity_xB",
    "purity_yB",
    "purity_zB",
    "purity_B",
    "purity_B_given_x",
    "purity_B_given_y",
    "purity_B_given_z",
)

_PROBE, _A, _B, _A2, _B2 = range(N_QUBITS)
_SZ_PROBE = np.kron(PAULI_Z, np.eye(DIM // 2))
_QUBIT_BITS = [((np.arange(DIM) >> (N_QUBITS - 1 - q)) & 1) for q in range(N_QUBITS)]


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit depolarizing probability applied after each controlled-SWAP."""

    p_depol: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        if not 0.0 <= float(self.p_depol) <= 1.0:
            raise ValueError(f"p_depol={self.p_depol!r} outside [0, 1]")

    @property
    def active(self) -> bool:
        return self.enabled and self.p_depol > 0.0


NOISELESS = NoiseModel()


@dataclass
class CircuitState:
    """Mutable register state: deviation matrix plus gate/noise log.

    ``reference_amplitude`` is the probe sigma_z amplitude captured at
    preparation time; readouts divide by it so that ideal pure-state runs
    report exactly 1.
    """

    deviation: np.ndarray
    noise: NoiseModel = NOISELESS
    gate_log: list[str] = field(default_factory=list)
    reference_amplitude: float = 2.0
    n_qubits: int = N_QUBITS

    def __post_init__(self):
        dev = np.asarray(self.deviation, dtype=complex)
        if dev.shape != (DIM, DIM):
            raise ValueError(f"deviation must be {DIM}x{DIM}, got {dev.shape}")
        self.deviation = dev
        _check_deviation(dev)

    def log_dump(self) -> str:
        """Newline-delimited gate/noise descriptors, for debugging."""
        return "".join(entry + "\n" for entry in self.gate_log)


def _check_deviation(dev: np.ndarray) -> None:
    if abs(np.trace(dev)) > TOL_STRUCTURAL:
        raise RuntimeError(f"deviation trace drifted to {np.trace(dev)!r}")
    if float(np.abs(dev - dev.conj().T).max()) > TOL_STRUCTURAL:
        raise RuntimeError("deviation lost hermiticity")


def _check_qubit(q: int) -> int:
    q = int(q)
    if not 0 <= q < N_QUBITS:
        raise ValueError(f"qubit index {q} out of range 0..{N_QUBITS - 1}")
    return q


def _embed_single(u: np.ndarray, qubit: int) -> np.ndarray:
    left = np.eye(2 ** qubit)
    right = np.eye(2 ** (N_QUBITS - 1 - qubit))
    return np.kron(np.kron(left, u), right)


def _ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _cswap_unitary(control: int, q1: int, q2: int) -> np.ndarray:
    mask = (1 << (N_QUBITS - 1 - q1)) | (1 << (N_QUBITS - 1 - q2))
    u = np.zeros((DIM, DIM))
    for idx in range(DIM):
        target = idx
        if (idx >> (N_QUBITS - 1 - control)) & 1:
            b1 = (idx >> (N_QUBITS - 1 - q1)) & 1
            b2 = (idx >> (N_QUBITS - 1 - q2)) & 1
            if b1 != b2:
                target = idx ^ mask
        u[target, idx] = 1.0
    return u


def _pinch(dev: np.ndarray, qubit: int) -> np.ndarray:
    """Zero every element whose bra and ket differ on the given qubit."""
    bits = _QUBIT_BITS[qubit]
    return np.where(bits[:, None] == bits[None, :], dev, 0.0)


def _depolarize(dev: np.ndarray, qubit: int, p: float) -> np.ndarray:
    """(1-p) dev + p * (I/2 on the qubit) (x) Tr_qubit(dev)."""
    t = dev.reshape([2] * (2 * N_QUBITS))
    traced = np.trace(t, axis1=qubit, axis2=qubit + N_QUBITS)
    mixed = np.zeros_like(t)
    sl: list = [slice(None)] * (2 * N_QUBITS)
    for b in (0, 1):
        sl[qubit] = b
        sl[qubit + N_QUBITS] = b
        mixed[tuple(sl)] = traced / 2.0
        sl[qubit] = slice(None)
        sl[qubit + N_QUBITS] = slice(None)
    return (1.0 - p) * dev + p * mixed.reshape(DIM, DIM)


def apply_gate(state: CircuitState, gate: tuple) -> CircuitState:
    """Apply one gate descriptor in place and append it to the log.

    Descriptors: ("RY", qubit, angle), ("RX", qubit, angle),
    ("CSWAP", control, q1, q2), ("DEPHASE", qubit). Unitary gates conjugate
    the deviation; DEPHASE pinches the target qubit in the computational
    basis. When noise is active, depolarizing follows every CSWAP on each
    involved qubit.
    """
    kind = str(gate[0]).upper()
    if kind in ("RY", "RX"):
        _, qubit, angle = gate
        qubit = _check_qubit(qubit)
        u = _embed_single(_ry(angle) if kind == "RY" else _rx(angle), qubit)
        state.deviation = u @ state.deviation @ u.conj().T
        state.gate_log.append(f"{kind} q={qubit} angle={float(angle)!r}")
    elif kind == "CSWAP":
        control, q1, q2 = (int(v) for v in gate[1:])
        for q in (control, q1, q2):
            _check_qubit(q)
        if len({control, q1, q2}) != 3:
            raise ValueError(f"CSWAP qubits must be distinct, got {control},{q1},{q2}")
        u = _cswap_unitary(control, q1, q2)
        state.deviation = u @ state.deviation @ u.T
        state.gate_log.append(f"CSWAP c={control} q1={q1} q2={q2}")
        if state.noise.active:
            for q in (control, q1, q2):
                state.deviation = _depolarize(state.deviation, q, state.noise.p_depol)
                state.gate_log.append(f"DEPOL q={q} p={float(state.noise.p_depol)!r}")
    elif kind == "DEPHASE":
        _, qubit = gate
        qubit = _check_qubit(qubit)
        state.deviation = _pinch(state.deviation, qubit)
        state.gate_log.append(f"DEPHASE q={qubit}")
    else:
        raise ValueError(f"unknown gate kind {gate[0]!r}")
    _check_deviation(state.deviation)
    return state


def prepare_pair_state(alpha: float, x: float, noise: NoiseModel = NOISELESS) -> CircuitState:
    """Prepare sigma_z^probe (x) rho(alpha, x) (x) rho(alpha, x).

    Temporal averaging: the mixture is assembled as the weighted classical
    sum of up to four separately built branch deviations, one per term of
    (x P + (1-x)/4 I)^(x2) with P the projector on the entangled pure
    state. Zero-weight branches are skipped, so x = 1 is a single run.
    """
    alpha = _check_alpha(alpha)
    x = _check_x(x)
    pure = psi_alpha(alpha).projector()
    mixed = np.eye(4, dtype=complex)
    branches = (
        ((1.0 - x) ** 2 / 16.0, mixed, mixed, "mixed,mixed"),
        (x * (1.0 - x) / 4.0, mixed, pure, "mixed,pure"),
        (x * (1.0 - x) / 4.0, pure, mixed, "pure,mixed"),
        (x * x, pure, pure, "pure,pure"),
    )
    dev = np.zeros((DIM, DIM), dtype=complex)
    log = [f"PREPARE alpha={alpha!r} x={x!r}"]
    for weight, first, second, label in branches:
        if weight == 0.0:
            continue
        dev += weight * np.kron(PAULI_Z, np.kron(first, second))
        log.append(f"BRANCH parts={label} weight={weight!r}")
    reference = float(np.trace(dev @ _SZ_PROBE).real)
    return CircuitState(dev, noise=noise, gate_log=log, reference_amplitude=reference)


def mub_measure_block(state: CircuitState, axis: str, both_copies: bool = True) -> CircuitState:
    """Pinch the A qubit(s) in the given Pauli basis.

    x: rotate by -pi/2 about y, dephase, rotate back; y: rotate by +pi/2
    about x, dephase, rotate back with the opposite phase; z: dephase only.
    With ``both_copies`` the block acts on A and A' so the two register
    copies undergo identical measurements.
    """
    axis = str(axis).lower()
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    targets = (_A, _A2) if both_copies else (_A,)
    if axis == "x":
        for q in targets:
            apply_gate(state, ("RY", q, -np.pi / 2))
    elif axis == "y":
        for q in targets:
            apply_gate(state, ("RX", q, np.pi / 2))
    for q in targets:
        apply_gate(state, ("DEPHASE", q))
    if axis == "x":
        for q in targets:
            apply_gate(state, ("RY", q, np.pi / 2))
    elif axis == "y":
        for q in targets:
            apply_gate(state, ("RX", q, -np.pi / 2))
    return state


def swap_test_readout(state: CircuitState, which: str = "AB") -> float:
    """Controlled-SWAP interference readout of a copy overlap.

    Creates probe coherence, applies CSWAP(probe; A, A') and
    CSWAP(probe; B, B') for ``which="AB"`` (only the BB' gate for
    ``which="B"``), rotates the coherence back and returns the probe
    sigma_z expectation over the preparation reference amplitude. For
    identical noiseless copies this is Tr(rho_AB^2), resp. Tr(rho_B^2).
    """
    if state.deviation.shape != (DIM, DIM):
        raise ValueError("malformed register")
    which = str(which).upper()
    if which not in ("AB", "B"):
        raise ValueError(f"which must be 'AB' or 'B', got {which!r}")
    if state.reference_amplitude == 0.0:
        raise ValueError("reference amplitude is zero; was the state prepared?")
    apply_gate(state, ("RY", _PROBE, np.pi / 2))
    if which == "AB":
        apply_gate(state, ("CSWAP", _PROBE, _A, _A2))
    apply_gate(state, ("CSWAP", _PROBE, _B, _B2))
    apply_gate(state, ("RY", _PROBE, -np.pi / 2))
    value = float(np.trace(state.deviation @ _SZ_PROBE).real)
    state.gate_log.append(f"READ which={which}")
    return value / state.reference_amplitude


def ab_marginal(dev: np.ndarray) -> np.ndarray:
    """AB block of a prepared deviation: probe-ground sector traced over A'B'.

    Valid before the readout gates scramble the register; for unit-trace
    copies it returns the 4x4 state of the first pair.
    """
    block = np.asarray(dev)[: DIM // 2, : DIM // 2]
    return partial_trace_matrix(block, (2, 2, 2, 2), keep=(0, 1))


# Protocol settings: measurement axis (None = no pinch) and readout target.
_SETTINGS = {
    "purity_AB": (None, "AB"),
    "purity_xB": ("x", "AB"),
    "purity_yB": ("y", "AB"),
    "purity_zB": ("z", "AB"),
    "purity_B": (None, "B"),
    "purity_B_given_x": ("x", "B"),
    "purity_B_given_y": ("y", "B"),
    "purity_B_given_z": ("z", "B"),
}


def _run_setting(alpha: float, x: float, noise: NoiseModel, setting: str) -> float:
    axis, which = _SETTINGS[setting]
    state = prepare_pair_state(alpha, x, noise)
    if axis is not None:
        mub_measure_block(state, axis, both_copies=True)
    return swap_test_readout(state, which)


def calibration_factors(noise: NoiseModel = NOISELESS) -> dict[str, float]:
    """Per-setting attenuation measured on the maximally entangled reference.

    Runs every setting on the pure alpha = pi/2, x = 1 state with and
    without noise; the ratio noisy/ideal is the attenuation divided out by
    :func:`rescale`. All factors are 1 when noise is inactive.
    """
    if not noise.active:
        return {name: 1.0 for name in PANEL_FIELDS}
    factors = {}
    for name in PANEL_FIELDS:
        ideal = _run_setting(np.pi / 2, 1.0, NOISELESS, name)
        noisy = _run_setting(np.pi / 2, 1.0, noise, name)
        factor = noisy / ideal
        if factor <= 0.0:
            raise ValueError(f"non-positive attenuation factor for {name}: {factor!r}")
        factors[name] = factor
    return factors


def rescale(raw: dict[str, float], calibration: dict[str, float]) -> dict[str, float]:
    """Divide each raw panel value by its setting's attenuation factor."""
    out = {}
    for name, value in raw.items():
        factor = calibration[name]
        if factor <= 0.0:
            raise ValueError(f"attenuation factor for {name} must be positive, got {factor!r}")
        out[name] = value / factor
    return out


@dataclass(frozen=True)
class PurityPanel:
    """The eight measured purities of one protocol run, raw and rescaled."""

    alpha: float
    x: float
    noise_p: float
    raw: dict[str, float]
    rescaled: dict[str, float]

    def relation_sides(self, use_raw: bool = False) -> tuple[float, float]:
        """lhs and rhs of the conservation relation for this panel (d=2, M=3)."""
        v = self.raw if use_raw else self.rescaled
        lhs = sum(v["purity_B"] - v[f"purity_{ax}B"] for ax in ("x", "y", "z"))
        rhs = 2.0 * (v["purity_B"] - v["purity_AB"] / 2.0)
        return lhs, rhs

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "x": self.x,
            "noise_p": self.noise_p,
            "raw": {name: self.raw[name] for name in PANEL_FIELDS},
            "rescaled": {name: self.rescaled[name] for name in PANEL_FIELDS},
        }


def run_protocol(
    alpha: float,
    x: float,
    noise: NoiseModel = NOISELESS,
    calibration: dict[str, float] | None = None,
) -> PurityPanel:
    """Measure the full eight-purity panel, one fresh preparation per setting.

    With noise active the raw values are attenuated; the rescaled ones
    divide out the calibration factors (computed here if not supplied).
    Noiseless runs return identical raw and rescaled panels.
    """
    alpha = _check_alpha(alpha)
    x = _check_x(x)
    raw = {name: _run_setting(alpha, x, noise, name) for name in PANEL_FIELDS}
    if calibration is None:
        calibration = calibration_factors(noise)
    return PurityPanel(
        alpha=alpha,
        x=x,
        noise_p=float(noise.p_depol) if noise.active else 0.0,
        raw=raw,
        rescaled=rescale(raw, calibration),
    )
