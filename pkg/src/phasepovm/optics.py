"""Single-photon interferometer simulation of the phase measurement.

The photon lives in polarization-resolved spatial modes: path m carries
an H slot at vector index 2m-1 and a V slot at index 2m (1-based), and
a state is the list of creation-operator coefficients over those slots.
Optical elements act as small block unitaries on the touched slots.

Two layouts realize the M-outcome measurement:

* the direct scheme, a chain of M/2 - 1 modular blocks, each tapping a
  beam splitter output into a polarizing splitter and a detector pair
  while the other output continues through a polarization rotation, and
* the folded scheme, one such block in a loop with a time-varying beam
  splitter, reading the outcome from the polarization and the time slot
  of the click.

Both reproduce the qubit POVM statistics exactly; a click on the H
detector of block k means outcome k, on the V detector outcome k + M/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compiler import Netlist, evaluate_netlist, triplet_angle
from .naimark import column_order
from .numerics import eig_hermitian_2x2
from .povm import OutcomeDistribution, validate_density, validate_outcome_count

NORM_TOL = 1e-12

# In the final time slot of the folded scheme the loop splitter is set
# fully transmissive, so the whole remaining amplitude exits to the
# detectors and nothing survives in the loop.
EXIT_SLOT_BS_ANGLE = 0.0


def mode_index(path: int, polarization: str) -> int:
    """0-based amplitude slot of (path, polarization), paths 1-based."""
    if polarization not in ("H", "V"):
        raise ValueError(f"polarization must be 'H' or 'V', got {polarization!r}")
    if path < 1:
        raise ValueError(f"path index must be >= 1, got {path}")
    return 2 * (path - 1) + (0 if polarization == "H" else 1)


@dataclass(frozen=True)
class ModeAmplitudes:
    """Creation-operator coefficients over 2*paths polarization modes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).copy()
        if a.ndim != 1 or len(a) < 2 or len(a) % 2 != 0:
            raise ValueError(
                f"amplitudes must have even length >= 2, got shape {a.shape}"
            )
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes contain non-finite entries")
        norm_sq = float(np.sum(np.abs(a) ** 2))
        if norm_sq > 1.0 + NORM_TOL:
            raise ValueError(f"squared norm {norm_sq} exceeds 1")
        object.__setattr__(self, "amplitudes", a)

    @property
    def paths(self) -> int:
        return len(self.amplitudes) // 2


@dataclass(frozen=True)
class PolarizationRotation:
    """Rotation of the polarization plane by ``angle`` on one path."""

    path: int
    angle: float


@dataclass(frozen=True)
class WaveplatePhase:
    """Waveplate applying e^{-i phase} to the V slot of one path."""

    path: int
    phase: float


@dataclass(frozen=True)
class PPBS:
    """Partially polarizing beam splitter between two paths.

    H slots mix with angle ``angle_h`` and V slots with ``angle_v``; the
    path_a slots take the (cos, sin) row of each rotation. Equal angles
    give an ordinary beam splitter.
    """

    path_a: int
    path_b: int
    angle_h: float
    angle_v: float

    def __post_init__(self):
        if self.path_a == self.path_b:
            raise ValueError("PPBS needs two distinct paths")


def beam_splitter(path_a: int, path_b: int, angle: float) -> PPBS:
    """Polarization-independent beam splitter."""
    return PPBS(path_a, path_b, angle, angle)


@dataclass(frozen=True)
class PBS:
    """Polarizing beam splitter: transmits H, moves V across paths.

    The limiting PPBS with angle_h = 0, angle_v = pi/2; V of path_b
    lands on path_a with a plus sign, V of path_a on path_b with a
    minus sign.
    """

    path_a: int
    path_b: int

    def __post_init__(self):
        if self.path_a == self.path_b:
            raise ValueError("PBS needs two distinct paths")


@dataclass(frozen=True)
class Detector:
    """Readout marker assigning an outcome to one (path, polarization)."""

    path: int
    polarization: str
    outcome: int


OpticalElement = PolarizationRotation | WaveplatePhase | PPBS | PBS | Detector


def input_state(phi: float, paths: int) -> ModeAmplitudes:
    """Single photon on path 1 carrying the phase: (1, e^{i phi})/sqrt(2)."""
    if paths < 1:
        raise ValueError(f"need at least one path, got {paths}")
    a = np.zeros(2 * paths, dtype=complex)
    a[0] = 1.0 / np.sqrt(2.0)
    a[1] = np.exp(1j * phi) / np.sqrt(2.0)
    return ModeAmplitudes(a)


def _rotate_rows(arr: np.ndarray, i: int, j: int, angle: float) -> None:
    c, s = np.cos(angle), np.sin(angle)
    ri, rj = arr[i].copy(), arr[j].copy()
    arr[i] = c * ri + s * rj
    arr[j] = -s * ri + c * rj


def _apply_to_rows(arr: np.ndarray, e: OpticalElement, paths: int) -> None:
    """Apply one element in place to an array of amplitude rows."""
    if isinstance(e, PolarizationRotation):
        if e.path > paths:
            raise ValueError(f"path {e.path} out of range ({paths} paths)")
        _rotate_rows(arr, mode_index(e.path, "H"), mode_index(e.path, "V"), e.angle)
    elif isinstance(e, WaveplatePhase):
        if e.path > paths:
            raise ValueError(f"path {e.path} out of range ({paths} paths)")
        arr[mode_index(e.path, "V")] *= np.exp(-1j * e.phase)
    elif isinstance(e, PPBS):
        if max(e.path_a, e.path_b) > paths:
            raise ValueError(
                f"paths ({e.path_a}, {e.path_b}) out of range ({paths} paths)"
            )
        _rotate_rows(arr, mode_index(e.path_a, "H"), mode_index(e.path_b, "H"), e.angle_h)
        _rotate_rows(arr, mode_index(e.path_a, "V"), mode_index(e.path_b, "V"), e.angle_v)
    elif isinstance(e, PBS):
        _apply_to_rows(arr, PPBS(e.path_a, e.path_b, 0.0, np.pi / 2), paths)
    elif isinstance(e, Detector):
        pass  # readout marker, no amplitude change
    else:
        raise TypeError(f"not an optical element: {e!r}")


def apply_element(state: ModeAmplitudes, e: OpticalElement) -> ModeAmplitudes:
    """Propagate a state through a single element (pure function)."""
    arr = state.amplitudes.copy()
    _apply_to_rows(arr, e, state.paths)
    return ModeAmplitudes(arr)


@dataclass(frozen=True)
class Scheme:
    """A concrete interferometer layout with its detector assignment.

    detector_map sends (path, polarization) to the outcome label of the
    detector sitting there, covering all M outcomes exactly once.
    port_outcomes records the outcome carried by each logical output
    port of the compiled netlist (port j holds outcome port_outcomes[j-1]),
    which is the interleaved ordering of the extension columns.
    """

    M: int
    n_paths: int
    elements: tuple[OpticalElement, ...]
    detector_map: dict[tuple[int, str], int]
    port_outcomes: tuple[int, ...]


def modular_block_isometry(m: int, k: int) -> np.ndarray:
    """Effective 4x2 map of block k: input pair to (detectors, pass-through).

    Rows 1-2 are the detector pair (beam splitter transmission cos
    theta_k), rows 3-4 the pass-through pair (reflection followed by the
    polarization rotation pi + pi/M); the two columns are orthonormal.
    """
    m = validate_outcome_count(m)
    if not 0 <= k <= m // 2 - 2:
        raise ValueError(f"block index k={k} out of range for M={m}")
    theta = triplet_angle(m, k)
    c, s = np.cos(theta), np.sin(theta)
    rot = np.pi + np.pi / m
    cr, sr = np.cos(rot), np.sin(rot)
    # reflection into the fresh path carries -s; the rotation then mixes
    # the pass-through pair
    lower = np.array([[cr, sr], [-sr, cr]]) @ np.array([[-s, 0.0], [0.0, -s]])
    return np.vstack([np.array([[c, 0.0], [0.0, c]]), lower]).astype(complex)


def build_direct_scheme(m: int) -> Scheme:
    """Lay out the chain interferometer for M outcomes.

    Path 1 carries the photon through the initial polarization rotation
    pi/4 and waveplate pi/2. Each modular block k then splits the
    current path on a beam splitter with angle theta_k toward a fresh
    vacuum path, sends the tapped side through a polarizing splitter
    onto an H detector (outcome k) and a V detector (outcome k + M/2),
    and rotates the pass-through polarization by pi + pi/M. The final
    pass-through pair meets one last polarizing splitter and detector
    pair. Polarizing splitters are oriented with the fresh detector
    path first so the reflected V amplitude keeps a plus sign; the
    scheme transfer matrix restricted to its logical ports then equals
    the compiled netlist of Z† exactly.
    """
    m = validate_outcome_count(m)
    elements: list[OpticalElement] = [
        PolarizationRotation(1, float(np.pi / 4)),
        WaveplatePhase(1, float(np.pi / 2)),
    ]
    detector_map: dict[tuple[int, str], int] = {}
    current = 1
    next_path = 2
    for k in range(m // 2 - 1):
        passthrough = next_path
        det = next_path + 1
        next_path += 2
        theta = triplet_angle(m, k)
        elements.append(beam_splitter(current, passthrough, theta))
        elements.append(PBS(det, current))
        elements.append(Detector(current, "H", k))
        elements.append(Detector(det, "V", k + m // 2))
        elements.append(PolarizationRotation(passthrough, float(np.pi + np.pi / m)))
        detector_map[(current, "H")] = k
        detector_map[(det, "V")] = k + m // 2
        current = passthrough
    det = next_path
    next_path += 1
    elements.append(PBS(det, current))
    elements.append(Detector(current, "H", m // 2 - 1))
    elements.append(Detector(det, "V", m - 1))
    detector_map[(current, "H")] = m // 2 - 1
    detector_map[(det, "V")] = m - 1
    return Scheme(
        M=m,
        n_paths=next_path - 1,
        elements=tuple(elements),
        detector_map=detector_map,
        port_outcomes=column_order(m),
    )


def scheme_transfer_matrix(scheme: Scheme) -> np.ndarray:
    """Full unitary of the layout over all 2*n_paths modes."""
    t = np.eye(2 * scheme.n_paths, dtype=complex)
    for e in scheme.elements:
        _apply_to_rows(t, e, scheme.n_paths)
    return t


def simulate_direct(scheme: Scheme, rho) -> OutcomeDistribution:
    """Detector-click statistics of the direct scheme on a qubit state.

    Pure states propagate as amplitude vectors; a mixed state is
    diagonalized and its eigenvectors propagated separately, the click
    probabilities combining linearly with the eigenvalues as weights.
    """
    rho = validate_density(rho)
    vals, vecs = eig_hermitian_2x2(rho)
    p = np.zeros(scheme.M)
    for val, vec in zip(vals, vecs.T):
        if val < 1e-15:
            continue
        arr = np.zeros(2 * scheme.n_paths, dtype=complex)
        arr[0:2] = vec
        for e in scheme.elements:
            _apply_to_rows(arr, e, scheme.n_paths)
        for (path, pol), k in scheme.detector_map.items():
            p[k] += val * float(np.abs(arr[mode_index(path, pol)]) ** 2)
    return OutcomeDistribution(M=scheme.M, probabilities=p)


def simulate_netlist(netlist: Netlist, rho) -> OutcomeDistribution:
    """Statistics of a compiled netlist driven on its first two modes.

    Output port j carries the outcome given by the interleaved column
    order, the same assignment the direct scheme realizes physically.
    """
    rho = validate_density(rho)
    m = netlist.M
    order = column_order(m)
    transfer = evaluate_netlist(netlist)
    vals, vecs = eig_hermitian_2x2(rho)
    p = np.zeros(m)
    for val, vec in zip(vals, vecs.T):
        if val < 1e-15:
            continue
        amps = np.zeros(m, dtype=complex)
        amps[0:2] = vec
        out = transfer @ amps
        for j in range(m):
            p[order[j]] += val * float(np.abs(out[j]) ** 2)
    return OutcomeDistribution(M=m, probabilities=p)


@dataclass(frozen=True)
class FoldedSlotSetting:
    """Loop configuration during one time slot (1-based slot index)."""

    slot: int
    bs_angle: float
    loop_rotation: float


def build_folded_schedule(m: int) -> list[FoldedSlotSetting]:
    """Per-slot splitter settings for the folded (loop) scheme.

    Slot k+1 (k = 0..M/2-2) uses the block angle theta_k and the loop
    polarization rotation pi + pi/M. In the final slot M/2 the splitter
    is set fully transmissive (EXIT_SLOT_BS_ANGLE), sending every
    remaining amplitude out to the detectors, so only M/2 - 1 active
    settings are needed. M=2 needs no loop at all and is rejected.
    """
    m = validate_outcome_count(m)
    if m == 2:
        raise ValueError("M=2 has a single block and no loop; use the direct scheme")
    return [
        FoldedSlotSetting(
            slot=k + 1,
            bs_angle=triplet_angle(m, k),
            loop_rotation=float(np.pi + np.pi / m),
        )
        for k in range(m // 2 - 1)
    ]


@dataclass(frozen=True)
class SlotDistribution:
    """Click probabilities per time slot of the folded scheme.

    probabilities has shape (M/2, 2); row k holds (P_H, P_V) for slot
    k+1, which map to outcomes k and k + M/2.
    """

    M: int
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (self.M // 2, 2):
            raise ValueError(
                f"expected shape {(self.M // 2, 2)}, got {p.shape}"
            )
        object.__setattr__(self, "probabilities", p)

    @property
    def slots(self) -> int:
        return self.M // 2

    def flatten(self) -> OutcomeDistribution:
        out = np.zeros(self.M)
        for k in range(self.M // 2):
            out[k] = self.probabilities[k, 0]
            out[k + self.M // 2] = self.probabilities[k, 1]
        return OutcomeDistribution(M=self.M, probabilities=out)


def simulate_folded(m: int, rho) -> SlotDistribution:
    """Time-slot-unrolled simulation of the loop scheme.

    Each round trip applies the slot's beam splitter, records the
    exiting pair on the detectors, and keeps the reflected pair in the
    loop through the polarization rotation. The final slot exits
    everything (see build_folded_schedule), leaving zero residual norm
    in the loop.
    """
    m = validate_outcome_count(m)
    schedule = build_folded_schedule(m)
    rho = validate_density(rho)
    vals, vecs = eig_hermitian_2x2(rho)
    pairs = np.zeros((m // 2, 2))
    for val, vec in zip(vals, vecs.T):
        if val < 1e-15:
            continue
        # initial block: polarization rotation pi/4 then waveplate pi/2
        h = (vec[0] + vec[1]) / np.sqrt(2.0)
        v = (-vec[0] + vec[1]) / np.sqrt(2.0) * np.exp(-1j * np.pi / 2)
        for setting in schedule:
            c, s = np.cos(setting.bs_angle), np.sin(setting.bs_angle)
            k = setting.slot - 1
            pairs[k, 0] += val * float(np.abs(c * h) ** 2)
            pairs[k, 1] += val * float(np.abs(c * v) ** 2)
            # reflected pair stays in the loop and gets rotated
            h, v = -s * h, -s * v
            cr, sr = np.cos(setting.loop_rotation), np.sin(setting.loop_rotation)
            h, v = cr * h + sr * v, -sr * h + cr * v
        c = np.cos(EXIT_SLOT_BS_ANGLE)
        pairs[m // 2 - 1, 0] += val * float(np.abs(c * h) ** 2)
        pairs[m // 2 - 1, 1] += val * float(np.abs(c * v) ** 2)
    return SlotDistribution(M=m, probabilities=pairs)


def distribution_to_json_dict(dist: OutcomeDistribution) -> dict:
    return {"M": dist.M, "probabilities": [float(p) for p in dist.probabilities]}


def distribution_to_csv(dist: OutcomeDistribution) -> str:
    lines = ["k,probability"]
    for k, p in enumerate(dist.probabilities):
        lines.append(f"{k},{float(p)!r}")
    return "\n".join(lines) + "\n"


def slot_distribution_to_json_dict(sd: SlotDistribution) -> dict:
    return {
        "M": sd.M,
        "slots": sd.slots,
        "pairs": [[float(a), float(b)] for a, b in sd.probabilities],
    }


def slot_distribution_to_csv(sd: SlotDistribution) -> str:
    lines = ["slot,p_h,p_v"]
    for k in range(sd.slots):
        ph, pv = sd.probabilities[k]
        lines.append(f"{k + 1},{float(ph)!r},{float(pv)!r}")
    return "\n".join(lines) + "\n"
