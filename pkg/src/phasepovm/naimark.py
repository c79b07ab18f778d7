"""Naimark extension of the phase measurement to a projective one.

The M rank-one elements Pi_k of the qubit measurement are lifted to M
orthogonal rank-one projectors P_k = Z_k Z_k† on an M-dimensional
space (ancilla of dimension M/2 tensor the qubit, ancilla-major
ordering). The extension columns Z_k are built two ways:

* a closed form giving every coefficient of every column directly, and
* a recursive construction that fixes the first two entries of each
  column to X_k = sqrt(2/M) psi_k and solves the remaining entries one
  at a time from orthogonality against the columns already built,
  finishing each column with a positive real norm-completing entry.

Columns are packed in the interleaved order
(Z_0, Z_{M/2}, Z_1, Z_{M/2+1}, ..., Z_{M/2-1}, Z_{M-1}); the closed
form and the recursion agree only in this build order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import COMPARISON_TOL, partial_trace_ancilla
from .povm import povm_element, psi_k, random_density, validate_outcome_count

# Residuals below this are treated as exact when deciding whether a
# column still needs a norm-completing entry.
SKIP_TOL = 1e-12


def column_order(m: int) -> tuple[int, ...]:
    """Outcome index carried by each column position (the interleaving)."""
    m = validate_outcome_count(m)
    order = []
    for j in range(m):
        order.append(j // 2 if j % 2 == 0 else m // 2 + j // 2)
    return tuple(order)


@dataclass(frozen=True)
class ExtensionMatrix:
    """Unitary M x M matrix whose columns extend the POVM directions.

    column_order[j] is the outcome index of column j, fixed to the
    interleaved packing; the top two entries of the column for outcome
    k equal X_k = sqrt(2/M) psi_k.
    """

    M: int
    Z: np.ndarray
    column_order: tuple[int, ...]

    def column_for_outcome(self, k: int) -> np.ndarray:
        j = self.column_order.index(k)
        return self.Z[:, j]


def closed_form_column(m: int, k: int) -> np.ndarray:
    """Extension column Z_k from the closed form.

    For k < M/2 the column is the pair (e^{-i pi k/M}, e^{i pi k/M})/sqrt(M),
    then cosine/sine pairs -2cos((k-j)pi/M), -2sin((k-j)pi/M) scaled by
    1/sqrt((M-2j)(M-2j-2)) for j = 0..k-1, then the norm-completing
    entry sqrt((M-2k-2)/(M-2k)), then zeros. For k >= M/2 the pairs are
    sine/cosine swapped with the signs (+, -) and the norm entry sits
    one position later, after an explicit zero. Entries that the
    pattern would place beyond position M are zero and are truncated.
    """
    m = validate_outcome_count(m)
    k = int(k)
    if not 0 <= k < m:
        raise ValueError(f"outcome index k={k} out of range for M={m}")
    z = np.zeros(m, dtype=complex)
    z[0] = np.exp(-1j * np.pi * k / m) / np.sqrt(m)
    z[1] = np.exp(1j * np.pi * k / m) / np.sqrt(m)
    kk = k if k < m // 2 else k - m // 2
    for j in range(kk):
        den = np.sqrt((m - 2 * j) * (m - 2 * j - 2))
        c = 2.0 * np.cos((kk - j) * np.pi / m) / den
        s = 2.0 * np.sin((kk - j) * np.pi / m) / den
        if k < m // 2:
            z[2 * j + 2] = -c
            z[2 * j + 3] = -s
        else:
            z[2 * j + 2] = s
            z[2 * j + 3] = -c
    norm_pos = 2 * kk + 2 if k < m // 2 else 2 * kk + 3
    if norm_pos < m:
        z[norm_pos] = np.sqrt((m - 2 * kk - 2) / (m - 2 * kk))
    return z


def build_extension_closed(m: int) -> ExtensionMatrix:
    """Assemble the extension matrix from closed-form columns."""
    m = validate_outcome_count(m)
    order = column_order(m)
    z = np.zeros((m, m), dtype=complex)
    for j, k in enumerate(order):
        z[:, j] = closed_form_column(m, k)
    return ExtensionMatrix(M=m, Z=z, column_order=order)


def build_extension_recursive(m: int) -> ExtensionMatrix:
    """Build the extension column by column from the constraints alone.

    Each column starts from X_k. Orthogonality against every previously
    built column is then imposed in build order; while the new column is
    shorter than the previous one the constraint is linear in exactly
    one fresh coefficient, otherwise it must already hold. A column that
    is still short of unit norm gets a final positive real entry.
    """
    m = validate_outcome_count(m)
    order = column_order(m)
    z = np.zeros((m, m), dtype=complex)
    lengths: list[int] = []
    for j, k in enumerate(order):
        col = np.zeros(m, dtype=complex)
        col[:2] = np.sqrt(2.0 / m) * psi_k(m, k)
        t = 2
        for i in range(j):
            lp = lengths[i]
            if t >= lp:
                # All entries entering this constraint are fixed; it
                # must already be satisfied.
                if abs(np.vdot(z[:t, i], col[:t])) > SKIP_TOL:
                    raise RuntimeError(
                        f"column {j} (outcome {k}): orthogonality against "
                        f"column {i} cannot be satisfied"
                    )
                continue
            if lp != t + 1:
                raise RuntimeError(
                    f"column {j} (outcome {k}): constraint against column {i} "
                    f"involves more than one unknown"
                )
            pivot = z[t, i]
            if abs(pivot) <= SKIP_TOL:
                raise RuntimeError(
                    f"column {j} (outcome {k}): singular constraint against "
                    f"column {i}"
                )
            col[t] = -np.vdot(z[:t, i], col[:t]) / np.conj(pivot)
            t += 1
        deficit = 1.0 - float(np.sum(np.abs(col[:t]) ** 2))
        if abs(deficit) > SKIP_TOL:
            if deficit < 0 or t >= m:
                raise RuntimeError(
                    f"column {j} (outcome {k}): norm completion failed "
                    f"(deficit {deficit:.3e} at length {t})"
                )
            col[t] = np.sqrt(deficit)
            t += 1
        z[:, j] = col
        lengths.append(t)
    return ExtensionMatrix(M=m, Z=z, column_order=order)


def projector(ext: ExtensionMatrix, k: int) -> np.ndarray:
    """Rank-one projector P_k = Z_k Z_k† onto the extended direction k."""
    if not 0 <= int(k) < ext.M:
        raise ValueError(f"outcome index k={k} out of range for M={ext.M}")
    col = ext.column_for_outcome(int(k))
    return np.outer(col, col.conj())


def embed_with_ancilla(m: int, rho) -> np.ndarray:
    """Lift a qubit state to the extended space: |e1><e1|_A tensor rho."""
    rho = np.asarray(rho, dtype=complex)
    rho_a = np.zeros((m // 2, m // 2), dtype=complex)
    rho_a[0, 0] = 1.0
    return np.kron(rho_a, rho)


@dataclass(frozen=True)
class NaimarkReport:
    """Worst-case residuals of the extension constraints.

    max_orthogonality_residual : largest |Z_k† Z_l| over k != l
    max_norm_residual          : largest | ||Z_k||^2 - 1 |
    max_povm_block_residual    : largest deviation of the reduced
                                 projector block from Pi_k
    unitarity_residual         : max-abs entry of Z†Z - I and ZZ† - I
    max_probability_residual   : largest |Tr[Pi_k rho] - Tr[P_k (rho_A x rho)]|
                                 over the sampled random states
    """

    max_orthogonality_residual: float
    max_norm_residual: float
    max_povm_block_residual: float
    unitarity_residual: float
    max_probability_residual: float

    def within_tolerance(self, tol: float) -> bool:
        return all(
            r <= tol
            for r in (
                self.max_orthogonality_residual,
                self.max_norm_residual,
                self.max_povm_block_residual,
                self.unitarity_residual,
                self.max_probability_residual,
            )
        )


def verify_naimark(
    ext: ExtensionMatrix,
    tol: float = COMPARISON_TOL,
    seed: int = 0,
    num_states: int = 20,
) -> NaimarkReport:
    """Measure how well an extension satisfies all its constraints.

    Never raises on a bad matrix; every violation shows up as a
    residual, to be judged against ``tol`` via report.within_tolerance.
    The probability check compares the qubit-level statistics
    Tr[Pi_k rho] against the extended-space statistics
    Tr[P_k (rho_A tensor rho)] on ``num_states`` random qubit states
    drawn from a generator seeded with ``seed``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    m, z = ext.M, ext.Z
    eye = np.eye(m)
    gram = z.conj().T @ z
    off = gram - np.diag(np.diag(gram))
    max_ortho = float(np.max(np.abs(off)))
    max_norm = float(np.max(np.abs(np.diag(gram).real - 1.0)))
    unitarity = float(
        max(np.max(np.abs(gram - eye)), np.max(np.abs(z @ z.conj().T - eye)))
    )

    max_block = 0.0
    for k in range(m):
        col = ext.column_for_outcome(k)
        block = np.outer(col[:2], col[:2].conj())
        max_block = max(max_block, float(np.max(np.abs(block - povm_element(m, k)))))

    rng = np.random.default_rng(seed)
    max_prob = 0.0
    cols = np.array(ext.column_order)
    for _ in range(num_states):
        rho = random_density(rng)
        lifted = embed_with_ancilla(m, rho)
        # Tr[P_j lifted] = z_j† lifted z_j, all columns at once; storing
        # the M rank-one projectors would need O(M^3) memory
        per_column = np.sum(z.conj() * (lifted @ z), axis=0).real
        extended = np.empty(m)
        extended[cols] = per_column
        direct = np.array(
            [np.trace(povm_element(m, k) @ rho).real for k in range(m)]
        )
        max_prob = max(max_prob, float(np.max(np.abs(direct - extended))))

    return NaimarkReport(
        max_orthogonality_residual=max_ortho,
        max_norm_residual=max_norm,
        max_povm_block_residual=max_block,
        unitarity_residual=unitarity,
        max_probability_residual=max_prob,
    )


def extension_to_json_dict(ext: ExtensionMatrix) -> dict:
    """JSON-friendly form: entries as [re, im] pairs, row major."""
    return {
        "M": ext.M,
        "column_order": list(ext.column_order),
        "matrix": [
            [[float(v.real), float(v.imag)] for v in row] for row in ext.Z
        ],
    }


def extension_to_csv(ext: ExtensionMatrix) -> str:
    """CSV form with interleaved re/im columns, one row per matrix row."""
    header = ",".join(f"col{j}_re,col{j}_im" for j in range(ext.M))
    lines = [header]
    for row in ext.Z:
        lines.append(",".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row))
    return "\n".join(lines) + "\n"
