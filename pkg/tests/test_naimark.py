"""Tests for the extension-matrix construction (closed form and recursive)."""

import numpy as np
import pytest

from phasepovm.naimark import (
    build_extension_closed,
    build_extension_recursive,
    closed_form_column,
    column_order,
    embed_with_ancilla,
    extension_to_csv,
    extension_to_json_dict,
    projector,
    verify_naimark,
)
from phasepovm.numerics import partial_trace_ancilla
from phasepovm.povm import povm_element, psi_k, random_density

SEED = 20240811
POWERS = [2, 4, 8, 16, 32, 64]


def _reference_z8():
    """The 8x8 extension written out entry by entry.

    Derived independently of the construction code: top rows are the
    direction vectors scaled by 1/sqrt(8), each later row pair holds the
    -2cos/-2sin ladder over denominators sqrt(48), sqrt(24), sqrt(8),
    with norm-completion anchors sqrt(6/8), sqrt(4/6), sqrt(2/4).
    """
    s = 1.0 / np.sqrt(8.0)

    def e(a):
        return np.exp(1j * a * np.pi / 8.0)

    def c(a):
        return np.cos(a * np.pi / 8.0)

    def sn(a):
        return np.sin(a * np.pi / 8.0)

    r48, r24, r8 = np.sqrt(48.0), np.sqrt(24.0), np.sqrt(8.0)
    return np.array(
        [
            [s, -1j * s, e(-1) * s, e(-5) * s, e(-2) * s, e(-6) * s, e(-3) * s, e(-7) * s],
            [s, 1j * s, e(1) * s, e(5) * s, e(2) * s, e(6) * s, e(3) * s, e(7) * s],
            [np.sqrt(6.0 / 8.0), 0, -2 * c(1) / r48, 2 * sn(1) / r48,
             -2 * c(2) / r48, 2 * sn(2) / r48, -2 * c(3) / r48, 2 * sn(3) / r48],
            [0, np.sqrt(6.0 / 8.0), -2 * sn(1) / r48, -2 * c(1) / r48,
             -2 * sn(2) / r48, -2 * c(2) / r48, -2 * sn(3) / r48, -2 * c(3) / r48],
            [0, 0, np.sqrt(4.0 / 6.0), 0, -2 * c(1) / r24, 2 * sn(1) / r24,
             -2 * c(2) / r24, 2 * sn(2) / r24],
            [0, 0, 0, np.sqrt(4.0 / 6.0), -2 * sn(1) / r24, -2 * c(1) / r24,
             -2 * sn(2) / r24, -2 * c(2) / r24],
            [0, 0, 0, 0, np.sqrt(2.0 / 4.0), 0, -2 * c(1) / r8, 2 * sn(1) / r8],
            [0, 0, 0, 0, 0, np.sqrt(2.0 / 4.0), -2 * sn(1) / r8, -2 * c(1) / r8],
        ],
        dtype=complex,
    )


def test_column_order_interleaves_low_and_high_outcomes():
    assert column_order(8) == (0, 4, 1, 5, 2, 6, 3, 7)
    assert column_order(2) == (0, 1)
    for m in POWERS:
        assert sorted(column_order(m)) == list(range(m))


def test_closed_form_matches_reference_matrix_entrywise():
    z = build_extension_closed(8).Z
    np.testing.assert_allclose(z, _reference_z8(), atol=1e-12)


def test_closed_form_column_anchor_entries():
    col0 = closed_form_column(8, 0)
    assert abs(col0[2] - np.sqrt(6.0 / 8.0)) < 1e-15
    col1 = closed_form_column(8, 1)
    assert abs(col1[2] - (-2.0 * np.cos(np.pi / 8.0) / np.sqrt(48.0))) < 1e-15


def test_top_rows_are_the_povm_directions():
    for m in POWERS:
        ext = build_extension_closed(m)
        for k in range(m):
            col = ext.column_for_outcome(k)
            np.testing.assert_allclose(
                col[:2], np.sqrt(2.0 / m) * psi_k(m, k), atol=1e-13
            )


@pytest.mark.parametrize("m", POWERS)
def test_recursive_equals_closed_form(m):
    closed = build_extension_closed(m)
    recursive = build_extension_recursive(m)
    assert np.max(np.abs(closed.Z - recursive.Z)) <= 1e-10
    assert closed.column_order == recursive.column_order


@pytest.mark.parametrize("m", POWERS)
def test_extension_is_unitary(m):
    z = build_extension_closed(m).Z
    np.testing.assert_allclose(z.conj().T @ z, np.eye(m), atol=1e-12)
    np.testing.assert_allclose(z @ z.conj().T, np.eye(m), atol=1e-12)


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_projectors_orthogonal_idempotent_and_reduce_to_povm(m):
    ext = build_extension_closed(m)
    projs = [projector(ext, k) for k in range(m)]
    for k in range(m):
        np.testing.assert_allclose(projs[k] @ projs[k], projs[k], atol=1e-12)
        block = partial_trace_ancilla(projs[k])
        np.testing.assert_allclose(block, povm_element(m, k), atol=1e-12)
        for l in range(k + 1, m):
            assert np.max(np.abs(projs[k] @ projs[l])) <= 1e-12
    total = sum(projs)
    np.testing.assert_allclose(total, np.eye(m), atol=1e-12)


def test_embed_with_ancilla_places_state_in_first_block():
    rng = np.random.default_rng(SEED)
    rho = random_density(rng)
    lifted = embed_with_ancilla(8, rho)
    assert lifted.shape == (8, 8)
    np.testing.assert_allclose(lifted[:2, :2], rho)
    assert np.max(np.abs(lifted[2:, :])) == 0.0
    assert abs(np.trace(lifted) - 1.0) < 1e-12


def test_verify_naimark_reports_tiny_residuals_for_good_extensions():
    for m in (2, 8, 32):
        report = verify_naimark(build_extension_closed(m), seed=SEED)
        assert report.within_tolerance(1e-10)


def test_verify_naimark_flags_a_broken_matrix():
    import dataclasses

    ext = build_extension_closed(8)
    z = ext.Z.copy()
    z[:, 3] *= 1.5  # break one column norm
    broken = dataclasses.replace(ext, Z=z)
    report = verify_naimark(broken, seed=SEED)
    assert not report.within_tolerance(1e-10)
    assert report.max_norm_residual > 0.1


def test_verify_naimark_rejects_nonpositive_tolerance():
    ext = build_extension_closed(4)
    with pytest.raises(ValueError, match="positive"):
        verify_naimark(ext, tol=0.0)


def test_verify_naimark_probability_check_depends_on_seed_only_in_states():
    ext = build_extension_closed(8)
    a = verify_naimark(ext, seed=1)
    b = verify_naimark(ext, seed=1)
    assert a == b  # bitwise reproducible


def test_json_and_csv_exports_round_trip_the_entries():
    ext = build_extension_closed(4)
    d = extension_to_json_dict(ext)
    assert d["M"] == 4
    assert d["column_order"] == [0, 2, 1, 3]
    rebuilt = np.array(
        [[complex(re, im) for re, im in row] for row in d["matrix"]]
    )
    np.testing.assert_allclose(rebuilt, ext.Z)

    csv = extension_to_csv(ext)
    lines = csv.strip().split("\n")
    assert lines[0].startswith("col0_re,col0_im")
    assert len(lines) == 5  # header + 4 rows
    first = [float(x) for x in lines[1].split(",")]
    assert abs(first[0] - ext.Z[0, 0].real) < 1e-15


@pytest.mark.parametrize("bad", [0, 1, 3, 12])
def test_builders_reject_bad_outcome_counts(bad):
    with pytest.raises(ValueError):
        build_extension_closed(bad)
    with pytest.raises(ValueError):
        build_extension_recursive(bad)
