#!/usr/bin/env python3
"""
Tests for positive linear and multilinear maps.
"""

import json
import math

import numpy as np
import pytest

from sectorix.cmat import identity, inverse, lambda_min, loewner_leq, re_part, symmetrize
from sectorix.errors import ConfigError, MapSpecError
from sectorix.posmap import (
    MapDescriptor,
    MapKind,
    MapSpec,
    apply,
    apply_hermitian,
    gen_map,
    identity_map,
    normalization_defect,
    read_map,
    require_normalized,
)
from sectorix.sector import gen_hpd, sector_sample

LINEAR_KINDS = ["compression", "kraus", "trace"]


def test_identity_compression_is_identity():
    A = np.arange(9, dtype=complex).reshape(3, 3) + 1j
    np.testing.assert_allclose(apply(identity_map(3), [A]), A)


def test_trace_map_normalized():
    phi = gen_map("trace", 3, 5)
    np.testing.assert_allclose(apply(phi, [identity(3)]), identity(5))
    np.testing.assert_allclose(apply(phi, [np.diag([1.0, 2.0, 6.0])]), 3.0 * identity(5))


def test_square_compression_is_unitary():
    V = gen_map("compression", 4, 4, seed=1).blocks[0]
    np.testing.assert_allclose(V.conj().T @ V, identity(4), atol=1e-12)
    np.testing.assert_allclose(V @ V.conj().T, identity(4), atol=1e-12)


def test_kraus_blocks_resolve_identity():
    phi = gen_map("kraus", 3, 4, seed=2, num_kraus=3)
    assert len(phi.blocks) == 3
    total = sum(V.conj().T @ V for V in phi.blocks)
    np.testing.assert_allclose(total, identity(4), atol=1e-12)


@pytest.mark.parametrize("kind,l,k", [("compression", 2, 1), ("kraus", 5, 1), ("trace", 3, 1),
                                      ("tensor_compression", 5, 2), ("tensor_compression", 8, 3)])
def test_generated_maps_are_normalized(kind, l, k):
    phi = gen_map(kind, 3, l, k, seed=3)
    assert normalization_defect(phi) <= 1e-10
    require_normalized(phi)


def test_tensor_compression_positive_on_hpd_tuples():
    rng = np.random.default_rng(4)
    phi = gen_map("tensor_compression", 3, 6, 2, rng)
    for _ in range(10):
        args = [gen_hpd(3, 0.1, 5.0, rng) for _ in range(2)]
        out = apply_hermitian(phi, args)
        assert lambda_min(out) >= -1e-10 * max(1.0, np.linalg.norm(out, 2))


@pytest.mark.parametrize("kind", LINEAR_KINDS)
def test_positivity_on_psd_inputs(kind):
    rng = np.random.default_rng(5)
    phi = gen_map(kind, 4, 3, 1, rng)
    for _ in range(10):
        G = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        out = apply_hermitian(phi, [G @ G.conj().T])
        assert lambda_min(out) >= -1e-10 * max(1.0, np.linalg.norm(out, 2))


def test_linearity_in_each_slot():
    rng = np.random.default_rng(6)
    phi = gen_map("tensor_compression", 2, 3, 3, rng)
    mats = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4)]
    a, b = 0.7 - 0.2j, -1.3 + 0.5j
    for slot in range(3):
        base = [mats[0], mats[1], mats[2]]
        mixed = list(base)
        mixed[slot] = a * base[slot] + b * mats[3]
        swapped = list(base)
        swapped[slot] = mats[3]
        expected = a * apply(phi, base) + b * apply(phi, swapped)
        result = apply(phi, mixed)
        assert np.linalg.norm(result - expected) <= 1e-10 * max(1.0, np.linalg.norm(expected))


@pytest.mark.parametrize("kind", LINEAR_KINDS)
def test_choi_inequality_on_generated_maps(kind):
    rng = np.random.default_rng(8)
    for _ in range(10):
        A = sector_sample(4, math.pi / 4, 10.0, True, rng).A
        l = 4 if kind == "trace" else int(rng.integers(1, 5))
        phi = gen_map(kind, 4, l, 1, rng)
        R = re_part(A)
        lhs = symmetrize(inverse(apply_hermitian(phi, [R])))
        rhs = apply_hermitian(phi, [symmetrize(inverse(R))])
        assert loewner_leq(lhs, rhs, tol=1e-9).holds


def test_gen_map_errors():
    with pytest.raises(MapSpecError):
        gen_map("compression", 3, 4)
    with pytest.raises(MapSpecError):
        gen_map("kraus", 3, 2, k=2)
    with pytest.raises(MapSpecError):
        gen_map("tensor_compression", 2, 5, k=2)
    with pytest.raises(MapSpecError):
        gen_map("schur", 3, 3)


def test_apply_checks_arity_and_size():
    phi = gen_map("tensor_compression", 2, 3, 2, seed=0)
    with pytest.raises(MapSpecError):
        apply(phi, [identity(2)])
    with pytest.raises(MapSpecError):
        apply(phi, [identity(3), identity(3)])


def test_require_normalized_rejects_scaled_map():
    V = 2.0 * identity(3)
    phi = MapSpec(kind=MapKind.COMPRESSION, n=3, l=3, k=1, blocks=(V,), normalized=False)
    with pytest.raises(MapSpecError):
        require_normalized(phi)


def test_read_map_regenerates_from_seed(tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"kind": "kraus", "n": 3, "l": 2, "seed": 42}))
    first = read_map(path)
    expected = MapDescriptor(kind="kraus", n=3, l=2, seed=42).build()
    for got, want in zip(first.blocks, expected.blocks):
        assert np.array_equal(got, want)


def test_read_map_errors(tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"kind": "kraus", "n": 3}))
    with pytest.raises(ConfigError, match="'l'"):
        read_map(path)
    path.write_text(json.dumps({"kind": "compression", "n": 3, "l": 3, "colour": 1}))
    with pytest.raises(ConfigError, match="colour"):
        read_map(path)


if __name__ == "__main__":
    pytest.main([__file__])
