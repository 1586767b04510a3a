"""Deterministic self-test fixture files: canonical, embedded, perturbed,
and classical realizations for n in {3, 4, 5}, plus a manifest of expected
inequality totals.  Identical seeds must produce identical bytes."""

from __future__ import annotations

import numpy as np

from .inequalities import build_tn, classical_argmax, evaluate
from .model import (
    Realization,
    canonical_observables,
    embed_realization,
    perturb_realization,
)

DEFAULT_SEED = 7
FIXTURE_NS = (3, 4, 5)
EMBED_EXTRA_DIM = 8
PERTURB_EPSILON = 0.1


def classical_realization(n: int) -> Realization:
    """Observables set to +-identity following a brute-force argmax
    assignment; any state works, a single qubit in |0> is used."""
    _, assignment = classical_argmax(build_tn(n))
    eye = np.eye(2, dtype=complex)
    return Realization(
        n=n,
        dim=2,
        state=np.array([1.0, 0.0], dtype=complex),
        observables={lab: value * eye for lab, value in assignment.items()},
    )


def generate_fixtures(seed: int = DEFAULT_SEED, ns=FIXTURE_NS) -> tuple[dict[str, dict], dict]:
    """Returns ({filename: realization payload}, manifest)."""
    files: dict[str, dict] = {}
    entries = []

    def add(name: str, kind: str, real: Realization, expected: float) -> None:
        files[name] = real.to_dict()
        entries.append(
            {
                "file": name,
                "kind": kind,
                "n": real.n,
                "dim": real.dim,
                "expected_total": expected,
            }
        )

    for n in ns:
        ineq = build_tn(n)
        canonical = canonical_observables(n)
        add(f"canonical_n{n}.json", "canonical", canonical, float(ineq.quantum_bound))
        embedded = embed_realization(canonical, EMBED_EXTRA_DIM, seed + 100 * n + 1)
        add(f"embedded_n{n}.json", "embedded", embedded, float(ineq.quantum_bound))
        perturbed = perturb_realization(canonical, PERTURB_EPSILON, seed + 100 * n + 2)
        add(
            f"perturbed_n{n}.json",
            "perturbed",
            perturbed,
            evaluate(ineq, perturbed).total,
        )
        add(f"classical_n{n}.json", "classical", classical_realization(n), float(ineq.classical_bound))

    manifest = {
        "seed": seed,
        "embed_extra_dim": EMBED_EXTRA_DIM,
        "perturb_epsilon": PERTURB_EPSILON,
        "entries": entries,
    }
    return files, manifest
