"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line with its headline numbers.  Tolerances are pinned here and nowhere
looser."""

import time
from contextlib import contextmanager
from itertools import permutations
from math import comb, factorial

import numpy as np

from _oracles import kron_letters, random_involution, random_state, random_unitary
from tempcert import (
    build_t3,
    build_tn,
    canonical_observables,
    certify,
    classical_bound_bruteforce,
    embed_realization,
    evaluate,
    graph_state,
    perturb_realization,
)
from tempcert import pauli
from tempcert.correlators import induced_orderings, permutation_cover, seq_correlation
from tempcert.labels import a, n as n_label
from tempcert.model import Realization, conjugate_realization


@contextmanager
def criterion(num: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {num} FAIL: {title}")
        raise
    print(f"ACCEPTANCE {num} PASS: {title} ({time.perf_counter() - start:.2f}s)")


def test_01_canonical_maximal_violation():
    with criterion(1, "T3 on the canonical realization equals 10 within 1e-9, under 1s"):
        start = time.perf_counter()
        report = evaluate(build_t3(), canonical_observables(3))
        elapsed = time.perf_counter() - start
        assert abs(report.total - 10.0) <= 1e-9
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_02_classical_bounds_by_brute_force():
    with criterion(2, "brute-force classical bounds 8/32/80 match 2*alpha*n + 2*C(n,3)"):
        for n, expected in ((3, 8), (4, 32), (5, 80)):
            start = time.perf_counter()
            got = classical_bound_bruteforce(build_tn(n), workers=1)
            elapsed = time.perf_counter() - start
            assert got == expected == 2 * comb(n - 1, 2) * n + 2 * comb(n, 3)
            if n == 5:
                assert elapsed < 60.0, f"n=5 took {elapsed:.1f}s"


def test_03_quantum_bound_formula():
    with criterion(3, "T_n on canonical equals 2*alpha*n + 4*C(n,3) for n=3..6"):
        for n in (3, 4, 5, 6):
            start = time.perf_counter()
            total = evaluate(build_tn(n), canonical_observables(n)).total
            elapsed = time.perf_counter() - start
            assert abs(total - (2 * comb(n - 1, 2) * n + 4 * comb(n, 3))) <= 1e-9
            if n == 6:
                assert elapsed < 30.0, f"n=6 took {elapsed:.1f}s"


def test_04_sign_pattern():
    with criterion(4, "every canonical term is +1 except the C(n,3) triple-A terms at -1"):
        for n in (3, 4, 5):
            report = evaluate(build_tn(n), canonical_observables(n))
            minus = [tv for tv in report.terms if tv.coeff < 0]
            assert len(minus) == comb(n, 3)
            for tv in report.terms:
                want = -1.0 if tv.coeff < 0 else 1.0
                assert abs(tv.value - want) <= 1e-10


def test_05_dimension_witness_and_certification():
    with criterion(5, "certify passes for n=3..5, and survives rotation and embedding"):
        rng = np.random.default_rng(2024)
        for n in (3, 4, 5):
            base = canonical_observables(n)
            report = certify(base)
            assert report.verdict == "pass"
            assert report.subspace_dim == 1 << n
            assert all(s == 1 for s in report.nij_signs.values())
            assert report.fidelity >= 1 - 1e-9

            rotated = conjugate_realization(base, random_unitary(rng, base.dim))
            rep = certify(rotated)
            assert rep.verdict == "pass"
            assert abs(rep.fidelity - report.fidelity) <= 1e-8

            embedded = embed_realization(base, 8, junk_seed=1000 + n)
            rep = certify(embedded)
            assert rep.verdict == "pass"
            assert abs(rep.fidelity - report.fidelity) <= 1e-8


def test_06_negative_controls():
    with criterion(6, "certify fails on a flipped N12 sign, a 0.1 perturbation, a product state"):
        base = canonical_observables(3)

        negated = dict(base.observables)
        negated[n_label(1, 2)] = -negated[n_label(1, 2)]
        report = certify(Realization(n=3, dim=8, state=base.state, observables=negated))
        assert report.verdict == "fail"

        report = certify(perturb_realization(base, 0.1, seed=707))
        assert report.verdict == "fail"
        assert max(report.relation_residuals.values()) > 1e-3

        product = np.zeros(8, dtype=complex)
        product[0] = 1.0
        report = certify(Realization(n=3, dim=8, state=product, observables=base.observables))
        assert report.verdict == "fail"
        assert (report.subspace_dim or 0) < 8 or max(report.relation_residuals.values()) > 0.1


def test_07_permutation_covers():
    with criterion(7, "covers reach all k! orderings for k=2..5 and match the k=3 pair"):
        for k in (2, 3, 4, 5):
            cover = permutation_cover(k)
            union = set()
            for seq in cover:
                union |= induced_orderings(seq)
            assert union == set(permutations(range(1, k + 1)))
            assert len(cover) >= -(-factorial(k) // (1 << (k - 1)))
        assert permutation_cover(3) == ((1, 2, 3), (2, 1, 3))


def test_08_oracle_equivalence():
    with criterion(8, "sequential correlations and Pauli algebra match independent oracles"):
        rng = np.random.default_rng(88)
        for trial in range(200):
            dim = int(rng.integers(2, 9))
            k = int(rng.integers(1, 5))
            labels = [a(i) for i in range(1, k + 1)]
            real = Realization(
                n=3,
                dim=dim,
                state=random_state(rng, dim),
                observables={lab: random_involution(rng, dim) for lab in labels},
            )
            got = seq_correlation(real, labels)
            oracle = 0.0
            for ordering in induced_orderings(tuple(labels)):
                vec = real.state
                for lab in reversed(ordering):
                    vec = real.observables[lab] @ vec
                oracle += np.vdot(real.state, vec).real
            oracle /= 1 << (k - 1)
            assert abs(got - oracle) <= 1e-10

        for trial in range(1000):
            width = int(rng.integers(1, 4))
            full = (1 << width) - 1
            p = pauli.PauliString(width, int(rng.integers(0, full + 1)),
                                  int(rng.integers(0, full + 1)), int(rng.integers(0, 4)))
            q = pauli.PauliString(width, int(rng.integers(0, full + 1)),
                                  int(rng.integers(0, full + 1)), int(rng.integers(0, 4)))
            dp, dq = pauli.to_dense(p), pauli.to_dense(q)
            assert np.array_equal(pauli.to_dense(pauli.pauli_mul(p, q)), dp @ dq)
            assert pauli.commutes(p, q) == bool(np.linalg.norm(dp @ dq - dq @ dp) == 0.0)


def test_09_graph_state_fixture():
    with criterion(9, "graph_state(3) reproduces the published amplitudes exactly"):
        amps = graph_state(3)
        signs = {
            "000": +1, "100": +1, "010": +1, "110": -1,
            "001": +1, "101": -1, "011": -1, "111": -1,
        }
        for bits, sign in signs.items():
            z = amps[int(bits, 2)]
            assert z.imag == 0.0
            assert np.sign(z.real) == sign, bits
            assert abs(abs(z) - 1 / np.sqrt(8)) <= 1e-15
        # cross-check the state is the one the stabilizers fix
        for g in ("XZZ", "ZXZ", "ZZX"):
            assert np.linalg.norm(kron_letters(g) @ amps - amps) <= 1e-12
