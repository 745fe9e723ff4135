"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria". Tolerances are the pinned
values of the build contract and are not loosened here.
"""
from math import sqrt

import numpy as np
from conftest import ACCEPTANCE_LINES, GENTILES_N
from oracles import grid_epsilon_3x3, pyramid_reference
from scipy.stats import unitary_group

from upbw import epsilon, posmap, states, upb, witness
from upbw.linalg import min_eigenvalue, partial_transpose_B

R2, R5, R10 = sqrt(2), sqrt(5), sqrt(10)
OVERLAP_PYRAMID = 0.25 * (1 - (7 + R5) / (3 * (3 + R5)))
LAMBDA_MIN = (2 + R2 - R10) / 2
EPS_LOWER = (4 + R2 - R5 - R10) / 9


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c01_pyramid_overlap(pyramid_state):
    psi = witness.psi_plus(pyramid_state.idx)
    got = states.overlap_with(pyramid_state, psi.psi)
    err = abs(got - OVERLAP_PYRAMID)
    record(1, err <= 1e-10, f"<Psi+|rho|Psi+> = {got:.15f}, closed form {OVERLAP_PYRAMID:.15f}, |err| = {err:.1e}")


def test_c02_pyramid_lambda_min(pyramid, pyramid_bounds):
    cert = pyramid_bounds.certificate
    a = pyramid.alphas

    def lam(ix):
        return min_eigenvalue(sum(np.outer(a[i], a[i].conj()) for i in ix))

    p1, p2 = lam((0, 1, 2)), lam((0, 1, 3))
    err = max(abs(cert.lambda_A - LAMBDA_MIN), abs(p1 - LAMBDA_MIN))
    ok = err <= 1e-10 and p2 >= LAMBDA_MIN - 1e-10
    record(2, ok, f"lambda_min = {cert.lambda_A:.15f} (P1 {p1:.15f}), closed form {LAMBDA_MIN:.15f}, "
                  f"|err| = {err:.1e}; P2 lambda_min = {p2:.6f}")


def test_c03_pyramid_epsilon_lower(pyramid_bounds):
    got = pyramid_bounds.lower
    err = abs(got - EPS_LOWER)
    record(3, err <= 1e-10, f"epsilon_lower = {got:.15e}, closed form {EPS_LOWER:.15e}, |err| = {err:.1e}")


def test_c04_gentiles_overlap_formula(gentiles):
    # paper formula; see the corrected closed form in test_states.py
    rows, ok = [], True
    for n in GENTILES_N:
        b = states.bound_entangled_state(gentiles[n])
        got = states.overlap_with(b, witness.psi_plus(b.idx).psi)
        want = (0.5 - 1 / (3 * n)) / 5
        ok &= abs(got - want) <= 1e-10
        rows.append(f"n={n}: {got:.12f} vs {want:.12f}")
    record(4, ok, "; ".join(rows))


def test_c05_ppt(pyramid, gentiles):
    cases = {"pyramid": pyramid, **{f"gentiles:{n}": s for n, s in gentiles.items()}}
    cases["pyramid x pyramid"] = upb.tensor_upb(pyramid, pyramid)
    worst = {}
    for name, s in cases.items():
        b = states.bound_entangled_state(s)
        worst[name] = min_eigenvalue(partial_transpose_B(b.rho, b.idx))
    m = min(worst.values())
    record(5, m >= -1e-10, f"min eigenvalue of rho^T_B over {len(worst)} bases = {m:.2e}")


def test_c06_witness_identity(pyramid_witness, pyramid_state):
    w = pyramid_witness
    tr = float(np.real(np.trace(w.H @ pyramid_state.rho)))
    identity_err = abs(tr - (-w.d * w.mu * w.overlap))
    derived = -3 * EPS_LOWER * OVERLAP_PYRAMID
    closed_err = abs(tr - derived)
    approx = abs(tr / -5.4487e-4 - 1)
    ok = identity_err <= 1e-12 and closed_err <= 1e-12 and approx <= 1e-4
    record(6, ok, f"Tr(H rho) = {tr:.10e}; |Tr(H rho) + d mu <Psi|rho|Psi>| = {identity_err:.1e}; "
                  f"closed form {derived:.10e}; rel. diff to -5.4487e-4 = {approx:.1e}")


def test_c07_witness_positivity(pyramid, pyramid_bounds, pyramid_state):
    lo = pyramid_bounds.lower
    full = witness.build_witness(pyramid, bounds=pyramid_bounds, state=pyramid_state)
    half = witness.build_witness(pyramid, mu=lo / 2, bounds=pyramid_bounds, state=pyramid_state)
    p_full = witness.check_product_positivity(full, restarts=64, samples=10_000, rng_seed=7)
    p_half = witness.check_product_positivity(half, restarts=64, samples=10_000, rng_seed=7)
    ok = p_full.min_found >= -1e-9 and p_half.min_found >= lo - lo / 2 - 1e-9
    record(7, ok, f"mu = eps_lower: min found {p_full.min_found:.6e}; mu = eps_lower/2: min found "
                  f"{p_half.min_found:.6e} >= floor {lo / 2:.6e}")


def test_c08_unitality(pyramid_map, pyramid_witness):
    mu = pyramid_witness.mu
    got = posmap.apply(pyramid_map, np.eye(3))
    want = np.diag([10 / (5 + R5), 10 / (5 + R5), R5]) - mu * np.eye(3)
    err = float(np.max(np.abs(got - want)))
    defect = posmap.unitality_defect(pyramid_map)
    record(8, err <= 1e-10 and defect > 0.85,
           f"max |S(I) - closed form| = {err:.1e}; unitality defect = {defect:.10f}")


def test_c09_not_cp(pyramid_map):
    m = posmap.complete_positivity_check(pyramid_map)
    record(9, m <= -5.4e-4, f"min eigenvalue of Choi operator = {m:.6e}")


def test_c10_indecomposability(pyramid, pyramid_map, pyramid_state, gentiles, gentiles_bounds):
    c_pyr = posmap.indecomposability_certificate(pyramid_map, pyramid_state, trials=10_000, restarts=64)
    g = gentiles[4]
    g_state = states.bound_entangled_state(g)
    g_wit = witness.build_witness(g, bounds=gentiles_bounds[4], state=g_state)
    c_gen = posmap.indecomposability_certificate(posmap.map_from_witness(g_wit), g_state,
                                                 trials=10_000, restarts=64)
    c_t = posmap.indecomposability_certificate(posmap.transposition_map(3), pyramid_state,
                                               trials=10_000, restarts=64)
    ok = c_pyr.granted and c_gen.granted and not c_t.granted
    record(10, ok, f"pyramid granted={c_pyr.granted} (value {c_pyr.indecomp_value:.3e}), "
                   f"gentiles:4 granted={c_gen.granted} (value {c_gen.indecomp_value:.3e}), "
                   f"transposition granted={c_t.granted} (value {c_t.indecomp_value:.3e})")


def _random_max_entangled(rng):
    dA, dB = rng.integers(2, 6, size=2)
    d = min(dA, dB)
    base = np.zeros((dA, dB), dtype=complex)
    base[np.arange(d), np.arange(d)] = 1 / np.sqrt(d)
    U, V = unitary_group.rvs(dA, random_state=rng), unitary_group.rvs(dB, random_state=rng)
    psi = (U @ base @ V.T).ravel()
    return witness.MaxEntangledState.from_vector(psi, (int(dA), int(dB)))


def _unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_c11_property_suites(pyramid, pyramid_bounds, gentiles, gentiles_bounds):
    rng = np.random.default_rng(11)

    # max entangled vs product: |<Psi|a b>|^2 <= 1/d
    slack = np.inf
    for _ in range(1000):
        psi = _random_max_entangled(rng)
        a, b = _unit(rng, psi.idx.dA), _unit(rng, psi.idx.dB)
        slack = min(slack, 1 / psi.schmidt_dim - witness.lemma1_check(psi, a, b))

    # sandwich: n max_i |<phi|v_i>|^2 >= sum_i |<phi|v_i>|^2 >= lambda_min
    sandwich = np.inf
    for _ in range(100):
        d = int(rng.integers(2, 6))
        n = int(rng.integers(d, 2 * d + 2))
        vecs = np.array([_unit(rng, d) for _ in range(n)])
        t = epsilon.proposition1_check(vecs, _unit(rng, d))
        sandwich = min(sandwich, t.count * t.max_term - t.sum, t.sum - t.lambda_min)

    # adjoint: Tr[S*(Y) X] = Tr[Y S(X)], also in Hilbert-Schmidt form
    adj = 0.0
    for _ in range(100):
        dA, dB = (int(x) for x in rng.integers(2, 5, size=2))
        G = rng.normal(size=(dA * dB,) * 2) + 1j * rng.normal(size=(dA * dB,) * 2)
        basis = unitary_group.rvs(dA, random_state=rng)
        m = posmap.PositiveMapRep.from_choi(G + G.conj().T, dA, dB, basis=basis)
        X = rng.normal(size=(dA, dA)) + 1j * rng.normal(size=(dA, dA))
        Y = rng.normal(size=(dB, dB)) + 1j * rng.normal(size=(dB, dB))
        SX, SY = posmap.apply(m, X), posmap.adjoint_apply(m, Y)
        adj = max(adj, abs(np.trace(SY @ X) - np.trace(Y @ SX)),
                  abs(np.trace(SY.conj().T @ X) - np.trace(Y.conj().T @ SX)))

    # seesaw never increases the objective; lower <= upper on every built-in basis
    bases = {"pyramid": (pyramid, pyramid_bounds),
             **{f"gentiles:{n}": (gentiles[n], gentiles_bounds[n]) for n in GENTILES_N}}
    monotone, ordered = True, True
    for s, bounds in bases.values():
        up = epsilon.epsilon_upper_bound(s, restarts=16, iters=500, rng_seed=3)
        for h in up.histories:
            monotone &= bool(np.all(np.diff(h) <= 1e-12 * np.maximum(1.0, np.abs(h[1:]))))
        ordered &= bounds.lower <= bounds.upper and bounds.lower <= up.value

    ok = slack >= -1e-12 and sandwich >= -1e-12 and adj <= 1e-10 and monotone and ordered
    record(11, ok, f"product overlap min slack {slack:.2e}; sandwich min slack {sandwich:.2e}; "
                   f"adjoint max defect {adj:.1e}; seesaw monotone={monotone}; lower<=upper={ordered}")


def test_c12_grid_oracle(pyramid_bounds):
    a, b = pyramid_reference()
    ref = grid_epsilon_3x3(a, b)
    err = abs(pyramid_bounds.upper - ref)
    record(12, err <= 1e-6, f"seesaw {pyramid_bounds.upper:.12f}, grid oracle {ref:.12f}, |diff| = {err:.1e}")
