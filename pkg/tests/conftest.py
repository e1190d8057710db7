import sys

import numpy as np
import pytest
import scipy.linalg as sla
from scipy.integrate import quad_vec


def random_stable(rng, n, margin=0.2):
    """Random dense matrix shifted so every eigenvalue has real part <= -margin."""
    A = rng.standard_normal((n, n)) / np.sqrt(n)
    shift = np.max(np.linalg.eigvals(A).real) + margin
    return A - shift * np.eye(n)


def random_split(rng, n, k):
    """Random real matrix with exactly k stable and n - k antistable eigenvalues."""
    re = np.concatenate([-rng.uniform(0.3, 2.0, k), rng.uniform(0.3, 2.0, n - k)])
    T = np.diag(re) + np.triu(rng.standard_normal((n, n)) * 0.3, 1)
    Q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    S = np.eye(n) + 0.2 * rng.standard_normal((n, n))
    return S @ Q @ T @ Q.T @ np.linalg.inv(S)


def quad_gramian(A, B, t_f, sign=1.0):
    """Adaptive-quadrature oracle for ∫_0^t e^{sAτ} B B^T e^{sA^T τ} dτ."""
    BBt = B @ B.T

    def f(tau):
        E = sla.expm(sign * A * tau)
        return E @ BBt @ E.T

    val, _ = quad_vec(f, 0.0, t_f, epsabs=0, epsrel=1e-11, limit=2000)
    return 0.5 * (val + val.T)


def eigenbasis_mixed_gramian(A, B):
    """Mixed Gramian from the complex eigendecomposition, independently of any Schur form.

    In eigen-coordinates the reachability Gramian of the stable modes has
    entries -b_i b_j^* / (λ_i + λ_j^*) and the controllability Gramian of the
    antistable modes b_i b_j^* / (λ_i + λ_j^*).
    """
    lam, X = np.linalg.eig(A)
    Bt = np.linalg.solve(X, B.astype(complex))
    G = Bt @ Bt.conj().T
    denom = lam[:, None] + lam[None, :].conj()
    stable = lam.real < 0
    same = stable[:, None] == stable[None, :]
    sign = np.where(stable[:, None], -1.0, 1.0)
    Wt = np.where(same, sign * G / np.where(same, denom, 1.0), 0.0)
    W = X @ Wt @ X.conj().T
    return 0.5 * (W.real + W.real.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
