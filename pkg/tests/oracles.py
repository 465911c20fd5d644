"""Independent reference computations used to freeze expected values.

Nothing here calls the closed forms under test: entropies are maximized
directly over the simplex, the convex roof is minimized over explicit
ensembles, and bipartite states are assembled with ``np.kron``.
"""

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize


def shannon(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def vn_entropy(m):
    return shannon(np.clip(np.linalg.eigvalsh(m), 0, None))


# -- constrained entropy maximization --------------------------------------


def _softmax(x):
    e = np.exp(x - x.max())
    return e / e.sum()


def max_entropy(levels, E):
    """max H(p) subject to sum p_i levels_i <= E over the finite simplex (SLSQP).

    Tail entries make the problem badly conditioned, so agreement is only
    good to about 1e-5; :func:`dual_max_entropy` is the precise oracle.
    """
    levels = np.asarray(levels, dtype=float)
    n = levels.size
    # feasible start: the flattest exponential profile that still fits
    x0 = _softmax(-levels * 50.0)
    for scale in np.geomspace(50.0, 1e-3, 400):
        trial = _softmax(-levels * scale)
        if trial @ levels > E:
            break
        x0 = trial
    cons = [
        {"type": "eq", "fun": lambda p: p.sum() - 1.0, "jac": lambda p: np.ones(n)},
        {"type": "ineq", "fun": lambda p: E - p @ levels, "jac": lambda p: -levels},
    ]
    res = minimize(
        lambda p: -shannon(np.clip(p, 1e-300, None)),
        x0,
        jac=lambda p: np.log(np.clip(p, 1e-300, None)) + 1.0,
        bounds=[(0.0, 1.0)] * n,
        constraints=cons,
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 5000},
    )
    p = np.clip(res.x, 0, None)
    p /= p.sum()
    e = p @ levels
    if e > E:
        # repair by mixing in the ground level; keeps a valid lower estimate
        s = (e - E) / (e - levels.min())
        p = (1 - s) * p
        p[np.argmin(levels)] += s
    return max(shannon(p), shannon(x0))


def dual_max_entropy(levels, E):
    """min over beta >= 0 of beta E + ln sum exp(-beta levels) (Lagrange dual)."""
    from scipy.optimize import minimize_scalar
    from scipy.special import logsumexp

    levels = np.asarray(levels, dtype=float)
    if E >= levels.mean():
        return float(np.log(levels.size))
    res = minimize_scalar(
        lambda b: b * E + logsumexp(-b * levels),
        bounds=(0.0, 1e3),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(res.fun)


def max_entropy_product(level_lists, E, seed=0):
    """max sum_k H(p_k) subject to sum_k <levels_k>_{p_k} <= E (independent factors).

    The optimum over the product space is a product state, so optimizing the
    factors jointly under a shared budget gives the supremum.
    """
    sizes = [len(l) for l in level_lists]
    levels = [np.asarray(l, dtype=float) for l in level_lists]
    cuts = np.cumsum([0] + sizes)

    def split(x):
        return [x[cuts[k]:cuts[k + 1]] for k in range(len(sizes))]

    def neg(x):
        return -sum(shannon(np.clip(p, 1e-300, None)) for p in split(x))

    def neg_jac(x):
        return np.log(np.clip(x, 1e-300, None)) + 1.0

    cons = [{"type": "eq", "fun": (lambda x, k=k: split(x)[k].sum() - 1.0)} for k in range(len(sizes))]
    cons.append({"type": "ineq", "fun": lambda x: E - sum(p @ l for p, l in zip(split(x), levels))})
    best = -np.inf
    rng = np.random.default_rng(seed)
    for r in range(3):
        x0 = np.concatenate([_softmax(-l * (2.0 + 3 * rng.random())) for l in levels])
        res = minimize(neg, x0, jac=neg_jac, bounds=[(0, 1)] * cuts[-1], constraints=cons,
                       method="SLSQP", options={"ftol": 1e-14, "maxiter": 3000})
        parts = [np.clip(p, 0, None) / np.clip(p, 0, None).sum() for p in split(res.x)]
        if sum(p @ l for p, l in zip(parts, levels)) <= E + 1e-7:
            best = max(best, sum(shannon(p) for p in parts))
    return best


# -- convex roof -----------------------------------------------------------


def _reduced_entropy(psi):
    m = psi.reshape(2, 2)
    s = np.linalg.svd(m, compute_uv=False) ** 2
    return shannon(s / s.sum())


def convex_roof_eof(rho, members=4, restarts=12, seed=0):
    """min sum_i p_i S(Tr_B psi_i) over ``members``-element decompositions of rho.

    Decompositions are parametrized as psi~_i = sum_j U_ij sqrt(l_j) |e_j>
    with U ranging over K x K unitaries (only the first rank columns matter).
    """
    vals, vecs = np.linalg.eigh(rho)
    keep = vals > 1e-12
    base = vecs[:, keep] * np.sqrt(vals[keep])  # 4 x r
    r = base.shape[1]
    K = max(members, r)
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(K, 1)

    def unitary(x):
        h = np.zeros((K, K), dtype=complex)
        h[np.diag_indices(K)] = x[:K]
        off = x[K:K + len(iu[0])] + 1j * x[K + len(iu[0]):]
        h[iu] = off
        h = h + np.triu(h, 1).conj().T
        return expm(1j * h)

    def cost(x):
        u = unitary(x)[:, :r]
        total = 0.0
        for i in range(K):
            v = base @ u[i]
            p = np.vdot(v, v).real
            if p > 1e-14:
                total += p * _reduced_entropy(v / np.sqrt(p))
        return total

    n_par = K * K
    best = np.inf
    for _ in range(restarts):
        res = minimize(cost, rng.normal(scale=2.0, size=n_par), method="L-BFGS-B")
        best = min(best, res.fun)
    return float(best)


# -- bipartite assembly ----------------------------------------------------


def qc_state_kron(probs, states):
    """sum_k p_k rho_k (x) |k><k| assembled with kron (A first)."""
    k = len(probs)
    out = 0
    for j, (p, s) in enumerate(zip(probs, states)):
        e = np.zeros((k, k))
        e[j, j] = 1.0
        out = out + p * np.kron(s, e)
    return out


def ptrace_einsum(m, dims, keep):
    """Reduced matrix of a two-party state via einsum (keep in {0, 1})."""
    da, db = dims
    t = m.reshape(da, db, da, db)
    return np.einsum("ijkj->ik", t) if keep == 0 else np.einsum("ijil->jl", t)


def conditional_entropy_bruteforce(m, dims):
    return vn_entropy(m) - vn_entropy(ptrace_einsum(m, dims, 1))


def mutual_information_bruteforce(m, dims):
    return vn_entropy(ptrace_einsum(m, dims, 0)) + vn_entropy(ptrace_einsum(m, dims, 1)) - vn_entropy(m)


# -- random objects --------------------------------------------------------


def random_density(rng, d, rank=None):
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real
