"""Pure numpy implementations of the hot loops.

Same signatures as the compiled ``_ckernels`` module.  Points of
PG(n-1, q) are addressed by their dense index (see ``geometry``); field
elements are codes and the field enters only through its lookup tables.
"""

from __future__ import annotations

import numpy as np

BLOCK = 1 << 15


def point_starts(n: int, q: int) -> np.ndarray:
    """Start index of the block of points whose leading 1 sits at position i."""
    return np.array([(q ** (n - 1 - i) - 1) // (q - 1) for i in range(n)], dtype=np.int64)


def points_block(n: int, q: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    starts = point_starts(n, q)
    # starts decrease with i; position of the leading 1 is the least i with starts[i] <= idx
    lead = np.searchsorted(-starts, -idx, side="left")
    tail = idx - starts[lead]
    V = np.zeros((idx.size, n), dtype=np.int64)
    V[np.arange(idx.size), lead] = 1
    for j in range(n - 1, -1, -1):
        m = j > lead
        V[m, j] = tail[m] % q
        tail = np.where(m, tail // q, tail)
    return V


def _contract_batch(C: np.ndarray, V: np.ndarray, add, mul) -> np.ndarray:
    n = C.shape[0]
    B = np.zeros((V.shape[0], n, n), dtype=np.int64)
    for i in range(n):
        B = add[B, mul[V[:, i][:, None, None], C[i][None, :, :]]]
    return B


def _batched_rref(M: np.ndarray, add, mul, neg, inv) -> tuple[np.ndarray, np.ndarray]:
    """Row-reduce a stack of square matrices in place; return (M, pivot_row_of_column).

    ``piv[b, c]`` is the row holding the pivot of column ``c`` or -1.
    """
    nb, n, _ = M.shape
    used = np.zeros((nb, n), dtype=bool)
    piv = np.full((nb, n), -1, dtype=np.int64)
    ar = np.arange(nb)
    for c in range(n):
        cand = (M[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        r = cand.argmax(axis=1)
        b = ar[has]
        if b.size == 0:
            continue
        rb = r[has]
        prow = mul[inv[M[b, rb, c]][:, None], M[b, rb, :]]
        M[b, rb, :] = prow
        fac = M[b, :, c].copy()
        fac[np.arange(b.size), rb] = 0
        M[b] = add[M[b], mul[neg[fac][:, :, None], prow[:, None, :]]]
        used[b, rb] = True
        piv[b, c] = rb
    return M, piv


def kernel_dims(C, add, mul, neg, inv, n, q, start, stop):
    C = np.asarray(C, dtype=np.int64)
    out = np.empty(stop - start, dtype=np.int8)
    for s in range(start, stop, BLOCK):
        e = min(stop, s + BLOCK)
        V = points_block(n, q, s, e)
        M, piv = _batched_rref(_contract_batch(C, V, add, mul), add, mul, neg, inv)
        out[s - start:e - start] = n - (piv >= 0).sum(axis=1)
    return out


def kernel_dims_many(Cs, add, mul, neg, inv, n, q):
    Cs = np.asarray(Cs, dtype=np.int64).reshape(-1, n, n, n)
    P = (q**n - 1) // (q - 1)
    V = points_block(n, q, 0, P)
    out = np.empty((Cs.shape[0], P), dtype=np.int8)
    per = max(1, BLOCK // max(P, 1))
    for s in range(0, Cs.shape[0], per):
        C = Cs[s:s + per]
        B = np.zeros((C.shape[0], P, n, n), dtype=np.int64)
        for i in range(n):
            B = add[B, mul[V[None, :, i, None, None], C[:, None, i, :, :]]]
        _, piv = _batched_rref(B.reshape(-1, n, n), add, mul, neg, inv)
        out[s:s + C.shape[0]] = (n - (piv >= 0).sum(axis=1)).reshape(C.shape[0], P)
    return out


def vec_code(v, q: int) -> int:
    c = 0
    for x in v:
        c = c * q + int(x)
    return c


def _lines_through(a, R, piv, n, q, add, mul, neg, inv) -> list[int]:
    """Canonical keys of the singular lines through the point ``a``.

    ``R``/``piv`` describe the reduced contraction matrix of ``a``.
    """
    free = [c for c in range(n) if piv[c] < 0]
    K = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for c in range(n):
            if piv[c] >= 0:
                v[c] = int(neg[R[piv[c], f]])
        K.append(v)
    p = next(i for i in range(n) if a[i])
    # project kernel vectors onto the complement {x_p = 0} of <a>
    U = []
    for v in K:
        t = v[p]
        if t:
            v = [int(add[v[j], mul[neg[t], a[j]]]) for j in range(n)]
        U.append(v)
    U = _rref_rows(U, n, add, mul, neg, inv)
    qn = q**n
    keys = []
    d1 = len(U)
    for lead in range(d1):
        for tail in range(q ** (d1 - 1 - lead)):
            coef = [0] * d1
            coef[lead] = 1
            t = tail
            for j in range(d1 - 1, lead, -1):
                coef[j] = t % q
                t //= q
            b = [0] * n
            for i, cf in enumerate(coef):
                if cf:
                    row = U[i]
                    b = [int(add[b[j], mul[cf, row[j]]]) for j in range(n)]
            pb = next(i for i in range(n) if b[i])
            if p < pb:
                t0 = a[pb]
                r1 = [int(add[a[j], mul[neg[t0], b[j]]]) for j in range(n)] if t0 else list(a)
                r2 = b
            else:
                r1, r2 = b, list(a)
            keys.append(vec_code(r1, q) * qn + vec_code(r2, q))
    return keys


def _rref_rows(rows, n, add, mul, neg, inv):
    R = [list(r) for r in rows]
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(R)) if R[i][c]), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        iv = inv[R[r][c]]
        R[r] = [int(mul[iv, x]) for x in R[r]]
        for o in range(len(R)):
            if o != r and R[o][c]:
                f = neg[R[o][c]]
                R[o] = [int(add[R[o][j], mul[f, R[r][j]]]) for j in range(n)]
        r += 1
    out = R[:r]
    return out


def line_keys(C, add, mul, neg, inv, n, q, start, stop):
    C = np.asarray(C, dtype=np.int64)
    keys: list[int] = []
    for s in range(start, stop, BLOCK):
        e = min(stop, s + BLOCK)
        V = points_block(n, q, s, e)
        M, piv = _batched_rref(_contract_batch(C, V, add, mul), add, mul, neg, inv)
        dims = n - (piv >= 0).sum(axis=1)
        for b in np.nonzero(dims >= 2)[0]:
            keys.extend(_lines_through(V[b].tolist(), M[b], piv[b], n, q, add, mul, neg, inv))
    return np.array(keys, dtype=np.int64)


def _solid_coeffs(q: int) -> np.ndarray:
    """Normalised coefficient vectors of PG(3, q), one per row."""
    return points_block(4, q, 0, (q**4 - 1) // (q - 1))


def normal_spread(rows, point_line, add, mul, neg, inv, n, q):
    """Check that every solid spanned by two lines is partitioned by lines.

    ``rows[l]`` is the 2 x n canonical matrix of line ``l``; ``point_line``
    maps each point index to the line covering it.  Returns
    ``(ok, i, j)`` with a failing pair when ``ok`` is false.
    """
    rows = np.asarray(rows, dtype=np.int64)
    point_line = np.asarray(point_line, dtype=np.int64)
    N = rows.shape[0]
    done = np.zeros((N, N), dtype=bool)
    np.fill_diagonal(done, True)
    coeffs = _solid_coeffs(q)
    starts = point_starts(n, q)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for i in range(N):
        js = np.nonzero(~done[i])[0]
        while js.size:
            j = int(js[0])
            basis = np.vstack([rows[i], rows[j]])
            S = np.array(_rref_rows(basis.tolist(), n, add, mul, neg, inv), dtype=np.int64)
            if S.shape[0] != 4:
                return False, i, j
            P = np.zeros((coeffs.shape[0], n), dtype=np.int64)
            for k in range(4):
                P = add[P, mul[coeffs[:, k][:, None], S[k][None, :]]]
            lead = (P != 0).argmax(axis=1)
            tailw = np.where(np.arange(n)[None, :] > lead[:, None], P, 0) @ weights
            idx = starts[lead] + tailw
            lines = point_line[idx]
            if np.any(lines < 0):
                return False, i, j
            ids, counts = np.unique(lines, return_counts=True)
            if np.any(counts != q + 1):
                return False, i, j
            done[np.ix_(ids, ids)] = True
            js = np.nonzero(~done[i])[0]
    return True, -1, -1


def wedge_perm(M, add, mul, q, m):
    """Image of every packed coefficient state under the linear map ``M``."""
    M = np.asarray(M, dtype=np.int64)
    S = q**m
    states = np.arange(S, dtype=np.int64)
    digits = np.empty((m, S), dtype=np.uint8 if q <= 256 else np.int64)
    t = states.copy()
    for k in range(m):
        digits[k] = t % q
        t //= q
    out = np.zeros(S, dtype=np.int64)
    for u in range(m - 1, -1, -1):
        acc = np.zeros(S, dtype=np.int64)
        for k in range(m):
            if M[u, k]:
                acc = add[acc, mul[M[u, k], digits[k]]]
        out = out * q + acc
    return out


def orbit_labels(perms):
    """Label every state by the least state of its orbit (breadth-first)."""
    perms = np.asarray(perms, dtype=np.int64)
    S = perms.shape[1]
    labels = np.full(S, -1, dtype=np.int64)
    for s in range(S):
        if labels[s] >= 0:
            continue
        labels[s] = s
        frontier = np.array([s], dtype=np.int64)
        while frontier.size:
            nxt = np.unique(perms[:, frontier].ravel())
            nxt = nxt[labels[nxt] < 0]
            labels[nxt] = s
            frontier = nxt
    return labels
