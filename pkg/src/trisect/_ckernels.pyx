# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the loops in ``_pykernels``.

Field elements are int64 codes; the field is given by flattened q x q
add/mul tables plus neg/inv vectors.  Vectors have at most MAXN entries.
All loops run without the GIL so callers may split point ranges across
threads.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64

cdef enum:
    MAXN = 12


cdef struct Fld:
    const i64* add
    const i64* mul
    const i64* neg
    const i64* inv
    i64 q


cdef inline i64 fadd(const Fld* F, i64 a, i64 b) noexcept nogil:
    return F.add[a * F.q + b]


cdef inline i64 fmul(const Fld* F, i64 a, i64 b) noexcept nogil:
    return F.mul[a * F.q + b]


cdef inline i64 ipow(i64 b, int e) noexcept nogil:
    cdef i64 r = 1
    cdef int i
    for i in range(e):
        r *= b
    return r


cdef inline void decode_point(i64 idx, int n, i64 q, const i64* starts, i64* v) noexcept nogil:
    cdef int lead = 0, j
    cdef i64 tail
    while starts[lead] > idx:
        lead += 1
    tail = idx - starts[lead]
    for j in range(n):
        v[j] = 0
    v[lead] = 1
    j = n - 1
    while j > lead:
        v[j] = tail % q
        tail = tail // q
        j -= 1


cdef inline i64 point_index(const i64* v, int n, i64 q, const i64* starts) noexcept nogil:
    cdef int lead = 0, j
    cdef i64 t = 0
    while v[lead] == 0:
        lead += 1
    for j in range(lead + 1, n):
        t = t * q + v[j]
    return starts[lead] + t


cdef inline i64 vec_code(const i64* v, int n, i64 q) noexcept nogil:
    cdef i64 c = 0
    cdef int j
    for j in range(n):
        c = c * q + v[j]
    return c


cdef int reduce_rows(i64* R, int rows, int n, const Fld* F, int* piv) noexcept nogil:
    """In-place RREF of a rows x n block; rows are compacted to the top.

    ``piv[r]`` receives the pivot column of row r.  Returns the rank.
    """
    cdef int r = 0, c, i, j, pr
    cdef i64 iv, f, tmp
    for c in range(n):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if R[i * n + c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(n):
                tmp = R[r * n + j]
                R[r * n + j] = R[pr * n + j]
                R[pr * n + j] = tmp
        iv = F.inv[R[r * n + c]]
        for j in range(n):
            R[r * n + j] = fmul(F, iv, R[r * n + j])
        for i in range(rows):
            if i != r and R[i * n + c] != 0:
                f = F.neg[R[i * n + c]]
                for j in range(n):
                    R[i * n + j] = fadd(F, R[i * n + j], fmul(F, f, R[r * n + j]))
        piv[r] = c
        r += 1
    return r


cdef int contraction_rank(const i64* C, int n, const Fld* F, const i64* a, i64* R, int* piv) noexcept nogil:
    cdef int i, j, k
    cdef i64 ai
    for j in range(n * n):
        R[j] = 0
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            for k in range(n):
                R[j * n + k] = fadd(F, R[j * n + k], fmul(F, ai, C[(i * n + j) * n + k]))
    return reduce_rows(R, n, n, F, piv)


cdef int lines_through(const i64* a, i64* R, int rank, int* piv, int n, const Fld* F,
                       i64* out) noexcept nogil:
    """Write the canonical keys of singular lines through ``a``; return how many."""
    cdef i64 q = F.q
    cdef i64 qn = ipow(q, n)
    cdef i64 K[MAXN * MAXN]
    cdef i64 b[MAXN]
    cdef i64 r1[MAXN]
    cdef i64 coef[MAXN]
    cdef int ispiv[MAXN]
    cdef int upiv[MAXN]
    cdef int nk = 0, c, f, r, j, p, d1, lead, i, pb, cnt = 0
    cdef i64 t, tail, ntail, t0
    for c in range(n):
        ispiv[c] = -1
    for r in range(rank):
        ispiv[piv[r]] = r
    for f in range(n):
        if ispiv[f] >= 0:
            continue
        for j in range(n):
            K[nk * n + j] = 0
        K[nk * n + f] = 1
        for c in range(n):
            if ispiv[c] >= 0:
                K[nk * n + c] = F.neg[R[ispiv[c] * n + f]]
        nk += 1
    p = 0
    while a[p] == 0:
        p += 1
    for i in range(nk):
        t = K[i * n + p]
        if t != 0:
            t = F.neg[t]
            for j in range(n):
                K[i * n + j] = fadd(F, K[i * n + j], fmul(F, t, a[j]))
    d1 = reduce_rows(K, nk, n, F, upiv)
    for lead in range(d1):
        ntail = ipow(q, d1 - 1 - lead)
        for tail in range(ntail):
            for j in range(d1):
                coef[j] = 0
            coef[lead] = 1
            t = tail
            j = d1 - 1
            while j > lead:
                coef[j] = t % q
                t = t // q
                j -= 1
            for j in range(n):
                b[j] = 0
            for i in range(lead, d1):
                if coef[i] != 0:
                    for j in range(n):
                        b[j] = fadd(F, b[j], fmul(F, coef[i], K[i * n + j]))
            pb = 0
            while b[pb] == 0:
                pb += 1
            if p < pb:
                t0 = a[pb]
                if t0 != 0:
                    t0 = F.neg[t0]
                    for j in range(n):
                        r1[j] = fadd(F, a[j], fmul(F, t0, b[j]))
                else:
                    for j in range(n):
                        r1[j] = a[j]
                out[cnt] = vec_code(r1, n, q) * qn + vec_code(b, n, q)
            else:
                out[cnt] = vec_code(b, n, q) * qn + vec_code(a, n, q)
            cnt += 1
    return cnt


cdef void fill_field(Fld* F, const i64[::1] add, const i64[::1] mul, const i64[::1] neg, const i64[::1] inv, i64 q):
    F.add = &add[0]
    F.mul = &mul[0]
    F.neg = &neg[0]
    F.inv = &inv[0]
    F.q = q


def _tables(add, mul, neg, inv):
    return (np.ascontiguousarray(add, dtype=np.int64).ravel(),
            np.ascontiguousarray(mul, dtype=np.int64).ravel(),
            np.ascontiguousarray(neg, dtype=np.int64),
            np.ascontiguousarray(inv, dtype=np.int64))


def _starts(int n, i64 q):
    return np.array([(q ** (n - 1 - i) - 1) // (q - 1) for i in range(n)], dtype=np.int64)


def kernel_dims(C, add, mul, neg, inv, int n, i64 q, i64 start, i64 stop):
    cdef Fld F
    tabs = _tables(add, mul, neg, inv)
    fill_field(&F, tabs[0], tabs[1], tabs[2], tabs[3], q)
    cdef const i64[::1] Cv = np.ascontiguousarray(C, dtype=np.int64).ravel()
    cdef i64[::1] st = _starts(n, q)
    out = np.empty(stop - start, dtype=np.int8)
    cdef signed char[::1] o = out
    cdef i64 a[MAXN]
    cdef i64 R[MAXN * MAXN]
    cdef int piv[MAXN]
    cdef i64 idx
    with nogil:
        for idx in range(start, stop):
            decode_point(idx, n, q, &st[0], a)
            o[idx - start] = n - contraction_rank(&Cv[0], n, &F, a, R, piv)
    return out


def kernel_dims_many(Cs, add, mul, neg, inv, int n, i64 q):
    """Kernel dimensions for a stack of forms (S, n, n, n) at every point."""
    cdef Fld F
    tabs = _tables(add, mul, neg, inv)
    fill_field(&F, tabs[0], tabs[1], tabs[2], tabs[3], q)
    cdef const i64[:, ::1] Cv = np.ascontiguousarray(Cs, dtype=np.int64).reshape(-1, n * n * n)
    cdef i64[::1] st = _starts(n, q)
    cdef i64 P = (ipow(q, n) - 1) // (q - 1)
    cdef i64 S = Cv.shape[0]
    pts_np = np.empty((P, n), dtype=np.int64)
    cdef i64[:, ::1] pts = pts_np
    out = np.empty((S, P), dtype=np.int8)
    cdef signed char[:, ::1] o = out
    cdef i64 R[MAXN * MAXN]
    cdef int piv[MAXN]
    cdef i64 s, idx
    if S == 0 or P == 0:
        return out
    with nogil:
        for idx in range(P):
            decode_point(idx, n, q, &st[0], &pts[idx, 0])
        for s in range(S):
            for idx in range(P):
                o[s, idx] = n - contraction_rank(&Cv[s, 0], n, &F, &pts[idx, 0], R, piv)
    return out


def line_keys(C, add, mul, neg, inv, int n, i64 q, i64 start, i64 stop):
    cdef Fld F
    tabs = _tables(add, mul, neg, inv)
    fill_field(&F, tabs[0], tabs[1], tabs[2], tabs[3], q)
    cdef const i64[::1] Cv = np.ascontiguousarray(C, dtype=np.int64).ravel()
    cdef i64[::1] st = _starts(n, q)
    cdef i64 a[MAXN]
    cdef i64 R[MAXN * MAXN]
    cdef int piv[MAXN]
    cdef i64 idx, total = 0, d
    cdef int rk
    with nogil:
        for idx in range(start, stop):
            decode_point(idx, n, q, &st[0], a)
            d = n - contraction_rank(&Cv[0], n, &F, a, R, piv)
            if d >= 2:
                total += (ipow(q, <int>d - 1) - 1) // (q - 1)
    out = np.empty(total, dtype=np.int64)
    if total == 0:
        return out
    cdef i64[::1] o = out
    cdef i64 pos = 0
    with nogil:
        for idx in range(start, stop):
            decode_point(idx, n, q, &st[0], a)
            rk = contraction_rank(&Cv[0], n, &F, a, R, piv)
            if n - rk >= 2:
                pos += lines_through(a, R, rk, piv, n, &F, &o[pos])
    return out


def normal_spread(rows, point_line, add, mul, neg, inv, int n, i64 q):
    cdef Fld F
    tabs = _tables(add, mul, neg, inv)
    fill_field(&F, tabs[0], tabs[1], tabs[2], tabs[3], q)
    cdef const i64[:, :, ::1] rv = np.ascontiguousarray(rows, dtype=np.int64)
    cdef const i64[::1] pl = np.ascontiguousarray(point_line, dtype=np.int64)
    cdef i64[::1] st = _starts(n, q)
    cdef i64 N = rv.shape[0]
    cdef i64 ncomb = (q ** 4 - 1) // (q - 1)
    cdef i64[::1] st4 = _starts(4, q)
    combs_np = np.empty((ncomb, 4), dtype=np.int64)
    cdef i64[:, ::1] combs = combs_np
    cdef i64 cbuf[4]
    cdef i64 ci
    cdef int cj
    for ci in range(ncomb):
        decode_point(ci, 4, q, &st4[0], cbuf)
        for cj in range(4):
            combs[ci, cj] = cbuf[cj]
    done_np = np.zeros(N * N, dtype=np.uint8)
    cdef unsigned char[::1] done = done_np
    cnt_np = np.zeros(N, dtype=np.int64)
    cdef i64[::1] cnt = cnt_np
    sel_np = np.zeros(N, dtype=np.int64)
    cdef i64[::1] sel = sel_np
    cdef i64 S[4 * MAXN]
    cdef int spiv[4]
    cdef i64 v[MAXN]
    cdef i64 i, j, k, l, ns, s1, s2, c
    cdef int rk, jj
    cdef int ok = 1
    cdef i64 bad_i = -1, bad_j = -1
    with nogil:
        for i in range(N):
            if not ok:
                break
            for j in range(i + 1, N):
                if done[i * N + j]:
                    continue
                for jj in range(n):
                    S[jj] = rv[i, 0, jj]
                    S[n + jj] = rv[i, 1, jj]
                    S[2 * n + jj] = rv[j, 0, jj]
                    S[3 * n + jj] = rv[j, 1, jj]
                rk = reduce_rows(S, 4, n, &F, spiv)
                if rk != 4:
                    ok = 0
                ns = 0
                if ok:
                    for c in range(ncomb):
                        for jj in range(n):
                            v[jj] = 0
                        for k in range(4):
                            if combs[c, k] != 0:
                                for jj in range(n):
                                    v[jj] = fadd(&F, v[jj], fmul(&F, combs[c, k], S[k * n + jj]))
                        l = pl[point_index(v, n, q, &st[0])]
                        if l < 0:
                            ok = 0
                            break
                        if cnt[l] == 0:
                            sel[ns] = l
                            ns += 1
                        cnt[l] += 1
                if ok:
                    for k in range(ns):
                        if cnt[sel[k]] != q + 1:
                            ok = 0
                            break
                if ok:
                    for s1 in range(ns):
                        for s2 in range(ns):
                            done[sel[s1] * N + sel[s2]] = 1
                for k in range(ns):
                    cnt[sel[k]] = 0
                if not ok:
                    bad_i = i
                    bad_j = j
                    break
    return bool(ok), int(bad_i), int(bad_j)


def wedge_perm(M, add, mul, i64 q, int m):
    cdef const i64[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.int64)
    cdef const i64[::1] ad = np.ascontiguousarray(add, dtype=np.int64).ravel()
    cdef const i64[::1] mu = np.ascontiguousarray(mul, dtype=np.int64).ravel()
    cdef i64 S = q ** m
    out = np.empty(S, dtype=np.int64)
    cdef i64[::1] o = out
    cdef i64 dig[64]
    cdef i64 img[64]
    cdef i64 s, t, code
    cdef int k, u
    with nogil:
        for s in range(S):
            t = s
            for k in range(m):
                dig[k] = t % q
                t = t // q
                img[k] = 0
            for k in range(m):
                if dig[k] != 0:
                    for u in range(m):
                        if Mv[u, k] != 0:
                            img[u] = ad[img[u] * q + mu[Mv[u, k] * q + dig[k]]]
            code = 0
            for u in range(m - 1, -1, -1):
                code = code * q + img[u]
            o[s] = code
    return out


def orbit_labels(perms):
    cdef const i64[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef i64 g = P.shape[0], S = P.shape[1]
    labels = np.full(S, -1, dtype=np.int64)
    cdef i64[::1] lab = labels
    queue_np = np.empty(S, dtype=np.int64)
    cdef i64[::1] queue = queue_np
    cdef i64 s, head, tail, x, y, k
    with nogil:
        for s in range(S):
            if lab[s] >= 0:
                continue
            lab[s] = s
            head = 0
            tail = 0
            queue[tail] = s
            tail += 1
            while head < tail:
                x = queue[head]
                head += 1
                for k in range(g):
                    y = P[k, x]
                    if lab[y] < 0:
                        lab[y] = s
                        queue[tail] = y
                        tail += 1
    return labels
