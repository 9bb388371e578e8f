# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernels_py``; same semantics, typed loop indices.

Integers stay Python objects (they are unbounded); the win comes from
compiled loops and list indexing without interpreter dispatch.
"""

from math import gcd


cpdef object row_content(list row):
    cdef object g = 0
    cdef object x
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


cpdef tuple echelon(object rows, Py_ssize_t ncols, bint reduced=True):
    cdef list work = [list(r) for r in rows if any(r)]
    cdef list pivots = []
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t nrows = len(work)
    cdef Py_ssize_t col, i, j, piv, start
    cdef list prow, row, tmp
    cdef object p, f, g, a, b, c, v, best, av
    for col in range(ncols):
        if top >= nrows:
            break
        piv = -1
        best = None
        for i in range(top, nrows):
            v = (<list>work[i])[col]
            if v:
                av = v if v > 0 else -v
                if best is None or av < best:
                    best = av
                    piv = i
                    if av == 1:
                        break
        if piv < 0:
            continue
        if piv != top:
            tmp = work[top]
            work[top] = work[piv]
            work[piv] = tmp
        prow = work[top]
        p = prow[col]
        start = 0 if reduced else top + 1
        for i in range(start, nrows):
            if i == top:
                continue
            row = work[i]
            f = row[col]
            if not f:
                continue
            g = gcd(p, f)
            a = p // g
            b = f // g
            for j in range(col, ncols):
                row[j] = a * row[j] - b * prow[j]
            for j in range(0, col):
                if row[j]:
                    row[j] = a * row[j]
            c = row_content(row)
            if c > 1:
                for j in range(ncols):
                    row[j] = row[j] // c
        pivots.append(col)
        top += 1
    cdef list out = work[:top]
    for row in out:
        c = row_content(row)
        if c > 1:
            for j in range(ncols):
                row[j] = row[j] // c
    return out, pivots


cpdef Py_ssize_t rank(object rows, Py_ssize_t ncols):
    return len(echelon(rows, ncols, False)[1])


cpdef list poly_trim(list a):
    while a and not a[len(a) - 1]:
        a.pop()
    return a


cpdef list poly_add(list a, list b):
    cdef Py_ssize_t i
    if len(a) < len(b):
        a, b = b, a
    cdef list out = list(a)
    for i in range(len(b)):
        out[i] = out[i] + b[i]
    return poly_trim(out)


cpdef list poly_mul(list a, list b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    cdef object ai
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] = out[i + j] + ai * b[j]
    return poly_trim(out)


cpdef list poly_scale(list a, object s):
    if not s:
        return []
    return [s * x for x in a]


cpdef tuple poly_pdivrem(list a, list b):
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("pseudo-division by the zero polynomial")
    cdef Py_ssize_t db = len(b) - 1
    cdef object lc = b[db]
    cdef list r = poly_trim(list(a))
    cdef Py_ssize_t nq = len(a) - db
    cdef list q = [0] * (nq if nq > 0 else 0)
    cdef object s = 1
    cdef object t, g, mr, mt
    cdef Py_ssize_t shift, i
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        t = r[len(r) - 1]
        g = gcd(t, lc)
        mr = lc // g
        mt = t // g
        if mr != 1:
            for i in range(len(r)):
                r[i] = r[i] * mr
            for i in range(len(q)):
                q[i] = q[i] * mr
            s = s * mr
        q[shift] = q[shift] + mt
        for i in range(db + 1):
            r[shift + i] = r[shift + i] - mt * b[i]
        poly_trim(r)
    return s, poly_trim(q), r


cpdef object poly_content(list a):
    return row_content(a)


cpdef list row_combine(list x, object s, list q, list y):
    cdef list out = []
    cdef Py_ssize_t i
    cdef list xi, yi, t
    for i in range(len(x)):
        xi = x[i]
        yi = y[i]
        if s == 1:
            t = list(xi)
        else:
            t = [s * c for c in xi]
        if q and yi:
            t = poly_add(t, [-c for c in poly_mul(q, yi)])
        out.append(t)
    return out


cpdef object rows_content(list rows):
    cdef object g = 0
    cdef object c
    cdef list p
    for p in rows:
        for c in p:
            if c:
                g = gcd(g, c)
                if g == 1:
                    return 1
    return g
