"""Pure-Python integer kernels.

Every routine works on Python ``int`` (never ``Fraction``): callers clear
denominators first. Polynomials are coefficient lists, lowest power first,
with no trailing zeros; the zero polynomial is ``[]``.

``_kernels.pyx`` is a line-for-line compiled twin of this file; keep the
two in sync.
"""

from math import gcd


def row_content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def echelon(rows, ncols, reduced=True):
    """Fraction-free Gauss(-Jordan) elimination on an integer matrix.

    Returns ``(rows, pivots)`` where ``rows`` holds only the nonzero rows in
    pivot order, each divided by its content. With ``reduced`` every pivot
    column is zero outside its pivot row.
    """
    work = [list(r) for r in rows if any(r)]
    pivots = []
    top = 0
    nrows = len(work)
    for col in range(ncols):
        if top >= nrows:
            break
        piv = -1
        best = None
        for i in range(top, nrows):
            v = work[i][col]
            if v:
                a = v if v > 0 else -v
                if best is None or a < best:
                    best = a
                    piv = i
                    if a == 1:
                        break
        if piv < 0:
            continue
        if piv != top:
            work[top], work[piv] = work[piv], work[top]
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
                    row[j] //= c
        pivots.append(col)
        top += 1
    out = work[:top]
    for row in out:
        c = row_content(row)
        if c > 1:
            for j in range(ncols):
                row[j] //= c
    return out, pivots


def rank(rows, ncols):
    return len(echelon(rows, ncols, reduced=False)[1])


def poly_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i in range(len(b)):
        out[i] += b[i]
    return poly_trim(out)


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i in range(len(a)):
        ai = a[i]
        if ai:
            for j in range(len(b)):
                out[i + j] += ai * b[j]
    return poly_trim(out)


def poly_scale(a, s):
    if not s:
        return []
    return [s * x for x in a]


def poly_pdivrem(a, b):
    """Pseudo-division ``s*a = q*b + r`` with ``deg r < deg b``.

    ``s`` is a power of the leading coefficient of ``b`` (an integer unit of
    Q[z]); returns ``(s, q, r)``.
    """
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("pseudo-division by the zero polynomial")
    db = len(b) - 1
    lc = b[-1]
    r = poly_trim(list(a))
    q = [0] * max(len(a) - db, 0)
    s = 1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        t = r[-1]
        g = gcd(t, lc)
        mr = lc // g
        mt = t // g
        if mr != 1:
            for i in range(len(r)):
                r[i] *= mr
            for i in range(len(q)):
                q[i] *= mr
            s *= mr
        q[shift] += mt
        for i in range(len(b)):
            r[shift + i] -= mt * b[i]
        poly_trim(r)
    return s, poly_trim(q), r


def poly_content(a):
    return row_content(a)


def row_combine(x, s, q, y):
    """Entrywise ``s*x - q*y`` for rows of integer polynomials."""
    out = []
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


def rows_content(rows):
    """gcd of all coefficients of a list of polynomials (0 if all zero)."""
    g = 0
    for p in rows:
        for c in p:
            if c:
                g = gcd(g, c)
                if g == 1:
                    return 1
    return g
