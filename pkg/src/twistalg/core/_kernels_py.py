"""Pure-Python versions of the hot kernels (prime-field only)."""


def rref_modp(rows, ncols, p):
    """Reduced row echelon form of an integer matrix modulo ``p``.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [[v % p for v in r] for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = pow(row[c], -1, p)
        if inv != 1:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
        for i in range(nrows):
            if i != r:
                other = m[i]
                f = other[c]
                if f:
                    for j in range(c, ncols):
                        if row[j]:
                            other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def series_mul_modp(a, b, n, p):
    """First ``n`` coefficients of the product of two coefficient lists mod ``p``."""
    out = [0] * n
    la = min(len(a), n)
    lb = min(len(b), n)
    for i in range(la):
        ai = a[i]
        if ai:
            lim = min(lb, n - i)
            for j in range(lim):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
    return [v % p for v in out]
