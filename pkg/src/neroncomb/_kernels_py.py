"""Pure-Python lattice-point enumeration (fallback for the compiled ``_kernels``)."""


def enumerate_points(lo, hi, total, constraints, scale):
    """Integer points ``x`` with ``lo <= x <= hi``, ``sum(x) == total`` and, for every
    ``(members, lower, upper)`` in ``constraints``,
    ``lower <= scale * sum(x[i] for i in members) <= upper``.

    Depth-first over coordinates; each constraint is tested as soon as its last
    member is assigned, and the partial sum is kept inside what the remaining
    box can still absorb.  Points come out in lexicographic order.
    """
    n = len(lo)
    if n == 0:
        return [()] if total == 0 else []
    by_depth = [[] for _ in range(n)]
    for members, lower, upper in constraints:
        members = tuple(members)
        if members:
            by_depth[max(members)].append((members, lower, upper))
    suf_lo = [0] * (n + 1)
    suf_hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suf_lo[i] = suf_lo[i + 1] + lo[i]
        suf_hi[i] = suf_hi[i + 1] + hi[i]

    out = []
    x = [0] * n

    def rec(i, prefix):
        rest = total - prefix
        a = max(lo[i], rest - suf_hi[i + 1])
        b = min(hi[i], rest - suf_lo[i + 1])
        checks = by_depth[i]
        for val in range(a, b + 1):
            x[i] = val
            ok = True
            for members, lower, upper in checks:
                s = scale * sum(x[j] for j in members)
                if s < lower or s > upper:
                    ok = False
                    break
            if not ok:
                continue
            if i == n - 1:
                out.append(tuple(x))
            else:
                rec(i + 1, prefix + val)

    rec(0, 0)
    return out


def coset_keys(rows, moduli, vectors):
    """``tuple((row . v) mod m, ...)`` per vector; modulus 0 leaves the coordinate as is."""
    out = []
    for v in vectors:
        key = []
        for row, m in zip(rows, moduli):
            x = 0
            for a, b in zip(row, v):
                x += a * b
            key.append(x % m if m else x)
        out.append(tuple(key))
    return out
