"""Pure-Python census kernel, the fallback twin of the compiled extension.

Both kernels expose the same two entry points and must produce identical
counts for identical inputs:

  census_block(mult, inv, e, r, elems, start, stop) -> (maps, mrr_maps)
  is_mrr_cycle(mult, inv, e, r, cycle) -> bool

mult is the flattened r*r multiplication table, inv the inverse table, e
the identity index, elems the sorted connection set. Orderings of S are
indexed 0..(|S|-1)!-1 by the lexicographic rank of the cycle tail (the
cycle is anchored at min S), so any index range can run on any worker.

A map is an MRR exactly when no candidate exponent |S|/p (p prime dividing
|S|) extends to a stabilizer automorphism: the successful exponents form a
subgroup of Z_|S|, so probing the minimal subgroups decides triviality.
"""

from __future__ import annotations

from math import factorial


def _distinct_prime_divisors(k: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            primes.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes.append(k)
    return primes


def _unrank_tail(pool, t):
    """Lexicographic rank-t arrangement of the sorted pool."""
    pool = list(pool)
    out = []
    for i in range(len(pool), 0, -1):
        d, t = divmod(t, factorial(i - 1))
        out.append(pool.pop(d))
    return out


def _next_permutation(a) -> bool:
    """Advance to the lexicographic successor in place; False after the last."""
    n = len(a)
    i = n - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        a.reverse()
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = a[:i:-1]
    return True


def _attempt(mult, inv, e, r, cycle, cpos, k, c, img, taken, pivot, queue) -> bool:
    """Probe whether (e, s0) -> (e, ordering^c(s0)) extends to a map automorphism.

    Breadth-first rotation transport followed by a full re-verification of
    adjacency and the rotation condition at every vertex.
    """
    for i in range(r):
        img[i] = -1
        taken[i] = 0
        pivot[i] = -1
    s0 = cycle[0]
    s0_img = cycle[c % k]
    img[e] = e
    taken[e] = 1
    img[s0] = s0_img
    taken[s0_img] = 1
    pivot[e] = s0
    pivot[s0] = e
    queue[0] = e
    queue[1] = s0
    qh, qt = 0, 2
    assigned = 2
    while qh < qt:
        v = queue[qh]
        qh += 1
        p = pivot[v]
        v2 = img[v]
        p2 = img[p]
        iv = inv[v]
        iv2 = inv[v2]
        x = p
        y = p2
        for _ in range(k - 1):
            s = mult[x * r + iv]
            x = mult[cycle[(cpos[s] + 1) % k] * r + v]
            s = mult[y * r + iv2]
            y = mult[cycle[(cpos[s] + 1) % k] * r + v2]
            if img[x] < 0:
                if taken[y]:
                    return False
                img[x] = y
                taken[y] = 1
                pivot[x] = v
                queue[qt] = x
                qt += 1
                assigned += 1
            elif img[x] != y:
                return False
    if assigned < r:
        return False
    for v in range(r):
        v2 = img[v]
        iv2 = inv[v2]
        for j in range(k):
            x2 = img[mult[cycle[j] * r + v]]
            s2 = mult[x2 * r + iv2]
            if cpos[s2] < 0:
                return False
            if img[mult[cycle[(j + 1) % k] * r + v]] != mult[cycle[(cpos[s2] + 1) % k] * r + v2]:
                return False
    return True


def _nontrivial_stabilizer(mult, inv, e, r, cycle, cpos, k, primes,
                           img, taken, pivot, queue) -> bool:
    for p in primes:
        if _attempt(mult, inv, e, r, cycle, cpos, k, k // p, img, taken, pivot, queue):
            return True
    return False


def census_block(mult, inv, e, r, elems, start, stop):
    """Count (maps, MRR maps) over ordering indices [start, stop) of one connection set."""
    k = len(elems)
    total = factorial(k - 1)
    if not 0 <= start <= stop <= total:
        raise ValueError(f"ordering range [{start}, {stop}) outside [0, {total})")
    if start == stop:
        return 0, 0
    primes = _distinct_prime_divisors(k)
    cpos = [-1] * r
    img = [0] * r
    taken = [0] * r
    pivot = [0] * r
    queue = [0] * r
    cycle = [elems[0]] + _unrank_tail(elems[1:], start)
    tail = cycle[1:]
    maps = 0
    mrr = 0
    for _ in range(start, stop):
        cycle[1:] = tail
        for i, x in enumerate(cycle):
            cpos[x] = i
        maps += 1
        if not _nontrivial_stabilizer(mult, inv, e, r, cycle, cpos, k, primes,
                                      img, taken, pivot, queue):
            mrr += 1
        _next_permutation(tail)
    return maps, mrr


def is_mrr_cycle(mult, inv, e, r, cycle) -> bool:
    """MRR check for a single map given as its anchored ordering cycle."""
    k = len(cycle)
    primes = _distinct_prime_divisors(k)
    cpos = [-1] * r
    for i, x in enumerate(cycle):
        cpos[x] = i
    img = [0] * r
    taken = [0] * r
    pivot = [0] * r
    queue = [0] * r
    return not _nontrivial_stabilizer(mult, inv, e, r, list(cycle), cpos, k, primes,
                                      img, taken, pivot, queue)
