# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled census kernel; line-for-line twin of cayleymaps._purecensus.

Same contract: census_block counts (maps, MRR maps) over a lexicographic
range of ordering indices for one connection set, is_mrr_cycle checks a
single anchored cycle. The hot loop runs without the GIL, so shards can be
driven from plain Python threads.
"""

from libc.stdlib cimport free, malloc

ctypedef long long i64

cdef i64 SATURATE = 4611686018427387904  # 2**62, above any shardable ordering index


cdef int _distinct_prime_divisors(int k, int* primes) noexcept nogil:
    cdef int n = 0
    cdef int d = 2
    while d * d <= k:
        if k % d == 0:
            primes[n] = d
            n += 1
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes[n] = k
        n += 1
    return n


cdef void _unrank_tail(const int* pool, int m, i64 t, int* out) noexcept nogil:
    """Lexicographic rank-t arrangement of the sorted pool of size m."""
    cdef i64* fact
    cdef int* scratch
    cdef int i, j, d
    cdef i64 f
    if m == 0:
        return
    fact = <i64*> malloc(m * sizeof(i64))
    scratch = <int*> malloc(m * sizeof(int))
    if fact == NULL or scratch == NULL:
        free(fact)
        free(scratch)
        return
    fact[0] = 1
    for i in range(1, m):
        fact[i] = fact[i - 1] * i if fact[i - 1] < SATURATE // i else SATURATE
    for i in range(m):
        scratch[i] = pool[i]
    for i in range(m):
        f = fact[m - 1 - i]
        d = <int> (t // f)
        t = t % f
        out[i] = scratch[d]
        for j in range(d, m - 2 - i + 1):
            scratch[j] = scratch[j + 1]
    free(fact)
    free(scratch)


cdef bint _next_permutation(int* a, int n) noexcept nogil:
    cdef int i = n - 2
    cdef int j, tmp, lo, hi
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        lo = 0
        hi = n - 1
        while lo < hi:
            tmp = a[lo]; a[lo] = a[hi]; a[hi] = tmp
            lo += 1
            hi -= 1
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    tmp = a[i]; a[i] = a[j]; a[j] = tmp
    lo = i + 1
    hi = n - 1
    while lo < hi:
        tmp = a[lo]; a[lo] = a[hi]; a[hi] = tmp
        lo += 1
        hi -= 1
    return True


cdef bint _attempt(const int* mult, const int* inv, int e, int r,
                   const int* cycle, const int* cpos, int k, int c,
                   int* img, char* taken, int* pivot, int* queue) noexcept nogil:
    """Probe whether (e, s0) -> (e, ordering^c(s0)) extends to a map automorphism."""
    cdef int i, s0, s0_img, qh, qt, assigned, v, p, v2, p2, iv, iv2, x, y, s, j, x2, s2
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
    qh = 0
    qt = 2
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
        for i in range(k - 1):
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


cdef bint _nontrivial_stabilizer(const int* mult, const int* inv, int e, int r,
                                 const int* cycle, const int* cpos, int k,
                                 const int* primes, int n_primes,
                                 int* img, char* taken, int* pivot, int* queue) noexcept nogil:
    cdef int i
    for i in range(n_primes):
        if _attempt(mult, inv, e, r, cycle, cpos, k, k // primes[i], img, taken, pivot, queue):
            return True
    return False


cdef struct _Work:
    int* cpos
    int* img
    char* taken
    int* pivot
    int* queue
    int* cycle
    int* primes


cdef bint _alloc_work(_Work* w, int r, int k) noexcept:
    w.cpos = <int*> malloc(r * sizeof(int))
    w.img = <int*> malloc(r * sizeof(int))
    w.taken = <char*> malloc(r * sizeof(char))
    w.pivot = <int*> malloc(r * sizeof(int))
    w.queue = <int*> malloc(r * sizeof(int))
    w.cycle = <int*> malloc(k * sizeof(int))
    w.primes = <int*> malloc(16 * sizeof(int))
    return (w.cpos != NULL and w.img != NULL and w.taken != NULL and
            w.pivot != NULL and w.queue != NULL and w.cycle != NULL and w.primes != NULL)


cdef void _free_work(_Work* w) noexcept:
    free(w.cpos); free(w.img); free(w.taken); free(w.pivot)
    free(w.queue); free(w.cycle); free(w.primes)


def census_block(const int[::1] mult, const int[::1] inv, int e, int r,
                 elems, long long start, long long stop):
    """Count (maps, MRR maps) over ordering indices [start, stop) of one connection set."""
    cdef int k = len(elems)
    cdef i64 total = 1
    cdef int i
    for i in range(1, k):
        total = total * i if total < SATURATE // i else SATURATE
    if not (0 <= start <= stop <= total):
        raise ValueError(f"ordering range [{start}, {stop}) outside [0, {total})")
    if start == stop:
        return 0, 0

    cdef _Work w
    if not _alloc_work(&w, r, k):
        raise MemoryError()
    cdef int n_primes
    cdef i64 maps = 0, mrr = 0, t
    cdef int* tail = w.cycle + 1  # cycle[1:] is the permuted part
    try:
        for i in range(r):
            w.cpos[i] = -1
        w.cycle[0] = elems[0]
        for i in range(1, k):
            w.cycle[i] = elems[i]
        with nogil:
            n_primes = _distinct_prime_divisors(k, w.primes)
            _unrank_tail(w.cycle + 1, k - 1, start, tail)
            for t in range(start, stop):
                for i in range(k):
                    w.cpos[w.cycle[i]] = i
                maps += 1
                if not _nontrivial_stabilizer(&mult[0], &inv[0], e, r, w.cycle, w.cpos,
                                              k, w.primes, n_primes,
                                              w.img, w.taken, w.pivot, w.queue):
                    mrr += 1
                _next_permutation(tail, k - 1)
        return maps, mrr
    finally:
        _free_work(&w)


def is_mrr_cycle(const int[::1] mult, const int[::1] inv, int e, int r, cycle):
    """MRR check for a single map given as its anchored ordering cycle."""
    cdef int k = len(cycle)
    cdef _Work w
    cdef int i, n_primes
    cdef bint nontrivial
    if not _alloc_work(&w, r, k):
        raise MemoryError()
    try:
        for i in range(r):
            w.cpos[i] = -1
        for i in range(k):
            w.cycle[i] = cycle[i]
            w.cpos[w.cycle[i]] = i
        with nogil:
            n_primes = _distinct_prime_divisors(k, w.primes)
            nontrivial = _nontrivial_stabilizer(&mult[0], &inv[0], e, r, w.cycle, w.cpos,
                                                k, w.primes, n_primes,
                                                w.img, w.taken, w.pivot, w.queue)
        return not nontrivial
    finally:
        _free_work(&w)
