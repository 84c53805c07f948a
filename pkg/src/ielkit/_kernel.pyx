# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contract as ``_kernel_py``.

Universes of more than 64 formulas are handed to the pure-Python code.
"""

from . import _kernel_py

ctypedef unsigned long long mask_t

cdef enum:
    MAXN = 64
    ATOM = 0
    BOT = 1
    TOP = 2
    IMP = 3
    AND = 4
    OR = 5
    BOX = 6
    UNIT_SIZE = 3


cdef struct Universe:
    int n
    int kinds[MAXN]
    int lhs[MAXN]
    int rhs[MAXN]
    mask_t full
    mask_t top
    mask_t bot


cdef inline mask_t bit(int i):
    return (<mask_t>1) << i


cdef inline bint has(mask_t m, int i):
    return (m >> i) & 1


cdef void load(Universe* u, kinds, lhs, rhs):
    cdef int i
    u.n = len(kinds)
    u.top = 0
    u.bot = 0
    for i in range(u.n):
        u.kinds[i] = kinds[i]
        u.lhs[i] = lhs[i]
        u.rhs[i] = rhs[i]
        if u.kinds[i] == TOP:
            u.top |= bit(i)
        elif u.kinds[i] == BOT:
            u.bot |= bit(i)
    u.full = (~(<mask_t>0)) if u.n == 64 else (bit(u.n) - 1)


cdef class _Saturation:
    cdef Universe u
    cdef dict memo

    def __cinit__(self, kinds, lhs, rhs):
        load(&self.u, kinds, lhs, rhs)
        self.memo = {}

    cdef mask_t under(self, mask_t h, mask_t extra, mask_t current):
        cdef mask_t h2 = h | extra
        if h2 == h:
            return current
        return self.derive(h2)

    cdef mask_t derive(self, mask_t h):
        got = self.memo.get(h)
        if got is not None:
            return <mask_t>got
        cdef Universe* u = &self.u
        cdef mask_t d = h | u.top
        cdef mask_t old, extra
        cdef int i, j, k
        while True:
            if d & u.bot:
                d = u.full
                break
            old = d
            for i in range(u.n):
                k = u.kinds[i]
                if has(d, i):
                    if k == IMP:
                        if has(d, u.lhs[i]):
                            d |= bit(u.rhs[i])
                    elif k == AND:
                        d |= bit(u.lhs[i]) | bit(u.rhs[i])
                    elif k == OR:
                        d |= self.under(h, bit(u.lhs[i]), d) & self.under(h, bit(u.rhs[i]), d)
                elif k == IMP:
                    if has(self.under(h, bit(u.lhs[i]), d), u.rhs[i]):
                        d |= bit(i)
                elif k == AND:
                    if has(d, u.lhs[i]) and has(d, u.rhs[i]):
                        d |= bit(i)
                elif k == OR:
                    if has(d, u.lhs[i]) or has(d, u.rhs[i]):
                        d |= bit(i)
                elif k == BOX:
                    extra = 0
                    for j in range(u.n):
                        if u.kinds[j] == BOX and has(d, j):
                            extra |= bit(u.lhs[j])
                    if has(self.under(h, extra, d), u.lhs[i]):
                        d |= bit(i)
            if d == old:
                break
        self.memo[h] = d
        return d


cdef int popcount(mask_t m):
    cdef int c = 0
    while m:
        m &= m - 1
        c += 1
    return c


def derivable(kinds, lhs, rhs, hyps):
    if len(kinds) > MAXN:
        return _kernel_py.derivable(kinds, lhs, rhs, hyps)
    cdef _Saturation sat = _Saturation(kinds, lhs, rhs)
    return sat.derive(<mask_t>hyps)


def decide(kinds, lhs, rhs, hyps, goal):
    if len(kinds) > MAXN:
        return _kernel_py.decide(kinds, lhs, rhs, hyps, goal)
    cdef _Saturation sat = _Saturation(kinds, lhs, rhs)
    cdef mask_t d = sat.derive(<mask_t>hyps)
    cdef long seqs = 0
    for v in sat.memo.values():
        seqs += popcount(<mask_t>v)
    return bool(has(d, goal)), len(sat.memo), seqs


cdef class _Oracle:
    cdef Universe u
    cdef dict memo
    cdef int boxes[MAXN]
    cdef int nboxes

    def __cinit__(self, kinds, lhs, rhs):
        load(&self.u, kinds, lhs, rhs)
        self.memo = {}
        self.nboxes = 0
        cdef int i
        for i in range(self.u.n):
            if self.u.kinds[i] == BOX:
                self.boxes[self.nboxes] = i
                self.nboxes += 1

    cdef int find(self, mask_t h, int g, int budget):
        """Smallest size at most ``budget``, or -1."""
        if budget < 1:
            return -1
        key = (h << 6) | g
        entry = self.memo.get(key)
        cdef int e
        if entry is not None:
            e = entry
            if e > 0:
                return e if e <= budget else -1
            if budget <= -e:
                return -1
        cdef int best = self.search(h, g, budget)
        self.memo[key] = best if best > 0 else -budget
        return best

    cdef int search(self, mask_t h, int g, int budget):
        cdef Universe* u = &self.u
        cdef int best = -1, r, a, b, i, side
        cdef int k = u.kinds[g]
        if k == TOP:
            if h and budget >= 2:
                best = 2
                budget = 1
            elif budget >= UNIT_SIZE:
                best = UNIT_SIZE
                budget = best - 1
        elif k == IMP:
            r = self.find(h | bit(u.lhs[g]), u.rhs[g], budget - 1)
            if r > 0:
                best = 1 + r
                budget = best - 1
        elif k == AND:
            a = self.find(h, u.lhs[g], budget - 2)
            if a > 0:
                b = self.find(h, u.rhs[g], budget - 1 - a)
                if b > 0:
                    best = 1 + a + b
                    budget = best - 1
        elif k == OR:
            for side in (u.lhs[g], u.rhs[g]):
                r = self.find(h, side, budget - 1)
                if r > 0 and (best < 0 or 1 + r < best):
                    best = 1 + r
                    budget = best - 1
        elif k == BOX:
            r = self.box(h, g, budget)
            if r > 0:
                best = r
                budget = best - 1
        for i in range(u.n):
            if budget < 1:
                break
            if has(h, i):
                r = self.spine(h, i, g, budget - 1, True)
                if r >= 0 and (best < 0 or 1 + r < best):
                    best = 1 + r
                    budget = best - 1
        return best

    cdef int box(self, mask_t h, int g, int budget):
        cdef int costs[MAXN]
        cdef int opts[MAXN]
        cdef int nopt = 0, j, r, cost, limit, body
        cdef int best = -1
        cdef long sub
        cdef mask_t hyps
        for j in range(self.nboxes):
            r = self.bare(h, self.boxes[j], budget - 2)
            if r > 0:
                opts[nopt] = self.boxes[j]
                costs[nopt] = r
                nopt += 1
        for sub in range((<long>1) << nopt):
            cost = 1
            hyps = h
            for j in range(nopt):
                if (sub >> j) & 1:
                    cost += costs[j]
                    hyps |= bit(self.u.lhs[opts[j]])
            limit = budget if best < 0 else min(budget, best - 1)
            if cost >= limit:
                continue
            body = self.find(hyps, self.u.lhs[g], limit - cost)
            if body > 0:
                best = cost + body
        return best

    cdef int bare(self, mask_t h, int target, int budget):
        cdef int best = -1, i, r, limit
        for i in range(self.u.n):
            if has(h, i) and budget >= 1:
                limit = budget if best < 0 else min(budget, best - 1)
                r = self.spine(h, i, target, limit - 1, False)
                if r >= 0 and (best < 0 or 1 + r < best):
                    best = 1 + r
        return best

    cdef int spine(self, mask_t h, int c, int g, int budget, bint final):
        """Size of the eliminations from type ``c`` to ``g``, or -1."""
        if c == g:
            return 0
        if budget < 1:
            return -1
        cdef Universe* u = &self.u
        cdef int k = u.kinds[c]
        cdef int best = -1, a, rest, left, right, side
        if k == IMP:
            a = self.find(h, u.lhs[c], budget - 1)
            if a > 0:
                rest = self.spine(h, u.rhs[c], g, budget - 1 - a, final)
                if rest >= 0:
                    best = 1 + a + rest
        elif k == AND:
            for side in (u.lhs[c], u.rhs[c]):
                if budget >= 1:
                    rest = self.spine(h, side, g, budget - 1, final)
                    if rest >= 0 and (best < 0 or 1 + rest < best):
                        best = 1 + rest
                        budget = best - 1
        elif k == OR and final:
            left = self.find(h | bit(u.lhs[c]), g, budget - 2)
            if left > 0:
                right = self.find(h | bit(u.rhs[c]), g, budget - 1 - left)
                if right > 0:
                    best = 1 + left + right
        elif k == BOT and final:
            best = 1
        return best


def oracle_min_size(kinds, lhs, rhs, hyps, goal, bound):
    if len(kinds) > MAXN - 6:
        return _kernel_py.oracle_min_size(kinds, lhs, rhs, hyps, goal, bound)
    cdef _Oracle o = _Oracle(kinds, lhs, rhs)
    return o.find(<mask_t>hyps, goal, bound)
