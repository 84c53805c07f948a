"""Pure-Python search kernels over an indexed formula universe.

A universe is given as three parallel sequences ``kinds``, ``lhs``, ``rhs``:
entry ``i`` describes formula ``i`` by its connective code and the indices of
its immediate subformulas (-1 when absent). Hypothesis sets are bitmasks.
``_kernel.pyx`` implements the same functions with C integers.
"""

ATOM, BOT, TOP, IMP, AND, OR, BOX = range(7)

UNIT_SIZE = 3  # unit (\x:top. x); with a hypothesis h in scope, unit h has size 2


def derivable(kinds, lhs, rhs, hyps):
    """Mask of the universe formulas derivable from ``hyps``."""
    return _Saturation(kinds, lhs, rhs).derive(hyps)


class _Saturation:
    def __init__(self, kinds, lhs, rhs):
        self.kinds, self.lhs, self.rhs = kinds, lhs, rhs
        n = len(kinds)
        self.full = (1 << n) - 1
        self.top = 0
        self.bot = 0
        for i, k in enumerate(kinds):
            if k == TOP:
                self.top |= 1 << i
            elif k == BOT:
                self.bot |= 1 << i
        self.memo = {}

    def derive(self, h):
        got = self.memo.get(h)
        if got is not None:
            return got
        kinds, lhs, rhs = self.kinds, self.lhs, self.rhs
        d = h | self.top
        while True:
            if d & self.bot:
                d = self.full
                break
            old = d
            for i, k in enumerate(kinds):
                bit = 1 << i
                if d & bit:
                    if k == IMP:
                        if d >> lhs[i] & 1:
                            d |= 1 << rhs[i]
                    elif k == AND:
                        d |= (1 << lhs[i]) | (1 << rhs[i])
                    elif k == OR:
                        d |= self._under(h, 1 << lhs[i], d) & self._under(h, 1 << rhs[i], d)
                elif k == IMP:
                    if self._under(h, 1 << lhs[i], d) >> rhs[i] & 1:
                        d |= bit
                elif k == AND:
                    if d >> lhs[i] & 1 and d >> rhs[i] & 1:
                        d |= bit
                elif k == OR:
                    if d >> lhs[i] & 1 or d >> rhs[i] & 1:
                        d |= bit
                elif k == BOX:
                    extra = 0
                    for j, kj in enumerate(kinds):
                        if kj == BOX and d >> j & 1:
                            extra |= 1 << lhs[j]
                    if self._under(h, extra, d) >> lhs[i] & 1:
                        d |= bit
            if d == old:
                break
        self.memo[h] = d
        return d

    def _under(self, h, extra, current):
        h2 = h | extra
        return current if h2 == h else self.derive(h2)


def decide(kinds, lhs, rhs, hyps, goal):
    """(derivable?, hypothesis sets saturated, derived sequents)."""
    sat = _Saturation(kinds, lhs, rhs)
    d = sat.derive(hyps)
    return bool(d >> goal & 1), len(sat.memo), sum(bin(v).count("1") for v in sat.memo.values())


class _Oracle:
    """Exact minimum-size search over normal proof terms.

    Normal terms are introductions, or a hypothesis followed by a spine of
    applications and projections, optionally closed by a case or an efq.
    Box arguments, case scrutinees and efq arguments are bare spines. Each
    result is a pair (size, witness) with witnesses as nested tuples.
    """

    def __init__(self, kinds, lhs, rhs):
        self.kinds, self.lhs, self.rhs = kinds, lhs, rhs
        self.n = len(kinds)
        self.boxes = [i for i, k in enumerate(kinds) if k == BOX]
        self.memo = {}

    def find(self, h, g, budget):
        if budget < 1:
            return None
        key = (h, g)
        entry = self.memo.get(key)
        if entry is not None:
            found, failed = entry
            if found is not None:
                return found if found[0] <= budget else None
            if budget <= failed:
                return None
        best = self._search(h, g, budget)
        if best is None:
            self.memo[key] = (None, budget)
        else:
            self.memo[key] = (best, 0)
        return best

    def _search(self, h, g, budget):
        kinds, lhs, rhs = self.kinds, self.lhs, self.rhs
        best = None

        def offer(cand):
            nonlocal best, budget
            if cand is not None and (best is None or cand[0] < best[0]):
                best = cand
                budget = cand[0] - 1

        k = kinds[g]
        if k == TOP:
            if h and budget >= 2:
                offer((2, ("unit-hyp", (h & -h).bit_length() - 1)))
            elif budget >= UNIT_SIZE:
                offer((UNIT_SIZE, ("unit", g)))
        elif k == IMP:
            r = self.find(h | 1 << lhs[g], rhs[g], budget - 1)
            if r:
                offer((1 + r[0], ("lam", lhs[g], r[1])))
        elif k == AND:
            a = self.find(h, lhs[g], budget - 2)
            if a:
                b = self.find(h, rhs[g], budget - 1 - a[0])
                if b:
                    offer((1 + a[0] + b[0], ("pair", a[1], b[1])))
        elif k == OR:
            for idx, side in ((1, lhs[g]), (2, rhs[g])):
                r = self.find(h, side, budget - 1)
                if r:
                    offer((1 + r[0], ("inj", idx, g, r[1])))
        elif k == BOX:
            offer(self._box(h, g, budget))
        for i in range(self.n):
            if budget < 1:
                break
            if h >> i & 1:
                r = self._spine(h, i, g, budget - 1, final=True)
                if r:
                    offer((1 + r[0], ("spine", i, r[1])))
        return best

    def _box(self, h, g, budget):
        """bel x1 = s1, ..., xn = sn in body, the si bare spines of boxed type."""
        lhs = self.lhs
        options = []
        for b in self.boxes:
            r = self._bare(h, b, budget - 2)
            if r:
                options.append((b, r))
        best = None
        for mask in range(1 << len(options)):
            chosen = [options[j] for j in range(len(options)) if mask >> j & 1]
            cost = 1 + sum(r[0] for _, r in chosen)
            limit = budget if best is None else min(budget, best[0] - 1)
            if cost >= limit:
                continue
            hyps = h
            for b, _ in chosen:
                hyps |= 1 << lhs[b]
            body = self.find(hyps, lhs[g], limit - cost)
            if body:
                best = (cost + body[0], ("box", tuple((lhs[b], r[1]) for b, r in chosen), body[1]))
        return best

    def _bare(self, h, target, budget):
        """A hypothesis with applications and projections, of type ``target``."""
        best = None
        for i in range(self.n):
            if h >> i & 1 and budget >= 1:
                limit = budget if best is None else min(budget, best[0] - 1)
                r = self._spine(h, i, target, limit - 1, final=False)
                if r and (best is None or 1 + r[0] < best[0]):
                    best = (1 + r[0], ("spine", i, r[1]))
        return best

    def _spine(self, h, c, g, budget, final):
        """Eliminations turning a term of type ``c`` into one of type ``g``."""
        if c == g:
            return (0, ())
        if budget < 1:
            return None
        kinds, lhs, rhs = self.kinds, self.lhs, self.rhs
        k = kinds[c]
        best = None

        def offer(cand):
            nonlocal best, budget
            if cand is not None and (best is None or cand[0] < best[0]):
                best = cand
                budget = cand[0] - 1

        if k == IMP:
            a = self.find(h, lhs[c], budget - 1)
            if a:
                rest = self._spine(h, rhs[c], g, budget - 1 - a[0], final)
                if rest:
                    offer((1 + a[0] + rest[0], (("app", a[1]),) + rest[1]))
        elif k == AND:
            for idx, side in ((1, lhs[c]), (2, rhs[c])):
                if budget >= 1:
                    rest = self._spine(h, side, g, budget - 1, final)
                    if rest:
                        offer((1 + rest[0], (("proj", idx),) + rest[1]))
        elif k == OR and final:
            left = self.find(h | 1 << lhs[c], g, budget - 2)
            if left:
                right = self.find(h | 1 << rhs[c], g, budget - 1 - left[0])
                if right:
                    offer((1 + left[0] + right[0], (("case", lhs[c], left[1], rhs[c], right[1]),)))
        elif k == BOT and final:
            offer((1, (("efq", g),)))
        return best


def oracle_min_size(kinds, lhs, rhs, hyps, goal, bound):
    """Size of a smallest normal proof of ``goal`` (at most ``bound``), or -1."""
    r = _Oracle(kinds, lhs, rhs).find(hyps, goal, bound)
    return -1 if r is None else r[0]


def oracle_witness(kinds, lhs, rhs, hyps, goal, bound):
    """(size, witness) for a smallest normal proof, or None."""
    return _Oracle(kinds, lhs, rhs).find(hyps, goal, bound)
