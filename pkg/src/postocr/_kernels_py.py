"""Pure-Python dynamic-programming kernels.

Reference twin of ``_kernels.pyx``. Both modules must return identical
results, including tie-breaks; ``tests/test_kernels.py`` checks that.
"""

# character-level op codes, also the tie-break order among edits
MATCH, SUB, DEL, INS, MERGE, SPLIT, PAIR = range(7)

# token-level op codes
T_MATCH, T_SUB, T_DEL, T_INS, T_JOIN, T_SPLIT = range(6)

# (source length, target length) consumed by each character op
OP_SPANS = ((1, 1), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2))
TOKEN_SPANS = ((1, 1), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2))

_TRACE_ORDER = (SUB, DEL, INS, MERGE, SPLIT, PAIR, MATCH)
_TOKEN_TRACE_ORDER = (T_MATCH, T_SUB, T_JOIN, T_SPLIT, T_DEL, T_INS)


def _allowed(op, s, t, i, j):
    """Whether ``op`` may end at cell (i, j).

    Compound ops are only admitted in canonical form: none of their
    characters may coincide with the character a simpler op would match.
    """
    if op == MATCH:
        return i >= 1 and j >= 1 and s[i - 1] == t[j - 1]
    if op == SUB:
        return i >= 1 and j >= 1 and s[i - 1] != t[j - 1]
    if op == DEL:
        return i >= 1
    if op == INS:
        return j >= 1
    if op == MERGE:
        return i >= 2 and j >= 1 and t[j - 1] != s[i - 2] and t[j - 1] != s[i - 1]
    if op == SPLIT:
        return i >= 1 and j >= 2 and s[i - 1] != t[j - 2] and s[i - 1] != t[j - 1]
    # PAIR
    return i >= 2 and j >= 2 and s[i - 2] != t[j - 2] and s[i - 1] != t[j - 1]


def align_ops(s, t):
    """Minimal alignment of ``s`` onto ``t``; returns ``(cost, [op, ...])``.

    Cells hold ``cost * width + n_ops`` so that cost is minimised first and
    the number of ops second.
    """
    n, m = len(s), len(t)
    width = n + m + 1
    inf = float("inf")
    table = [[inf] * (m + 1) for _ in range(n + 1)]
    table[0][0] = 0
    for i in range(n + 1):
        row = table[i]
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            for op in range(7):
                if not _allowed(op, s, t, i, j):
                    continue
                di, dj = OP_SPANS[op]
                value = table[i - di][j - dj] + (0 if op == MATCH else width) + 1
                if value < best:
                    best = value
            row[j] = best

    ops = []
    i, j = n, m
    while i or j:
        here = table[i][j]
        for op in _TRACE_ORDER:
            if not _allowed(op, s, t, i, j):
                continue
            di, dj = OP_SPANS[op]
            if table[i - di][j - dj] + (0 if op == MATCH else width) + 1 == here:
                ops.append(op)
                i -= di
                j -= dj
                break
    ops.reverse()
    return table[n][m] // width, ops


def align_cost(s, t):
    """Cost-only variant of :func:`align_ops` (two-row memory)."""
    n, m = len(s), len(t)
    if s == t:
        return 0
    prev2 = None
    prev = None
    cur = None
    for i in range(n + 1):
        cur = [0] * (m + 1)
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = n + m + 1
            if i >= 1 and j >= 1:
                best = min(best, prev[j - 1] + (0 if s[i - 1] == t[j - 1] else 1))
            if i >= 1:
                best = min(best, prev[j] + 1)
            if j >= 1:
                best = min(best, cur[j - 1] + 1)
            if i >= 2 and j >= 1 and t[j - 1] != s[i - 2] and t[j - 1] != s[i - 1]:
                best = min(best, prev2[j - 1] + 1)
            if i >= 1 and j >= 2 and s[i - 1] != t[j - 2] and s[i - 1] != t[j - 1]:
                best = min(best, prev[j - 2] + 1)
            if i >= 2 and j >= 2 and s[i - 2] != t[j - 2] and s[i - 1] != t[j - 1]:
                best = min(best, prev2[j - 2] + 1)
            cur[j] = best
        prev2, prev = prev, cur
    return cur[m]


def _token_step(op, ocr, truth, i, j, sub_cost):
    """Cost of token op ending at (i, j), or None when not applicable."""
    if op == T_MATCH:
        if i >= 1 and j >= 1 and ocr[i - 1] == truth[j - 1]:
            return 0
        return None
    if op == T_SUB:
        if i >= 1 and j >= 1 and ocr[i - 1] != truth[j - 1]:
            return sub_cost(i - 1, j - 1)
        return None
    if op == T_DEL:
        return len(ocr[i - 1]) if i >= 1 else None
    if op == T_INS:
        return len(truth[j - 1]) if j >= 1 else None
    if op == T_JOIN:
        if i >= 2 and j >= 1 and ocr[i - 2] + ocr[i - 1] == truth[j - 1]:
            return 1
        return None
    # T_SPLIT
    if i >= 1 and j >= 2 and ocr[i - 1] == truth[j - 2] + truth[j - 1]:
        return 1
    return None


def align_tokens(ocr, truth):
    """Monotone token alignment; returns ``(cost, [(op, i, j), ...])``.

    ``i``/``j`` are the first OCR/truth indices the op covers.
    """
    n, m = len(ocr), len(truth)
    cache = {}

    def sub_cost(a, b):
        key = (a, b)
        if key not in cache:
            cache[key] = align_cost(ocr[a], truth[b])
        return cache[key]

    inf = float("inf")
    table = [[inf] * (m + 1) for _ in range(n + 1)]
    table[0][0] = 0
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            for op in range(6):
                c = _token_step(op, ocr, truth, i, j, sub_cost)
                if c is None:
                    continue
                di, dj = TOKEN_SPANS[op]
                value = table[i - di][j - dj] + c
                if value < best:
                    best = value
            table[i][j] = best

    ops = []
    i, j = n, m
    while i or j:
        here = table[i][j]
        for op in _TOKEN_TRACE_ORDER:
            c = _token_step(op, ocr, truth, i, j, sub_cost)
            if c is None:
                continue
            di, dj = TOKEN_SPANS[op]
            if table[i - di][j - dj] + c == here:
                i -= di
                j -= dj
                ops.append((op, i, j))
                break
    ops.reverse()
    return table[n][m], ops


def edit_distance(a, b):
    """Unit-cost Levenshtein distance between two sequences."""
    n, m = len(a), len(b)
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        ai = a[i - 1]
        for j in range(1, m + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ai != b[j - 1]))
        prev = cur
    return prev[m]
