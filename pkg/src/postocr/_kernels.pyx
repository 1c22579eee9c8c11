# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-programming kernels (twin of ``_kernels_py``)."""

from libc.stdlib cimport free, malloc

cdef enum:
    MATCH, SUB, DEL, INS, MERGE, SPLIT, PAIR

cdef enum:
    T_MATCH, T_SUB, T_DEL, T_INS, T_JOIN, T_SPLIT

cdef int[7] SRC_SPAN = [1, 1, 1, 0, 2, 1, 2]
cdef int[7] TGT_SPAN = [1, 1, 0, 1, 1, 2, 2]
cdef int[7] TRACE_ORDER = [SUB, DEL, INS, MERGE, SPLIT, PAIR, MATCH]
cdef int[6] TOK_SRC_SPAN = [1, 1, 1, 0, 2, 1]
cdef int[6] TOK_TGT_SPAN = [1, 1, 0, 1, 1, 2]
cdef int[6] TOK_TRACE_ORDER = [T_MATCH, T_SUB, T_JOIN, T_SPLIT, T_DEL, T_INS]


cdef Py_UCS4* _to_ucs4(str text, Py_ssize_t* length) except NULL:
    cdef Py_ssize_t n = len(text), k
    cdef Py_UCS4* buf = <Py_UCS4*> malloc((n + 1) * sizeof(Py_UCS4))
    if buf == NULL:
        raise MemoryError()
    for k in range(n):
        buf[k] = text[k]
    length[0] = n
    return buf


cdef inline bint _allowed(int op, const Py_UCS4* s, const Py_UCS4* t, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
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
    return i >= 2 and j >= 2 and s[i - 2] != t[j - 2] and s[i - 1] != t[j - 1]


cdef long _cost_only(const Py_UCS4* s, Py_ssize_t n, const Py_UCS4* t, Py_ssize_t m, long* buf) noexcept nogil:
    # buf holds three rows of m + 1 cells
    cdef long* prev2 = buf
    cdef long* prev = buf + (m + 1)
    cdef long* cur = buf + 2 * (m + 1)
    cdef long* tmp
    cdef Py_ssize_t i, j
    cdef long best, v
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                cur[j] = 0
                continue
            best = n + m + 1
            if i >= 1 and j >= 1:
                v = prev[j - 1] + (0 if s[i - 1] == t[j - 1] else 1)
                if v < best:
                    best = v
            if i >= 1:
                v = prev[j] + 1
                if v < best:
                    best = v
            if j >= 1:
                v = cur[j - 1] + 1
                if v < best:
                    best = v
            if i >= 2 and j >= 1 and t[j - 1] != s[i - 2] and t[j - 1] != s[i - 1]:
                v = prev2[j - 1] + 1
                if v < best:
                    best = v
            if i >= 1 and j >= 2 and s[i - 1] != t[j - 2] and s[i - 1] != t[j - 1]:
                v = prev[j - 2] + 1
                if v < best:
                    best = v
            if i >= 2 and j >= 2 and s[i - 2] != t[j - 2] and s[i - 1] != t[j - 1]:
                v = prev2[j - 2] + 1
                if v < best:
                    best = v
            cur[j] = best
        tmp = prev2
        prev2 = prev
        prev = cur
        cur = tmp
    return prev[m]


def align_cost(str s, str t):
    """Minimal alignment cost of ``s`` onto ``t``."""
    if s == t:
        return 0
    cdef Py_ssize_t n, m
    cdef Py_UCS4* a = _to_ucs4(s, &n)
    cdef Py_UCS4* b = NULL
    cdef long* buf = NULL
    cdef long result
    try:
        b = _to_ucs4(t, &m)
        buf = <long*> malloc(3 * (m + 1) * sizeof(long))
        if buf == NULL:
            raise MemoryError()
        result = _cost_only(a, n, b, m, buf)
    finally:
        free(a)
        free(b)
        free(buf)
    return result


def align_ops(str s, str t):
    """Minimal alignment of ``s`` onto ``t``; returns ``(cost, [op, ...])``."""
    cdef Py_ssize_t n, m, i, j, di, dj
    cdef Py_UCS4* a = _to_ucs4(s, &n)
    cdef Py_UCS4* b = NULL
    cdef long* table = NULL
    cdef long width, inf, best, v, here
    cdef int op, k
    ops = []
    try:
        b = _to_ucs4(t, &m)
        table = <long*> malloc((n + 1) * (m + 1) * sizeof(long))
        if table == NULL:
            raise MemoryError()
        width = n + m + 1
        inf = width * width + width
        table[0] = 0
        for i in range(n + 1):
            for j in range(m + 1):
                if i == 0 and j == 0:
                    continue
                best = inf
                for op in range(7):
                    if not _allowed(op, a, b, i, j):
                        continue
                    v = table[(i - SRC_SPAN[op]) * (m + 1) + j - TGT_SPAN[op]] + (0 if op == MATCH else width) + 1
                    if v < best:
                        best = v
                table[i * (m + 1) + j] = best
        i = n
        j = m
        while i or j:
            here = table[i * (m + 1) + j]
            for k in range(7):
                op = TRACE_ORDER[k]
                if not _allowed(op, a, b, i, j):
                    continue
                di = SRC_SPAN[op]
                dj = TGT_SPAN[op]
                if table[(i - di) * (m + 1) + j - dj] + (0 if op == MATCH else width) + 1 == here:
                    ops.append(op)
                    i -= di
                    j -= dj
                    break
        cost = table[n * (m + 1) + m] // width
    finally:
        free(a)
        free(b)
        free(table)
    ops.reverse()
    return cost, ops


def align_tokens(list ocr, list truth):
    """Monotone token alignment; returns ``(cost, [(op, i, j), ...])``."""
    cdef Py_ssize_t n = len(ocr), m = len(truth)
    cdef Py_ssize_t i, j, k, di, dj, maxlen = 0, total = 0, length
    cdef long* table = NULL
    cdef long* sub = NULL
    cdef long* buf = NULL
    cdef Py_UCS4* chars = NULL
    cdef Py_ssize_t* start = NULL
    cdef Py_ssize_t* lens = NULL
    cdef long best, v, c, here, inf
    cdef int op, kk
    cdef str word

    words = list(ocr) + list(truth)
    for word in words:
        length = len(word)
        total += length
        if length > maxlen:
            maxlen = length
    ops = []
    try:
        chars = <Py_UCS4*> malloc((total + 1) * sizeof(Py_UCS4))
        start = <Py_ssize_t*> malloc((n + m + 1) * sizeof(Py_ssize_t))
        lens = <Py_ssize_t*> malloc((n + m + 1) * sizeof(Py_ssize_t))
        table = <long*> malloc((n + 1) * (m + 1) * sizeof(long))
        sub = <long*> malloc((n * m + 1) * sizeof(long))
        buf = <long*> malloc(3 * (maxlen + 1) * sizeof(long))
        if chars == NULL or start == NULL or lens == NULL or table == NULL or sub == NULL or buf == NULL:
            raise MemoryError()
        total = 0
        for k in range(n + m):
            word = words[k]
            start[k] = total
            lens[k] = len(word)
            for i in range(lens[k]):
                chars[total + i] = word[i]
            total += lens[k]

        # substitution costs; -1 marks identical tokens
        for i in range(n):
            for j in range(m):
                if ocr[i] == truth[j]:
                    sub[i * m + j] = -1
                else:
                    sub[i * m + j] = _cost_only(chars + start[i], lens[i], chars + start[n + j], lens[n + j], buf)

        inf = 1
        for k in range(n + m):
            inf += lens[k] + 1
        table[0] = 0
        for i in range(n + 1):
            for j in range(m + 1):
                if i == 0 and j == 0:
                    continue
                best = inf
                for op in range(6):
                    c = _token_cost(op, i, j, n, m, sub, lens, ocr, truth)
                    if c < 0:
                        continue
                    v = table[(i - TOK_SRC_SPAN[op]) * (m + 1) + j - TOK_TGT_SPAN[op]] + c
                    if v < best:
                        best = v
                table[i * (m + 1) + j] = best

        i = n
        j = m
        while i or j:
            here = table[i * (m + 1) + j]
            for kk in range(6):
                op = TOK_TRACE_ORDER[kk]
                c = _token_cost(op, i, j, n, m, sub, lens, ocr, truth)
                if c < 0:
                    continue
                di = TOK_SRC_SPAN[op]
                dj = TOK_TGT_SPAN[op]
                if table[(i - di) * (m + 1) + j - dj] + c == here:
                    i -= di
                    j -= dj
                    ops.append((op, i, j))
                    break
        cost = table[n * (m + 1) + m]
    finally:
        free(chars)
        free(start)
        free(lens)
        free(table)
        free(sub)
        free(buf)
    ops.reverse()
    return cost, ops


cdef long _token_cost(int op, Py_ssize_t i, Py_ssize_t j, Py_ssize_t n, Py_ssize_t m,
                      long* sub, Py_ssize_t* lens, list ocr, list truth) except -2:
    # -1 means the op does not apply at (i, j)
    if op == T_MATCH:
        if i >= 1 and j >= 1 and sub[(i - 1) * m + j - 1] == -1:
            return 0
        return -1
    if op == T_SUB:
        if i >= 1 and j >= 1 and sub[(i - 1) * m + j - 1] != -1:
            return sub[(i - 1) * m + j - 1]
        return -1
    if op == T_DEL:
        return lens[i - 1] if i >= 1 else -1
    if op == T_INS:
        return lens[n + j - 1] if j >= 1 else -1
    if op == T_JOIN:
        if (i >= 2 and j >= 1 and lens[i - 2] + lens[i - 1] == lens[n + j - 1]
                and ocr[i - 2] + ocr[i - 1] == truth[j - 1]):
            return 1
        return -1
    if (i >= 1 and j >= 2 and lens[i - 1] == lens[n + j - 2] + lens[n + j - 1]
            and ocr[i - 1] == truth[j - 2] + truth[j - 1]):
        return 1
    return -1


def edit_distance(a, b):
    """Unit-cost Levenshtein distance between two sequences of hashables."""
    cdef Py_ssize_t n = len(a), m = len(b), i, j
    cdef long* prev = NULL
    cdef long* cur = NULL
    cdef long* tmp
    cdef long* ia = NULL
    cdef long* ib = NULL
    cdef long v, w
    ids = {}
    try:
        prev = <long*> malloc((m + 1) * sizeof(long))
        cur = <long*> malloc((m + 1) * sizeof(long))
        ia = <long*> malloc((n + 1) * sizeof(long))
        ib = <long*> malloc((m + 1) * sizeof(long))
        if prev == NULL or cur == NULL or ia == NULL or ib == NULL:
            raise MemoryError()
        for i in range(n):
            ia[i] = ids.setdefault(a[i], len(ids))
        for j in range(m):
            ib[j] = ids.setdefault(b[j], len(ids))
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            cur[0] = i
            for j in range(1, m + 1):
                v = prev[j] + 1
                w = cur[j - 1] + 1
                if w < v:
                    v = w
                w = prev[j - 1] + (0 if ia[i - 1] == ib[j - 1] else 1)
                if w < v:
                    v = w
                cur[j] = v
            tmp = prev
            prev = cur
            cur = tmp
        result = prev[m]
    finally:
        free(prev)
        free(cur)
        free(ia)
        free(ib)
    return result
