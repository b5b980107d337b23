"""Pure-Python edit-distance kernels.

Same contracts as the compiled extension in ``_speedups.pyx``; the package
picks whichever is importable at load time.  Symbols are Unicode scalar
values, so Hausa hooked letters count as single symbols.
"""

BACKEND = "pure-python"


def levenshtein(a, b):
    """Minimum number of single-symbol insertions, deletions, and
    substitutions turning ``a`` into ``b``."""
    m, n = len(a), len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    if n > m:
        a, b = b, a
        m, n = n, m
    prev = list(range(n + 1))
    cur = [0] * (n + 1)
    for i in range(1, m + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, n + 1):
            cost = 0 if ca == b[j - 1] else 1
            best = prev[j - 1] + cost
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        prev, cur = cur, prev
    return prev[n]


def pairwise_normalized(words, out):
    """Fill the square matrix ``out`` with normalized distances between all
    word pairs. ``out`` must be zero-initialized with shape (n, n)."""
    n = len(words)
    for i in range(n):
        wi = words[i]
        li = len(wi)
        for j in range(i + 1, n):
            wj = words[j]
            denom = max(li, len(wj))
            d = (levenshtein(wi, wj) / denom) if denom else 0.0
            out[i, j] = d
            out[j, i] = d
    return out


def align_substitutions(a, b):
    """Index pairs (i, j) aligned as substitutions in one optimal
    edit-distance alignment of the symbol sequences ``a`` and ``b``.

    Backtrace ties resolve as match > substitution > deletion > insertion,
    identically to the compiled kernel, so both backends report the same
    pairs.
    """
    m, n = len(a), len(b)
    # full DP table; alignment inputs are short token sequences
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dp[i][0] = i
    for j in range(n + 1):
        dp[0][j] = j
    for i in range(1, m + 1):
        ca = a[i - 1]
        row = dp[i]
        above = dp[i - 1]
        for j in range(1, n + 1):
            cost = 0 if ca == b[j - 1] else 1
            best = above[j - 1] + cost
            up = above[j] + 1
            if up < best:
                best = up
            left = row[j - 1] + 1
            if left < best:
                best = left
            row[j] = best
    pairs = []
    i, j = m, n
    while i > 0 and j > 0:
        here = dp[i][j]
        if a[i - 1] == b[j - 1] and here == dp[i - 1][j - 1]:
            i -= 1
            j -= 1
        elif here == dp[i - 1][j - 1] + 1:
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif here == dp[i - 1][j] + 1:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs
