"""Independent reference implementations used as test oracles.

Everything here deliberately avoids the library's algorithms: pairings are
enumerated by bitmask recursion instead of the Catalan split, crossing is the
raw four-point scan, and joint class counts come from full enumeration of all
n^k tuples. Partition/Word are only reused as plain containers.
"""
import itertools

from schurhad.partitions import Partition


def oracle_pairings(k):
    """All perfect matchings of [1, k] via bitmask recursion."""
    out = []

    def rec(mask, acc):
        if mask == (1 << k) - 1:
            out.append(tuple(acc))
            return
        first = next(i for i in range(k) if not mask & (1 << i))
        for second in range(first + 1, k):
            if mask & (1 << second):
                continue
            acc.append((first + 1, second + 1))
            rec(mask | (1 << first) | (1 << second), acc)
            acc.pop()

    if k % 2 == 0 and k > 0:
        rec(0, [])
    return out


def oracle_is_crossing(blocks):
    """Raw four-point test: u1 < u2 < u3 < u4 alternating between two blocks."""
    elems = sorted(x for b in blocks for x in b)
    owner = {}
    for bi, b in enumerate(blocks):
        for x in b:
            owner[x] = bi
    for u1, u2, u3, u4 in itertools.combinations(elems, 4):
        if owner[u1] == owner[u3] and owner[u2] == owner[u4] and owner[u1] != owner[u2]:
            return True
    return False


def oracle_circular_moment(word):
    """Brute-force sum over non-crossing pairings with alternating symbols."""
    k = len(word)
    if k % 2 == 1:
        return 0
    total = 0
    for pairing in oracle_pairings(k):
        if oracle_is_crossing(pairing):
            continue
        if all(word[r - 1] != word[s - 1] for r, s in pairing):
            total += 1
    return total


def edge_codes(tup, grid, word):
    """Link codes of the k cyclic edges of a 0-based index tuple."""
    k = len(word)
    codes = []
    for u in range(k):
        a, b = tup[u], tup[(u + 1) % k]
        codes.append(int(grid[a, b]) if word[u] == "1" else int(grid[b, a]))
    return codes


def induced_partition(codes):
    groups = {}
    for pos, c in enumerate(codes, start=1):
        groups.setdefault(c, []).append(pos)
    return Partition.from_blocks(groups.values())


def oracle_joint_counts(word, lx, ly, n):
    """Full n^k enumeration: {(induced_x, induced_y): count}."""
    k = len(word)
    gx, gy = lx.code_grid(n), ly.code_grid(n)
    out = {}
    for tup in itertools.product(range(n), repeat=k):
        key = (induced_partition(edge_codes(tup, gx, word)),
               induced_partition(edge_codes(tup, gy, word)))
        out[key] = out.get(key, 0) + 1
    return out


def oracle_satisfying_count(word, lx, ly, pi_x, pi_y, n):
    """Full enumeration, same-block equality constraints only."""
    k = len(word)
    gx, gy = lx.code_grid(n), ly.code_grid(n)
    bx, by = pi_x.block_index(), pi_y.block_index()
    cnt = 0
    for tup in itertools.product(range(n), repeat=k):
        cx = edge_codes(tup, gx, word)
        cy = edge_codes(tup, gy, word)
        ok = True
        for u in range(k):
            for v in range(u + 1, k):
                if bx[u + 1] == bx[v + 1] and cx[u] != cx[v]:
                    ok = False
                if by[u + 1] == by[v + 1] and cy[u] != cy[v]:
                    ok = False
        if ok:
            cnt += 1
    return cnt
