"""Hot loops of the exact solver.

Every function here is plain Python over numpy arrays and is compiled with
numba unless ``BURNCOPS_DISABLE_NUMBA`` is set (see ``_accel``).

Shared conventions:

* burn masks are ``int64`` views of 64-bit edge bitmasks; ``bits[e]`` is the
  single-edge mask so no shift ever overflows in the fallback path;
* a cop placement is a sorted tuple, identified by its rank in
  ``itertools.combinations_with_replacement`` order;
* values are capture times in rounds from a cops-to-move position, counting
  the current round; ``0`` marks a position where a cop already sits on the
  robber and ``INF`` marks a robber win.
"""

from __future__ import annotations

import numpy as np

from ._accel import kernel

INF = np.int32(1 << 30)


@kernel
def tuple_rank(c, k, prefix):
    """Lexicographic rank of the sorted tuple ``c`` among k-multisets."""
    r = 0
    prev = 0
    for i in range(k):
        rem = k - i - 1
        r += prefix[rem, c[i]] - prefix[rem, prev]
        prev = c[i]
    return r


@kernel
def _live_options(c, mask, adj_ptr, adj_nbr, adj_eid, bits, opt):
    """Write stay-or-step destinations of a cop at ``c`` into ``opt``; return count."""
    opt[0] = c
    cnt = 1
    for s in range(adj_ptr[c], adj_ptr[c + 1]):
        if mask & bits[adj_eid[s]] == 0:
            opt[cnt] = adj_nbr[s]
            cnt += 1
    return cnt


@kernel
def _insertion_sort(a, k):
    for i in range(1, k):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


@kernel
def cop_move_table(mask, tuples, prefix, adj_ptr, adj_nbr, adj_eid, bits, maxdeg):
    """CSR table of joint cop moves for every placement under burn ``mask``.

    Row ``t`` lists ranks of placements reachable in one cop turn (each cop
    stays or steps along a live edge). Duplicates are kept; they are harmless
    for min/relax loops.
    """
    T = tuples.shape[0]
    k = tuples.shape[1]
    opt = np.empty((max(k, 1), maxdeg + 1), np.int64)
    nopt = np.empty(max(k, 1), np.int64)
    ptr = np.zeros(T + 1, np.int64)
    for t in range(T):
        total = 1
        for j in range(k):
            nopt[j] = _live_options(tuples[t, j], mask, adj_ptr, adj_nbr, adj_eid, bits, opt[j])
            total *= nopt[j]
        ptr[t + 1] = ptr[t] + total
    idx = np.empty(ptr[T], np.int64)
    odo = np.zeros(max(k, 1), np.int64)
    tmp = np.empty(max(k, 1), np.int64)
    for t in range(T):
        for j in range(k):
            nopt[j] = _live_options(tuples[t, j], mask, adj_ptr, adj_nbr, adj_eid, bits, opt[j])
            odo[j] = 0
        w = ptr[t]
        while True:
            for j in range(k):
                tmp[j] = opt[j, odo[j]]
            _insertion_sort(tmp, k)
            idx[w] = tuple_rank(tmp, k, prefix)
            w += 1
            j = 0
            while j < k:
                odo[j] += 1
                if odo[j] < nopt[j]:
                    break
                odo[j] = 0
                j += 1
            if j == k:
                break
    return ptr, idx


@kernel
def find_row(key_masks, key_r, key_row, mask, r):
    """Binary search for the pair ``(mask, r)`` in lexicographically sorted keys."""
    lo = 0
    hi = key_masks.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        km = key_masks[mid]
        if km < mask or (km == mask and key_r[mid] < r):
            lo = mid + 1
        else:
            hi = mid
    if lo < key_masks.shape[0] and key_masks[lo] == mask and key_r[lo] == r:
        return key_row[lo]
    return -1


@kernel
def retro_solve(
    adj_ptr, adj_nbr, adj_eid, bits, maxdeg,
    tuples, prefix,
    order_masks, order_r, active,
    key_masks, key_r, key_row,
):
    """Layered retrograde analysis.

    Pairs ``(mask, robber)`` arrive ordered by decreasing burn cardinality,
    so every robber step leads into an already solved row. Inside a pair only
    the cops move (the robber can just pass), and the cops-to-move values are
    a shortest-path problem with monotone costs
    ``1 + max(best robber escape, value after passing)``, solved by a
    label-setting (Dijkstra) sweep seeded by positions with a cop adjacent to
    the robber.
    """
    n = adj_ptr.shape[0] - 1
    P = order_masks.shape[0]
    T = tuples.shape[0]
    k = tuples.shape[1]
    D = np.empty((P, T), np.int32)
    esc = np.empty(T, np.int64)
    dist = np.empty(T, np.int64)
    done = np.zeros(T, np.bool_)
    near = np.zeros(n, np.bool_)
    ptr = np.zeros(1, np.int64)
    idx = np.zeros(0, np.int64)
    inf = np.int64(INF)
    for p in range(P):
        mask = order_masks[p]
        r = order_r[p]
        if p == 0 or mask != order_masks[p - 1]:
            ptr, idx = cop_move_table(mask, tuples, prefix, adj_ptr, adj_nbr, adj_eid, bits, maxdeg)
        for v in range(n):
            near[v] = False
        for s in range(adj_ptr[r], adj_ptr[r + 1]):
            if mask & bits[adj_eid[s]] == 0:
                near[adj_nbr[s]] = True
        for t in range(T):
            caught = False
            adjacent = False
            for j in range(k):
                c = tuples[t, j]
                if c == r:
                    caught = True
                elif near[c]:
                    adjacent = True
            if caught:
                dist[t] = 0
                done[t] = True
            else:
                done[t] = False
                dist[t] = 1 if adjacent else inf
            esc[t] = 0
        if active[p]:
            for s in range(adj_ptr[r], adj_ptr[r + 1]):
                b = bits[adj_eid[s]]
                if mask & b != 0:
                    continue
                row = find_row(key_masks, key_r, key_row, mask | b, adj_nbr[s])
                for t in range(T):
                    if not done[t] and D[row, t] > esc[t]:
                        esc[t] = D[row, t]
        while True:
            best = inf
            bt = -1
            for t in range(T):
                if not done[t] and dist[t] < best:
                    best = dist[t]
                    bt = t
            if bt < 0:
                break
            done[bt] = True
            hold = esc[bt] if esc[bt] > best else best
            if hold >= inf:
                continue
            cand = hold + 1
            for w in range(ptr[bt], ptr[bt + 1]):
                t2 = idx[w]
                if not done[t2] and cand < dist[t2]:
                    dist[t2] = cand
        for t in range(T):
            D[p, t] = dist[t]
    return D


@kernel
def _code_index(tmp, k, powers, code_to_idx):
    code = 0
    for j in range(k):
        code += tmp[j] * powers[j]
    return code_to_idx[code]


@kernel
def vi_solve(adj_ptr, adj_nbr, adj_eid, bits, maxdeg, tuples, powers, code_to_idx, key_masks, key_r, max_sweeps):
    """Global value iteration over every position, from INF downward.

    No layering: each sweep recomputes the cops-to-move and robber-to-move
    estimates of all positions in storage order until nothing changes.
    Cop moves are generated on the fly and indexed through a dense base-n
    code table, independently of the rank arithmetic used elsewhere.
    Returns ``(Dc, sweeps)``; ``sweeps == -1`` means ``max_sweeps`` ran out.
    """
    n = adj_ptr.shape[0] - 1
    P = key_masks.shape[0]
    T = tuples.shape[0]
    k = tuples.shape[1]
    inf = INF
    Dc = np.full((P, T), inf, np.int32)
    Dr = np.full((P, T), inf, np.int32)
    for p in range(P):
        for t in range(T):
            for j in range(k):
                if tuples[t, j] == key_r[p]:
                    Dc[p, t] = 0
                    Dr[p, t] = 0
    opt = np.empty((max(k, 1), maxdeg + 1), np.int64)
    nopt = np.empty(max(k, 1), np.int64)
    odo = np.zeros(max(k, 1), np.int64)
    tmp = np.empty(max(k, 1), np.int64)
    rows = np.empty(maxdeg + 1, np.int64)
    near = np.zeros(n, np.bool_)
    sweeps = 0
    changed = True
    while changed:
        if sweeps >= max_sweeps:
            return Dc, -1
        changed = False
        sweeps += 1
        for p in range(P):
            mask = key_masks[p]
            r = key_r[p]
            nrows = 0
            for v in range(n):
                near[v] = False
            for s in range(adj_ptr[r], adj_ptr[r + 1]):
                b = bits[adj_eid[s]]
                if mask & b == 0:
                    near[adj_nbr[s]] = True
                    target = mask | b
                    lo = 0
                    hi = P
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if key_masks[mid] < target or (key_masks[mid] == target and key_r[mid] < adj_nbr[s]):
                            lo = mid + 1
                        else:
                            hi = mid
                    rows[nrows] = lo
                    nrows += 1
            for t in range(T):
                if Dc[p, t] == 0:
                    continue
                # robber to move: pass, or step (possibly into a dead end)
                val = Dc[p, t]
                for q in range(nrows):
                    if Dc[rows[q], t] > val:
                        val = Dc[rows[q], t]
                if val != Dr[p, t]:
                    Dr[p, t] = val
                    changed = True
                # cops to move
                adjacent = False
                for j in range(k):
                    if near[tuples[t, j]]:
                        adjacent = True
                if adjacent:
                    newc = 1
                else:
                    for j in range(k):
                        nopt[j] = _live_options(tuples[t, j], mask, adj_ptr, adj_nbr, adj_eid, bits, opt[j])
                        odo[j] = 0
                    low = inf
                    while True:
                        for j in range(k):
                            tmp[j] = opt[j, odo[j]]
                        _insertion_sort(tmp, k)
                        v2 = Dr[p, _code_index(tmp, k, powers, code_to_idx)]
                        if v2 < low:
                            low = v2
                        j = 0
                        while j < k:
                            odo[j] += 1
                            if odo[j] < nopt[j]:
                                break
                            odo[j] = 0
                            j += 1
                        if j == k:
                            break
                    newc = inf if low >= inf else low + 1
                if newc != Dc[p, t]:
                    Dc[p, t] = newc
                    changed = True
    return Dc, sweeps
