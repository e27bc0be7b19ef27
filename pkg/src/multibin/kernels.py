"""Hot search loops.

Every kernel takes and returns plain numpy arrays of int64/uint8 so it can be
compiled by numba or run as ordinary Python (see ``_accel``).  Weights reach
this module already scaled to integers; nothing here knows about ids,
fractions or estimates.
"""

import numpy as np

from ._accel import jit


@jit
def bpp_branch_and_bound(w, cap, conf, use_conf, ub, ub_assign, lower):
    """Minimum-bin search over items sorted by non-increasing weight.

    ``ub``/``ub_assign`` is an incumbent (e.g. from first-fit decreasing);
    ``lower`` is a valid lower bound that stops the search once reached.
    Item ``i`` may only open bin ``used`` (the next unused index), which
    removes bin-relabelling symmetry.
    """
    n = w.shape[0]
    best = ub
    best_assign = ub_assign.copy()
    if n == 0 or best <= lower:
        return best, best_assign
    suffix = np.zeros(n + 1, np.int64)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + w[i]
    total = suffix[0]
    assign = np.full(n, -1, np.int64)
    load = np.zeros(n, np.int64)
    used_at = np.zeros(n + 1, np.int64)
    i = 0
    while i >= 0:
        if i == n:
            if used_at[n] < best:
                best = used_at[n]
                best_assign[:] = assign
                if best <= lower:
                    break
            i -= 1
            continue
        used = used_at[i]
        b = assign[i]
        if b >= 0:
            load[b] -= w[i]
        b += 1
        placed = total - suffix[i]
        found = -1
        while b <= used:
            if b == used and used + 1 >= best:
                break
            if load[b] + w[i] <= cap:
                ok = True
                if use_conf:
                    for j in range(i):
                        if assign[j] == b and conf[j, i]:
                            ok = False
                            break
                else:
                    # two open bins with equal load are interchangeable
                    for c in range(b):
                        if load[c] == load[b]:
                            ok = False
                            break
                if ok:
                    new_used = used if b < used else used + 1
                    free = new_used * cap - placed - w[i]
                    rem = suffix[i + 1]
                    lb = new_used
                    if rem > free:
                        lb += (rem - free + cap - 1) // cap
                    if lb < best:
                        found = b
                        break
            b += 1
        if found < 0:
            assign[i] = -1
            i -= 1
        else:
            assign[i] = found
            load[found] += w[i]
            used_at[i + 1] = used if found < used else used + 1
            i += 1
    return best, best_assign


@jit
def assign_fits(w, caps, conf, use_conf, identical):
    """First assignment of every item to one of ``caps`` bins, if any exists."""
    n = w.shape[0]
    k = caps.shape[0]
    assign = np.full(n, -1, np.int64)
    if n == 0:
        return True, assign
    if k == 0:
        return False, assign
    load = np.zeros(k, np.int64)
    used_at = np.zeros(n + 1, np.int64)
    i = 0
    while i >= 0:
        if i == n:
            return True, assign
        b = assign[i]
        if b >= 0:
            load[b] -= w[i]
        b += 1
        used = used_at[i]
        limit = k
        if identical and used + 1 < k:
            limit = used + 1
        found = -1
        while b < limit:
            if load[b] + w[i] <= caps[b]:
                ok = True
                if use_conf:
                    for j in range(i):
                        if assign[j] == b and conf[j, i]:
                            ok = False
                            break
                elif identical:
                    for c in range(b):
                        if load[c] == load[b]:
                            ok = False
                            break
                if ok:
                    found = b
                    break
            b += 1
        if found < 0:
            assign[i] = -1
            i -= 1
        else:
            assign[i] = found
            load[found] += w[i]
            used_at[i + 1] = used if found < used else found + 1
            i += 1
    assign[:] = -1
    return False, assign


@jit
def packable_masks(w, caps, conf, use_conf, identical):
    """``out[mask] == 1`` iff the items in ``mask`` fit jointly into ``caps``.

    Packability is monotone under removal, so a mask is only tried when all
    masks obtained by dropping one item are packable.
    """
    n = w.shape[0]
    k = caps.shape[0]
    size = 1 << n
    out = np.zeros(size, np.uint8)
    out[0] = 1
    capsum = 0
    for b in range(k):
        capsum += caps[b]
    sums = np.zeros(size, np.int64)
    for mask in range(1, size):
        low = mask & (-mask)
        bit = 0
        while (1 << bit) != low:
            bit += 1
        sums[mask] = sums[mask ^ low] + w[bit]
        if sums[mask] > capsum:
            continue
        ok = True
        m = mask
        while m:
            lb = m & (-m)
            if out[mask ^ lb] == 0:
                ok = False
                break
            m ^= lb
        if not ok:
            continue
        if k == 1 and not use_conf:
            out[mask] = 1
            continue
        cnt = 0
        for j in range(n):
            if (mask >> j) & 1:
                cnt += 1
        idx = np.empty(cnt, np.int64)
        c = 0
        for j in range(n):
            if (mask >> j) & 1:
                idx[c] = j
                c += 1
        order = np.argsort(-w[idx], kind="mergesort")
        sel = idx[order]
        sw = w[sel]
        sconf = np.zeros((cnt, cnt), np.uint8)
        if use_conf:
            for a in range(cnt):
                for bb in range(cnt):
                    sconf[a, bb] = conf[sel[a], sel[bb]]
        fit, _ = assign_fits(sw, caps, sconf, use_conf, identical)
        if fit:
            out[mask] = 1
    return out


@jit
def max_profit_assign(w, profit, caps, conf, use_conf, identical):
    """Profit-maximal partial assignment into ``caps`` (-1 = left out).

    Options per item are tried bins first, then "skip"; the first assignment
    reaching the maximum profit in that order is returned.
    """
    n = w.shape[0]
    k = caps.shape[0]
    sp = np.zeros(n + 1, np.int64)
    for i in range(n - 1, -1, -1):
        sp[i] = sp[i + 1] + profit[i]
    opt = np.full(n, -1, np.int64)
    load = np.zeros(k, np.int64)
    used_at = np.zeros(n + 1, np.int64)
    best = -1
    best_assign = np.full(n, -1, np.int64)
    cur = 0
    i = 0
    while i >= 0:
        if i == n:
            if cur > best:
                best = cur
                for j in range(n):
                    best_assign[j] = opt[j] if opt[j] < k else -1
            i -= 1
            continue
        o = opt[i]
        if 0 <= o < k:
            load[o] -= w[i]
            cur -= profit[i]
        o += 1
        used = used_at[i]
        limit = k
        if identical and used + 1 < k:
            limit = used + 1
        found = -1
        while o <= k:
            if o < k:
                if o >= limit:
                    o = k
                    continue
                if cur + sp[i] > best and load[o] + w[i] <= caps[o]:
                    ok = True
                    if use_conf:
                        for j in range(i):
                            if opt[j] == o and conf[j, i]:
                                ok = False
                                break
                    elif identical:
                        for c in range(o):
                            if load[c] == load[o]:
                                ok = False
                                break
                    if ok:
                        found = o
                        break
            else:
                if cur + sp[i + 1] > best:
                    found = k
                break
            o += 1
        if found < 0:
            opt[i] = -1
            i -= 1
        else:
            opt[i] = found
            if found < k:
                load[found] += w[i]
                cur += profit[i]
                used_at[i + 1] = used if found < used else found + 1
            else:
                used_at[i + 1] = used
            i += 1
    return best, best_assign


@jit
def color_backtrack(adj, order, k):
    """First proper coloring with at most ``k`` colors, vertices in ``order``.

    A vertex may use a new color only if it is the next unused one.  Returns
    ``(found, colors)`` with colors indexed by vertex, 0-based.
    """
    n = adj.shape[0]
    colors = np.full(n, -1, np.int64)
    if n == 0:
        return True, colors
    if k <= 0:
        return False, colors
    maxc = np.zeros(n + 1, np.int64)
    p = 0
    while p >= 0:
        if p == n:
            return True, colors
        v = order[p]
        c = colors[v] + 1
        limit = maxc[p] + 1
        if limit > k:
            limit = k
        found = -1
        while c < limit:
            ok = True
            for q in range(p):
                u = order[q]
                if adj[v, u] and colors[u] == c:
                    ok = False
                    break
            if ok:
                found = c
                break
            c += 1
        if found < 0:
            colors[v] = -1
            p -= 1
        else:
            colors[v] = found
            maxc[p + 1] = maxc[p] if found < maxc[p] else found + 1
            p += 1
    colors[:] = -1
    return False, colors


@jit
def count_colorings(adj, order, k):
    """Number of proper colorings from a labelled ``k``-palette.

    Enumerates colorings up to relabelling; each one using ``m`` colors stands
    for k*(k-1)*...*(k-m+1) labelled colorings.
    """
    n = adj.shape[0]
    if n == 0:
        return 1
    if k <= 0:
        return 0
    falling = np.zeros(n + 2, np.int64)
    acc = 1
    for m in range(0, n + 1):
        falling[m] = acc if m <= k else 0
        acc *= (k - m)
    colors = np.full(n, -1, np.int64)
    maxc = np.zeros(n + 1, np.int64)
    total = 0
    p = 0
    while p >= 0:
        if p == n:
            total += falling[maxc[n]]
            p -= 1
            continue
        v = order[p]
        c = colors[v] + 1
        limit = maxc[p] + 1
        if limit > k:
            limit = k
        found = -1
        while c < limit:
            ok = True
            for q in range(p):
                u = order[q]
                if adj[v, u] and colors[u] == c:
                    ok = False
                    break
            if ok:
                found = c
                break
            c += 1
        if found < 0:
            colors[v] = -1
            p -= 1
        else:
            colors[v] = found
            maxc[p + 1] = maxc[p] if found < maxc[p] else found + 1
            p += 1
    return total


@jit
def held_karp_suffix(cost):
    """``f[mask, v]``: cheapest open path from ``v`` through all nodes outside ``mask``.

    Only entries with ``v`` in ``mask`` are meaningful.
    """
    n = cost.shape[0]
    full = (1 << n) - 1
    big = np.iinfo(np.int64).max // 4
    f = np.full((1 << n, n), big, np.int64)
    for v in range(n):
        f[full, v] = 0
    for mask in range(full - 1, 0, -1):
        for v in range(n):
            if not (mask >> v) & 1:
                continue
            best = big
            for u in range(n):
                if (mask >> u) & 1:
                    continue
                cand = cost[v, u] + f[mask | (1 << u), u]
                if cand < best:
                    best = cand
            f[mask, v] = best
    return f


@jit
def subset_counts(masks, counts):
    """Row ``r`` = componentwise sum of ``counts`` rows selected by ``masks[r]``."""
    m = masks.shape[0]
    n, l = counts.shape
    out = np.zeros((m, l), np.int64)
    for r in range(m):
        mask = masks[r]
        for i in range(n):
            if (mask >> i) & 1:
                for j in range(l):
                    out[r, j] += counts[i, j]
    return out


@jit
def subset_medians(masks, dist):
    """First scale index minimising the summed distance to the members of each mask.

    ``dist[c, i]`` is the one-step distance between scale entry ``c`` and
    member ``i``.  Returns ``(argmin, minimum)`` per mask.
    """
    m = masks.shape[0]
    s, n = dist.shape
    arg = np.zeros(m, np.int64)
    val = np.zeros(m, np.int64)
    for r in range(m):
        mask = masks[r]
        best = -1
        bestc = 0
        for c in range(s):
            t = 0
            for i in range(n):
                if (mask >> i) & 1:
                    t += dist[c, i]
            if best < 0 or t < best:
                best = t
                bestc = c
        arg[r] = bestc
        val[r] = best
    return arg, val
