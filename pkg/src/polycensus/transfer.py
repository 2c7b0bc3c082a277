"""Transfer-matrix counters for the two mirror classes.

Both mirror populations reduce to counting connected figures in a half plane
(weight 1 on the symmetry axis, 2 elsewhere), and at large sizes a boundary
sweep beats tree growth: states record only how the sweep front's occupied
slots are joined behind it, so exponentially many partial figures share one
state.

Vertical axis (m90): a row-by-row sweep over a strip of (n_max + 1) // 2
columns, column 0 being the axis.  The axis fixes the x coordinate, so the
only translation to quotient is vertical (first occupied row = row 0), and a
single full-width run covers every half-width at once; a figure must touch
column 0 (else its mirror closure is disconnected), tracked as a flag.

Diagonal axis (m45): the sweep advances along anti-diagonals s = x + y with
slots indexed by depth k = x - y >= 0.  A strip holds only depths of its own
parity, and a cell at (s, k) neighbors the previous strip at k -+ 1, so the
two parities interleave in one slot vector without clobbering; slots of the
opposite parity expire in a batch pass after each strip.  Sliding along the
diagonal is quotiented by anchoring the first occupied strip at s0, in
{0, 1} by parity, one run each.

A boundary state is a non-crossing partition of the slots, encoded with five
symbols -- empty, singleton, leftmost / rightmost / middle of a component --
packed 3 bits per slot into an int64 next to the flag bit.  Per-state counts
sit in uint64 weight slots.  Each cell step runs as one fused kernel pass:
branch generation, admissible-cost trimming (weight slots a state can no
longer complete within n_max are dropped), duplicate-state merging, and
harvesting, with every uint64 addition overflow-checked.  Totals accumulate
in exact Python integers.
"""

from __future__ import annotations

import types

import numpy as np

from polycensus.cells import CountTable, ResourceLimitError
from polycensus.growth import HAVE_NUMBA, use_jit

if HAVE_NUMBA:
    from numba import njit
else:  # pragma: no cover - exercised only on bare installs
    njit = None

TM_KINDS = ("m90", "m45")

#: default ceiling on live state storage, in bytes
DEFAULT_BUDGET = 4 << 30

_E, _S, _L, _R, _M = 0, 1, 2, 3, 4


def _syms_of(key, width, syms):
    for t in range(width):
        syms[t] = (key >> (3 * t)) & 7


def _pack(syms, width, flag):
    key = flag << 60
    for t in range(width):
        key |= syms[t] << (3 * t)
    return key


def _group_of(syms, width, groups, stack):
    """Resolve the bracket encoding into a component id per slot (-1 when
    empty); returns the number of components."""
    gid = 0
    sp = 0
    for t in range(width):
        s = syms[t]
        if s == _E:
            groups[t] = -1
        elif s == _S:
            groups[t] = gid
            gid += 1
        elif s == _L:
            stack[sp] = gid
            sp += 1
            groups[t] = gid
            gid += 1
        elif s == _M:
            groups[t] = stack[sp - 1]
        else:
            sp -= 1
            groups[t] = stack[sp]
    return gid


def _remove_slot(syms, groups, width, j):
    """Take slot j out of its component, relabeling the survivors.  Returns
    1 when the component had no other slot (the caller decides between
    harvest and death), else 0."""
    s = syms[j]
    g = groups[j]
    syms[j] = _E
    if s == _S:
        return 1
    if s == _L:
        for t in range(j + 1, width):
            if groups[t] == g:
                syms[t] = _S if syms[t] == _R else _L
                break
    elif s == _R:
        for t in range(j - 1, -1, -1):
            if groups[t] == g:
                syms[t] = _S if syms[t] == _L else _R
                break
    return 0


def _join_slot(syms, groups, width, j, ga, gb):
    """Occupy slot j and fuse it with components ga and gb (either may be
    -9 for no neighbor), relabeling the merged block."""
    first = -1
    last = -1
    count = 0
    for t in range(width):
        if t == j or (groups[t] >= 0 and (groups[t] == ga or groups[t] == gb)):
            if first < 0:
                first = t
            last = t
            count += 1
    if count == 1:
        syms[j] = _S
        return
    for t in range(first, last + 1):
        if t == j or (groups[t] >= 0 and (groups[t] == ga or groups[t] == gb)):
            syms[t] = _M
    syms[first] = _L
    syms[last] = _R


def _rest_empty(syms, width):
    for t in range(width):
        if syms[t] != _E:
            return False
    return True


def _cost_of(syms, width, flag, bonus, base0, nested_w):
    """Cheapest extra weight that could still complete the figure.

    Admissible pieces, charged over provably disjoint future cells: a path
    to the axis when it is untouched (2 per slot crossed, 1 on the axis
    itself); for consecutive top-level components, 2 per empty slot in
    between (any future route between them crosses every one) plus `bonus`
    when the gap is positive or `base0` when it is zero, for the
    attachment cells a merge still needs; and `nested_w` per nested
    component.  The attachment charges differ between the two sweeps: a
    row cell joins only its own column, so every component needs its own
    attachment there, while a diagonal-strip cell reaches the slots two
    apart and one cell may serve two components at once."""
    lo = -1
    comps = 0
    tops = 0
    depth = 0
    prev_end = -1
    bridge = 0
    for t in range(width):
        s = syms[t]
        if s == _E:
            continue
        if lo < 0:
            lo = t
        if s == _S:
            comps += 1
            if depth == 0:
                tops += 1
                if prev_end >= 0:
                    gap = t - prev_end - 1
                    bridge += 2 * gap + bonus if gap > 0 else base0
                prev_end = t
        elif s == _L:
            comps += 1
            if depth == 0:
                tops += 1
                if prev_end >= 0:
                    gap = t - prev_end - 1
                    bridge += 2 * gap + bonus if gap > 0 else base0
            depth += 1
        elif s == _R:
            depth -= 1
            if depth == 0:
                prev_end = t
    if lo < 0:
        return 0
    cost = bridge + nested_w * (comps - tops)
    if not flag:
        cost += 2 * lo - 1
    return cost


def _emit(buf_keys, buf_counts, m, key, counts, i, shift, cost, offset, n_max):
    """Append one branch row: counts shifted up by the new cell's weight,
    slots beyond the completion bound dropped.  Slot c holds the count at
    total weight offset + c.  Returns the new row count (unchanged when
    every surviving slot is zero)."""
    hi = n_max - cost - offset
    any_left = False
    for c in range(counts.shape[1]):
        src = c - shift
        if src >= 0 and c <= hi:
            v = counts[i, src]
        else:
            v = np.uint64(0)
        buf_counts[m, c] = v
        if v:
            any_left = True
    if not any_left:
        return m
    buf_keys[m] = key
    return m + 1


def _merge(buf_keys, buf_counts, m, out_keys, out_counts):
    """Sum rows with equal keys into the out arrays.  Returns the unique
    count, or -1 if a uint64 slot would wrap."""
    wslots = buf_counts.shape[1]
    order = np.argsort(buf_keys[:m], kind="mergesort")
    n = 0
    i = 0
    while i < m:
        row = order[i]
        key = buf_keys[row]
        for c in range(wslots):
            out_counts[n, c] = buf_counts[row, c]
        i += 1
        while i < m and buf_keys[order[i]] == key:
            row = order[i]
            for c in range(wslots):
                a = out_counts[n, c]
                b = buf_counts[row, c]
                s = a + b
                if s < a:
                    return -1
                out_counts[n, c] = s
            i += 1
        out_keys[n] = key
        n += 1
    return n


def _reap(harvest, counts, i, offset):
    """Add a finished figure's weight row to the harvest accumulator,
    re-basing window slots to absolute weights.  Returns False on uint64
    wrap."""
    for c in range(counts.shape[1]):
        v = counts[i, c]
        if v:
            s = harvest[offset + c] + v
            if s < harvest[offset + c]:
                return False
            harvest[offset + c] = s
    return True


def _m90_step(
    keys, counts, size, j, width, offset, n_max, buf_keys, buf_counts,
    harvest, syms, groups, stack,
):
    """One sweep cell for the vertical-axis class: every state branches on
    the cell at column j of the current row.  Branches land in the buf
    arrays; once the live rows are all consumed, the merge writes the new
    state set back over them.  Returns (new state count, status) with
    status 1 flagging counter overflow."""
    m = 0
    for i in range(size):
        key = keys[i]
        flag = (key >> 60) & 1
        _syms_of(key, width, syms)
        _group_of(syms, width, groups, stack)
        up = syms[j]
        upg = groups[j]

        # cell left empty: the old cell above falls off the boundary
        if up == _E:
            # nothing changes; the row was already trimmed at creation
            for c in range(counts.shape[1]):
                buf_counts[m, c] = counts[i, c]
            buf_keys[m] = key
            m += 1
        else:
            died = _remove_slot(syms, groups, width, j)
            if died == 1:
                if _rest_empty(syms, width):
                    if flag and not _reap(harvest, counts, i, offset):
                        return 0, 1
                # else: a second component is still open and can never
                # rejoin the finished one; the state dies
            else:
                cost = _cost_of(syms, width, flag, 2, 2, 2)
                m = _emit(
                    buf_keys, buf_counts, m, _pack(syms, width, flag),
                    counts, i, 0, cost, offset, n_max,
                )
            _syms_of(key, width, syms)
            _group_of(syms, width, groups, stack)

        # cell occupied: join the left and upper neighbors
        ga = groups[j - 1] if (j > 0 and syms[j - 1] != _E) else -9
        gb = upg if up != _E else -9
        _join_slot(syms, groups, width, j, ga, gb)
        nflag = flag | (1 if j == 0 else 0)
        cost = _cost_of(syms, width, nflag, 2, 2, 2)
        m = _emit(
            buf_keys, buf_counts, m, _pack(syms, width, nflag),
            counts, i, 1 if j == 0 else 2, cost, offset, n_max,
        )

    n = _merge(buf_keys, buf_counts, m, keys, counts)
    if n < 0:
        return 0, 1
    return n, 0


def _m45_step(
    keys, counts, size, k, width, offset, n_max, buf_keys, buf_counts,
    harvest, syms, groups, stack,
):
    """One sweep cell for the diagonal class: the cell at depth k joins the
    previous strip's slots k-1 and k+1.

    Leaving the cell empty copies the state unchanged -- unless that was the
    last chance for the component holding slot k-1.  Cells are swept in
    increasing depth and attach only at k+1 and k-1, so a component whose
    slots all carry the retiring parity and top out at k-1 can never be
    touched again; it is resolved here exactly as the end-of-strip
    retirement would resolve it, which keeps the state store free of the
    large doomed majority."""
    m = 0
    for i in range(size):
        key = keys[i]
        flag = (key >> 60) & 1
        _syms_of(key, width, syms)
        _group_of(syms, width, groups, stack)

        doomed = False
        if k > 0 and syms[k - 1] != _E:
            g = groups[k - 1]
            doomed = True
            alone = True
            for t in range(width):
                if syms[t] == _E:
                    continue
                if groups[t] == g:
                    if t >= k or ((t ^ k) & 1) == 0:
                        doomed = False
                        break
                else:
                    alone = False
            if doomed:
                if alone and flag and not _reap(harvest, counts, i, offset):
                    return 0, 1
        if not doomed:
            for c in range(counts.shape[1]):
                buf_counts[m, c] = counts[i, c]
            buf_keys[m] = key
            m += 1

        ga = groups[k - 1] if (k > 0 and syms[k - 1] != _E) else -9
        gb = groups[k + 1] if (k + 1 < width and syms[k + 1] != _E) else -9
        _join_slot(syms, groups, width, k, ga, gb)
        nflag = flag | (1 if k == 0 else 0)
        cost = _cost_of(syms, width, nflag, 0, 1, 1)
        m = _emit(
            buf_keys, buf_counts, m, _pack(syms, width, nflag),
            counts, i, 1 if k == 0 else 2, cost, offset, n_max,
        )

    n = _merge(buf_keys, buf_counts, m, keys, counts)
    if n < 0:
        return 0, 1
    return n, 0


def _m45_expire(
    keys, counts, size, parity, width, offset, n_max, buf_keys, buf_counts,
    harvest, syms, groups, stack,
):
    """Retire every slot of the given parity: those cells sit two strips
    back once the next strip starts and can gain no further neighbor.  A
    component losing its last slot finishes the figure -- harvested if
    nothing else remains on the boundary and the diagonal was touched,
    otherwise the figure is disconnected and the state dies."""
    m = 0
    for i in range(size):
        key = keys[i]
        flag = (key >> 60) & 1
        _syms_of(key, width, syms)
        dead = False
        for k in range(parity, width, 2):
            if syms[k] == _E:
                continue
            _group_of(syms, width, groups, stack)
            if _remove_slot(syms, groups, width, k) == 1:
                if _rest_empty(syms, width) and flag:
                    if not _reap(harvest, counts, i, offset):
                        return 0, 1
                dead = True
                break
        if not dead:
            cost = _cost_of(syms, width, flag, 0, 1, 1)
            m = _emit(
                buf_keys, buf_counts, m, _pack(syms, width, flag),
                counts, i, 0, cost, offset, n_max,
            )

    n = _merge(buf_keys, buf_counts, m, keys, counts)
    if n < 0:
        return 0, 1
    return n, 0


_HELPER_NAMES = (
    "_syms_of", "_pack", "_group_of", "_remove_slot", "_join_slot",
    "_rest_empty", "_cost_of", "_emit", "_merge", "_reap",
)

if HAVE_NUMBA:
    # The jitted kernels must resolve the helpers to their jitted twins,
    # while jit=False should stay off numba entirely; so the interpreted
    # kernels are rebuilt against a namespace that keeps the interpreted
    # helpers before the module-level names are wrapped.
    _ns = dict(globals())

    def _interp(func):
        return types.FunctionType(func.__code__, _ns, func.__name__)

    for _name in _HELPER_NAMES:
        _ns[_name] = _interp(_ns[_name])

    _m90_step_jit = njit(cache=True)(_m90_step)
    _m45_step_jit = njit(cache=True)(_m45_step)
    _m45_expire_jit = njit(cache=True)(_m45_expire)

    _m90_step = _interp(_m90_step)
    _m45_step = _interp(_m45_step)
    _m45_expire = _interp(_m45_expire)

    for _name in _HELPER_NAMES:
        globals()[_name] = njit(cache=True)(globals()[_name])
else:  # pragma: no cover
    _m90_step_jit = _m45_step_jit = _m45_expire_jit = None


class _BudgetExceeded(Exception):
    def __init__(self, weights_final: int):
        self.weights_final = weights_final


class _Sweep:
    """Driver state for one run: the live (keys, counts) pair and one
    equal-capacity branch buffer.  A step consumes every live row before its
    merge phase starts, so the merged state set is written back over the
    live arrays and no third buffer is needed.

    Count rows hold a sliding weight window: slot c is the multiplicity at
    total weight offset + c.  Every figure alive after t full sweeps has at
    least one cell in each of the t swept lines, so the floor rises by one
    per line and the rows shed a slot each time."""

    def __init__(self, width: int, n_max: int, budget: int, jit: bool):
        self.width = width
        self.n_max = n_max
        self.budget = budget
        self.jit = jit
        self.offset = 0
        self.wslots = n_max + 1
        self.cap = 4
        self.size = 1
        self.live = self._alloc()
        self.buf = self._alloc()
        self.live[0][0] = 0
        self.live[1][0] = 0
        self.live[1][0, 0] = 1
        self.harvest = np.zeros(n_max + 1, np.uint64)
        self.result = [0] * (n_max + 1)
        self.syms = np.zeros(width + 2, np.int64)
        self.groups = np.zeros(width + 2, np.int64)
        self.stack = np.zeros(width + 2, np.int64)

    def _alloc(self) -> tuple[np.ndarray, np.ndarray]:
        keys = np.empty(self.cap, np.int64)
        counts = np.empty((self.cap, self.wslots), np.uint64)
        return keys, counts

    def advance_floor(self) -> None:
        keys, counts = self.live
        if self.size and counts[: self.size, 0].any():
            raise AssertionError("weight floor crossed a live count")
        if self.wslots < 2:
            raise AssertionError("weight window exhausted with states live")
        self.offset += 1
        self.wslots -= 1
        # the reallocation doubles as a chance to give back slack from a
        # larger earlier generation
        need = 2 * self.size + 2
        self.cap = max(4, min(self.cap, need + (need >> 2)))
        self.live = self._alloc()
        self.live[0][: self.size] = keys[: self.size]
        self.live[1][: self.size] = counts[: self.size, 1:]
        del keys, counts
        self.buf = self._alloc()

    def step(self, kernel, *args) -> None:
        need = 2 * self.size + 2
        if need > self.cap:
            # a quarter of headroom keeps regrowth rare without the memory
            # overshoot a doubling policy can reach
            cap = need + (need >> 2)
            if 2 * cap * (self.wslots * 8 + 8) > self.budget:
                raise _BudgetExceeded(0)
            old_keys, old_counts = self.live
            self.cap = cap
            self.live = self._alloc()
            self.live[0][: self.size] = old_keys[: self.size]
            self.live[1][: self.size] = old_counts[: self.size]
            del old_keys, old_counts
            self.buf = self._alloc()
        n, status = kernel(
            self.live[0],
            self.live[1],
            self.size,
            *args,
            self.width,
            self.offset,
            self.n_max,
            self.buf[0],
            self.buf[1],
            self.harvest,
            self.syms,
            self.groups,
            self.stack,
        )
        if status:
            raise RuntimeError("weight counter overflow; widen the count slots")
        self.size = n
        for w in np.flatnonzero(self.harvest):
            self.result[w] += int(self.harvest[w])
            self.harvest[w] = 0

    def drop_initial(self) -> None:
        keys, counts = self.live
        for i in range(self.size):
            if keys[i] == 0:
                keys[i : self.size - 1] = keys[i + 1 : self.size].copy()
                counts[i : self.size - 1] = counts[i + 1 : self.size].copy()
                self.size -= 1
                return


def _m90_run(n_max: int, budget: int, jit: bool) -> list[int]:
    width = (n_max + 1) // 2
    sweep = _Sweep(width, n_max, budget, jit)
    kernel = _m90_step_jit if jit else _m90_step
    for row in range(n_max + 2):
        if sweep.size == 0:
            break
        try:
            if row:
                # survivors have a cell in each finished row
                sweep.advance_floor()
            for j in range(width):
                sweep.step(kernel, j)
        except _BudgetExceeded as exc:
            # weights below the current row are already harvested: a figure
            # of weight w spans at most w rows
            exc.weights_final = max(0, row - 1)
            raise
        if row == 0:
            sweep.drop_initial()
    else:
        raise AssertionError("states survived past the row cap")
    return sweep.result


def _m45_run(s0: int, n_max: int, budget: int, jit: bool) -> list[int]:
    width = (n_max - 1) // 2 + 1
    sweep = _Sweep(width, n_max, budget, jit)
    occupy = _m45_step_jit if jit else _m45_step
    expire = _m45_expire_jit if jit else _m45_expire
    for s in range(s0, 2 * n_max + 4):
        if sweep.size == 0:
            break
        try:
            if s > s0:
                # survivors have a cell in each finished strip
                sweep.advance_floor()
            for k in range(s % 2, width, 2):
                sweep.step(occupy, k)
            # slots of the other parity sit two strips back once the next
            # strip starts; retire them
            if sweep.size:
                sweep.step(expire, (s + 1) % 2)
        except _BudgetExceeded as exc:
            # a rerun capped at the weights already swept past is safe: its
            # states are a subset of this run's at every strip
            exc.weights_final = max(0, s - s0 - 1)
            raise
        if s == s0:
            sweep.drop_initial()
    else:
        raise AssertionError("states survived past the strip cap")
    return sweep.result


def count_mirror_tm(
    kind: str,
    n_max: int,
    *,
    memory_budget: int | None = None,
    jit: bool | None = None,
) -> CountTable:
    """Count a mirror class by boundary sweep.

    Raises ResourceLimitError when the state store would outgrow
    `memory_budget` bytes; the error's completed_n_max says how far a rerun
    can safely go.
    """
    if kind not in TM_KINDS:
        raise ValueError(f"not a transfer-matrix kind: {kind!r}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max > 40:
        raise ValueError("boundary states are packed into 64-bit keys; n_max tops out at 40")
    budget = DEFAULT_BUDGET if memory_budget is None else memory_budget
    run_jit = use_jit(jit)
    totals = [0] * (n_max + 1)
    if kind == "m90":
        runs = [lambda: _m90_run(n_max, budget, run_jit)]
    else:
        runs = [lambda s0=s0: _m45_run(s0, n_max, budget, run_jit) for s0 in (0, 1)]
    for run in runs:
        try:
            part = run()
        except _BudgetExceeded as exc:
            raise ResourceLimitError(
                f"state store exceeded {budget} bytes",
                completed_n_max=exc.weights_final,
            ) from None
        for w, v in enumerate(part):
            totals[w] += v
    counts = {n: totals[n] for n in range(1, n_max + 1) if totals[n]}
    return CountTable(kind, n_max, counts, source="transfer")


def count_m90(n_max: int, **kwargs) -> CountTable:
    return count_mirror_tm("m90", n_max, **kwargs)


def count_m45(n_max: int, **kwargs) -> CountTable:
    return count_mirror_tm("m45", n_max, **kwargs)
