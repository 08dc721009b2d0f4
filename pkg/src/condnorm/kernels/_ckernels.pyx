# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels``.

Terms live in one growable arena of ints and are addressed by (start, length)
so rewriting never allocates Python objects.  Arena indices, never pointers,
are held across pushes since the arena may reallocate.
"""

from cpython cimport array as carray
from libc.stdint cimport uint64_t
from libc.string cimport memcpy, memmove
from libcpp.vector cimport vector

from array import array

cdef int IF_NODE = -1
cdef carray.array _INT_TEMPLATE = array("i")


cdef struct Task:
    int op
    Py_ssize_t start
    Py_ssize_t length
    Py_ssize_t split
    Py_ssize_t mark
    long long depth
    int atom


cdef enum:
    EVAL = 0
    BUILD = 1
    OUTER = 2
    N1 = 3
    NI = 4
    PUSH2 = 5


cdef struct Machine:
    # ``terms`` holds arguments still to be evaluated.  A task records the
    # size of ``terms`` when it was pushed; everything above that mark was
    # made by tasks that have finished by the time it is popped, so popping
    # truncates back to the mark.
    vector[int] terms
    vector[Task] tasks
    # ``vals`` is the value stack, stored contiguously: value i occupies
    # vals[starts[i]:starts[i+1]] and the last one runs to the end.
    vector[int] vals
    vector[Py_ssize_t] starts


cdef inline void _push(Machine& mc, int op, Py_ssize_t start, Py_ssize_t length,
                       long long depth, Py_ssize_t extra) noexcept:
    """Push a task; ``extra`` is the atom of BUILD or the split of PUSH2."""
    cdef Task t
    t.op = op
    t.start = start
    t.length = length
    t.depth = depth
    t.mark = mc.terms.size()
    t.split = extra
    t.atom = <int>extra
    mc.tasks.push_back(t)


cdef inline void _push_value(Machine& mc, const int* src, Py_ssize_t n) noexcept:
    cdef Py_ssize_t base = mc.vals.size()
    mc.starts.push_back(base)
    mc.vals.resize(base + n)
    memcpy(mc.vals.data() + base, src, n * sizeof(int))


cdef inline void _wrap_top_two(Machine& mc, int atom) noexcept:
    """Replace the top two values y, z by ``IF atom y z`` in place."""
    cdef Py_ssize_t ys = mc.starts[mc.starts.size() - 2]
    cdef Py_ssize_t n = mc.vals.size() - ys
    mc.vals.resize(mc.vals.size() + 2)
    cdef int* v = mc.vals.data()
    memmove(v + ys + 2, v + ys, n * sizeof(int))
    v[ys] = IF_NODE
    v[ys + 1] = atom
    mc.starts.pop_back()


cdef inline Py_ssize_t _term_if_self(Machine& mc, Py_ssize_t s1, Py_ssize_t n1,
                                     Py_ssize_t s2, Py_ssize_t n2) noexcept:
    """Append ``IF terms[s1:s1+n1] terms[s2:s2+n2]`` to ``terms``."""
    cdef Py_ssize_t base = mc.terms.size()
    mc.terms.resize(base + 1 + n1 + n2)
    cdef int* a = mc.terms.data()
    a[base] = IF_NODE
    memcpy(a + base + 1, a + s1, n1 * sizeof(int))
    memcpy(a + base + 1 + n1, a + s2, n2 * sizeof(int))
    return base


cdef inline Py_ssize_t _end(const int* c, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t need = 1
    while need:
        if c[i] == IF_NODE:
            need += 2
        else:
            need -= 1
        i += 1
    return i


cdef void _load(object codes, vector[int]& dst) except *:
    cdef const int[:] mv
    cdef Py_ssize_t i, n
    if isinstance(codes, carray.array) and codes.typecode == "i":
        mv = codes
        n = mv.shape[0]
        dst.resize(n)
        if n:
            memcpy(dst.data(), &mv[0], n * sizeof(int))
    else:
        for x in codes:
            dst.push_back(x)
    if dst.size() == 0:
        raise ValueError("empty code sequence")


cdef carray.array _to_array(const int* src, Py_ssize_t n):
    cdef carray.array res = carray.clone(_INT_TEMPLATE, n, False)
    if n:
        memcpy(res.data.as_ints, src, n * sizeof(int))
    return res


def norm_codes(codes, long long fuel):
    cdef vector[int] arena
    cdef vector[int] out
    cdef vector[Task] stack
    cdef Task t, nt
    cdef long long calls = 0, max_depth = 0
    cdef const int* c
    cdef int* a
    cdef Py_ssize_t j, iv, iw, iy, iz, L, base, nlen, k
    cdef Py_ssize_t lu, lv, lw, ly, lz

    _load(codes, arena)
    t.op = EVAL
    t.start = 0
    t.length = arena.size()
    t.depth = 0
    stack.push_back(t)
    while stack.size():
        t = stack.back()
        stack.pop_back()
        if calls >= fuel:
            return False, None, calls, max_depth
        calls += 1
        if t.depth > max_depth:
            max_depth = t.depth
        c = arena.data() + t.start
        if c[0] != IF_NODE:
            out.push_back(c[0])
            if t.start + t.length == <Py_ssize_t>arena.size():
                arena.resize(t.start)
        elif c[1] != IF_NODE:
            out.push_back(IF_NODE)
            out.push_back(c[1])
            j = _end(c, 2)
            nt.op = EVAL
            nt.depth = t.depth + 1
            nt.start = t.start + j
            nt.length = t.length - j
            stack.push_back(nt)
            nt.start = t.start + 2
            nt.length = j - 2
            stack.push_back(nt)
        else:
            iv = _end(c, 2)
            iw = _end(c, iv)
            iy = _end(c, iw)
            iz = _end(c, iy)
            L = t.length
            lu = iv - 2
            lv = iw - iv
            lw = iy - iw
            ly = iz - iy
            lz = L - iz
            nlen = 3 + lu + lv + lw + 2 * (ly + lz)
            base = arena.size()
            arena.resize(base + nlen)
            a = arena.data()
            c = a + t.start
            # IF u IF v y z IF w y z
            k = base
            a[k] = IF_NODE
            k += 1
            memcpy(a + k, c + 2, lu * sizeof(int))
            k += lu
            a[k] = IF_NODE
            k += 1
            memcpy(a + k, c + iv, lv * sizeof(int))
            k += lv
            memcpy(a + k, c + iy, (ly + lz) * sizeof(int))
            k += ly + lz
            a[k] = IF_NODE
            k += 1
            memcpy(a + k, c + iw, lw * sizeof(int))
            k += lw
            memcpy(a + k, c + iy, (ly + lz) * sizeof(int))
            nt.op = EVAL
            nt.depth = t.depth + 1
            nt.length = nlen
            if t.start + t.length == base:
                # The caller's term was topmost: slide the rewrite over it.
                memmove(a + t.start, a + base, nlen * sizeof(int))
                arena.resize(t.start + nlen)
                nt.start = t.start
            else:
                nt.start = base
            stack.push_back(nt)
    return True, _to_array(out.data(), out.size()), calls, max_depth


def norm2_codes(codes, long long fuel):
    cdef Machine mc
    cdef Task t
    cdef long long calls = 0, max_depth = 0
    cdef const int* c
    cdef Py_ssize_t j, iv, iw, iy, s, vs, nv, sv, sw

    _load(codes, mc.terms)
    _push(mc, EVAL, 0, mc.terms.size(), 0, 0)
    while mc.tasks.size():
        t = mc.tasks.back()
        mc.tasks.pop_back()
        mc.terms.resize(t.mark)
        if t.op == BUILD:
            _wrap_top_two(mc, t.atom)
            continue
        if t.op == OUTER:
            # evaluate IF u v' w' with v', w' the two inner results
            vs = mc.starts[mc.starts.size() - 2]
            nv = mc.vals.size() - vs
            s = mc.terms.size()
            mc.terms.resize(s + 1 + t.length + nv)
            mc.terms[s] = IF_NODE
            memcpy(mc.terms.data() + s + 1, mc.terms.data() + t.start, t.length * sizeof(int))
            memcpy(mc.terms.data() + s + 1 + t.length, mc.vals.data() + vs, nv * sizeof(int))
            mc.vals.resize(vs)
            mc.starts.pop_back()
            mc.starts.pop_back()
            _push(mc, EVAL, s, 1 + t.length + nv, t.depth + 1, 0)
            continue
        if calls >= fuel:
            return False, None, calls, max_depth
        calls += 1
        if t.depth > max_depth:
            max_depth = t.depth
        c = mc.terms.data() + t.start
        if c[0] != IF_NODE:
            _push_value(mc, c, 1)
        elif c[1] != IF_NODE:
            j = _end(c, 2)
            _push(mc, BUILD, 0, 0, t.depth, c[1])
            _push(mc, EVAL, t.start + j, t.length - j, t.depth + 1, 0)
            _push(mc, EVAL, t.start + 2, j - 2, t.depth + 1, 0)
        else:
            iv = _end(c, 2)
            iw = _end(c, iv)
            iy = _end(c, iw)
            s = t.start
            # y z is one contiguous span: [iy, end)
            sw = _term_if_self(mc, s + iw, iy - iw, s + iy, t.length - iy)
            sv = _term_if_self(mc, s + iv, iw - iv, s + iy, t.length - iy)
            _push(mc, OUTER, s + 2, iv - 2, t.depth, 0)
            _push(mc, EVAL, sw, 1 + (iy - iw) + (t.length - iy), t.depth + 1, 0)
            _push(mc, EVAL, sv, 1 + (iw - iv) + (t.length - iy), t.depth + 1, 0)
    return True, _to_array(mc.vals.data(), mc.vals.size()), calls, max_depth


def norm1_codes(codes):
    cdef Machine mc
    cdef Task t
    cdef const int* c
    cdef Py_ssize_t j, k, ys, n, s

    _load(codes, mc.terms)
    _push(mc, N1, 0, mc.terms.size(), 0, 0)
    while mc.tasks.size():
        t = mc.tasks.back()
        mc.tasks.pop_back()
        mc.terms.resize(t.mark)
        if t.op == PUSH2:
            # restore a saved ``y z`` pair as two values
            s = mc.vals.size()
            mc.starts.push_back(s)
            mc.starts.push_back(s + t.split)
            mc.vals.resize(s + t.length)
            memcpy(mc.vals.data() + s, mc.terms.data() + t.start, t.length * sizeof(int))
            continue
        c = mc.terms.data() + t.start
        if t.op == N1:
            if c[0] != IF_NODE:
                _push_value(mc, c, 1)
            else:
                j = _end(c, 1)
                k = _end(c, j)
                _push(mc, NI, t.start + 1, j - 1, 0, 0)
                _push(mc, N1, t.start + k, t.length - k, 0, 0)
                _push(mc, N1, t.start + j, k - j, 0, 0)
            continue
        # NI x: normif(x, y, z) with y, z the top two values
        if c[0] != IF_NODE:
            _wrap_top_two(mc, c[0])
            continue
        j = _end(c, 1)
        k = _end(c, j)
        ys = mc.starts[mc.starts.size() - 2]
        n = mc.vals.size() - ys
        s = mc.terms.size()
        mc.terms.resize(s + n)
        memcpy(mc.terms.data() + s, mc.vals.data() + ys, n * sizeof(int))
        _push(mc, NI, t.start + 1, j - 1, 0, 0)
        _push(mc, NI, t.start + k, t.length - k, 0, 0)
        _push(mc, PUSH2, s, n, 0, mc.starts[mc.starts.size() - 1] - ys)
        _push(mc, NI, t.start + j, k - j, 0, 0)
    return _to_array(mc.vals.data(), mc.vals.size())



def is_normal_codes(codes):
    cdef vector[int] v
    cdef Py_ssize_t i, n
    _load(codes, v)
    n = v.size()
    for i in range(n - 1):
        if v[i] == IF_NODE and v[i + 1] == IF_NODE:
            return False
    return True


cdef uint64_t[6] _LOW_PATTERNS
_LOW_PATTERNS[0] = 0xAAAAAAAAAAAAAAAAULL
_LOW_PATTERNS[1] = 0xCCCCCCCCCCCCCCCCULL
_LOW_PATTERNS[2] = 0xF0F0F0F0F0F0F0F0ULL
_LOW_PATTERNS[3] = 0xFF00FF00FF00FF00ULL
_LOW_PATTERNS[4] = 0xFFFF0000FFFF0000ULL
_LOW_PATTERNS[5] = 0xFFFFFFFF00000000ULL


def truth_table(codes, int nvars):
    cdef vector[int] v
    cdef vector[uint64_t] stack
    cdef Py_ssize_t nwords, i, w, top, n
    cdef uint64_t mask
    cdef uint64_t* s
    cdef int code
    if nvars < 0 or nvars > 30:
        raise ValueError("nvars out of range")
    _load(codes, v)
    nwords = 1 if nvars <= 6 else (<Py_ssize_t>1) << (nvars - 6)
    mask = 0xFFFFFFFFFFFFFFFFULL if nvars >= 6 else ((<uint64_t>1) << (1 << nvars)) - 1
    n = v.size()
    top = 0
    for i in range(n - 1, -1, -1):
        code = v[i]
        if code == IF_NODE:
            # test, then, else are the top three entries, test on top
            s = stack.data() + (top - 3) * nwords
            for w in range(nwords):
                # s[2]=test, s[1]=then, s[0]=else
                s[w] = (s[2 * nwords + w] & s[nwords + w]) | (~s[2 * nwords + w] & s[w])
            top -= 2
            stack.resize(top * nwords)
        else:
            if code >= nvars:
                raise ValueError(f"symbol index {code} out of range for {nvars} variables")
            stack.resize((top + 1) * nwords)
            s = stack.data() + top * nwords
            for w in range(nwords):
                if code < 6:
                    s[w] = _LOW_PATTERNS[code]
                else:
                    s[w] = 0xFFFFFFFFFFFFFFFFULL if (w >> (code - 6)) & 1 else 0
            top += 1
    if top != 1:
        raise ValueError("codes do not encode exactly one expression")
    s = stack.data()
    s[0] &= mask
    return int.from_bytes((<char*>s)[:nwords * 8], "little")
