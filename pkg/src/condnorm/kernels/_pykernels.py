"""Pure-Python kernels; reference behaviour for the compiled backend."""

from array import array

IF = -1


def _end(c, i):
    """Index just past the subterm starting at ``i``."""
    need = 1
    while need:
        need += 2 if c[i] == IF else -1
        i += 1
    return i


def _load(codes):
    c = list(codes)
    if not c:
        raise ValueError("empty code sequence")
    return c


def _split4(t):
    # t = IF IF u v w y z  ->  u, v, w, y, z
    iv = _end(t, 2)
    iw = _end(t, iv)
    iy = _end(t, iw)
    iz = _end(t, iy)
    return t[2:iv], t[iv:iw], t[iw:iy], t[iy:iz], t[iz:]


def norm_codes(codes, fuel):
    # The If-If case is a tail call and If-At emits its head before either
    # child, so the preorder output can be streamed.
    out = []
    stack = [(_load(codes), 0)]
    calls = 0
    max_depth = 0
    while stack:
        t, d = stack.pop()
        if calls >= fuel:
            return False, None, calls, max_depth
        calls += 1
        if d > max_depth:
            max_depth = d
        if t[0] != IF:
            out.append(t[0])
        elif t[1] != IF:
            out.append(IF)
            out.append(t[1])
            j = _end(t, 2)
            stack.append((t[j:], d + 1))
            stack.append((t[2:j], d + 1))
        else:
            u, v, w, y, z = _split4(t)
            stack.append(([IF] + u + [IF] + v + y + z + [IF] + w + y + z, d + 1))
    return True, array("i", out), calls, max_depth


_EVAL, _BUILD, _OUTER = 0, 1, 2


def norm2_codes(codes, fuel):
    values = []
    stack = [(_EVAL, _load(codes), 0)]
    calls = 0
    max_depth = 0
    while stack:
        op, t, d = stack.pop()
        if op == _BUILD:
            rz = values.pop()
            ry = values.pop()
            values.append([IF, t] + ry + rz)
            continue
        if op == _OUTER:
            rw = values.pop()
            rv = values.pop()
            stack.append((_EVAL, [IF] + t + rv + rw, d + 1))
            continue
        if calls >= fuel:
            return False, None, calls, max_depth
        calls += 1
        if d > max_depth:
            max_depth = d
        if t[0] != IF:
            values.append(t)
        elif t[1] != IF:
            j = _end(t, 2)
            stack.append((_BUILD, t[1], d))
            stack.append((_EVAL, t[j:], d + 1))
            stack.append((_EVAL, t[2:j], d + 1))
        else:
            u, v, w, y, z = _split4(t)
            stack.append((_OUTER, u, d))
            stack.append((_EVAL, [IF] + w + y + z, d + 1))
            stack.append((_EVAL, [IF] + v + y + z, d + 1))
    return True, array("i", values[0]), calls, max_depth


_N1, _NI, _PUSH2 = 0, 1, 2


def norm1_codes(codes):
    values = []
    stack = [(_N1, _load(codes), None)]
    while stack:
        op, t, extra = stack.pop()
        if op == _PUSH2:
            values.append(t)
            values.append(extra)
        elif op == _N1:
            if t[0] != IF:
                values.append(t)
            else:
                j = _end(t, 1)
                k = _end(t, j)
                stack.append((_NI, t[1:j], None))
                stack.append((_N1, t[k:], None))
                stack.append((_N1, t[j:k], None))
        else:
            z = values.pop()
            y = values.pop()
            if t[0] != IF:
                values.append([IF, t[0]] + y + z)
            else:
                j = _end(t, 1)
                k = _end(t, j)
                stack.append((_NI, t[1:j], None))
                stack.append((_NI, t[k:], None))
                stack.append((_PUSH2, y, z))
                stack.append((_NI, t[j:k], None))
                values.append(y)
                values.append(z)
    return array("i", values[0])


def is_normal_codes(codes):
    codes = _load(codes)
    n = len(codes)
    for i in range(n - 1):
        if codes[i] == IF and codes[i + 1] == IF:
            return False
    return True


def _atom_table(j, n_bits):
    period = 1 << (j + 1)
    p = ((1 << (1 << j)) - 1) << (1 << j)
    while period < n_bits:
        p |= p << period
        period <<= 1
    return p & ((1 << n_bits) - 1)


def truth_table(codes, nvars):
    if not 0 <= nvars <= 30:
        raise ValueError("nvars out of range")
    n_bits = 1 << nvars
    full = (1 << n_bits) - 1
    tables = [_atom_table(j, n_bits) for j in range(nvars)]
    stack = []
    for code in reversed(codes):
        if code == IF:
            x = stack.pop()
            y = stack.pop()
            z = stack.pop()
            stack.append((x & y) | (z & (full ^ x)))
        else:
            if code >= nvars:
                raise ValueError(f"symbol index {code} out of range for {nvars} variables")
            stack.append(tables[code])
    if len(stack) != 1:
        raise ValueError("codes do not encode exactly one expression")
    return stack[0]
