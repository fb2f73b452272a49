"""Kernel selection: compiled extension when built, pure Python otherwise."""

from __future__ import annotations

import numpy as np

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:       # extension not built; pure-Python fallback
    _compiled = None

HAVE_COMPILED = _compiled is not None


def run_kernel(
    values,
    facts,
    expo,
    b_list,
    kind_code,
    weak_total,
    faces,
    s_primes,
    custom_member=None,
    force_python: bool = False,
):
    """Dispatch one enumeration block; returns cumulative counts per bound."""
    n = len(values)
    use_compiled = (
        HAVE_COMPILED
        and not force_python
        and custom_member is None
        and kind_code in (0, 1)
        and n <= 16
    )
    if not use_compiled:
        return _kernel_py.enumerate_counts(
            values,
            facts,
            expo,
            b_list,
            kind_code,
            weak_total,
            faces,
            s_primes,
            custom_member,
        )
    vals = np.concatenate([np.asarray(v, dtype=np.int64) for v in values]) if values else np.zeros(0, np.int64)
    voff = np.zeros(n + 1, dtype=np.int64)
    for i, v in enumerate(values):
        voff[i + 1] = voff[i] + len(v)
    fp, fe, foff = [], [], [0]
    for i in range(n):
        for entry in facts[i]:
            for p, e in entry:
                fp.append(p)
                fe.append(e)
            foff.append(len(fp))
    expo_arr = np.asarray(expo, dtype=np.int32)
    return _compiled.enumerate_counts_flat(
        vals,
        voff,
        np.asarray(fp, dtype=np.int64),
        np.asarray(fe, dtype=np.int32),
        np.asarray(foff, dtype=np.int64),
        expo_arr,
        np.asarray(b_list, dtype=np.int64),
        int(kind_code),
        int(weak_total),
        bytes(faces),
        np.asarray(s_primes, dtype=np.int64),
    )
