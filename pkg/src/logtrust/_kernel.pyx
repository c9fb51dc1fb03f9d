# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled audit scan kernel.

Must stay behaviorally identical to ``_kernel_py.scan_governing``; the
test suite compares the two on randomized inputs.
"""

import numpy as np


def scan_governing(
    int[::1] obl_to,
    int[::1] obl_verb,
    int[::1] obl_allow,
    int[::1] obl_clock,
    int[::1] act_by,
    int[::1] act_verb,
    int[::1] act_clock,
    bint literal,
):
    cdef Py_ssize_t n_obl = obl_to.shape[0]
    cdef Py_ssize_t n_act = act_by.shape[0]
    result_arr = np.full(n_act, -1, dtype=np.intc)
    cdef int[::1] result = result_arr
    cdef Py_ssize_t i, k
    cdef int by, verb, clock, c, best, deny_idx, permit_idx

    if literal:
        for i in range(n_act):
            by = act_by[i]
            verb = act_verb[i]
            clock = act_clock[i]
            for k in range(n_obl - 1, -1, -1):
                if (
                    obl_to[k] == by
                    and obl_verb[k] == verb
                    and obl_allow[k] == 0
                    and obl_clock[k] < clock
                ):
                    result[i] = <int>k
                    break
        return result_arr

    for i in range(n_act):
        by = act_by[i]
        verb = act_verb[i]
        clock = act_clock[i]
        best = -1
        deny_idx = -1
        permit_idx = -1
        for k in range(n_obl):
            if obl_to[k] != by or obl_verb[k] != verb or obl_clock[k] >= clock:
                continue
            c = obl_clock[k]
            if c < best:
                continue
            if c > best:
                best = c
                deny_idx = -1
                permit_idx = -1
            if obl_allow[k] == 0:
                if deny_idx < 0:
                    deny_idx = <int>k
            elif permit_idx < 0:
                permit_idx = <int>k
        if deny_idx >= 0:
            result[i] = deny_idx
    return result_arr
