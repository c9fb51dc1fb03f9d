"""Pure-Python audit scan kernel.

Reference implementation of the governing-obligation scan; the compiled
extension in ``_kernel.pyx`` mirrors it exactly.  Inputs are parallel
integer sequences (peers and verbs pre-encoded as small ints), one row
per obligation and one per performed action, both in canonical log
order.  The result holds, per action, the index of the forbidding
obligation that makes it a violation, or -1.
"""

from __future__ import annotations

from typing import Sequence


def scan_governing(
    obl_to: Sequence[int],
    obl_verb: Sequence[int],
    obl_allow: Sequence[int],
    obl_clock: Sequence[int],
    act_by: Sequence[int],
    act_verb: Sequence[int],
    act_clock: Sequence[int],
    literal: bool,
) -> list[int]:
    n_obl = len(obl_to)
    n_act = len(act_by)
    result = [-1] * n_act

    if literal:
        # Any matching forbid before the action condemns it, permits are
        # ignored; report the last such forbid in log order.
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
                    result[i] = k
                    break
        return result

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
                    deny_idx = k
            elif permit_idx < 0:
                permit_idx = k
        # Latest obligation governs; a deny sharing the latest clock with
        # a permit wins the tie.  No candidate means no violation.
        if deny_idx >= 0:
            result[i] = deny_idx
    return result
