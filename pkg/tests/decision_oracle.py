"""Independent restatement of the extraposition decision rule, for brute-force checks."""

import itertools

COUNTS = (0, 1, 9, 10, 11, 100, 10**5)
V_W = (0.0, 0.5, 0.7, 1.0)


def oracle_E(n_w, v_w, n_it, n_x, n_it2, n_x2, s, n_min=10, r_exp=0.15):
    def ratio(x, it):
        if it < n_min and x < n_min:
            return 1000.0
        if it == 0:
            return 100.0  # x is at least n_min here
        return x / it

    use_full = n_it >= n_min or n_x >= n_min
    R = ratio(n_x, n_it) if use_full else ratio(n_x2, n_it2)
    expletive = R < r_exp
    if not s:
        return expletive
    return expletive and n_w * v_w > n_min


def grid():
    for counts in itertools.product(COUNTS, repeat=5):
        for v_w in V_W:
            for s in (True, False):
                yield (counts[0], v_w, *counts[1:], s)
