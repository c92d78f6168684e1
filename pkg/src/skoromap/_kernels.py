"""Compiled inner loops over raw float arrays.

Two families live here and must stay separate: the O(n) streaming kernels
used by the library, and literal O(n^2) evaluations of the defining
suprema/infima used only as references.
"""

import numpy as np
from numba import njit


# --- streaming, O(n) -------------------------------------------------------

@njit(cache=True, nogil=True)
def lambda_offset(phi, z, a):
    """Running ``sup_{s<=t} [(phi(s)-a)^+ ^ inf_{u in [s,t]} (phi(u)-z)]``."""
    n = phi.shape[0]
    out = np.empty(n)
    m = -np.inf
    for k in range(n):
        low = phi[k] - z
        excess = phi[k] - a
        if excess < 0.0:
            excess = 0.0
        if m > low:
            m = low
        cand = excess if excess < low else low
        if cand > m:
            m = cand
        out[k] = m
    return out


@njit(cache=True, nogil=True)
def reflect_fused_chunk(psi, z, a, push, m):
    """Lower reflection at z followed by the band correction, one pass.

    ``push`` (running lower push) and ``m`` (running correction) are the
    whole state; pass the returned pair into the next chunk to continue.
    """
    n = psi.shape[0]
    out = np.empty(n)
    for k in range(n):
        gap = z - psi[k]
        if gap > push:
            push = gap
        phi = psi[k] + push
        low = phi - z
        excess = phi - a
        if excess < 0.0:
            excess = 0.0
        if m > low:
            m = low
        cand = excess if excess < low else low
        if cand > m:
            m = cand
        out[k] = phi - m
    return out, push, m


@njit(cache=True, nogil=True)
def reflect_fused(psi, z, a):
    out, _, _ = reflect_fused_chunk(psi, z, a, 0.0, -np.inf)
    return out


@njit(cache=True, nogil=True)
def split_regulator(psi, phibar):
    """Cumulate the positive and negative steps of ``phibar - psi`` separately."""
    n = psi.shape[0]
    lo = np.empty(n)
    up = np.empty(n)
    prev = 0.0
    acc_l = 0.0
    acc_u = 0.0
    for k in range(n):
        net = phibar[k] - psi[k]
        d = net - prev
        prev = net
        if d > 0.0:
            acc_l += d
        elif d < 0.0:
            acc_u -= d
        lo[k] = acc_l
        up[k] = acc_u
    return lo, up


@njit(cache=True, nogil=True)
def reflect_clip(psi, z, a):
    """Project each increment back into the band: x_k = pi(x_{k-1} + dpsi_k)."""
    n = psi.shape[0]
    out = np.empty(n)
    x = psi[0]
    for k in range(n):
        if k > 0:
            x = out[k - 1] + (psi[k] - psi[k - 1])
        if x > a:
            x = a
        elif x < z:
            x = z
        out[k] = x
    return out


# --- references, O(n^2) ----------------------------------------------------

@njit(cache=True)
def gamma_lower_naive(psi, z):
    n = psi.shape[0]
    out = np.empty(n)
    for t in range(n):
        sup = 0.0
        for s in range(t + 1):
            v = z - psi[s]
            if v > sup:
                sup = v
        out[t] = psi[t] + sup
    return out


@njit(cache=True)
def lambda_naive(phi, z, a):
    """``phi(t) - sup_s R_t(phi)(s)`` over all grid pairs ``s <= t``.

    For each t the infimum over ``[s, t]`` is carried backwards in s.
    """
    n = phi.shape[0]
    out = np.empty(n)
    for t in range(n):
        sup = -np.inf
        inf = np.inf
        for s in range(t, -1, -1):
            if phi[s] - z < inf:
                inf = phi[s] - z
            excess = phi[s] - a
            if excess < 0.0:
                excess = 0.0
            r = excess if excess < inf else inf
            if r > sup:
                sup = r
        out[t] = phi[t] - sup
    return out


@njit(cache=True)
def alt_form_naive(psi, z, a):
    """Second closed form, written for [0, w] and applied to x = psi - z, w = a - z.

    ``out(t) = psi(t) - max([(x(0) - w)^+ ^ min_{u<=t} x(u)],
    max_{s<=t} [(x(s) - w) ^ min_{u in [s,t]} x(u)])``; it never forms the
    lower reflection, which makes it independent of the composed route.
    """
    n = psi.shape[0]
    w = a - z
    out = np.empty(n)
    head = psi[0] - z - w
    if head < 0.0:
        head = 0.0
    for t in range(n):
        run_min = np.inf
        for u in range(t + 1):
            if psi[u] - z < run_min:
                run_min = psi[u] - z
        first = head if head < run_min else run_min
        sup = -np.inf
        inf = np.inf
        for s in range(t, -1, -1):
            x = psi[s] - z
            if x < inf:
                inf = x
            r = x - w
            if inf < r:
                r = inf
            if r > sup:
                sup = r
        corr = first if first > sup else sup
        out[t] = psi[t] - corr
    return out
