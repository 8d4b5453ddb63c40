# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels; same contract as ``_kernels_py``."""

ctypedef unsigned long long u64


def closure(masks):
    cdef u64 mask, sub
    cdef set out = set()
    ordered = sorted(set(masks), key=int.bit_count, reverse=True)
    for m in ordered:
        if m in out:
            continue
        mask = m
        sub = mask
        while sub:
            out.add(sub)
            sub = (sub - 1) & mask
    return out


def image(masks, table):
    cdef u64 mask, img
    cdef int pos
    cdef int tab[64]
    cdef int k
    cdef int size = len(table)
    if size > 64:
        raise ValueError("ambient larger than 64 vertices")
    for k in range(size):
        tab[k] = table[k]
    out = []
    for m in masks:
        mask = m
        img = 0
        pos = 0
        while mask:
            if mask & 1:
                img |= (<u64>1) << tab[pos]
            mask >>= 1
            pos += 1
        out.append(img)
    return out


def is_closed(faces):
    cdef u64 mask, rest, low
    for m in faces:
        mask = m
        if mask & (mask - 1) == 0:
            continue
        rest = mask
        while rest:
            low = rest & (~rest + 1)
            if (mask ^ low) not in faces:
                return False
            rest ^= low
    return True
