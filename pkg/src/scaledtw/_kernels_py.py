"""Pure-Python bitmask kernels.

Faces are encoded as integers whose set bits are ambient vertex positions.
This module is the fallback used when the compiled ``_kernels`` extension
is not importable; both expose the same three functions.
"""


def closure(masks):
    """Return the set of all nonempty submasks of the given masks."""
    out = set()
    for mask in sorted(set(masks), key=int.bit_count, reverse=True):
        if mask in out:
            continue
        sub = mask
        while sub:
            out.add(sub)
            sub = (sub - 1) & mask
    return out


def image(masks, table):
    """Map every mask bitwise through ``table`` (position -> position)."""
    out = []
    for mask in masks:
        img = 0
        pos = 0
        while mask:
            if mask & 1:
                img |= 1 << table[pos]
            mask >>= 1
            pos += 1
        out.append(img)
    return out


def is_closed(faces):
    """True when every codimension-one face of every member is a member."""
    for mask in faces:
        if mask & (mask - 1) == 0:
            continue
        rest = mask
        while rest:
            low = rest & -rest
            if (mask ^ low) not in faces:
                return False
            rest ^= low
    return True
