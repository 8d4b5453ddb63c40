"""Line-oriented certificate files.

A file holds one or more blocks::

    cert <id>
    ambient <ambient-id>
    thin <a> <b> <c>                      (scaling of the big complex)
    smallthin <a> <b> <c>                 (only when small is not induced)
    claim <ambient-id> small=<ref> big=<ref>
    step <k> an1 n=<n> i=<i> embed <v0 ... vn>
    add <v0 ... vk>                        (optional replay record)
    addthin <a> <b> <c>
    end

Refs are ``full``, ``empty``, ``horn:<I>/<M>`` or ``gen:<f1>;<f2>;...``
with comma-separated vertex labels.  The last block is the one verified;
``derived`` steps refer to earlier blocks.
"""
from __future__ import annotations

from .anodyne import Certificate, CertificateError, ScaledInclusion, Step, dependency_order
from .complex import Ambient, ComplexError, Subcomplex, ambient_from_id, face_key, horn_mask
from .scaling import ScaledComplex, induce


class CertificateParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


# --------------------------------------------------------------------------
# writing

def _labels(amb: Ambient, mask: int, sep: str = " ") -> str:
    return sep.join(amb.format_face(mask).split())


def _ref(amb: Ambient, k: Subcomplex) -> str:
    if not k.faces:
        return "empty"
    if amb.full in k.faces:
        return "full"
    present = {p for p in range(amb.size) if (amb.full ^ (1 << p)) in k.faces}
    if present:
        missing = amb.full & ~sum(1 << p for p in present)
        if horn_mask(amb, amb.full, missing).faces == k.faces:
            return f"horn:{_labels(amb, amb.full, ',')}/{_labels(amb, missing, ',')}"
    return "gen:" + ";".join(_labels(amb, f, ",") for f in k.facets())


def _embed(amb: Ambient, embed) -> str:
    return " ".join(_labels(amb, 1 << p) for p in embed)


def format_block(cert: Certificate) -> list[str]:
    amb = cert.ambient
    lines = [f"cert {cert.id}", f"ambient {amb.name}"]
    lines += [f"thin {_labels(amb, t)}" for t in cert.claim.big.sorted_thin()]
    if not cert.claim.induced:
        lines.append("smallthin-explicit")
        lines += [f"smallthin {_labels(amb, t)}" for t in cert.claim.small.sorted_thin()]
    lines.append(f"claim {amb.name} small={_ref(amb, cert.claim.small.complex)} "
                 f"big={_ref(amb, cert.claim.big.complex)}")
    for k, s in enumerate(cert.steps, 1):
        if s.kind == "an1":
            head = f"step {k} an1 n={s.n} i={s.i}"
        elif s.kind in ("an2", "an3"):
            head = f"step {k} {s.kind}"
        elif s.kind == "trusted":
            head = f"step {k} trusted {s.rule}"
            if s.n is not None:
                head += f" n={s.n} i={s.i}"
        else:
            head = f"step {k} derived {s.ref}"
        lines.append(f"{head} embed {_embed(amb, s.embed)}")
        if s.added_faces is not None:
            lines += [f"add {_labels(amb, f)}" for f in sorted(s.added_faces, key=face_key)]
        if s.added_thins is not None:
            lines += [f"addthin {_labels(amb, f)}" for f in sorted(s.added_thins, key=face_key)]
    lines.append("end")
    return lines


def dumps(cert: Certificate, store=None) -> str:
    out: list[str] = []
    for c in dependency_order(cert, store):
        out += format_block(c)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# reading

def _parse_ref(amb: Ambient, ref: str, lineno: int) -> Subcomplex:
    try:
        if ref == "full":
            return Subcomplex.full_simplex(amb)
        if ref == "empty":
            return Subcomplex(amb, ())
        if ref.startswith("horn:"):
            I, sep, M = ref[5:].partition("/")
            if not sep:
                raise CertificateParseError(lineno, "horn ref needs I/M")
            i_mask = amb.mask(amb.parse_label(v) for v in I.split(",") if v)
            m_mask = amb.mask(amb.parse_label(v) for v in M.split(",") if v)
            if not i_mask:
                raise CertificateParseError(lineno, "horn ref with empty I")
            return horn_mask(amb, i_mask, m_mask)
        if ref.startswith("gen:"):
            gens = [amb.mask(amb.parse_label(v) for v in g.split(",") if v)
                    for g in ref[4:].split(";") if g]
            return Subcomplex.from_masks(amb, gens)
    except ComplexError as exc:
        raise CertificateParseError(lineno, str(exc)) from None
    raise CertificateParseError(lineno, f"unknown complex ref {ref!r}")


def _kv(token: str, key: str, lineno: int) -> int:
    k, sep, v = token.partition("=")
    if k != key or not sep or not v.lstrip("-").isdigit():
        raise CertificateParseError(lineno, f"expected {key}=<int>, got {token!r}")
    return int(v)


class _Block:
    def __init__(self, cid: str, lineno: int):
        self.id = cid
        self.lineno = lineno
        self.ambient: Ambient | None = None
        self.thin: list[int] = []
        self.small_thin: list[int] | None = None
        self.claim: tuple[str, str, int] | None = None
        self.steps: list[dict] = []


def _parse_step(amb: Ambient, toks: list[str], lineno: int, expected: int) -> dict:
    if len(toks) < 3 or not toks[1].isdigit():
        raise CertificateParseError(lineno, "malformed step line")
    if int(toks[1]) != expected:
        raise CertificateParseError(lineno, f"step number {toks[1]} out of sequence (expected {expected})")
    kind = toks[2]
    try:
        e = toks.index("embed")
    except ValueError:
        raise CertificateParseError(lineno, "step without embed") from None
    args, verts = toks[3:e], toks[e + 1:]
    try:
        embed = tuple(amb.position(amb.parse_label(v)) for v in verts)
    except ComplexError as exc:
        raise CertificateParseError(lineno, str(exc)) from None
    info = {"kind": kind, "embed": embed, "n": None, "i": None, "rule": None, "ref": None,
            "faces": [], "thins": [], "recorded": False}
    if kind == "an1":
        if len(args) != 2:
            raise CertificateParseError(lineno, "an1 needs n=<n> i=<i>")
        info["n"], info["i"] = _kv(args[0], "n", lineno), _kv(args[1], "i", lineno)
    elif kind in ("an2", "an3"):
        if args:
            raise CertificateParseError(lineno, f"{kind} takes no parameters")
    elif kind == "trusted":
        if len(args) not in (1, 3):
            raise CertificateParseError(lineno, "trusted needs a rule id and optional n= i=")
        info["rule"] = args[0]
        if len(args) == 3:
            info["n"], info["i"] = _kv(args[1], "n", lineno), _kv(args[2], "i", lineno)
    elif kind == "derived":
        if len(args) != 1:
            raise CertificateParseError(lineno, "derived needs a certificate id")
        info["ref"] = args[0]
    else:
        raise CertificateParseError(lineno, f"unknown step kind {kind!r}")
    return info


def loads(text: str) -> tuple[Certificate, dict[str, Certificate]]:
    """Parse a certificate file; returns (last certificate, all by id)."""
    blocks: list[_Block] = []
    cur: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        head = toks[0]
        if head == "cert":
            if cur is not None:
                raise CertificateParseError(lineno, "nested cert block (missing 'end')")
            if len(toks) != 2:
                raise CertificateParseError(lineno, "cert line needs exactly one id")
            cur = _Block(toks[1], lineno)
            continue
        if cur is None:
            raise CertificateParseError(lineno, f"{head!r} outside a cert block")
        if head == "end":
            if cur.ambient is None or cur.claim is None:
                raise CertificateParseError(lineno, "block lacks ambient or claim")
            blocks.append(cur)
            cur = None
        elif head == "ambient":
            if len(toks) != 2:
                raise CertificateParseError(lineno, "ambient line needs one id")
            try:
                cur.ambient = ambient_from_id(toks[1])
            except ComplexError as exc:
                raise CertificateParseError(lineno, str(exc)) from None
        elif head == "smallthin-explicit":
            if cur.claim is not None or cur.small_thin is not None:
                raise CertificateParseError(lineno, "misplaced smallthin-explicit")
            cur.small_thin = []
        elif head in ("thin", "smallthin", "add", "addthin"):
            if cur.ambient is None:
                raise CertificateParseError(lineno, "ambient must come first")
            try:
                m = cur.ambient.mask(cur.ambient.parse_label(v) for v in toks[1:])
            except ComplexError as exc:
                raise CertificateParseError(lineno, str(exc)) from None
            if head == "thin":
                if cur.claim is not None:
                    raise CertificateParseError(lineno, "thin lines must precede the claim")
                if len(toks) != 4:
                    raise CertificateParseError(lineno, "thin entries are triangles")
                cur.thin.append(m)
            elif head == "smallthin":
                if cur.small_thin is None or cur.claim is not None:
                    raise CertificateParseError(lineno, "smallthin needs smallthin-explicit before the claim")
                if len(toks) != 4:
                    raise CertificateParseError(lineno, "thin entries are triangles")
                cur.small_thin.append(m)
            else:
                if not cur.steps:
                    raise CertificateParseError(lineno, f"{head} before any step")
                st = cur.steps[-1]
                st["recorded"] = True
                st["faces" if head == "add" else "thins"].append(m)
        elif head == "claim":
            if cur.ambient is None:
                raise CertificateParseError(lineno, "ambient must come first")
            if len(toks) != 4 or not toks[2].startswith("small=") or not toks[3].startswith("big="):
                raise CertificateParseError(lineno, "claim needs <ambient> small=<ref> big=<ref>")
            if toks[1] != cur.ambient.name:
                raise CertificateParseError(lineno, "claim ambient differs from block ambient")
            cur.claim = (toks[2][6:], toks[3][4:], lineno)
        elif head == "step":
            if cur.claim is None:
                raise CertificateParseError(lineno, "steps must follow the claim")
            cur.steps.append(_parse_step(cur.ambient, toks, lineno, len(cur.steps) + 1))
            cur.steps[-1]["lineno"] = lineno
        else:
            raise CertificateParseError(lineno, f"unknown record {head!r}")
    if cur is not None:
        raise CertificateParseError(cur.lineno, "unterminated cert block")
    if not blocks:
        raise CertificateParseError(0, "no certificate blocks")

    built: dict[str, Certificate] = {}
    for b in blocks:
        if b.id in built:
            raise CertificateParseError(b.lineno, f"duplicate certificate id {b.id!r}")
        amb = b.ambient
        small_ref, big_ref, cl = b.claim
        small_k = _parse_ref(amb, small_ref, cl)
        big_k = _parse_ref(amb, big_ref, cl)
        try:
            big = ScaledComplex(big_k, b.thin)
            if b.small_thin is None:
                small = induce(big, small_k)
            else:
                small = ScaledComplex(small_k, b.small_thin)
            claim = ScaledInclusion(small, big)
        except (ComplexError, CertificateError) as exc:
            raise CertificateParseError(cl, str(exc)) from None
        steps = []
        deps = []
        for st in b.steps:
            if st["kind"] == "derived":
                if st["ref"] not in built:
                    raise CertificateParseError(st["lineno"], f"dangling certificate reference {st['ref']!r}")
                deps.append(built[st["ref"]])
            rec = st["recorded"]
            steps.append(Step(st["kind"], st["embed"], st["n"], st["i"], st["rule"], st["ref"],
                              frozenset(st["faces"]) if rec else None,
                              frozenset(st["thins"]) if rec else None))
        built[b.id] = Certificate(b.id, claim, tuple(steps), tuple({d.id: d for d in deps}.values()))
    return built[blocks[-1].id], built


def read(path) -> tuple[Certificate, dict[str, Certificate]]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(path, cert: Certificate, store=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(cert, store))
