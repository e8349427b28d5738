"""Random small definite programs for soundness fuzzing."""

import random

from ordaccept.parser import parse_source

CONSTANTS = ["a", "b", "[]"]
FUNCTORS = [("f", 1), ("g", 2), (".", 2)]
VARS = ["X", "Y", "Z", "W"]


def _signature(rng):
    consts = rng.sample(CONSTANTS, rng.randint(1, 2))
    funs = rng.sample(FUNCTORS, rng.randint(1, 3 - (len(consts) == 2) + 0))
    return consts, funs[: 5 - len(consts)]


def _term(rng, consts, funs, depth):
    r = rng.random()
    if depth == 0 or r < 0.35:
        return rng.choice(VARS) if rng.random() < 0.6 else rng.choice(consts)
    name, n = rng.choice(funs)
    args = [_term(rng, consts, funs, depth - 1) for _ in range(n)]
    if name == ".":
        return f"[{args[0]}|{args[1]}]"
    return f"{name}({', '.join(args)})"


def random_program(seed: int) -> str:
    """Source text with at most 4 predicates, 3 clauses each and 5 symbols."""
    rng = random.Random(seed)
    consts, funs = _signature(rng)
    npred = rng.randint(1, 4)
    preds = [(f"p{i}", rng.randint(1, 2)) for i in range(npred)]
    lines = []
    alts = list(consts) + [f"{n}({', '.join(['t'] * k)})" if n != "." else "[t|t]"
                           for n, k in funs]
    lines.append(":- type t ::= " + " ; ".join(alts) + ".")
    name, arity = preds[0]
    entry = [rng.choice(["ground(t)", "ground(t)", "ground(t)", "var", "any"])
             for _ in range(arity)]
    lines.append(f":- entry {name}({', '.join(entry)}).")
    structural = seed % 2 == 0
    for pname, arity in preds:
        for _ in range(rng.randint(1, 3)):
            hargs = [_term(rng, consts, funs, 2) for _ in range(arity)]
            if structural and rng.random() < 0.7:
                name, n = rng.choice(funs)
                sub = [rng.choice(VARS[:2]) for _ in range(n)]
                hargs[0] = f"[{sub[0]}|{sub[1]}]" if name == "." else f"{name}({', '.join(sub)})"
            head = f"{pname}({', '.join(hargs)})"
            body = []
            for _ in range(rng.choice([0, 1, 1, 2])):
                qn, qa = rng.choice(preds)
                bargs = [_term(rng, consts, funs, 2) for _ in range(qa)]
                if structural and rng.random() < 0.7:
                    bargs[0] = rng.choice(VARS[:2])
                body.append(f"{qn}({', '.join(bargs)})")
            lines.append(head + (" :- " + ", ".join(body) if body else "") + ".")
    return "\n".join(lines) + "\n"


def random_programs(n: int, start: int = 0):
    for seed in range(start, start + n):
        text = random_program(seed)
        yield seed, text, parse_source(text)
