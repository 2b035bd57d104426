#!/usr/bin/env python3
"""Drives the folmt binary end to end through temp files."""

import os
import subprocess
import sys
import tempfile

BIN = os.environ.get("FOLMT_BIN", "folmt")

SIG = "(signature (funcs (c 0) (g 1)) (rels (P 1)))"
# P(g(c)): satisfiable already on one element
FORMULA = SIG + "\n(rel P (app g (app c)))\n"
# P(c) and not P(c)
CONTRA = SIG + "\n(and (rel P (app c)) (impl (rel P (app c)) bot))\n"
SPLIT = ("(signature (funcs) (rels (P 1)))\n"
         "(and (ex (rel P (var 0))) (ex (impl (rel P (var 0)) bot)))\n")


def run(*args, expect=0):
    r = subprocess.run([BIN, *args], capture_output=True, text=True)
    assert r.returncode == expect, (args, r.returncode, r.stdout, r.stderr)
    return r.stdout


def write(d, name, text):
    p = os.path.join(d, name)
    with open(p, "w") as f:
        f.write(text)
    return p


def test_parse_roundtrip(d):
    p = write(d, "f.fol", FORMULA)
    out = run("parse", "--in", p)
    assert "(rel P (app g (app c)))" in out, out
    again = write(d, "f2.fol", out)
    assert run("parse", "--in", again) == out


def test_parse_errors(d):
    p = write(d, "bad.fol", SIG + "\n(rel Nope (var 0))\n")
    r = subprocess.run([BIN, "parse", "--in", p], capture_output=True, text=True)
    assert r.returncode == 2, r
    assert "error:" in r.stderr, r.stderr
    r = subprocess.run([BIN, "parse", "--in", os.path.join(d, "missing.fol")],
                       capture_output=True, text=True)
    assert r.returncode == 2


def test_fsat_and_eval(d):
    p = write(d, "f.fol", FORMULA)
    mp = os.path.join(d, "m.fom")
    out = run("fsat", "--formula", p, "--max-domain", "3", "--emit-model", mp)
    assert out.strip() == "SAT k=1", out
    verdict = run("eval", "--model", mp, "--formula", p)
    assert verdict.strip() == "true", verdict

    c = write(d, "c.fol", CONTRA)
    out = run("fsat", "--formula", c, "--max-domain", "2")
    assert out.strip() == "UNKNOWN bound=2", out
    out = run("fsat-fixed", "--formula", c, "--domain-size", "2")
    assert out.strip() == "UNSAT", out

    s = write(d, "s.fol", SPLIT)
    ep = os.path.join(d, "s.env")
    out = run("fsat", "--formula", s, "--max-domain", "3", "--emit-model",
              os.path.join(d, "s.fom"), "--emit-env", ep)
    assert out.strip() == "SAT k=2", out
    verdict = run("eval", "--model", os.path.join(d, "s.fom"), "--formula", s,
                  "--env", ep)
    assert verdict.strip() == "true", verdict


def test_eval_rejects_mismatched_signature(d):
    p = write(d, "f.fol", FORMULA)
    other = write(d, "other.fom",
                  "(signature (funcs) (rels (P 1)))\n(model (size 1) (rel P (0)))\n")
    r = subprocess.run([BIN, "eval", "--model", other, "--formula", p],
                       capture_output=True, text=True)
    assert r.returncode == 2, r
    assert "signature" in r.stderr, r.stderr


def test_monadic(d):
    s = write(d, "s.fol", SPLIT)
    mp = os.path.join(d, "w.fom")
    out = run("monadic", "--formula", s, "--emit-model", mp)
    assert out.strip() == "SAT k=2", out
    assert run("eval", "--model", mp, "--formula", s).strip() == "true"

    c = write(d, "c.fol",
              "(signature (funcs) (rels (P 1)))\n"
              "(and (all (rel P (var 0))) (ex (impl (rel P (var 0)) bot)))\n")
    out = run("monadic", "--formula", c)
    assert out.strip() == "UNSAT", out


def test_reduce(d):
    p = write(d, "f.fol", FORMULA)
    op = os.path.join(d, "out.fol")
    out = run("reduce", "--chain", "discrete-to-binary", "--in", p, "--out", op)
    lines = [l for l in out.strip().splitlines() if l]
    assert len(lines) == 7, out
    assert lines[0].startswith("sig-gc:"), out
    assert lines[-1].startswith("to-membership:"), out
    with open(op) as f:
        reduced = f.read()
    assert reduced.startswith("(signature")

    # the reduced formula is itself searchable
    out = run("fsat", "--formula", op, "--max-domain", "0")
    assert out.strip() == "UNKNOWN bound=0", out

    # single stage with an explicit target signature
    tp = write(d, "target.fol", "(signature (funcs) (rels (R 3) (S 1)))")
    sp = write(d, "s.fol", SPLIT)
    out = run("reduce", "--chain", "embed", "--in", sp, "--out",
              os.path.join(d, "emb.fol"), "--target", tp)
    assert out.strip().startswith("embed:"), out

    r = subprocess.run([BIN, "reduce", "--chain", "nonsense", "--in", p,
                        "--out", op], capture_output=True, text=True)
    assert r.returncode == 2, r


def test_bpcp(d):
    inst = write(d, "i.bpcp", "; doubling card\n1 1\n")
    out = run("bpcp", "solve", "--instance", inst, "--max-len", "4")
    assert out.strip() == "SOLVED 1", out

    hard = write(d, "h.bpcp", "0 1\n")
    out = run("bpcp", "solve", "--instance", hard, "--max-len", "6")
    assert out.strip() == "NOSOLUTION bound=6", out

    fp = os.path.join(d, "enc.fol")
    run("bpcp", "encode", "--instance", inst, "--out", fp)
    mp = os.path.join(d, "wit.fom")
    run("bpcp", "model", "--instance", inst, "--length", "1", "--out", mp)
    assert run("eval", "--model", mp, "--formula", fp).strip() == "true"
    out = run("bpcp", "extract", "--instance", inst, "--model", mp)
    assert out.strip() == "SOLVED 1", out

    empty = write(d, "e.bpcp", "- 0\n0 -\n")
    out = run("bpcp", "solve", "--instance", empty, "--max-len", "4")
    assert out.strip() == "SOLVED 0", out
    assert run("parse", "--in", empty, "--kind", "instance") == "- 0\n0 -\n"


def test_quotient(d):
    m = write(d, "m.fom",
              "(signature (funcs) (rels (P 1)))\n"
              "(model (size 3) (rel P (0) (1)))\n")
    f = write(d, "f.fol", "(signature (funcs) (rels (P 1)))\n(ex (rel P (var 0)))\n")
    qp = os.path.join(d, "q.fom")
    out = run("quotient", "--model", m, "--formula", f, "--out", qp)
    lines = out.strip().splitlines()
    assert lines[0] == "classes 2", out
    assert lines[1:] == ["0 -> 0", "1 -> 0", "2 -> 1"], out
    assert run("eval", "--model", qp, "--formula", f).strip() == "true"


def test_no_subcommand():
    r = subprocess.run([BIN], capture_output=True, text=True)
    assert r.returncode == 2, r


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        with tempfile.TemporaryDirectory() as d:
            t(d) if t.__code__.co_argcount else t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} cli tests passed")


if __name__ == "__main__":
    sys.exit(main())
