"""Command-line entry point.

Every library operation is reachable through one subcommand; runs are
deterministic given the ladder kind, seed, bound and RNG seed.  Exit status
is 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys as _sys

from higherwalks import basis as basis_mod
from higherwalks import coherence as coh
from higherwalks import fsystem as fsys
from higherwalks import simplicial as simp
from higherwalks import walks as walks_mod
from higherwalks.chains import Chain
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, OrdinalSyntaxError, parse


def _ladder_system(args) -> LadderSystem:
    spec = args.ladder
    if spec == "canonical":
        return LadderSystem(parse(args.bound), "canonical")
    if spec.startswith("seeded:"):
        return LadderSystem(parse(args.bound), "seeded", int(spec.split(":", 1)[1]))
    raise SystemExit(2)


def _tuple_arg(text: str):
    return tuple(parse(p.strip()) for p in text.split(","))


def _emit(args, payload, text_lines):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _chain_from_args(args, degree=None) -> Chain:
    if args.chain_file:
        with open(args.chain_file) as fh:
            data = json.load(fh)
    else:
        data = json.loads(args.chain)
    return Chain.from_json(data, degree)


# ---------------------------------------------------------------------------


def cmd_ord(args):
    if args.op == "parse":
        x = parse(args.a)
        _emit(args, {"canonical": str(x), "class": x.classify()}, [str(x)])
    elif args.op == "cmp":
        a, b = parse(args.a), parse(args.b)
        verdict = "LT" if a < b else ("GT" if b < a else "EQ")
        _emit(args, {"cmp": verdict}, [verdict])
    elif args.op == "add":
        total = parse(args.a) + parse(args.b)
        _emit(args, {"sum": str(total)}, [str(total)])
    elif args.op == "classify":
        x = parse(args.a)
        payload = {"class": x.classify(), "cof_rank": x.cof_rank.name}
        if x.is_successor:
            payload["predecessor"] = str(x.predecessor)
        _emit(args, payload, [f"{x}: {payload['class']} (cofinality rank {payload['cof_rank']})"])
    return 0


def cmd_ladder(args):
    sys = _ladder_system(args)
    ctx = _tuple_arg(args.context)
    if args.op == "show" and len(ctx) != 1:
        raise SystemExit(2)
    view = sys.compound(ctx)
    if view is None:
        _emit(args, {"context": [str(c) for c in ctx], "defined": False}, ["UNDEFINED"])
        return 0
    ot = view.order_type()
    elems = view.prefix(args.count)
    truncated = ot is None or args.count < ot
    payload = {
        "context": [str(c) for c in ctx],
        "elements": [str(e) for e in elems],
        "truncated": bool(truncated),
    }
    _emit(args, payload, [", ".join(payload["elements"]) + (" ..." if truncated else "")])
    return 0


def cmd_walk(args):
    sys = _ladder_system(args)
    alpha, beta = parse(args.to), parse(getattr(args, "from"))
    if args.internal:
        trace = walks_mod.internal_trace(sys, parse(args.internal), alpha, beta)
    else:
        trace = walks_mod.upper_trace(sys, alpha, beta)
    payload = {
        "steps": [str(s) for s in trace.steps],
        "lower": [str(s) for s in trace.lower],
        "rho2": trace.rho2,
    }
    if not args.internal:
        payload["rho1"] = walks_mod.rho1(sys, alpha, beta)
    lines = [
        "trace: " + " > ".join(payload["steps"]),
        "lower: " + ", ".join(payload["lower"]),
        f"rho2 = {trace.rho2}" + (f", rho1 = {payload['rho1']}" if "rho1" in payload else ""),
    ]
    _emit(args, payload, lines)
    return 0


def _tree_dot(node, lines, counter):
    me = counter[0]
    counter[0] += 1
    label = ",".join(str(x) for x in node.input)
    out = "-" if node.output is None else str(node.output)
    sign = "" if node.sign is None else (" +" if node.sign > 0 else " -")
    lines.append(f'  n{me} [label="({label}) -> {out}{sign}"];')
    for child in node.children:
        cid = counter[0]
        _tree_dot(child, lines, counter)
        lines.append(f"  n{me} -> n{cid};")


def cmd_tr2(args):
    sys = _ladder_system(args)
    vec = _tuple_arg(args.tuple)
    if args.sign:
        tree = walks_mod.tr2_signed(sys, 1 if args.sign == "+" else -1, *vec)
    else:
        tree = walks_mod.tr2(sys, *vec)
    if args.format == "dot":
        lines = ["digraph tr2 {"]
        _tree_dot(tree, lines, [0])
        lines.append("}")
        print("\n".join(lines))
        return 0
    payload = tree.to_dict()
    outputs = [(("+" if s > 0 else "-") if s else "") + str(o) for s, o in tree.outputs()]
    _emit(args, payload, [f"nodes: {tree.node_count()}", "outputs: " + ", ".join(outputs)])
    return 0


def _slice_rows(support):
    rows = []
    for tup in sorted(support):
        rows.append([str(x) for x in tup] + [str(support[tup])])
    return rows


def cmd_f(args):
    sys = _ladder_system(args)
    if args.op == "coeff":
        value = fsys.f_coeff(sys, _tuple_arg(args.tuple), _tuple_arg(args.target))
        _emit(args, {"coeff": value}, [str(value)])
        return 0
    if args.op == "slice":
        vec = _tuple_arg(args.tuple)
        if args.pivot:
            support = fsys.support_slice(sys, vec, parse(args.pivot))
        else:
            support = fsys.x_slice(sys, vec)
        rows = _slice_rows(support)
        if args.format == "csv":
            width = len(vec) + 1
            print(",".join(["x", "y", "z", "w"][:width] + ["coeff"]))
            for row in rows:
                print(",".join(row))
        else:
            _emit(args, {"support": rows}, ["  ".join(r) for r in rows] or ["(empty)"])
        return 0
    if args.op == "verify":
        rng = random.Random(args.seed)
        report = fsys.verify_coherence(sys, _tuple_arg(args.tuple), args.samples, rng)
        _emit(args, report, [("PASS" if report["pass"] else "FAIL") + f" support={report['support_size']}"])
        return 0 if report["pass"] else 1
    if args.op == "m":
        value = fsys.m_value(sys, parse(args.beta), parse(args.gamma))
        _emit(args, {"m": str(value)}, [str(value)])
        return 0
    if args.op == "relativize":
        rng = random.Random(args.seed)
        report = fsys.relativize_check(sys, _tuple_arg(args.pair), parse(args.gamma), args.samples, rng)
        _emit(args, report, [("PASS" if report["pass"] else "FAIL") + f" checked={report['checked']}"])
        return 0 if report["pass"] else 1
    raise SystemExit(2)


def cmd_basis(args):
    sys = _ladder_system(args)
    eps = None if args.eps == "ambient" else parse(args.eps)
    spec = basis_mod.BasisSpec(args.n, eps, sys)
    if args.op == "list":
        members = basis_mod.members_in_window(spec, _tuple_arg(args.window))
        rows = [",".join(str(x) for x in m) for m in members]
        _emit(args, {"members": rows}, rows or ["(none)"])
        return 0
    if args.op == "member":
        verdict = basis_mod.is_basis_member(spec, _tuple_arg(args.tuple))
        _emit(args, {"member": verdict}, ["true" if verdict else "false"])
        return 0
    if args.op == "decompose":
        chain = _chain_from_args(args, spec.n - 1)
        try:
            result = basis_mod.decompose(spec, chain)
        except basis_mod.NotABoundary as exc:
            print(f"not decomposable: {exc}", file=_sys.stderr)
            return 1
        payload = [{"coeff": z, "gen": [str(x) for x in g]} for z, g in result]
        lines = [f"{z:+d} * <{','.join(str(x) for x in g)}>" for z, g in result]
        _emit(args, payload, lines or ["0"])
        return 0
    if args.op == "verify":
        rng = random.Random(args.seed)
        report = verify_basis(spec, rng, args.samples)
        _emit(args, report, [("PASS" if report["pass"] else "FAIL") + f" ({report})"])
        return 0 if report["pass"] else 1
    raise SystemExit(2)


def verify_basis(spec, rng, samples: int) -> dict:
    """Sampled independence and spanning report for one basis."""
    from higherwalks.chains import boundary_of_generator
    from higherwalks.ordinals import random_below

    members = basis_mod.sample_members(spec, rng, samples)
    recovered = 0
    for g in members:
        got = basis_mod.decompose(spec, Chain.generator(g).boundary())
        if got == [(1, g)]:
            recovered += 1
    all_faces = {}
    cols = []
    for g in members:
        col = boundary_of_generator(g)
        for t in col:
            all_faces.setdefault(t, len(all_faces))
        cols.append(col)
    matrix = [[0] * len(cols) for _ in range(len(all_faces))]
    for j, col in enumerate(cols):
        for t, z in col.items():
            matrix[all_faces[t]][j] = z
    diag = simp.smith_normal_form(matrix)
    independent = len(diag) == len(members) and all(d == 1 for d in diag)
    top = spec.eps if spec.eps is not None else spec.sys.bound
    roundtrips = 0
    trials = max(10, samples // 4)
    for _ in range(trials):
        coords = set()
        while len(coords) < spec.n + 1:
            coords.add(random_below(top, rng))
        x = Chain.generator(tuple(sorted(coords))).boundary()
        s = basis_mod.section_s(spec, x)
        if s.boundary() == x and all(basis_mod.is_basis_member(spec, t) for t in s.support()):
            roundtrips += 1
    return {
        "members_sampled": len(members),
        "recovered": recovered,
        "independent": independent,
        "roundtrips": f"{roundtrips}/{trials}",
        "pass": recovered == len(members) and independent and roundtrips == trials,
    }


def cmd_homology(args):
    sys = _ladder_system(args)
    if args.op == "compute" or args.op == "tail-acyclic":
        if args.faces_file:
            with open(args.faces_file) as fh:
                lines = [ln.strip() for ln in fh if ln.strip()]
        else:
            lines = [ln for ln in args.faces.split(";") if ln.strip()]
        faces = [_tuple_arg(line) for line in lines]
        verts = sorted({v for f in faces for v in f})
        cx = simp.Complex(verts, faces)
        if args.op == "compute":
            hom = simp.reduced_homology(cx)
            payload = {str(k): {"betti": b, "torsion": list(t)} for k, (b, t) in hom.items()}
            lines = [f"H~_{k} = Z^{b}" + ("" if not t else " + " + "+".join(f"Z/{d}" for d in t)) for k, (b, t) in sorted(hom.items())]
            _emit(args, payload, lines)
            return 0
        verdict = simp.is_tail_acyclic(cx)
        _emit(args, {"tail_acyclic": verdict}, ["true" if verdict else "false"])
        return 0
    if args.op == "good-graph":
        vertices = _tuple_arg(args.vertices)
        edges = [_tuple_arg(e) for e in args.edges.split(";") if e.strip()]
        verdict = simp.is_good_graph(vertices, edges)
        _emit(args, {"good": verdict}, ["true" if verdict else "false"])
        return 0
    if args.op == "walk-graph":
        gamma = parse(args.gamma)
        starts = _tuple_arg(args.starts) if args.starts else None
        if args.elementary:
            edges, truncated = simp.elementary_good_graph(sys, gamma, starts)
        else:
            edges, truncated = simp.walk_graph(sys, gamma, starts)
        rows = [",".join(str(x) for x in sorted(e)) for e in edges]
        _emit(args, {"edges": rows, "truncated": truncated}, rows)
        return 0
    raise SystemExit(2)


def cmd_cohere(args):
    sys = _ladder_system(args)
    if args.op == "phi-theta":
        theta = coh.Theta()
        value = coh.phi_theta(sys, theta, parse(args.beta), parse(args.alpha))
        _emit(args, {"value": value}, [str(value)])
        return 0
    if args.op == "s1":
        value = coh.s1(sys, parse(args.gamma), parse(args.alpha), parse(args.beta))
        _emit(args, {"value": value}, [str(value)])
        return 0
    if args.op == "s2":
        support = coh.s2(sys, parse(args.delta), parse(args.beta), parse(args.gamma))
        rows = _slice_rows(support)
        _emit(args, {"support": rows}, ["  ".join(r) for r in rows] or ["(empty)"])
        return 0
    family_name = args.family
    if family_name == "phi-x":
        family = coh.SliceFamily(sys, args.n)
    elif family_name == "rho2":
        family = coh.Rho2Family(sys)
    elif family_name == "zero":
        family = coh.ConstantZeroFamily(args.n)
    else:
        raise SystemExit(2)
    tuples = [_tuple_arg(t) for t in args.tuples.split(";") if t.strip()]
    window = list(_tuple_arg(args.window))
    if args.op == "check-I":
        reports = coh.check_coherent_I(family, tuples, window)
    elif args.op == "check-II":
        fam2 = coh.a_n_convert(family, family.n)
        pairs = [(t[-2], t[-1]) for t in tuples]
        reports = coh.check_coherent_II(fam2, pairs, window, betas=window)
    else:
        raise SystemExit(2)
    ok = all(r.get("pass") is not False for r in reports)
    _emit(args, reports, [json.dumps(r, sort_keys=True) for r in reports])
    return 0 if ok else 1


def cmd_export_fig(args):
    sys = _ladder_system(args)
    vec = _tuple_arg(args.tuple)
    if args.pivot:
        support = fsys.support_slice(sys, vec, parse(args.pivot))
        kind = f"slice at pivot {args.pivot}"
    else:
        support = fsys.x_slice(sys, vec)
        kind = "pinned first coordinate"
    rows = _slice_rows(support)
    width = len(vec) + 1
    header = ["x", "y", "z", "w"][:width] + ["coeff"]
    csv_path = args.out + ".csv"
    with open(csv_path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    png_path = args.out + ".png"
    _render_scatter(rows, width, f"({','.join(str(v) for v in vec)}): {kind}", png_path)
    print(csv_path)
    print(png_path)
    return 0


def _render_scatter(rows, width, title, png_path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ys = sorted({row[width - 2] for row in rows})
    zs = sorted({row[width - 1] for row in rows})
    y_rank = {v: i for i, v in enumerate(ys)}
    z_rank = {v: i for i, v in enumerate(zs)}
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for row in rows:
        coeff = int(row[-1])
        ax.scatter(
            y_rank[row[width - 2]],
            z_rank[row[width - 1]],
            c="black" if coeff < 0 else "gray",
            marker="o" if coeff < 0 else "^",
            s=30,
        )
    ax.set_xticks(range(len(ys)))
    ax.set_xticklabels(ys, rotation=45, fontsize=7)
    ax.set_yticks(range(len(zs)))
    ax.set_yticklabels(zs, fontsize=7)
    ax.set_xlabel("second-to-last coordinate")
    ax.set_ylabel("last coordinate")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higherwalks")
    parser.add_argument("--ladder", default="canonical", help="canonical or seeded:<n>")
    parser.add_argument("--bound", default="w^4", help="universe bound (ordinal notation)")
    parser.add_argument("--format", default="text", choices=["text", "json", "dot", "csv"])
    parser.add_argument("--seed", type=int, default=0, help="RNG seed for sampling commands")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ord")
    p.add_argument("op", choices=["parse", "cmp", "add", "classify"])
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.set_defaults(func=cmd_ord)

    p = sub.add_parser("ladder")
    p.add_argument("op", choices=["show", "compound"])
    p.add_argument("context", help="comma-separated ordinal tuple")
    p.add_argument("--count", type=int, default=12)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("walk")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--internal", help="conduct the walk inside this club")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("tr2")
    p.add_argument("--tuple", required=True)
    p.add_argument("--sign", choices=["+", "-"])
    p.set_defaults(func=cmd_tr2)

    p = sub.add_parser("f")
    p.add_argument("op", choices=["coeff", "slice", "verify", "m", "relativize"])
    p.add_argument("--tuple")
    p.add_argument("--target")
    p.add_argument("--pivot")
    p.add_argument("--pair")
    p.add_argument("--beta")
    p.add_argument("--gamma")
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(func=cmd_f)

    p = sub.add_parser("basis")
    p.add_argument("op", choices=["list", "member", "decompose", "verify"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", required=True, help="ordinal notation or 'ambient'")
    p.add_argument("--window")
    p.add_argument("--tuple")
    p.add_argument("--chain")
    p.add_argument("--chain-file")
    p.add_argument("--samples", type=int, default=40)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("homology")
    p.add_argument("op", choices=["compute", "tail-acyclic", "good-graph", "walk-graph"])
    p.add_argument("--faces", help="semicolon-separated comma tuples")
    p.add_argument("--faces-file", help="file with one comma-separated face per line")
    p.add_argument("--vertices")
    p.add_argument("--edges")
    p.add_argument("--gamma")
    p.add_argument("--starts")
    p.add_argument("--elementary", action="store_true")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("cohere")
    p.add_argument("op", choices=["check-I", "check-II", "phi-theta", "s1", "s2"])
    p.add_argument("--family", default="phi-x")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--tuples")
    p.add_argument("--window")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--gamma")
    p.add_argument("--delta")
    p.set_defaults(func=cmd_cohere)

    p = sub.add_parser("export-fig")
    p.add_argument("--tuple", required=True)
    p.add_argument("--pivot")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_fig)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OrdinalSyntaxError as exc:
        print(f"syntax error: {exc}", file=_sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
