"""Command-line drivers: ``cqca <command> [--class NAME | --spec FILE] ...``.

Every command prints to stdout unless ``--out DIR`` is given, in which case
artifacts are written to DIR together with ``manifest.json``.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import automaton as am
from . import codes, correlations, dynamics, hybrid, lattice, tableau

EXIT_BAD_SPEC = 2
EXIT_BUDGET = 3
FIT_WINDOW = (1 << 6, 1 << 13)
STREAM_FORMATS = ("csv", "ppm", "pbm", "text")


class SpecError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``8``, ``1..32``, ``1..32:2`` or ``8,16,32``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, rest = part.split("..", 1)
            hi, _, step = rest.partition(":")
            out += list(range(int(lo), int(hi) + 1, int(step) if step else 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty range {text!r}")
    return out


def load(args, default: str = "dense") -> lattice.CircuitSpec:
    try:
        if args.spec:
            spec = lattice.load_spec(args.spec)
        elif args.cls:
            spec = lattice.preset(args.cls)
        else:
            spec = lattice.HYBRID_PRESET if default == "hybrid" else lattice.preset(default)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise SpecError(str(exc)) from exc
    return spec


def operator_sites(xi, a: int) -> dict[int, str]:
    """{site: label} relative to cell 0 for a symplectic vector."""
    out: dict[int, int] = {}
    for j in range(a):
        for b in (0, 1):
            for n in xi[2 * j + b].exponents():
                out[n * a + j] = out.get(n * a + j, 0) | (1 << b)
    return {x: "IXZY"[c] for x, c in out.items() if c}


def initial_group(text: str, m: int, a: int) -> tableau.StabilizerGroup:
    """Translation-invariant group from comma-separated per-cell generators."""
    cell = [operator_sites(am.parse_operator(tok, a), a) for tok in text.split(",")]
    return tableau.StabilizerGroup.translation_invariant(cell, m, a)


class Output:
    def __init__(self, args, spec=None):
        self.dir = None
        self.stream = None
        self.files: list[str] = []
        self.args = args
        self.spec = spec
        out = getattr(args, "out", None)
        if out in STREAM_FORMATS:
            self.stream = out
        elif out:
            self.dir = Path(out)
            self.dir.mkdir(parents=True, exist_ok=True)

    def wants(self, fmt: str) -> bool:
        return self.stream is None or self.stream == fmt

    def emit(self, name: str, data, fmt: str = "csv"):
        if not self.wants(fmt):
            return
        if self.dir is None:
            if isinstance(data, bytes):
                sys.stdout.flush()
                sys.stdout.buffer.write(data)
                sys.stdout.buffer.flush()
            else:
                sys.stdout.write(data if data.endswith("\n") else data + "\n")
            return
        path = self.dir / name
        path.write_bytes(data) if isinstance(data, bytes) else path.write_text(data)
        self.files.append(name)

    def finish(self):
        if self.dir is None:
            return
        a = self.args
        manifest = {
            "command": a.command,
            "spec": self.spec.to_json() if self.spec is not None else None,
            "seed": a.seed,
            "m": a.m,
            "t": a.t,
            "trials": a.trials,
            "basis": a.basis,
            "outputs": sorted(self.files),
            "version": __version__,
        }
        (self.dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _pmap(fn, items, jobs: int):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# -- commands ---------------------------------------------------------------------

def cmd_classify(args):
    out = Output(args)
    if args.all_square:
        rows = ["v_plus,v_minus,class"]
        for spec in lattice.all_square_specs():
            rows.append(f"{spec.edges[0]},{spec.edges[1]},{am.classify(spec)}")
        out.emit("classes.csv", "\n".join(rows) + "\n")
    else:
        spec = load(args)
        out.spec = spec
        out.emit("class.txt", am.classify(spec) + "\n", "text")
    out.finish()
    return 0


def cmd_symmetries(args):
    out = Output(args)
    specs = list(lattice.all_square_specs()) if args.all_square else [load(args)]
    rows = ["v_plus,v_minus,symmetries"]
    for spec in specs:
        ops = sorted(op.value for op in am.detect_symmetries(spec))
        rows.append(f"{spec.edges[0]},{spec.edges[1]},{' '.join(ops)}")
    out.spec = None if args.all_square else specs[0]
    out.emit("symmetries.csv", "\n".join(rows) + "\n")
    out.finish()
    return 0


def cmd_matrix(args):
    spec = load(args)
    out = Output(args, spec)
    out.emit("matrix.txt", lattice.build(spec).text() + "\n", "text")
    out.finish()
    return 0


def cmd_charpoly(args):
    spec = load(args)
    out = Output(args, spec)
    M = lattice.build(spec)
    chi, mu = am.char_poly(M), am.min_poly(M)
    out.emit("charpoly.txt", f"char: {chi}\nmin: {mu}\ntrace: {am.trace(M)}\n", "text")
    out.finish()
    return 0


def cmd_spread(args):
    spec = load(args)
    out = Output(args, spec)
    M = lattice.build(spec)
    xi = am.parse_operator(args.op, M.a)
    t = args.t or 256
    if out.wants("ppm") or out.wants("text"):
        fp = dynamics.evolve_operator(M, xi, t)
        out.emit("spread.csv", fp.stats().to_csv())
        out.emit("spread.ppm", fp.to_ppm(), "ppm")
        out.emit("spread.txt", fp.to_text(), "text")
    else:
        out.emit("spread.csv", dynamics.spread_counts(M, xi, t).to_csv())
    out.finish()
    return 0


def cmd_tracemap(args):
    spec = load(args)
    out = Output(args, spec)
    tf = dynamics.trace_footprint(lattice.build(spec), args.t or 256)
    counts = tf.counts()
    cum = np.cumsum(counts)
    out.emit("traces.csv", "t,weight,cumulative\n" + "".join(
        f"{t},{c},{s}\n" for t, (c, s) in enumerate(zip(counts, cum))))
    out.emit("traces.pbm", tf.to_pbm(), "pbm")
    out.finish()
    return 0


def cmd_fractaldim(args):
    spec = load(args)
    out = Output(args, spec)
    M = lattice.build(spec)
    t = args.t or FIT_WINDOW[1]
    window = (FIT_WINDOW[0], t)
    if args.op:
        cum = dynamics.spread_counts(M, am.parse_operator(args.op, M.a), t).cumulative()
        source = args.op
    else:
        cum = np.cumsum(dynamics.trace_footprint(M, t).counts())
        source = "trace"
    slope, err = dynamics.fractal_dimension(cum, window)
    out.emit("fractaldim.csv", f"source,fit_lo,fit_hi,slope,stderr\n{source},{window[0]},{window[1]},"
             f"{slope:.6f},{err:.6f}\n")
    out.finish()
    return 0


def _recurrence_point(job):
    spec, m, budget = job
    return dynamics.recurrence_time(lattice.build(spec), m, budget)


def cmd_recurrence(args):
    spec = load(args)
    out = Output(args, spec)
    ms = parse_range(args.m or "1..16")
    budget = dynamics.default_budget()
    res = _pmap(_recurrence_point, [(spec, m, budget) for m in ms], args.jobs)
    body = "m,tau,shift_d,lower_bound\n" + "".join(
        f"{r.m},{r.tau},{r.shift_d},{int(r.lower_bound)}\n" for r in res)
    out.emit("recurrence.csv", body)
    out.finish()
    if any(r.lower_bound for r in res):
        print("recurrence budget exceeded; lower bounds emitted", file=sys.stderr)
        return EXIT_BUDGET
    return 0


def cmd_gliders(args):
    spec = load(args)
    out = Output(args, spec)
    M = lattice.build(spec)
    rows = ["operator,velocity"]
    for xi, n in dynamics.detect_gliders(M):
        rows.append(f"{xi},{n}")
    out.emit("gliders.csv", "\n".join(rows) + "\n")
    out.finish()
    return 0


def _first(args, default):
    return parse_range(args.m)[0] if args.m else default


def _unitary_history(g, spec, t_max: int):
    """Groups at full steps t = 0..t_max."""
    out = [g]
    for _ in range(t_max):
        g = tableau.step(g, spec)
        out.append(g)
    return out


def cmd_page(args):
    spec = load(args)
    out = Output(args, spec)
    m = _first(args, 64)
    g = tableau.random_product_state(m, spec.a, np.random.default_rng(args.seed))
    rows = [(t, tableau.page_curve(h)) for t, h in enumerate(_unitary_history(g, spec, args.t or m))]
    out.emit("page.csv", tableau.page_csv(rows))
    out.finish()
    return 0


def cmd_mutualinfo(args):
    spec = load(args, "hybrid")
    out = Output(args, spec)
    m = _first(args, 128)
    t_max = args.t or m
    if spec.measurement is not None:
        groups = hybrid.run_hybrid(spec, m, t_max, keep_groups=True, stop_at_plateau=False).groups
    else:
        g = tableau.random_product_state(m, spec.a, np.random.default_rng(args.seed))
        groups = _unitary_history(g, spec, t_max)
    buf = ["t,A,mean_I"]
    for t, g in enumerate(groups):
        I = tableau.mean_mutual_information(g)
        buf += [f"{t},{l},{I[l]:.6g}" for l in range(g.L // 2 + 1)]
    out.emit("mutualinfo.csv", "\n".join(buf) + "\n")
    out.finish()
    return 0


def cmd_d1(args):
    spec = load(args)
    out = Output(args, spec)
    rows = ["m,L,t_best,d1,d1_over_L"]
    series = ["m,t,d1"]
    for m in parse_range(args.m or "10,20,40"):
        g0 = initial_group(args.basis or "Z1", m, spec.a)
        snap = codes.build_quasicyclic(spec, g0, args.t or codes.snapshot_horizon(spec, m))
        rows.append(f"{m},{g0.L},{snap.t},{snap.d1},{snap.d1 / g0.L:.6f}")
        series += [f"{m},{t},{d}" for t, d in enumerate(snap.d1_series)]
        out.emit(f"code_m{m}.txt", snap.to_text(), "text")
    out.emit("d1.csv", "\n".join(rows) + "\n")
    out.emit("d1_series.csv", "\n".join(series) + "\n")
    out.finish()
    return 0


def _erasure_point(job):
    gens, a, e, trials, seed = job
    g = tableau.StabilizerGroup(gens, a, check=False)
    return codes.erasure_failure_rate(g, codes.ErasureModel(e, trials, seed))


def cmd_erasure(args):
    spec = load(args)
    out = Output(args, spec)
    trials = args.trials or 10_000
    rows = []
    for m in parse_range(args.m or "10,20,40"):
        g0 = initial_group(args.basis or "Z1", m, spec.a)
        snap = codes.build_quasicyclic(spec, g0, codes.snapshot_horizon(spec, m))
        g, L = snap.group, snap.group.L
        es = [float(x) for x in args.e.split(",")] if args.e else [n / L for n in range(L // 8, L // 2 + 1)]
        res = _pmap(_erasure_point, [(g.gens, g.a, e, trials, args.seed) for e in es], args.jobs)
        s = snap.rate
        for e, (p, se, fails) in zip(es, res):
            rmt = codes.rmt_failure_model(e, s, L, rounded=True) if e < codes.threshold(s) else None
            rows.append((L, e, trials, fails, p, se, rmt))
    body = "L," + codes.erasure_csv([]) + "".join(
        f"{r[0]}," + codes.erasure_csv([r[1:]]).split("\n", 1)[1] for r in rows)
    out.emit("erasure.csv", body)
    out.finish()
    return 0


def cmd_hybrid(args):
    spec = load(args, "hybrid")
    if spec.measurement is None:
        spec = lattice.CircuitSpec(spec.lattice, spec.core, spec.edges, spec.convention,
                                   lattice.MeasurementSchedule(args.basis or "X", 0), spec.label)
    out = Output(args, spec)
    m = _first(args, 32)
    tr = hybrid.run_hybrid(spec, m, args.t or 2 * m)
    out.emit("purification.csv", tr.to_csv())
    if tr.t_star is not None:
        out.emit("plateau.txt", f"t_star={tr.t_star} S={tr.entropy[tr.t_star]}\n", "text")
        if tr.plateau.k == tr.plateau.L:
            grid = hybrid.perturb_and_track(tr.plateau, spec, args.t or m, site=tr.plateau.L - 1)
            out.emit("lightdark.csv", grid.to_csv())
            out.emit("lightdark.pbm", grid.to_pbm(), "pbm")
    out.finish()
    return 0


def cmd_correlations(args):
    spec = load(args)
    out = Output(args, spec)
    text = []
    for mu in "+-":
        text.append(f"channel {mu}:\n{correlations.channel(spec, mu)}")
    try:
        text.append(f"ergodicity: {correlations.ergodicity_class(spec).value}")
    except ValueError as exc:
        text.append(f"ergodicity: n/a ({exc})")
    out.emit("channels.txt", "\n".join(text) + "\n", "text")
    out.emit("correlations.csv", correlations.correlation_csv(spec, [0, 0.5, 1, 1.5, 2]))
    out.finish()
    return 0


COMMANDS = {
    "classify": (cmd_classify, "class of each iSWAP spec"),
    "symmetries": (cmd_symmetries, "strong point-group symmetries"),
    "matrix": (cmd_matrix, "full-period automaton matrix"),
    "charpoly": (cmd_charpoly, "characteristic and minimal polynomials"),
    "spread": (cmd_spread, "light-cone footprint of one operator"),
    "tracemap": (cmd_tracemap, "Tr(M^t) footprint"),
    "fractaldim": (cmd_fractaldim, "log-log slope of cumulative counts"),
    "recurrence": (cmd_recurrence, "recurrence time on m cells"),
    "gliders": (cmd_gliders, "one-cell gliders"),
    "page": (cmd_page, "Page curves from a random product state"),
    "mutualinfo": (cmd_mutualinfo, "mean mutual information per region size"),
    "d1": (cmd_d1, "contiguous code distance of quasicyclic snapshots"),
    "erasure": (cmd_erasure, "Monte Carlo erasure failure rates"),
    "hybrid": (cmd_hybrid, "purification with measurements"),
    "correlations": (cmd_correlations, "two-point correlation channels"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--spec", help="circuit spec JSON file")
    src.add_argument("--class", dest="cls", help="preset class name (default dense; df19+X for hybrid)")
    common.add_argument("--m", help="cells: N, A..B[:step] or a comma list")
    common.add_argument("--t", type=int, help="time steps")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int)
    common.add_argument("--basis", help="measurement basis or initial per-cell generators")
    common.add_argument("--out", help="output directory, or csv|ppm|pbm|text for stdout")
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="cqca", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        if name in ("classify", "symmetries"):
            sp.add_argument("--all-square", action="store_true")
        if name in ("spread", "fractaldim"):
            sp.add_argument("--op", default="Z1" if name == "spread" else None)
        if name == "erasure":
            sp.add_argument("--e", help="comma-separated erasure fractions")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        return fn(args)
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC


if __name__ == "__main__":
    sys.exit(main())
