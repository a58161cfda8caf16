"""Command-line interface: file ingestion, computation, artifact emission.

Inputs are tab- or space-separated edge lists ("i j w", 0-based vertices,
optional "#n=<int>" header), optional measure files ("i mu"), and headerless
CSV point clouds.  Every floating value is printed with 17 significant
digits so outputs round-trip bit-exactly and identical configurations
produce byte-identical files.

Exit codes: 0 success, 1 validation error, 2 numerical failure.  Errors go
to stderr prefixed "E:<CODE>:" with CODE one of CONFIG, PARSE, DOMAIN,
NUMERIC.
"""
from __future__ import annotations

import argparse
import csv
import re
import sys

import numpy as np

from . import (
    FilterSpec,
    GraphSpace,
    NumericalError,
    PhysicsSystem,
    apply_filter,
    basis_function,
    bridge_weights,
    commute_distance,
    commute_embedding,
    differential,
    dirichlet_energy,
    dirichlet_solve,
    eigendecompose,
    evolve_continuous,
    expected_hitting,
    fourier,
    gaussian_weights,
    hooke_trajectory,
    inner_a,
    inner_form,
    inverse_fourier,
    laplacian_apply,
    laplacian_eigenmaps,
    laplacian_matrix,
    lle,
    lpp,
    module_action,
    newton_trajectory,
    newton_weights,
    pca,
    pointwise_product,
    smooth,
    spectral_clustering,
    step,
    verify_bounds,
    walk_operator,
)
from .calculus import codifferential

SCHEMA = "discgeom/1"


class CliError(Exception):
    code = "CONFIG"
    exit_code = 1


class ConfigError(CliError):
    code = "CONFIG"


class ParseError(CliError):
    code = "PARSE"


class DomainError(CliError):
    code = "DOMAIN"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{key}": {_to_json(val, indent + 1)}' for key, val in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{inner}{_to_json(val, indent + 1)}" for val in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if obj is None:
        return "null"
    return _fmt(obj)


def _write_text(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _write_csv(rows, path: str | None):
    lines = [",".join(_fmt(x) for x in row) for row in rows]
    _write_text("\n".join(lines) + "\n", path)


def _write_json(obj, path: str | None):
    _write_text(_to_json(obj) + "\n", path)


def parse_edge_list(path: str) -> tuple[int, np.ndarray]:
    """Edge list "i j w" with optional "#n=<int>" header; duplicates rejected."""
    declared_n = None
    entries: dict[tuple[int, int], float] = {}
    max_idx = -1
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open graph file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = re.match(r"#\s*n\s*=\s*(\d+)\s*$", line)
                if m:
                    declared_n = int(m.group(1))
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'i j w', got {len(parts)} fields")
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if i < 0 or j < 0:
                raise ParseError(f"{path}:{lineno}: vertex indices must be >= 0")
            if i == j:
                raise ParseError(f"{path}:{lineno}: self loop on vertex {i} is not allowed")
            if w < 0:
                raise ParseError(f"{path}:{lineno}: negative weight {w!r}")
            key = (min(i, j), max(i, j))
            if key in entries:
                raise ParseError(f"{path}:{lineno}: conflicting duplicate undirected edge {i} {j}")
            entries[key] = w
            max_idx = max(max_idx, i, j)
    if declared_n is not None:
        if max_idx >= declared_n:
            raise ParseError(f"{path}: vertex index {max_idx} exceeds declared #n={declared_n}")
        n = declared_n
    else:
        if max_idx < 0:
            raise ParseError(f"{path}: no edges and no '#n=<int>' header; vertex count undeterminable")
        n = max_idx + 1
    weights = np.zeros((n, n))
    for (i, j), w in entries.items():
        weights[i, j] = weights[j, i] = w
    return n, weights


def parse_measure_file(path: str, n: int | None = None) -> np.ndarray:
    """Measure file "i mu"; vertices missing from the file default to 1."""
    values: dict[int, float] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open measure file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'i mu'")
            try:
                i, m = int(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if i < 0:
                raise ParseError(f"{path}:{lineno}: vertex index must be >= 0")
            if m <= 0:
                raise ParseError(f"{path}:{lineno}: measure must be positive, got {m!r}")
            if i in values:
                raise ParseError(f"{path}:{lineno}: duplicate measure for vertex {i}")
            values[i] = m
    if not values and n is None:
        raise ParseError(f"{path}: empty measure file")
    size = n if n is not None else max(values) + 1
    if values and max(values) >= size:
        raise ParseError(f"{path}: vertex index {max(values)} out of range for n={size}")
    mu = np.ones(size)
    for i, m in values.items():
        mu[i] = m
    return mu


def load_points(path: str, header: bool = False) -> np.ndarray:
    """Headerless CSV of n rows by d decimal columns (--header skips one row)."""
    rows = []
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot open points file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        width = None
        for idx, row in enumerate(reader):
            if header and idx == 0:
                continue
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"{path}: row {idx}: expected {width} columns, got {len(row)}")
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise ParseError(f"{path}: row {idx}: non-numeric cell ({exc})") from exc
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.asarray(rows)


def _load_signal(args) -> np.ndarray:
    if args.signal is None:
        raise ConfigError("this command needs --signal")
    sig = load_points(args.signal, header=args.header)
    return sig


def build_graph(args) -> GraphSpace:
    """Assemble the GraphSpace from the weight and measure options."""
    mode = args.weights
    if mode == "file":
        if args.graph is None:
            raise ConfigError("--weights file needs --graph")
        n, w = parse_edge_list(args.graph)
    elif mode == "gaussian":
        if args.points is None:
            raise ConfigError("--weights gaussian needs --points")
        pts = load_points(args.points, header=args.header)
        w = gaussian_weights(pts, args.gauss_scale, args.gauss_sigma)
        n = w.shape[0]
    elif mode == "bridge":
        if args.measure == "degree":
            raise ConfigError("--weights bridge cannot use the degree measure")
        if args.points is not None:
            n = load_points(args.points, header=args.header).shape[0]
        elif args.measure == "file" and args.measure_file:
            n = parse_measure_file(args.measure_file).size
        else:
            raise ConfigError("--weights bridge needs --points or a measure file to fix n")
        mu = _build_measure(args, n, None)
        return GraphSpace(mu, bridge_weights(mu))
    elif mode == "newton":
        if args.points is None:
            raise ConfigError("--weights newton needs --points")
        if args.measure == "degree":
            raise ConfigError("--weights newton cannot use the degree measure")
        pts = load_points(args.points, header=args.header)
        n = pts.shape[0]
        mu = _build_measure(args, n, None)
        return GraphSpace(mu, newton_weights(mu, pts, args.cg))
    else:
        raise ConfigError(f"unknown weight mode {mode!r}")
    mu = _build_measure(args, n, w)
    return GraphSpace(mu, w)


def _build_measure(args, n: int, w: np.ndarray | None) -> np.ndarray:
    if args.measure == "unit":
        return np.ones(n)
    if args.measure == "degree":
        if w is None:
            raise ConfigError("degree measure needs explicit weights")
        deg = w.sum(axis=1)
        if np.any(deg <= 0):
            raise DomainError("degree measure undefined: isolated vertex present")
        return deg
    if args.measure == "file":
        if not args.measure_file:
            raise ConfigError("--measure file needs --measure-file")
        return parse_measure_file(args.measure_file, n)
    raise ConfigError(f"unknown measure mode {args.measure!r}")


def _filter_from_args(args) -> FilterSpec:
    kind = args.kind
    try:
        if kind == "heat":
            return FilterSpec.heat(t=args.t, c=args.c if args.c and args.c > 0 else 1.0,
                                   chebyshev_order=args.chebyshev_order)
        if kind == "taubin":
            return FilterSpec.taubin(eps=args.eps, eps2=args.eps2, chebyshev_order=args.chebyshev_order)
        if kind == "implicit":
            return FilterSpec.implicit(eps=args.eps, chebyshev_order=args.chebyshev_order)
        if kind == "bi_implicit":
            return FilterSpec.bi_implicit(eps=args.eps, chebyshev_order=args.chebyshev_order)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown filter kind {kind!r}")


def _cmd_spectrum(args) -> int:
    g = build_graph(args)
    spec = eigendecompose(g)
    rows = [
        [spec.eigenvalues[i], *spec.eigenfunctions[:, i]]
        for i in range(g.n)
    ]
    _write_csv(rows, args.output)
    return 0


def _cmd_fourier(args) -> int:
    g = build_graph(args)
    spec = eigendecompose(g)
    sig = _load_signal(args)
    if sig.shape[0] != g.n:
        raise DomainError(f"signal has {sig.shape[0]} rows but the graph has {g.n} vertices")
    coeffs = np.column_stack([fourier(spec, sig[:, c]) for c in range(sig.shape[1])])
    _write_csv(coeffs, args.output)
    return 0


def _cmd_filter(args) -> int:
    g = build_graph(args)
    spec = eigendecompose(g)
    filt = _filter_from_args(args)
    sig = _load_signal(args)
    if sig.shape[0] != g.n:
        raise DomainError(f"signal has {sig.shape[0]} rows but the graph has {g.n} vertices")
    out = apply_filter(spec, filt, sig)
    _write_csv(out, args.output)
    return 0


def _cmd_heat(args) -> int:
    g = build_graph(args)
    wop = walk_operator(g, args.c)
    sig = _load_signal(args)
    if sig.shape[0] != g.n:
        raise DomainError(f"signal has {sig.shape[0]} rows but the graph has {g.n} vertices")
    out = np.column_stack([evolve_continuous(wop, sig[:, c], args.t) for c in range(sig.shape[1])])
    _write_csv(out, args.output)
    return 0


def _cmd_commute(args) -> int:
    g = build_graph(args)
    _write_csv(commute_distance(g, args.c), args.output)
    return 0


def _cmd_hitting(args) -> int:
    g = build_graph(args)
    wop = walk_operator(g, args.c)
    m = expected_hitting(wop, args.target)
    _write_csv([[x] for x in m], args.output)
    return 0


def _cmd_bounds(args) -> int:
    g = build_graph(args)
    report = verify_bounds(g)
    payload = {"schema": SCHEMA, **report.to_dict(), "all_passed": report.all_passed()}
    _write_json(payload, args.output)
    return 0


def _cmd_embed(args) -> int:
    g = None
    if args.method in ("eigenmaps", "commute", "lpp"):
        g = build_graph(args)
    if args.method == "eigenmaps":
        coords = laplacian_eigenmaps(g, args.dims)
    elif args.method == "commute":
        coords = commute_embedding(g, args.dims)
    elif args.method == "pca":
        if args.points is None:
            raise ConfigError("--method pca needs --points")
        pts = load_points(args.points, header=args.header)
        mu = _build_measure(args, pts.shape[0], None)
        coords = pca(mu, pts, args.dims).scores
    elif args.method == "lpp":
        if args.points is None:
            raise ConfigError("--method lpp needs --points")
        pts = load_points(args.points, header=args.header)
        result = lpp(g, pts, args.dims)
        coords = pts @ result.directions
    elif args.method == "lle":
        if args.points is None:
            raise ConfigError("--method lle needs --points")
        pts = load_points(args.points, header=args.header)
        reg = "auto" if args.reg is None else args.reg
        coords = lle(pts, args.k_neighbors, args.dims, reg=reg)
    else:
        raise ConfigError(f"unknown embedding method {args.method!r}")
    _write_csv(coords, args.output)
    return 0


def _cmd_cluster(args) -> int:
    g = build_graph(args)
    result = spectral_clustering(g, args.k, c=args.c, mode=args.mode, seed=args.seed,
                                 restarts=args.restarts)
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "k": args.k,
            "mode": args.mode,
            "seed": args.seed,
            "labels": [int(l) for l in result.partition.labels],
            "objective": result.objective,
        }
        _write_json(payload, args.output)
    else:
        _write_csv([[int(l)] for l in result.partition.labels], args.output)
    return 0


def _cmd_smooth(args) -> int:
    g = build_graph(args)
    if args.points is None:
        raise ConfigError("smooth needs --points")
    pts = load_points(args.points, header=args.header)
    if pts.shape[0] != g.n:
        raise DomainError(f"points have {pts.shape[0]} rows but the graph has {g.n} vertices")
    out = smooth(g, pts, method=args.method, eps=args.eps, eps2=args.eps2, iterations=args.iters)
    _write_csv(out, args.output)
    return 0


def _parse_boundary_file(path: str) -> tuple[list[int], list[list[float]]]:
    idx, vals = [], []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open boundary file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'i v1,...,vd'")
            try:
                idx.append(int(parts[0]))
                vals.append([float(cell) for cell in parts[1].split(",")])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if len(vals[-1]) != len(vals[0]):
                raise ParseError(f"{path}:{lineno}: inconsistent value dimension")
    if not idx:
        raise ParseError(f"{path}: empty boundary file")
    return idx, vals


def _cmd_dirichlet(args) -> int:
    g = build_graph(args)
    if args.boundary is None:
        raise ConfigError("dirichlet needs --boundary")
    idx, vals = _parse_boundary_file(args.boundary)
    out = dirichlet_solve(g, idx, np.asarray(vals))
    _write_csv(out, args.output)
    return 0


def _cmd_simulate(args) -> int:
    if args.points is None:
        raise ConfigError("simulate needs --points for the initial positions")
    pts = load_points(args.points, header=args.header)
    if args.law == "hooke":
        g = build_graph(args)
        if pts.shape[0] != g.n:
            raise DomainError(f"points have {pts.shape[0]} rows but the graph has {g.n} vertices")
        system = PhysicsSystem.hooke(g.mu, g.weights)
        positions, _ = hooke_trajectory(system, pts, dt=args.dt, steps=args.steps)
    elif args.law == "newton":
        masses = _build_measure(args, pts.shape[0], None)
        positions, _ = newton_trajectory(masses, pts, args.cg, dt=args.dt, steps=args.steps)
    else:
        raise ConfigError(f"unknown law {args.law!r}")
    rows = [
        [k * args.dt, *positions[k].reshape(-1)]
        for k in range(positions.shape[0])
    ]
    _write_csv(rows, args.output)
    return 0


def _identity_checks(g: GraphSpace, seed: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(seed)
    n = g.n
    checks: list[tuple[str, float, float]] = []

    f = rng.standard_normal(n)
    h = rng.standard_normal(n)
    lhs = differential(g, pointwise_product(f, h))
    rhs = module_action(np.ones(n), differential(g, f), h) + module_action(f, differential(g, h), np.ones(n))
    checks.append(("leibniz_rule", float(np.max(np.abs(lhs - rhs))), 1e-10))

    err = 0.0
    for _ in range(20):
        u = rng.standard_normal((n, n))
        np.fill_diagonal(u, 0.0)
        ff = rng.standard_normal(n)
        err = max(err, abs(inner_a(g, codifferential(g, u), ff) - inner_form(g, u, differential(g, ff))))
    checks.append(("codifferential_adjointness", err, 1e-9))

    checks.append(("energy_equals_laplacian_pairing",
                   abs(dirichlet_energy(g, f, h) - inner_a(g, f, laplacian_apply(g, h))), 1e-9))
    checks.append(("laplacian_matrix_consistency",
                   float(np.max(np.abs(laplacian_apply(g, f) - laplacian_matrix(g) @ f))), 1e-11))

    spec = eigendecompose(g)
    checks.append(("eigen_residual", float(np.max(spec.residuals())),
                   1e-9 * max(1.0, float(spec.eigenvalues[-1]))))
    checks.append(("eigen_orthonormality", spec.orthonormality_error(), 1e-9))
    checks.append(("fourier_round_trip",
                   float(np.max(np.abs(inverse_fourier(spec, fourier(spec, f)) - f))), 1e-10))
    checks.append(("parseval",
                   abs(inner_a(g, f, h) - float(np.dot(fourier(spec, f), fourier(spec, h)))), 1e-10))

    wop = walk_operator(g)
    checks.append(("discrete_heat_identity",
                   float(np.max(np.abs((step(wop, f) - f) + laplacian_apply(g, f) / wop.c))), 1e-12))
    s, t = 0.3, 0.7
    checks.append(("semigroup_law",
                   float(np.max(np.abs(evolve_continuous(wop, evolve_continuous(wop, f, t), s)
                                       - evolve_continuous(wop, f, s + t)))), 1e-10))
    checks.append(("detailed_balance", float(np.max(np.abs(wop.flux - wop.flux.T))), 0.0))

    if g.is_connected and n >= 2:
        y = n - 1
        m = expected_hitting(wop, y)
        e_y = basis_function(n, y)
        relation = m - (np.ones(n) + step(wop, m) - m[y] * step(wop, e_y))
        checks.append(("hitting_time_relation", float(np.max(np.abs(relation))), 1e-9))
        cd = commute_distance(g)
        pair_err = 0.0
        for x in range(min(n, 4)):
            if x == y:
                continue
            mx = expected_hitting(wop, x)
            dual = (m[x] + mx[y]) / (wop.c * g.volume)
            pair_err = max(pair_err, abs(dual - cd[x, y]))
        checks.append(("commute_distance_dual", pair_err, 1e-9))
        if n <= 24:
            report = verify_bounds(g)
            worst = min(check.slack for check in report.checks.values())
            checks.append(("eigenvalue_bounds", max(0.0, -worst), 1e-9))
    return checks


def _cmd_checks(args) -> int:
    g = build_graph(args)
    checks = _identity_checks(g, args.seed)
    all_ok = True
    lines = []
    for name, err, tol in checks:
        ok = err <= tol
        all_ok &= ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} err={_fmt(err)} tol={_fmt(tol)}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.output:
        payload = {
            "schema": SCHEMA,
            "checks": {name: {"error": err, "tolerance": tol, "passed": err <= tol}
                       for name, err, tol in checks},
            "all_passed": all_ok,
        }
        _write_json(payload, args.output)
    return 0 if all_ok else 2


def _add_graph_options(p: argparse.ArgumentParser):
    p.add_argument("--graph", help="edge list file: 'i j w' per line, optional '#n=<int>' header")
    p.add_argument("--points", help="CSV point coordinates, one row per vertex")
    p.add_argument("--header", action="store_true", help="points CSV has one header row to skip")
    p.add_argument("--weights", choices=["file", "gaussian", "bridge", "newton"], default="file",
                   help="how edge weights are obtained (default: file)")
    p.add_argument("--gauss-scale", type=float, default=1.0, help="gaussian weight scale C")
    p.add_argument("--gauss-sigma", type=float, default=1.0, help="gaussian weight bandwidth sigma")
    p.add_argument("--cg", type=float, default=1.0, help="gravitational constant bundle C*G")
    p.add_argument("--measure", choices=["unit", "degree", "file"], default="unit")
    p.add_argument("--measure-file", help="measure file: 'i mu' per line, missing vertices get 1")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discgeom",
                     description="Spectral calculus, walks, flows, and embeddings on weighted graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_graph_options(p)
        p.set_defaults(handler=handler)
        return p

    add("spectrum", _cmd_spectrum, "eigenvalues and eigenfunctions (CSV row: rho_i, v_i(0..n-1))")

    p = add("fourier", _cmd_fourier, "eigenbasis coefficients of signal columns")
    p.add_argument("--signal", help="CSV of signal columns")

    p = add("filter", _cmd_filter, "apply a spectral filter to signal columns")
    p.add_argument("--signal", help="CSV of signal columns")
    p.add_argument("--kind", choices=["heat", "taubin", "implicit", "bi_implicit"], default="heat")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0, help="<= 0 picks the stochastic default")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--eps2", type=float, default=0.0)
    p.add_argument("--chebyshev-order", type=int, default=0, help="0 = exact spectral application")

    p = add("heat", _cmd_heat, "heat semigroup exp(-t L / c) on signal columns")
    p.add_argument("--signal", help="CSV of signal columns")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0, help="<= 0 picks the stochastic default")

    p = add("commute", _cmd_commute, "commute distance matrix")
    p.add_argument("--c", type=float, default=0.0, help="<= 0 picks the stochastic default")

    p = add("hitting", _cmd_hitting, "expected hitting times to a target vertex")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--c", type=float, default=0.0, help="<= 0 picks the stochastic default")

    add("bounds", _cmd_bounds, "isoperimetric constant and eigenvalue bound report (JSON)")

    p = add("embed", _cmd_embed, "vertex embedding by the chosen method")
    p.add_argument("--method", choices=["eigenmaps", "commute", "pca", "lpp", "lle"], required=True)
    p.add_argument("--dims", type=int, required=True)
    p.add_argument("--k-neighbors", type=int, default=2, help="neighbor count for lle")
    p.add_argument("--reg", type=float, default=None, help="lle ridge (default: automatic)")

    p = add("cluster", _cmd_cluster, "spectral clustering labels")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["eigenmaps", "kernel"], default="eigenmaps")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--restarts", type=int, default=100)

    p = add("smooth", _cmd_smooth, "smoothing flow on point coordinates")
    p.add_argument("--method", choices=["explicit", "taubin", "implicit", "bi_implicit"],
                   default="explicit")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--eps2", type=float, default=0.0)
    p.add_argument("--iters", type=int, default=1)

    p = add("dirichlet", _cmd_dirichlet, "harmonic extension of boundary values")
    p.add_argument("--boundary", help="file of 'i v1,...,vd' boundary rows")

    p = add("simulate", _cmd_simulate, "integrate spring or gravity dynamics (CSV: t, coords)")
    p.add_argument("--law", choices=["hooke", "newton"], required=True)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=1000)

    p = add("checks", _cmd_checks, "run the identity suite on the input graph")
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except CliError as exc:
        sys.stderr.write(f"E:{exc.code}: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"E:DOMAIN: {exc}\n")
        return 1
    except (NumericalError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"E:NUMERIC: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
