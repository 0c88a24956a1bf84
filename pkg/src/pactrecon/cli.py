"""Command-line front end.

Subcommands cover the full study pipeline: phantom rendering, forward
simulation, noise injection, reconstruction, the delay-and-sum baseline,
metrics with CSV/figure reports, PGM export, and the benchmark harness.

Heavy imports happen after ``--threads`` is applied so the thread cap
reaches the numerical libraries.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_VALIDATION = 4
EXIT_CONTAINER = 5
EXIT_INTERNAL = 1

_EPILOG = """\
exit codes:
  0  success
  2  usage error (unknown flag or malformed arguments)
  3  input file not found
  4  validation error (invariant or precondition violated)
  5  container format error (bad magic, truncation, size mismatch)
  1  unexpected internal error
"""


def _apply_thread_cap(argv: list[str]) -> None:
    if "--threads" in argv:
        i = argv.index("--threads")
        if i + 1 < len(argv):
            n = argv[i + 1]
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
                os.environ[var] = n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pactrecon",
        description="Fourier-domain reconstruction for circular/spherical "
        "photoacoustic tomography.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--threads", type=int, default=None,
                   help="cap numerical library threads")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("phantom", help="render a disk phantom to a PACT object file",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("spec", help="phantom spec JSON, or 'default' for the bundled phantom")
    q.add_argument("out", help="output .pact object file")
    q.add_argument("--pitch", type=float, default=0.025,
                   help="render pitch in mm for the default phantom (default 0.025)")

    q = sub.add_parser("simulate", help="simulate pressure data",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("input", help=".pact object (grid method) or phantom spec JSON "
                                 "(radial quadrature method)")
    q.add_argument("out", help="output .pact pressure file")
    q.add_argument("--geometry", help="geometry JSON "
                   '({"kind": "ring"|"fibonacci", "n_sensors": N, "radius": R})')
    q.add_argument("--sensors", type=int, default=256, help="sensor count (default 256)")
    q.add_argument("--radius", type=float, default=12.8,
                   help="measurement radius in mm (default 12.8)")
    q.add_argument("--dt", type=float, default=1.0 / 30.0,
                   help="time step in us (default 1/30)")
    q.add_argument("--nt", type=int, default=2048, help="time samples (default 2048)")
    q.add_argument("--c", type=float, default=1.5, help="speed of sound mm/us")
    q.add_argument("--beta-over-cp", type=float, default=1000.0,
                   help="thermoacoustic ratio (default 1000)")

    q = sub.add_parser("noise", help="add Gaussian noise relative to the global peak",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("input"); q.add_argument("out")
    q.add_argument("--level", type=float, required=True,
                   help="noise sigma as a fraction of max|p|")
    q.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("reconstruct", help="Fourier-domain reconstruction",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("input", help=".pact pressure file")
    q.add_argument("out", help="output .pact object file")
    q.add_argument("--grid", type=int, default=256, help="output samples per axis")
    q.add_argument("--dx", type=float, default=0.1, help="output spacing in mm")
    q.add_argument("--oversample", type=int, default=2, help="k-grid oversampling")
    q.add_argument("--pad", type=int, default=8, help="temporal zero-pad factor")
    q.add_argument("--interp", choices=("nearest", "linear"), default="nearest")
    q.add_argument("--report", help="write a JSON reconstruction report here")
    q.add_argument("--c", type=float, default=1.5, help="speed of sound mm/us")
    q.add_argument("--beta-over-cp", type=float, default=1000.0,
                   help="thermoacoustic ratio (default 1000)")

    q = sub.add_parser("baseline", help="delay-and-sum backprojection",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("input"); q.add_argument("out")
    q.add_argument("--grid", type=int, default=256)
    q.add_argument("--dx", type=float, default=0.1)
    q.add_argument("--c", type=float, default=1.5, help="speed of sound mm/us")
    q.add_argument("--beta-over-cp", type=float, default=1000.0,
                   help="thermoacoustic ratio (default 1000)")

    q = sub.add_parser("metrics", help="compare images, export profiles",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("image", help="image .pact file")
    q.add_argument("reference", nargs="?", help="reference .pact file")
    q.add_argument("--nrmse", action="store_true", help="print NRMSE vs the reference")
    q.add_argument("--profile", help="write the central profile CSV here")
    q.add_argument("--axis", type=int, default=0, help="profile axis (default 0)")
    q.add_argument("--plot", help="also render a profile figure (PNG) here")

    q = sub.add_parser("export-pgm", help="export a 2D image as 16-bit PGM",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("input"); q.add_argument("out")
    q.add_argument("--window", default="-0.2,1.2",
                   help="greyscale window lo,hi; use --window=-0.2,1.2 for "
                        "negative bounds (default -0.2,1.2)")
    q.add_argument("--png", help="also render a matplotlib figure (PNG) here")

    q = sub.add_parser("bench", help="stage timings: Fourier pipeline vs delay-and-sum",
                       epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    q.add_argument("--sizes", default="64,128,256", help="comma-separated image sizes")
    q.add_argument("--sensors", type=int, default=256)
    q.add_argument("--repeats", type=int, default=3)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--csv", required=True, help="output CSV (stage, N, sensors, seconds)")
    q.add_argument("--plot", help="also render a log-log timing figure (PNG) here")
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    _apply_thread_cap(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    from .container import ContainerError
    from .core import ValidationError

    try:
        return _dispatch(args)
    except FileNotFoundError as e:
        print(f"pactrecon: file not found: {e.filename or e}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except ValidationError as e:
        print(f"pactrecon: validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ContainerError as e:
        print(f"pactrecon: container error: {e}", file=sys.stderr)
        return EXIT_CONTAINER
    except Exception as e:  # noqa: BLE001 -- one-line diagnostic, nonzero exit
        print(f"pactrecon: error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "phantom":
        return _cmd_phantom(args)
    if cmd == "simulate":
        return _cmd_simulate(args)
    if cmd == "noise":
        return _cmd_noise(args)
    if cmd == "reconstruct":
        return _cmd_reconstruct(args)
    if cmd == "baseline":
        return _cmd_baseline(args)
    if cmd == "metrics":
        return _cmd_metrics(args)
    if cmd == "export-pgm":
        return _cmd_export_pgm(args)
    if cmd == "bench":
        return _cmd_bench(args)
    raise RuntimeError(f"unhandled command {cmd}")


def _load_phantom_spec(path_or_default, pitch):
    from . import phantom
    if path_or_default == "default":
        return phantom.default_disk_phantom_spec(pitch=pitch)
    if not os.path.exists(path_or_default):
        raise FileNotFoundError(path_or_default)
    return phantom.phantom_spec_from_json(path_or_default)


def _cmd_phantom(args) -> int:
    from . import container, phantom
    spec = _load_phantom_spec(args.spec, args.pitch)
    field = phantom.make_disk_phantom(spec)
    container.write_container(args.out, field)
    print(f"wrote {args.out} ({field.grid.shape[0]}x{field.grid.shape[1]} object)")
    return EXIT_OK


def _make_geometry(args, dim: int):
    import json
    from . import core
    if args.geometry:
        if not os.path.exists(args.geometry):
            raise FileNotFoundError(args.geometry)
        with open(args.geometry) as f:
            doc = json.load(f)
        kind = doc.get("kind", "ring")
        n = int(doc["n_sensors"]); radius = float(doc["radius"])
    else:
        kind = "ring" if dim == 2 else "fibonacci"
        n, radius = args.sensors, args.radius
    if kind == "ring":
        return core.ring_geometry(n, radius)
    if kind == "fibonacci":
        return core.fibonacci_sphere_geometry(n, radius)
    from .core import ValidationError
    raise ValidationError(f"unknown geometry kind {kind!r}")


def _cmd_simulate(args) -> int:
    from . import container, core, forward, phantom
    consts = core.AcousticConstants(c=args.c, beta_over_cp=args.beta_over_cp)
    time_axis = forward.TimeAxis(dt=args.dt, nt=args.nt)
    if args.input == "default" or args.input.endswith(".json"):
        spec = _load_phantom_spec(args.input, 0.025)
        geom = _make_geometry(args, spec.grid.dim)
        sources = forward.sources_from_disk_phantom(spec)
        data = forward.quadrature_forward(sources, geom, time_axis, consts)
        method = "radial quadrature"
    else:
        if not os.path.exists(args.input):
            raise FileNotFoundError(args.input)
        obj = container.read_container(args.input)
        if not isinstance(obj, core.ObjectField):
            raise core.ValidationError("simulate expects an object field input")
        geom = _make_geometry(args, obj.grid.dim)
        data = forward.spectral_forward(obj, geom, time_axis, consts)
        method = "gridded spectral"
    container.write_container(args.out, data)
    print(f"wrote {args.out} ({data.geometry.n_sensors}x{data.nt} pressure, {method})")
    return EXIT_OK


def _cmd_noise(args) -> int:
    from . import container, core, forward
    if not os.path.exists(args.input):
        raise FileNotFoundError(args.input)
    data = container.read_container(args.input)
    if not isinstance(data, core.PressureSeries):
        raise core.ValidationError("noise expects a pressure series input")
    noisy = forward.add_noise(data, args.level, args.seed)
    container.write_container(args.out, noisy)
    print(f"wrote {args.out} (noise level {args.level}, seed {args.seed})")
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    from . import container, core, recon
    if not os.path.exists(args.input):
        raise FileNotFoundError(args.input)
    data = container.read_container(args.input)
    if not isinstance(data, core.PressureSeries):
        raise core.ValidationError("reconstruct expects a pressure series input")
    dim = data.geometry.dim
    grid = core.GridSpec.centered((args.grid,) * dim, (args.dx,) * dim)
    params = core.ReconParams(
        grid=grid, oversampling=args.oversample,
        pad_factor=args.pad, interp=args.interp,
    )
    consts = core.AcousticConstants(c=args.c, beta_over_cp=args.beta_over_cp)
    field, report = recon.reconstruct(data, params, consts)
    container.write_container(args.out, field)
    if args.report:
        report.to_json(args.report)
    print(
        f"wrote {args.out} (truncation {report.truncation_fraction:.3f}, "
        f"total {report.stage_seconds['total']:.2f}s)"
    )
    return EXIT_OK


def _cmd_baseline(args) -> int:
    from . import baseline, container, core
    if not os.path.exists(args.input):
        raise FileNotFoundError(args.input)
    data = container.read_container(args.input)
    if not isinstance(data, core.PressureSeries):
        raise core.ValidationError("baseline expects a pressure series input")
    dim = data.geometry.dim
    grid = core.GridSpec.centered((args.grid,) * dim, (args.dx,) * dim)
    consts = core.AcousticConstants(c=args.c, beta_over_cp=args.beta_over_cp)
    field = baseline.delay_and_sum(data, grid, consts)
    container.write_container(args.out, field)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    from . import container, core, metrics
    if not os.path.exists(args.image):
        raise FileNotFoundError(args.image)
    img = container.read_container(args.image)
    if not isinstance(img, core.ObjectField):
        raise core.ValidationError("metrics expects object field inputs")
    ref = None
    if args.reference:
        if not os.path.exists(args.reference):
            raise FileNotFoundError(args.reference)
        ref = container.read_container(args.reference)
    if args.nrmse:
        if ref is None:
            raise core.ValidationError("--nrmse needs a reference image")
        print(f"nrmse={metrics.nrmse(img, ref):.6f}")
    if args.profile:
        coords, values = metrics.central_profile(img, axis=args.axis)
        metrics.write_profile_csv(args.profile, coords, values)
        print(f"wrote {args.profile}")
        if args.plot:
            from . import figures
            series = [("image", coords, values)]
            if ref is not None:
                rc, rv = metrics.central_profile(ref, axis=args.axis)
                series.append(("reference", rc, rv))
            figures.save_profile_figure(series, args.plot)
            print(f"wrote {args.plot}")
    return EXIT_OK


def _cmd_export_pgm(args) -> int:
    from . import container, core, metrics
    if not os.path.exists(args.input):
        raise FileNotFoundError(args.input)
    img = container.read_container(args.input)
    if not isinstance(img, core.ObjectField):
        raise core.ValidationError("export-pgm expects an object field input")
    try:
        lo, hi = (float(x) for x in args.window.split(","))
    except ValueError:
        raise core.ValidationError(f"bad --window {args.window!r}, expected lo,hi")
    metrics.export_pgm(img, args.out, window=(lo, hi))
    print(f"wrote {args.out}")
    if args.png:
        from . import figures
        figures.save_image_figure(img, args.png, window=(lo, hi))
        print(f"wrote {args.png}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    from . import bench
    sizes = tuple(int(s) for s in args.sizes.split(","))
    rows = bench.run_benchmark(
        sizes=sizes, n_sensors=args.sensors, repeats=args.repeats, seed=args.seed
    )
    bench.write_csv(rows, args.csv)
    print(f"wrote {args.csv}")
    if args.plot:
        from . import figures
        figures.save_bench_figure(rows, args.plot)
        print(f"wrote {args.plot}")
    for r in rows:
        print(f"  {r['stage']:<24} N={r['n']:<4} {r['seconds']:.4f}s")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
