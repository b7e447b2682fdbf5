"""Command-line front end.

Exit codes: 0 success (incoherent / no violation), 1 failing reproduction
rows, 2 certified coherent measurement, 64 unreadable input, 65 invalid
input (not a state, POVM or channel).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import channels as chn
from .discord import monogamy_gap, qdi
from .info import mutual_information, von_neumann_entropy
from .io import FormatError, channel_from_dict, load_json, matrix_from_dict, povm_from_dict, state_from_dict
from .linalg import VALIDITY_TOL, DimensionError
from .measurement import OrthonormalBasis, PovmError, is_incoherent, noisy_projective, optimize_witness
from .reproduce import render_json, render_text, reproduction_rows
from .states import NAMED_STATES, StateError, named_state

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_COHERENT = 2
EXIT_PARSE = 64
EXIT_INVALID = 65


class UsageError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def _load(path: str):
    return load_json(path)


def _state(args):
    if args.named:
        params = []
        if args.named == "prop2_witness":
            vectors = matrix_from_dict(_load(args.vectors)) if args.vectors else None
            d = args.d if args.d else (vectors.shape[1] if vectors is not None else 2)
            params = [d, vectors]
        return named_state(args.named, *params)
    if not args.file:
        raise UsageError("give a state file or --named NAME", EXIT_PARSE)
    return state_from_dict(_load(args.file), args.tol)


def cmd_check_povm(args) -> int:
    m = povm_from_dict(_load(args.file), args.tol)
    ok, worst = is_incoherent(m, args.tol)
    text = f"{'incoherent' if ok else 'NOT incoherent'}, worst off-diagonal {worst:.12g}"
    _emit(args, {"incoherent": ok, "worst_offdiag": worst, "n_outcomes": m.n_outcomes, "dim": m.dim}, text)
    return EXIT_OK if ok else EXIT_COHERENT


def _basis(args, d: int) -> OrthonormalBasis:
    if args.basis == "fourier":
        return OrthonormalBasis.fourier(d)
    if args.basis == "computational":
        return OrthonormalBasis.computational(d)
    return OrthonormalBasis(matrix_from_dict(_load(args.basis)))


def cmd_witness(args) -> int:
    if args.noise_lambda is not None:
        if not args.dim and args.basis in ("fourier", "computational"):
            raise UsageError("--noise-lambda with a named basis needs --dim", EXIT_PARSE)
        basis = _basis(args, args.dim or 0)
        m = noisy_projective(basis, args.noise_lambda)
    elif args.file:
        m = povm_from_dict(_load(args.file), args.tol)
    else:
        raise UsageError("give a POVM file or --noise-lambda", EXIT_PARSE)
    rep = optimize_witness(m, restarts=args.restarts, seed=args.seed)
    verdict = "certified coherent" if rep.certified else "no violation found"
    text = (f"violation {rep.violation:.12g} (lhs {rep.lhs:.12g}, rhs {rep.rhs:.12g})\n"
            f"assignment {list(rep.assignment)}\n{verdict}")
    _emit(args, {"violation": rep.violation, "lhs": rep.lhs, "rhs": rep.rhs,
                 "assignment": list(rep.assignment), "certified": rep.certified,
                 "basis": {"re": rep.basis.vectors.real.tolist(), "im": rep.basis.vectors.imag.tolist()}}, text)
    return EXIT_COHERENT if rep.certified else EXIT_OK


def cmd_qdi(args) -> int:
    rho = _state(args)
    rep = qdi(rho, args.cut)
    text = (f"QDI {rep.value:.12g}\n"
            f"  conditional-state form {rep.qdi_projective:.12g}\n"
            f"  mutual-information form {rep.qdi_mutinf:.12g}\n"
            f"  coherence form {rep.qdi_coherence:.12g}\n"
            f"  spread {rep.max_discrepancy:.3e}\n"
            f"incoherent correlation {rep.j_incoherent:.12g}")
    _emit(args, {"qdi": rep.value, "qdi_projective": rep.qdi_projective, "qdi_mutinf": rep.qdi_mutinf,
                 "qdi_coherence": rep.qdi_coherence, "max_discrepancy": rep.max_discrepancy,
                 "j_incoherent": rep.j_incoherent}, text)
    return EXIT_OK


def cmd_monogamy(args) -> int:
    rho = _state(args)
    rep = monogamy_gap(rho, (args.a, args.b, args.b2))
    text = f"monogamy gap {rep.gap:.12g}\n  conditional mutual information form {rep.gap_cmi:.12g}"
    _emit(args, {"gap": rep.gap, "gap_cmi": rep.gap_cmi, "discrepancy": rep.discrepancy}, text)
    return EXIT_OK


def channel_panel(ch: chn.KrausChannel, tol: float = VALIDITY_TOL) -> dict:
    panel = {"cptp": chn.is_cptp(ch, tol), "dim_in": ch.dim_in, "dim_out": ch.dim_out}
    if ch.dim_in == ch.dim_out:
        ok, perm = chn.is_completely_qdi_nongenerating(ch, tol)
        panel.update({
            "coherence_non_activating": chn.is_coherence_non_activating(ch, tol),
            "mio": chn.is_mio(ch, tol),
            "gio": chn.is_gio(ch, tol),
            "completely_qdi_non_generating": ok,
            "permutation": list(perm) if perm is not None else None,
        })
    return panel


def cmd_channel_check(args) -> int:
    if args.named:
        ch = chn.library_channel(args.named, *args.param)
    elif args.file:
        ch = channel_from_dict(_load(args.file), args.tol)
    else:
        raise UsageError("give a channel file or --named NAME", EXIT_PARSE)
    panel = channel_panel(ch, args.tol)
    mark = lambda v: "yes" if v else "no"
    lines = [f"{k.replace('_', ' ')}: {mark(v) if isinstance(v, bool) else v}" for k, v in panel.items()]
    _emit(args, panel, "\n".join(lines))
    return EXIT_OK


def cmd_entropy(args) -> int:
    s = von_neumann_entropy(_state(args))
    _emit(args, {"entropy": s}, f"S = {s:.12g} bits")
    return EXIT_OK


def cmd_mutinf(args) -> int:
    rho = _state(args)
    a = args.cut
    b = tuple(i for i in range(rho.n_subsystems) if i not in a)
    i_ab = mutual_information(rho, (a, b))
    _emit(args, {"mutual_information": i_ab}, f"I(A:B) = {i_ab:.12g} bits")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = reproduction_rows(seed=args.seed, restarts=args.restarts)
    print(render_json(rows) if args.format == "json" else render_text(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def _add_state_source(p):
    p.add_argument("file", nargs="?", help="state document (JSON interchange format)")
    p.add_argument("--named", choices=sorted(NAMED_STATES), help="use a catalogued state instead of a file")
    p.add_argument("--vectors", help="matrix document with the prop2_witness vectors as columns")
    p.add_argument("--d", type=int, help="dimension for prop2_witness")


def build_parser() -> argparse.ArgumentParser:
    def global_flags(defaults: bool) -> argparse.ArgumentParser:
        # subcommand copies use SUPPRESS so they do not clobber values given before the subcommand
        g = argparse.ArgumentParser(add_help=False)
        pick = lambda v: v if defaults else argparse.SUPPRESS
        g.add_argument("--tol", type=float, default=pick(VALIDITY_TOL), help="validity tolerance")
        g.add_argument("--seed", type=int, default=pick(0), help="seed for randomised searches")
        g.add_argument("--format", choices=("text", "json"), default=pick("text"))
        return g

    common = global_flags(False)
    parser = argparse.ArgumentParser(prog="cnam", description=__doc__.splitlines()[0],
                                     parents=[global_flags(True)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-povm", parents=[common], help="test whether a POVM is incoherent")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_povm)

    p = sub.add_parser("witness", parents=[common], help="search for a witness violation")
    p.add_argument("file", nargs="?", help="POVM document")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--noise-lambda", type=float, help="use the noisy projective POVM with this lambda")
    p.add_argument("--basis", default="fourier", help="'fourier', 'computational' or a matrix document")
    p.add_argument("--dim", type=int, help="dimension for a named basis")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("qdi", parents=[common], help="QDI with the three-way cross-check")
    _add_state_source(p)
    p.add_argument("--cut", type=_indices, default=(0,), help="comma-separated A subsystems (default 0)")
    p.set_defaults(func=cmd_qdi)

    p = sub.add_parser("monogamy", parents=[common], help="monogamy gap D(B|A) + D(B'|A) - D(BB'|A)")
    _add_state_source(p)
    p.add_argument("--a", type=_indices, default=(0,))
    p.add_argument("--b", type=_indices, default=(1,))
    p.add_argument("--b2", type=_indices, default=(2,))
    p.set_defaults(func=cmd_monogamy)

    p = sub.add_parser("channel-check", parents=[common], help="classification panel for a channel")
    p.add_argument("file", nargs="?", help="channel document")
    p.add_argument("--named", choices=sorted(chn.LIBRARY))
    p.add_argument("--param", type=_number, nargs="*", default=[],
                   help="parameters for --named, e.g. '--param 2 0.5' for depolarizing")
    p.set_defaults(func=cmd_channel_check)

    p = sub.add_parser("entropy", parents=[common], help="von Neumann entropy in bits")
    _add_state_source(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("mutinf", parents=[common], help="mutual information across a cut")
    _add_state_source(p)
    p.add_argument("--cut", type=_indices, default=(0,))
    p.set_defaults(func=cmd_mutinf)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the reference numbers")
    p.add_argument("--restarts", type=int, default=20)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StateError, PovmError, chn.ChannelError, DimensionError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
