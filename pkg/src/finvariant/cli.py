"""Batch command-line front end.

Subcommands: eis, ell, g2, divcong, assemble, example, oracle.
Exit codes: 0 success / true verdict, 1 false verdict, 2 usage, 3 data error.

Series and basis files share one line-oriented UTF-8 format: a header
``level=<N> weight=<k> prec=<P> label=<text>`` (``weight=?`` permitted for
plain series), then one line per q-coefficient holding the index followed by
phi(N) rationals ``p/q`` separated by single spaces. ``#`` starts a comment.
A basis cache file is a sequence of such blocks. Machine-readable output
(``--machine``) emits exactly this format, so commands compose.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .divcong import (BasisEntry, BasisError, EquivResult, ModularBasis,
                      PrecisionError, build_basis, is_equivalent,
                      make_lattice, policy_prec)
from .exactnum import CycNum, EpsPoly, LevelMismatchError, euler_phi
from .fassembly import (COMPLEX_FULL, COMPLEX_POSITIVE, QUATERNIONIC,
                        QUATERNIONIC_KERNEL_PARITY, XiTable, assemble_complex,
                        assemble_complex_reduced, assemble_quaternionic,
                        assemble_quaternionic_reduced, run_example)
from .genus import (ell_expansion, ell_numeric, ell_quaternionic, g2, g_hat,
                    g_tilde, numeric_taylor, series_value)
from .qseries import EpsPartError, QSeries, is_integral_series

ORACLE_TOLERANCE = 1e-8


class DataError(ValueError):
    """Malformed input file or inconsistent data; maps to exit code 3."""


# ---------------------------------------------------------------------------
# Series / basis file format


def write_series(fh: TextIO, series: QSeries, weight: Optional[int],
                 label: str) -> None:
    w = "?" if weight is None else str(weight)
    fh.write(f"level={series.level} weight={w} prec={series.prec} label={label}\n")
    for n in range(series.prec):
        c = series.coefficient(n)
        if not c.is_eps_free():
            raise DataError("series files cannot carry eps-parts")
        coords = " ".join(_fmt_fraction(x) for x in c.constant_part().coords)
        fh.write(f"{n} {coords}\n")


def _fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _parse_fraction(tok: str, where: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise DataError(f"{where}: bad rational {tok!r}") from exc


def read_blocks(path: Path) -> list[tuple[Optional[int], str, QSeries]]:
    """Parse a series/basis file into (weight, label, series) blocks."""
    blocks: list[tuple[Optional[int], str, QSeries]] = []
    header: Optional[dict] = None
    rows: list[tuple[int, list[Fraction]]] = []

    def flush(line_no: int) -> None:
        nonlocal header, rows
        if header is None:
            return
        level, prec = header["level"], header["prec"]
        deg = euler_phi(level)
        if len(rows) != prec:
            raise DataError(
                f"{path}:{line_no}: block '{header['label']}' has {len(rows)} "
                f"coefficient lines, expected {prec}")
        coeffs = []
        for idx, (n, coords) in enumerate(rows):
            if n != idx:
                raise DataError(f"{path}: block '{header['label']}' out of order at index {n}")
            if len(coords) != deg:
                raise DataError(
                    f"{path}: block '{header['label']}' index {n}: "
                    f"{len(coords)} coordinates, expected {deg}")
            coeffs.append(EpsPoly.constant(CycNum(level, coords)))
        blocks.append((header["weight"], header["label"],
                       QSeries(level, prec, tuple(coeffs))))
        header, rows = None, []

    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("level="):
                flush(line_no)
                header = _parse_header(line, path, line_no)
                continue
            if header is None:
                raise DataError(f"{path}:{line_no}: coefficient line before any header")
            toks = line.split()
            try:
                n = int(toks[0])
            except ValueError as exc:
                raise DataError(f"{path}:{line_no}: bad coefficient index {toks[0]!r}") from exc
            rows.append((n, [_parse_fraction(t, f"{path}:{line_no}") for t in toks[1:]]))
    flush(-1)
    if not blocks:
        raise DataError(f"{path}: no series blocks found")
    return blocks


def _parse_header(line: str, path: Path, line_no: int) -> dict:
    fields = {}
    label = ""
    for part in line.split(None, 3):
        if "=" not in part:
            raise DataError(f"{path}:{line_no}: malformed header field {part!r}")
        key, value = part.split("=", 1)
        if key == "label":
            label = value
        else:
            fields[key] = value
    try:
        level = int(fields["level"])
        prec = int(fields["prec"])
        weight = None if fields["weight"] == "?" else int(fields["weight"])
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}:{line_no}: malformed header {line!r}") from exc
    if level < 2 or prec < 1:
        raise DataError(f"{path}:{line_no}: level must be >= 2 and prec >= 1")
    return {"level": level, "prec": prec, "weight": weight, "label": label}


def read_series(path: Path) -> QSeries:
    blocks = read_blocks(path)
    if len(blocks) != 1:
        raise DataError(f"{path}: expected a single series block, found {len(blocks)}")
    return blocks[0][2]


def write_basis(path: Path, basis: ModularBasis) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in basis.entries:
            write_series(fh, entry.series, entry.weight, entry.label)


def read_basis(path: Path) -> ModularBasis:
    blocks = read_blocks(path)
    entries = []
    level = blocks[0][2].level
    prec = min(b[2].prec for b in blocks)
    for weight, label, series in blocks:
        if weight is None:
            raise DataError(f"{path}: basis blocks need explicit weights")
        if series.level != level:
            raise DataError(f"{path}: mixed levels in basis file")
        entries.append(BasisEntry(weight, series, label))
    maxweight = max(e.weight for e in entries)
    dims: dict[int, int] = {}
    for e in entries:
        dims[e.weight] = dims.get(e.weight, 0) + 1
    return ModularBasis(level, maxweight, prec, tuple(entries), dims)


def _load_or_build_basis(level: int, weight: int, prec: int,
                         basis_dir: Path) -> ModularBasis:
    basis_prec = max(prec, policy_prec(level, weight))
    path = basis_dir / f"basis_N{level}_W{weight}_P{basis_prec}.txt"
    if path.exists():
        basis = read_basis(path)
        if basis.level != level or basis.maxweight < weight or basis.prec < prec:
            raise DataError(f"{path}: cached basis does not cover level {level}, "
                            f"weight {weight}, prec {prec}")
        return basis
    basis = build_basis(level, weight, basis_prec)
    basis_dir.mkdir(parents=True, exist_ok=True)
    write_basis(path, basis)
    return basis


# ---------------------------------------------------------------------------
# Output helpers


def _print_series(series: QSeries, label: str, weight: Optional[int],
                  machine: bool) -> None:
    if machine:
        write_series(sys.stdout, series, weight, label)
        return
    print(f"{label} (level {series.level}, precision {series.prec}):")
    for n in range(series.prec):
        print(f"  q^{n}: {series.coefficient(n)}")


def _print_verdict(res: EquivResult, machine: bool) -> None:
    if machine:
        print(f"verdict={'true' if res.equivalent else 'false'}")
        print(f"false_is_proof={'yes' if res.false_is_proof else 'no'}")
        print(f"modulus={res.modulus.replace(' ', '_')}")
    else:
        print(f"verdict: {res.equivalent}")
        print(f"modulus: {res.modulus}")
        if not res.false_is_proof:
            print("warning: precision below policy; a false verdict is not a proof")


def _print_certificate(res: EquivResult, lattice, machine: bool) -> None:
    cert = res.certificate
    if cert is None:
        return
    if machine:
        for entry, coeff in zip(lattice.basis.entries, cert.basis_coeffs):
            if coeff:
                print(f"cert basis {entry.label} {_fmt_fraction(coeff)}")
        print(f"cert gtilde {_fmt_fraction(cert.gtilde_coeff)} "
              f"{_fmt_fraction(cert.gtilde_eps_coeff)}")
        write_series(sys.stdout, cert.residual, None, "residual")
        return
    print("certificate:")
    for entry, coeff in zip(lattice.basis.entries, cert.basis_coeffs):
        if coeff:
            print(f"  {coeff} * {entry.label} (weight {entry.weight})")
    if cert.gtilde_coeff or cert.gtilde_eps_coeff:
        print(f"  ({cert.gtilde_coeff} + {cert.gtilde_eps_coeff}*eps) * Gtilde")
    nonzero = sum(1 for n in range(cert.residual.prec) if cert.residual.coefficient(n))
    print(f"  + integral residual ({nonzero} nonzero coefficients)")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_eis(args) -> int:
    series = (g_tilde if args.tilde else g_hat)(args.level, args.weight, args.prec)
    name = ("Gtilde" if args.tilde else "Ghat") + f"_{args.weight}"
    _print_series(series, name, args.weight, args.machine)
    return 0


def _cmd_ell(args) -> int:
    exp = ell_expansion(args.level, args.order, args.prec)
    for k in range(1, args.order + 1):
        _print_series(exp.x_coefficient(k), f"x^{k}", k, args.machine)
    if args.quaternionic is not None:
        for j, entry in enumerate(ell_quaternionic(args.level, args.quaternionic,
                                                   args.prec)):
            _print_series(entry, f"quaternionic_entry_{j}", 2 * j + 2, args.machine)
    return 0


def _cmd_g2(args) -> int:
    series = g2(args.level, args.prec)
    _print_series(series, "g2", 2, args.machine)
    shifted = series - Fraction(1, 12)
    ok = is_integral_series(shifted)
    if args.machine:
        print(f"congruence_mod_integral={'true' if ok else 'false'}")
    else:
        print(f"g2 - 1/12 integral over Z[zeta,1/{args.level}]: {ok}")
    return 0 if ok else 1


def _cmd_divcong(args) -> int:
    F = read_series(Path(args.series_f))
    G = read_series(Path(args.series_g))
    if F.level != args.level or G.level != args.level:
        raise DataError("series level does not match -N")
    prec = args.prec or min(F.prec, G.prec)
    basis = _load_or_build_basis(args.level, args.weight, prec, Path(args.basis))
    use_gtilde = not args.no_gtilde and args.weight >= 1
    gtilde = g_tilde(args.level, args.weight, prec) if use_gtilde else None
    lattice = make_lattice(args.level, args.weight, prec, gtilde=gtilde, basis=basis)
    res = is_equivalent(F, G, lattice)
    _print_verdict(res, args.machine)
    _print_certificate(res, lattice, args.machine)
    return 0 if res.equivalent else 1


def _read_xi_table(path: Path, kind: str, level: int, l: int) -> XiTable:
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if len(toks) not in (2, 3):
                raise DataError(f"{path}:{line_no}: expected 'd value [eps-value]'")
            try:
                d = int(toks[0])
            except ValueError as exc:
                raise DataError(f"{path}:{line_no}: bad twist index {toks[0]!r}") from exc
            const = _parse_fraction(toks[1], f"{path}:{line_no}")
            eps_c = _parse_fraction(toks[2], f"{path}:{line_no}") if len(toks) == 3 else Fraction(0)
            entries[d] = EpsPoly.linear(level, const, eps_c)
    if not entries:
        raise DataError(f"{path}: empty xi table")
    return XiTable(kind, level, l, entries)


_ASSEMBLERS = {
    "complex": (COMPLEX_FULL, assemble_complex),
    "complex-reduced": (COMPLEX_POSITIVE, assemble_complex_reduced),
    "quaternionic": (QUATERNIONIC, assemble_quaternionic),
    "quaternionic-reduced": (QUATERNIONIC_KERNEL_PARITY,
                             assemble_quaternionic_reduced),
}


def _cmd_assemble(args) -> int:
    kind, assembler = _ASSEMBLERS[args.kind]
    table = _read_xi_table(Path(args.xi), kind, args.level, args.l)
    rep = assembler(table, args.prec)
    _print_series(rep.series, f"assembled[{args.kind}]", None, args.machine)
    if not args.machine:
        print(f"weight bound: {rep.weight_bound}")
    return 0


_EXAMPLE_NAMES = {
    "trivial": "trivial",
    "eta2": "eta2_circle",
    "nu2": "nu2_homogeneous",
    "etasigma": "etasigma_product",
    "su3": "su3_appendix",
}

# weight bound and Gtilde direction of each example's indeterminacy lattice
_EXAMPLE_MODULUS = {
    "eta2_circle": (2, True),
    "nu2_homogeneous": (4, True),
    "etasigma_product": (5, False),
    "su3_appendix": (5, False),
}


def _example_lattice(name: str, level: int, prec: int, basis_dir: Path):
    """Build the example's lattice through the basis cache (user bases allowed)."""
    if name not in _EXAMPLE_MODULUS:
        return None
    weight, with_gtilde = _EXAMPLE_MODULUS[name]
    basis = _load_or_build_basis(level, weight, prec, basis_dir)
    gtilde = g_tilde(level, weight, prec) if with_gtilde else None
    return make_lattice(level, weight, prec, gtilde=gtilde, basis=basis)


def _cmd_example(args) -> int:
    name = _EXAMPLE_NAMES[args.name]
    lattice = _example_lattice(name, args.level, args.prec, Path(args.basis))
    report = run_example(name, args.level, args.prec,
                         e_invariant=Fraction(args.e_invariant),
                         lattice=lattice)
    if args.machine:
        print(f"example={args.name} level={args.level} prec={args.prec}")
        print(f"verdict={'true' if report.verdict else 'false'}")
        if report.equivalence is not None:
            print(f"false_is_proof={'yes' if report.equivalence.false_is_proof else 'no'}")
        write_series(sys.stdout, report.assembled.series, None, "assembled")
        if report.reference is not None:
            write_series(sys.stdout, report.reference.series, None, "reference")
    else:
        print(f"example {args.name} at level {args.level}, precision {args.prec}")
        for key, value in report.details.items():
            print(f"  {key}: {value}")
        _print_series(report.assembled.series, "assembled", None, False)
        if report.reference is not None:
            _print_series(report.reference.series, "reference", None, False)
        if report.equivalence is not None:
            _print_verdict(report.equivalence, False)
        print(f"verdict: {report.verdict}")
    return 0 if report.verdict else 1


def _cmd_oracle(args) -> int:
    levels = [args.level] if args.level else [2, 3]
    taus = [0.31j, 0.05 + 0.4j]
    worst = 0.0
    for level in levels:
        exp = ell_expansion(level, args.max_weight, args.prec)
        for tau in taus:
            coeffs = numeric_taylor(lambda x: ell_numeric(level, tau, x),
                                    args.max_weight, radius=0.4, samples=64)
            for k in range(1, args.max_weight + 1):
                exact = series_value(exp.x_coefficient(k), tau)
                err = abs(coeffs[k] - exact)
                worst = max(worst, err)
                if args.machine:
                    print(f"oracle level={level} tau={tau} k={k} err={err:.3e}")
    ok = worst < ORACLE_TOLERANCE
    if args.machine:
        print(f"oracle_max_err={worst:.3e}")
        print(f"oracle_pass={'true' if ok else 'false'}")
    else:
        print(f"max |numeric - exact| over Taylor orders: {worst:.3e} "
              f"({'PASS' if ok else 'FAIL'} at {ORACLE_TOLERANCE})")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Argument parsing


def _level_arg(value: str) -> int:
    n = int(value)
    if n < 2:
        raise argparse.ArgumentTypeError("level must be an integer >= 2")
    return n


def _positive_arg(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def _nonnegative_arg(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finv",
        description="Exact q-expansion workbench for transfer f-invariant representatives.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prec_default=10, level_default=3):
        p.add_argument("-N", "--level", type=_level_arg, default=level_default,
                       help="cyclotomic level (>= 2)")
        p.add_argument("-p", "--prec", type=_positive_arg, default=prec_default,
                       help="q-expansion precision (coefficients q^0..q^(p-1))")
        p.add_argument("--machine", action="store_true",
                       help="line-stable machine-readable output")

    p = sub.add_parser("eis", help="print a level-N Eisenstein-type series")
    common(p)
    p.add_argument("-k", "--weight", type=_positive_arg, required=True)
    p.add_argument("--tilde", action="store_true",
                   help="remove the constant term")
    p.set_defaults(func=_cmd_eis)

    p = sub.add_parser("ell", help="print the genus expansion coefficients")
    common(p)
    p.add_argument("-k", "--order", type=_positive_arg, default=4,
                   help="highest x-power")
    p.add_argument("--quaternionic", type=int, default=None, metavar="ORDER",
                   help="also print the quaternionic expansion entries 0..ORDER")
    p.set_defaults(func=_cmd_ell)

    p = sub.add_parser("g2", help="print the weight-two combination and its congruence")
    common(p, prec_default=50)
    p.set_defaults(func=_cmd_g2)

    p = sub.add_parser("divcong", help="decide equivalence modulo the indeterminacy lattice")
    common(p)
    p.add_argument("series_f", help="series file F")
    p.add_argument("series_g", help="series file G")
    p.add_argument("-w", "--weight", type=_nonnegative_arg, required=True,
                   help="weight bound of the lattice")
    p.add_argument("--basis", default="./bases", help="basis cache directory")
    p.add_argument("--no-gtilde", action="store_true",
                   help="drop the R*Gtilde direction from the lattice")
    p.set_defaults(func=_cmd_divcong, prec=None)

    p = sub.add_parser("assemble", help="assemble a representative from a xi table")
    common(p)
    p.add_argument("--kind", choices=sorted(_ASSEMBLERS), required=True)
    p.add_argument("--xi", required=True, help="xi table file: 'd value [eps-value]' lines")
    p.add_argument("-l", type=_positive_arg, required=True,
                   help="half-dimension parameter of the base")
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("example", help="run a worked example end to end")
    common(p)
    p.add_argument("name", choices=sorted(_EXAMPLE_NAMES))
    p.add_argument("-e", "--e-invariant", default="1",
                   help="rational e-invariant input for the trivial example")
    p.add_argument("--basis", default="./bases",
                   help="basis cache directory (required data for levels "
                        "without built-in generators)")
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("oracle", help="compare exact series against the numeric genus")
    common(p, prec_default=60, level_default=None)
    p.add_argument("-k", "--max-weight", type=_positive_arg, default=6)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, FileNotFoundError, BasisError, PrecisionError,
            LevelMismatchError, EpsPartError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
