"""Command-line front end.

Subcommands: ``ladder`` (rate approximations table), ``limits`` (exact
optimal rates), ``constants`` (achievability/converse constant block),
``census`` (low-entropy string counts), ``codec encode|decode``.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import approximations as ap
from . import coding
from . import exact_limits as el
from . import types_census as tc
from .distributions import SourcePmf, entropy
from .errors import (
    CodewordError,
    DistributionError,
    DomainError,
    InvariantViolation,
    PragrateError,
    ResourceLimitError,
)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 4


def _parse_n_range(text: str) -> list[int]:
    """'50' -> [50]; '20:100' -> 20..100; '20:100:20' -> 20,40,...,100."""
    parts = text.split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    if len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
        return list(range(lo, hi + 1))
    if len(parts) == 3:
        lo, hi, step = (int(x) for x in parts)
        return list(range(lo, hi + 1, step))
    raise DomainError(f"bad n range {text!r}; use N, LO:HI or LO:HI:STEP")


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise DomainError(f"bad numeric list {text!r}: {exc}") from exc


def _apply_config_defaults(args: argparse.Namespace) -> None:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if getattr(args, attr, None) in (None, False):
                setattr(args, attr, value)


def _load_source(args: argparse.Namespace) -> SourcePmf:
    if not getattr(args, "source", None):
        raise DomainError("--source is required for this subcommand")
    return SourcePmf.load(str(args.source))


def _cmd_ladder(args: argparse.Namespace) -> int:
    p = _load_source(args)
    if bool(args.eps) == bool(args.delta):
        raise DomainError("provide exactly one of --eps or --delta")
    ns = _parse_n_range(str(args.n))
    if not ns:
        raise DomainError("empty n range")
    rows = []
    for n in ns:
        if args.eps:
            eps_list = _parse_float_list(args.eps)
        else:
            eps_list = [
                ap.delta_to_epsilon(d, n) for d in _parse_float_list(args.delta)
            ]
        for eps in eps_list:
            rows.append(
                ap.compute_rate_ladder(
                    p,
                    n,
                    eps,
                    include_exact=not args.no_exact,
                    cap_types=args.cap_types,
                    prefix_mode=(args.mode == "prefix"),
                )
            )
    if args.format == "markdown":
        sys.stdout.write(ap.ladder_to_markdown(rows))
    elif args.format == "json":
        sys.stdout.write(ap.ladder_to_json(rows) + "\n")
    else:
        sys.stdout.write(ap.ladder_to_csv(rows))
    notes = [r.note for r in rows if r.note]
    for note in notes:
        sys.stderr.write(f"note: {note}\n")
    return EXIT_OK


def _cmd_limits(args: argparse.Namespace) -> int:
    p = _load_source(args)
    ns = _parse_n_range(str(args.n))
    eps_list = _parse_float_list(args.eps)
    out = ["n,epsilon,L_star,rate"]
    for n in ns:
        for eps in eps_list:
            rate = el.optimal_rate(p, n, eps, cap_types=args.cap_types)
            l_star = round(rate * n) + 1
            out.append(f"{n},{eps!r},{l_star},{rate!r}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def _cmd_constants(args: argparse.Namespace) -> int:
    p = _load_source(args)
    if args.delta is None:
        raise DomainError("--delta is required for constants")
    cc = ap.converse_constants(p, float(args.delta))
    payload = cc.to_dict()
    payload["pragmatic_correction_note"] = (
        "achievability holds for all n >= 1; converse for n > N0"
    )
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _cmd_census(args: argparse.Namespace) -> int:
    if args.threshold_bits is not None:
        h = float(args.threshold_bits)
        m = args.m
        if m is None:
            raise DomainError("--m is required with --threshold-bits")
    else:
        if not args.threshold_source:
            raise DomainError("provide --threshold-bits or --threshold-source")
        q = SourcePmf.load(args.threshold_source)
        h = entropy(q)
        m = args.m if args.m is not None else q.m
    ns = _parse_n_range(str(args.n))
    if args.slab:
        out = ["n,threshold_bits,slab_type_count"]
        for n in ns:
            out.append(f"{n},{h!r},{tc.entropy_slab_count(n, m, h)}")
    else:
        out = ["n,threshold_bits,log2_count,theta_ratio"]
        for n in ns:
            if tc.count_types(n, m) > args.cap_types:
                sys.stderr.write(f"warning: n={n} exceeds type cap; sweep truncated\n")
                break
            rep = tc.low_entropy_count(n, m, h)
            log2c = math.log2(rep.count) if rep.count else float("-inf")
            out.append(f"{n},{h!r},{log2c!r},{rep.theta_ratio!r}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def _resolve_alphabet(args: argparse.Namespace) -> str:
    alphabet = args.alphabet
    if not alphabet:
        raise DomainError("--alphabet is required (e.g. --alphabet ab)")
    if len(set(alphabet)) != len(alphabet) or len(alphabet) < 2:
        raise DomainError("alphabet must be >= 2 distinct symbols")
    return alphabet


def _build_cli_ordering(args: argparse.Namespace, m: int) -> coding.CodeOrdering:
    mode = coding.KNOWN_SOURCE if args.mode == "known" else coding.UNIVERSAL
    source = None
    if mode == coding.KNOWN_SOURCE:
        source = _load_source(args)
        if source.m != m:
            raise DomainError("source pmf size must match alphabet length")
    return coding.build_ordering(mode, args.n, m, source, cap_types=args.cap_types)


def _cmd_codec_encode(args: argparse.Namespace) -> int:
    alphabet = _resolve_alphabet(args)
    sym_index = {ch: i for i, ch in enumerate(alphabet)}
    ordering = _build_cli_ordering(args, len(alphabet))
    lines = [ln.strip() for ln in args.infile.read().splitlines() if ln.strip()]
    out = [f"# mode={args.mode} m={len(alphabet)} n={args.n} alphabet={alphabet}"]
    for line in lines:
        if len(line) != args.n:
            raise DomainError(f"string {line!r} is not of length n={args.n}")
        try:
            x = [sym_index[ch] for ch in line]
        except KeyError as exc:
            raise DomainError(f"symbol {exc} not in alphabet {alphabet!r}") from exc
        cw = coding.encode(ordering, x)
        if args.audit:
            h_emp = tc.type_entropy_bits(
                [line.count(ch) for ch in alphabet]
            )
            out.append(f"{cw.bits} # len={cw.length} emp_entropy={h_emp!r}")
        else:
            out.append(cw.bits)
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def _cmd_codec_decode(args: argparse.Namespace) -> int:
    lines = [ln.rstrip("\n") for ln in args.infile.read().splitlines()]
    if not lines or not lines[0].startswith("#"):
        raise DomainError("codeword stream must start with its '# mode=...' header")
    header = dict(
        tok.split("=", 1) for tok in lines[0].lstrip("# ").split() if "=" in tok
    )
    try:
        mode, m, n = header["mode"], int(header["m"]), int(header["n"])
        alphabet = header["alphabet"]
    except KeyError as exc:
        raise DomainError(f"codeword header missing field {exc}") from exc
    args.mode, args.n = mode, n
    ordering = _build_cli_ordering(args, m)
    out = []
    # Every line after the header is one codeword; an empty line is the
    # legitimate empty codeword (index 1), so blank lines are not skipped.
    for line in lines[1:]:
        bits = line.split("#", 1)[0].strip()
        word = coding.Codeword(bits)
        x = coding.decode(ordering, word)
        out.append("".join(alphabet[s] for s in x))
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pragrate",
        description=(
            "Fundamental limits of variable-rate lossless compression at "
            "exponentially small excess-rate probability"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, source=True):
        sp.add_argument("--config", help="JSON config file supplying defaults")
        sp.add_argument("--cap-types", type=int, default=el.DEFAULT_TYPE_CAP)
        if source:
            sp.add_argument("--source", help="pmf: inline '0.2,0.8', JSON, or a file path")

    ladder = sub.add_parser("ladder", help="rate approximation table")
    common(ladder)
    ladder.add_argument("--n", required=True, help="blocklength or LO:HI[:STEP]")
    ladder.add_argument("--eps", help="comma-separated excess-rate probabilities")
    ladder.add_argument("--delta", help="comma-separated exponents (bits)")
    ladder.add_argument("--mode", choices=["one-to-one", "prefix"], default="one-to-one")
    ladder.add_argument("--format", choices=["csv", "markdown", "json"], default="csv")
    ladder.add_argument("--no-exact", action="store_true", help="skip the exact column")
    ladder.set_defaults(func=_cmd_ladder)

    limits = sub.add_parser("limits", help="exact optimal rates")
    common(limits)
    limits.add_argument("--n", required=True)
    limits.add_argument("--eps", required=True)
    limits.set_defaults(func=_cmd_limits)

    constants = sub.add_parser("constants", help="achievability/converse constants")
    common(constants)
    constants.add_argument("--delta", required=True, type=float)
    constants.set_defaults(func=_cmd_constants)

    census = sub.add_parser("census", help="low-empirical-entropy census sweep")
    common(census, source=False)
    census.add_argument("--m", type=int, help="alphabet size")
    census.add_argument("--n", required=True, help="blocklength range LO:HI[:STEP]")
    census.add_argument("--threshold-bits", type=float)
    census.add_argument("--threshold-source", help="pmf whose entropy is the threshold")
    census.add_argument("--slab", action="store_true", help="count types in [h-1/n, h] instead")
    census.set_defaults(func=_cmd_census)

    codec = sub.add_parser("codec", help="encode/decode fixed-length strings")
    codec_sub = codec.add_subparsers(dest="codec_op", required=True)
    enc = codec_sub.add_parser("encode")
    common(enc)
    enc.add_argument("--mode", choices=["known", "universal"], default="universal")
    enc.add_argument("--alphabet", required=True, help="symbol order, e.g. 'ab'")
    enc.add_argument("--n", required=True, type=int)
    enc.add_argument("--audit", action="store_true", help="emit lengths and empirical entropies")
    enc.add_argument("infile", nargs="?", type=argparse.FileType("r"), default=sys.stdin)
    enc.set_defaults(func=_cmd_codec_encode)
    dec = codec_sub.add_parser("decode")
    common(dec)
    dec.add_argument("infile", nargs="?", type=argparse.FileType("r"), default=sys.stdin)
    dec.set_defaults(func=_cmd_codec_decode)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_defaults(args)
        return args.func(args)
    except (DistributionError, DomainError, CodewordError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID_INPUT
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return EXIT_INTERNAL
    except PragrateError as exc:  # pragma: no cover - safety net
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
