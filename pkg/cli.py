"""
nilgeo command-line front end

Reads an algebra document (a path or '-' for stdin), runs one computation
and prints a table or JSON report on stdout. Diagnostics go to stderr as a
single 'nilgeo: error: ...' line.

Exit statuses:
    0  success (for 'parallel': Berwald Randers metrics exist; for 'verify': all checks passed)
    1  error (command-line usage errors included), or a failed 'verify'
    2  'parallel' found no nonzero parallel field
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv

from nilgeo import config
from nilgeo.algebra_core import MetricLieAlgebra, center, derived, is_two_step_nilpotent, validate
from nilgeo.berwald import make_berwald_randers, parallel_field_basis
from nilgeo.curvature import Plane, curvature_scan, riemann_tensor, scalar_curvature, sectional_curvature
from nilgeo.errors import DuplicateBracket, IndexOutOfRange, MalformedDocument, NilgeoError, ValidationFailed
from nilgeo.families import family, verify_paper
from nilgeo.levi_civita import christoffel
from nilgeo.randers import Flag, flag_report, flag_scan

logger = logging.getLogger('nilgeo.cli')

COMMANDS = ('check', 'connection', 'curvature', 'sectional', 'scalar', 'parallel', 'flag', 'scan', 'family', 'verify')

# Entries below this (times the report's scale) print as 0
ZERO_CHOP = 1e-14


def setup_logging(verbose: bool = False) -> logging.Logger:
    """Configure root logging on stderr; stdout carries only reports."""
    logging.basicConfig(
        level=config.get_log_level('DEBUG' if verbose else None),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    return logger


@dataclass
class Command:
    """One parsed invocation."""

    name: str
    source: Optional[str] = None
    document: Optional[str] = None
    fmt: str = 'table'
    a: Optional[List[float]] = None
    b: Optional[List[float]] = None
    x: Optional[List[float]] = None
    y: Optional[List[float]] = None
    u: Optional[List[float]] = None
    center_dim: Optional[int] = None
    lam: Optional[float] = None
    mu: Optional[float] = None
    samples: int = 10000
    pairs: int = 1000
    seed: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'Command':
        fields = {key: value for key, value in vars(args).items() if key in cls.__dataclass_fields__}
        return cls(**fields)


@dataclass
class CommandResult:
    status: int
    output: str = ''
    error: Optional[str] = None


def _require_int(entry: Dict[str, Any], key: str, position: int) -> int:
    value = entry.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedDocument(f"Bracket {position}: '{key}' must be an integer, got {value!r}")
    return value


def parse_algebra(document: str) -> MetricLieAlgebra:
    """
    Parse and validate an algebra document.

    The document is a JSON object {"dimension": n, "brackets": [{"i", "j",
    "k", "c"}, ...], "gram": [[...]]} with 1-based indices and i < j in
    every bracket entry; gram is optional (identity).

    Args:
        document: UTF-8 JSON text

    Returns:
        Validated MetricLieAlgebra with antisymmetrized structure constants

    Raises:
        MalformedDocument: Invalid JSON, wrong shapes or an entry with i >= j
        DuplicateBracket: The same (i, j, k) listed twice
        IndexOutOfRange: An index outside 1..n
        ValidationFailed: Antisymmetry, Jacobi or gram checks failed
    """
    try:
        data = json.loads(document)
    except (json.JSONDecodeError, TypeError) as e:
        raise MalformedDocument(f"Algebra document is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise MalformedDocument("Algebra document must be a JSON object")

    dim = data.get('dimension')
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise MalformedDocument(f"'dimension' must be a positive integer, got {dim!r}")
    brackets = data.get('brackets')
    if not isinstance(brackets, list):
        raise MalformedDocument("'brackets' must be a list")

    entries: Dict[Tuple[int, int, int], float] = {}
    for position, entry in enumerate(brackets, start=1):
        if not isinstance(entry, dict):
            raise MalformedDocument(f"Bracket {position} must be an object")
        i, j, k = (_require_int(entry, key, position) for key in ('i', 'j', 'k'))
        c = entry.get('c')
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise MalformedDocument(f"Bracket {position}: 'c' must be a finite number, got {c!r}")
        for name, index in (('i', i), ('j', j), ('k', k)):
            if not 1 <= index <= dim:
                raise IndexOutOfRange(f"Bracket {position}: {name}={index} outside 1..{dim}")
        if i >= j:
            raise MalformedDocument(f"Bracket {position}: need i < j, got i={i}, j={j}")
        if (i, j, k) in entries:
            raise DuplicateBracket(f"Bracket ({i}, {j}, {k}) listed more than once")
        entries[(i, j, k)] = float(c)

    gram = data.get('gram')
    if gram is not None:
        try:
            gram = np.array(gram, dtype=float)
        except (TypeError, ValueError) as e:
            raise MalformedDocument(f"'gram' must be a numeric matrix: {e}")
        if gram.shape != (dim, dim):
            raise MalformedDocument(f"'gram' has shape {gram.shape}, expected {(dim, dim)}")

    alg = MetricLieAlgebra.from_brackets(dim, entries, gram)
    report = validate(alg)
    if not report.overall:
        names = ', '.join(check.name for check in report.failed())
        raise ValidationFailed(f"Algebra failed validation: {names}", report)
    logger.debug(f"Parsed algebra of dimension {dim} with {len(entries)} brackets")
    return alg


def algebra_document(alg: MetricLieAlgebra) -> Dict[str, Any]:
    """Inverse of parse_algebra: i < j nonzero entries, gram only when not identity."""
    n = alg.dim
    brackets = [
        {'i': i + 1, 'j': j + 1, 'k': k + 1, 'c': float(alg.structure[i, j, k])}
        for i in range(n) for j in range(i + 1, n) for k in range(n)
        if alg.structure[i, j, k] != 0.0
    ]
    document: Dict[str, Any] = {'dimension': n, 'brackets': brackets}
    if not alg.is_identity_gram:
        document['gram'] = alg.gram.tolist()
    return document


def parse_vector(text: str) -> List[float]:
    """argparse type for comma-separated reals."""
    try:
        values = [float(part) for part in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"vector components must be finite, got {text!r}")
    return values


def clean(value: float, scale: float = 1.0) -> float:
    """Chop roundoff-level values to 0 and normalize -0.0."""
    value = float(value)
    if abs(value) <= ZERO_CHOP * max(1.0, scale):
        return 0.0
    return value + 0.0


def format_number(value: float, scale: float = 1.0) -> str:
    """12 significant digits, '-0' printed as '0'."""
    text = f"{clean(value, scale):.12g}"
    return '0' if text == '-0' else text


def format_combination(vector: Sequence[float], scale: float = 1.0) -> str:
    """Vector as a linear combination such as '0.5 e5 - 0.25 e3'; '0' when zero."""
    text = ''
    for idx, value in enumerate(vector, start=1):
        value = clean(value, scale)
        if value == 0.0:
            continue
        magnitude = format_number(abs(value))
        if not text:
            text = f"{'-' if value < 0 else ''}{magnitude} e{idx}"
        else:
            text += f" {'-' if value < 0 else '+'} {magnitude} e{idx}"
    return text or '0'


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(row[col])) for row in [header] + list(rows)) for col in range(len(header))]
    lines = ['  '.join(str(cell).ljust(width) for cell, width in zip(row, widths)).rstrip()
             for row in [header] + list(rows)]
    return '\n'.join(lines)


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, allow_nan=False)


def _nested(array: np.ndarray, scale: float) -> Any:
    if array.ndim == 0:
        return clean(array, scale)
    return [_nested(sub, scale) for sub in array]


def _vector(name: str, value: Optional[List[float]]) -> List[float]:
    if value is None:
        raise MalformedDocument(f"--{name} is required for this command")
    return value


def read_source(source: Optional[str]) -> str:
    if source is None:
        raise MalformedDocument("No algebra document given")
    if source == '-':
        return sys.stdin.read()
    with open(source, encoding='utf-8') as handle:
        return handle.read()


def _load(cmd: Command) -> MetricLieAlgebra:
    text = cmd.document if cmd.document is not None else read_source(cmd.source)
    return parse_algebra(text)


def _check(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    report = validate(alg)
    center_dim = len(center(alg))
    derived_dim = len(derived(alg))
    two_step = is_two_step_nilpotent(alg)
    if cmd.fmt == 'json':
        payload = report.to_dict()
        payload.update({'dimension': alg.dim, 'center_dimension': center_dim,
                        'derived_dimension': derived_dim, 'two_step_nilpotent': two_step})
        return CommandResult(0, _json(payload))
    rows = [[c.name, 'pass' if c.passed else 'FAIL', format_number(c.residual)] for c in report.checks]
    lines = [
        render_table(['check', 'result', 'residual'], rows),
        '',
        f"dimension {alg.dim}",
        f"center dimension {center_dim}",
        f"derived dimension {derived_dim}",
        f"two-step nilpotent {'yes' if two_step else 'no'}",
    ]
    return CommandResult(0, '\n'.join(lines))


def _connection(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    gamma = christoffel(alg).gamma
    scale = float(np.max(np.abs(gamma))) if gamma.size else 1.0
    n = alg.dim
    if cmd.fmt == 'json':
        return CommandResult(0, _json({'dimension': n, 'gamma': _nested(gamma, scale)}))
    header = [''] + [f"e{j}" for j in range(1, n + 1)]
    rows = [[f"nabla_e{i + 1}"] + [format_combination(gamma[i, j], scale) for j in range(n)] for i in range(n)]
    return CommandResult(0, render_table(header, rows))


def _curvature(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    r = riemann_tensor(alg, christoffel(alg)).r
    scale = float(np.max(np.abs(r))) if r.size else 1.0
    n = alg.dim
    if cmd.fmt == 'json':
        entries = [
            {'i': i + 1, 'j': j + 1, 'k': k + 1, 'l': l + 1, 'value': clean(r[i, j, k, l], scale)}
            for i in range(n) for j in range(n) for k in range(n) for l in range(n)
            if clean(r[i, j, k, l], scale) != 0.0
        ]
        return CommandResult(0, _json({'dimension': n, 'entries': entries}))
    header = [''] + [f"e{k}" for k in range(1, n + 1)]
    rows = [[f"R(e{i + 1},e{j + 1})"] + [format_combination(r[i, j, k], scale) for k in range(n)]
            for i in range(n) for j in range(i + 1, n)]
    return CommandResult(0, render_table(header, rows))


def _scalar_result(cmd: Command, key: str, value: float) -> CommandResult:
    if cmd.fmt == 'json':
        return CommandResult(0, _json({key: clean(value)}))
    return CommandResult(0, format_number(value))


def _sectional(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    k = sectional_curvature(alg, christoffel(alg), _vector('a', cmd.a), _vector('b', cmd.b))
    return _scalar_result(cmd, 'sectional_curvature', k)


def _scalar(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    return _scalar_result(cmd, 'scalar_curvature', scalar_curvature(alg, christoffel(alg)))


def _parallel(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    basis = parallel_field_basis(alg, christoffel(alg))
    status = 0 if basis.exists else 2
    if cmd.fmt == 'json':
        payload = {
            'kernel_dimension': basis.dimension,
            'basis': [[clean(v) for v in vector] for vector in basis.vectors],
            'berwald_randers_exists': basis.exists,
        }
        return CommandResult(status, _json(payload))
    lines = [f"kernel dimension {basis.dimension}"]
    lines += [f"  {format_combination(vector)}" for vector in basis.vectors]
    lines.append(f"Berwald Randers metrics {'exist' if basis.exists else 'do not exist'}")
    return CommandResult(status, '\n'.join(lines))


def _flag(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    rm = make_berwald_randers(alg, christoffel(alg), _vector('x', cmd.x))
    report = flag_report(rm, Flag(np.array(_vector('y', cmd.y)), np.array(_vector('u', cmd.u))))
    values = {'K': report.K, 'K_riemann': report.K_riemann, 'denominator': report.denominator}
    if cmd.fmt == 'json':
        return CommandResult(0, _json({key: clean(value) for key, value in values.items()}))
    return CommandResult(0, render_table(['quantity', 'value'],
                                         [[key, format_number(value)] for key, value in values.items()]))


def _plane_text(plane: Plane) -> str:
    return f"span{{{format_combination(plane.a)}, {format_combination(plane.b)}}}"


def _scan(cmd: Command) -> CommandResult:
    alg = _load(cmd)
    ct = christoffel(alg)
    seed = cmd.seed if cmd.seed is not None else config.get_default_seed()
    if cmd.x is not None:
        scan = flag_scan(make_berwald_randers(alg, ct, cmd.x), cmd.samples, seed)
        values = {
            'min_K': clean(scan.min_K), 'max_K': clean(scan.max_K), 'negative': scan.negative,
            'near_zero': scan.near_zero, 'positive': scan.positive,
            'sign_mismatches': scan.sign_mismatches, 'evaluated': scan.evaluated,
        }
        if cmd.fmt == 'json':
            return CommandResult(0, _json(values))
        rows = [[key, format_number(value) if isinstance(value, float) else str(value)]
                for key, value in values.items()]
        return CommandResult(0, render_table(['quantity', 'value'], rows))

    scan = curvature_scan(alg, ct, cmd.samples, seed)
    if cmd.fmt == 'json':
        payload = {
            'min_K': clean(scan.min_K), 'max_K': clean(scan.max_K),
            'argmin': [[clean(v) for v in scan.argmin.a], [clean(v) for v in scan.argmin.b]],
            'argmax': [[clean(v) for v in scan.argmax.a], [clean(v) for v in scan.argmax.b]],
            'evaluated': scan.evaluated,
        }
        return CommandResult(0, _json(payload))
    rows = [
        ['min_K', format_number(scan.min_K), _plane_text(scan.argmin)],
        ['max_K', format_number(scan.max_K), _plane_text(scan.argmax)],
    ]
    lines = [render_table(['quantity', 'value', 'plane'], rows), '', f"planes evaluated {scan.evaluated}"]
    return CommandResult(0, '\n'.join(lines))


def _family(cmd: Command) -> CommandResult:
    alg = family(cmd.center_dim, cmd.lam, cmd.mu)
    return CommandResult(0, _json(algebra_document(alg)))


def _verify(cmd: Command) -> CommandResult:
    seed = cmd.seed if cmd.seed is not None else config.get_default_seed()
    report = verify_paper(pairs=cmd.pairs, scan_samples=cmd.samples, seed=seed)
    status = 0 if report.overall else 1
    if cmd.fmt == 'json':
        payload = report.to_dict()
        for check in payload['checks']:
            check['residual'] = check['residual'] if math.isfinite(check['residual']) else None
        return CommandResult(status, _json(payload))
    rows = [[c.name, 'pass' if c.passed else 'FAIL', format_number(c.residual) if math.isfinite(c.residual) else 'inf']
            for c in report.checks]
    lines = [render_table(['check', 'result', 'residual'], rows), '',
             f"overall {'pass' if report.overall else 'FAIL'}"]
    return CommandResult(status, '\n'.join(lines))


HANDLERS = {
    'check': _check,
    'connection': _connection,
    'curvature': _curvature,
    'sectional': _sectional,
    'scalar': _scalar,
    'parallel': _parallel,
    'flag': _flag,
    'scan': _scan,
    'family': _family,
    'verify': _verify,
}


def run(cmd: Command) -> CommandResult:
    """
    Dispatch one command.

    Library errors become a single diagnostic line with status 1; nothing
    propagates.

    Args:
        cmd: Parsed command

    Returns:
        CommandResult with exit status, report text and optional diagnostic
    """
    handler = HANDLERS.get(cmd.name)
    if handler is None:
        return CommandResult(1, error=f"nilgeo: error: unknown command {cmd.name!r}")
    if cmd.fmt not in ('table', 'json'):
        return CommandResult(1, error=f"nilgeo: error: unknown format {cmd.fmt!r}")
    try:
        return handler(cmd)
    except NilgeoError as e:
        logger.info(f"{cmd.name} failed with {type(e).__name__}")
        return CommandResult(1, error=f"nilgeo: error: {type(e).__name__}: {e}")
    except OSError as e:
        return CommandResult(1, error=f"nilgeo: error: cannot read {cmd.source}: {e.strerror or e}")
    except Exception as e:
        logger.error(f"Unexpected error in {cmd.name}: {e}", exc_info=True)
        return CommandResult(1, error=f"nilgeo: error: unexpected {type(e).__name__}: {e}")


class NilgeoArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as one diagnostic line with exit status 1."""

    def error(self, message: str):
        self.exit(1, f"nilgeo: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = NilgeoArgumentParser(prog='nilgeo', description="Left-invariant Riemannian and Randers geometry "
                                                             "on metric Lie algebras")
    parser.add_argument('-v', '--verbose', action='store_true', help="Debug logging on stderr")
    sub = parser.add_subparsers(dest='name', required=True, metavar='command')

    def with_source(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument('source', help="Algebra document path, or '-' for stdin")
        p.add_argument('--format', dest='fmt', choices=('table', 'json'), default='table')
        return p

    with_source('check', "Validate an algebra and report center and derived dimensions")
    with_source('connection', "Levi-Civita connection table")
    with_source('curvature', "Curvature tensor table")
    p = with_source('sectional', "Sectional curvature of span{a, b}")
    p.add_argument('--a', type=parse_vector, required=True)
    p.add_argument('--b', type=parse_vector, required=True)
    with_source('scalar', "Scalar curvature")
    with_source('parallel', "Parallel left-invariant fields (exit 2 when none exist)")
    p = with_source('flag', "Flag curvature of a Berwald Randers metric")
    p.add_argument('--x', type=parse_vector, required=True, help="Deformation field")
    p.add_argument('--y', type=parse_vector, required=True, help="Pole")
    p.add_argument('--u', type=parse_vector, required=True, help="Transverse edge")
    p = with_source('scan', "Sectional curvature extremes over random planes (flag curvature signs with --x)")
    p.add_argument('--samples', type=int, default=10000)
    p.add_argument('--seed', type=int, default=None, help="Defaults to NILGEO_SEED")
    p.add_argument('--x', type=parse_vector, default=None, help="Scan flag curvature of this Randers deformation")

    p = sub.add_parser('family', help="Emit the algebra document of a two-step nilpotent family")
    p.add_argument('--center-dim', dest='center_dim', type=int, required=True, choices=(1, 2, 3))
    p.add_argument('--lambda', dest='lam', type=float, required=True)
    p.add_argument('--mu', dest='mu', type=float, default=None)

    p = sub.add_parser('verify', help="Check every published table and formula")
    p.add_argument('--format', dest='fmt', choices=('table', 'json'), default='table')
    p.add_argument('--samples', type=int, default=10000, help="Samples per sign scan")
    p.add_argument('--pairs', type=int, default=1000, help="Random pairs per closed-form cross-check")
    p.add_argument('--seed', type=int, default=None, help="Defaults to NILGEO_SEED")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    result = run(Command.from_args(args))
    if result.output:
        print(result.output)
    if result.error:
        print(result.error, file=sys.stderr)
    return result.status


if __name__ == '__main__':
    sys.exit(main())
