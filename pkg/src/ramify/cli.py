"""Command-line front end.

Subcommands: classify, reduce, decompose, sweep, selftest.  Output is JSON by
default (csv and table for humans); every JSON document validates against the
committed schema in ramify/schema/result.schema.json.  Exit codes: 0 success,
1 math-layer error (structured message on stderr), 2 usage error.

RAMIFY_PRECISION, when set, truncates parsed series to that absolute
precision; commands retry with doubled precision (up to 4 doublings) if a
computation runs out of known terms, and record the retries.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import InsufficientPrecision, RamifyError
from .field_core import LaurentSeries, field, format_series, parse_series
from .artin_schreier import reduce_K
from .decomp import decompose, q8_prepare
from .classify import GroupKind, SubgroupChoice, classify
from .harness import (coprime_breaks, groups_for, random_pair,
                      random_reduced_generator, run_selftest)

MAX_PRECISION_RETRIES = 4


@dataclass
class JobSpec:
    command: str
    p: int = 2
    f: int = 1
    modulus: tuple | None = None
    group: str | None = None
    choice: str = SubgroupChoice.SIGMA1P_SIGMA2.value
    beta1: str | None = None
    beta2: str | None = None
    kappa: str | None = None
    kappa3: str = '0'
    output: str = 'json'
    precision: int | None = None
    window: int | None = None
    u_max: int = 9
    samples: int = 2
    trials: int = 100
    seed: int = 0
    kappa3_mode: str = 'trivial'
    groups: list = dc_field(default_factory=list)
    choices: str = 'both'
    jobs: int = 4


def _field_doc(fld):
    return {'p': fld.p, 'f': fld.f, 'q': fld.q, 'modulus': list(fld.modulus)}


def _df_doc(df):
    if df.is_finite:
        return {'kind': 'finite', 'value': df.value}
    return {'kind': 'zero'} if df.is_zero else {'kind': 'infinite'}


def _parse(fld, text, precision):
    s = parse_series(fld, text)
    if precision is not None:
        s = s.truncate(precision)
    return s


def _with_precision_retry(spec: JobSpec, fn):
    """Run fn(precision) retrying with doubled precision on truncation errors."""
    precision = spec.precision
    retries = 0
    while True:
        try:
            doc = fn(precision)
            if retries:
                doc['precision_retries'] = retries
                doc['precision_used'] = precision
            return doc
        except InsufficientPrecision:
            if precision is None or retries >= MAX_PRECISION_RETRIES:
                raise
            precision *= 2
            retries += 1


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_classify(spec: JobSpec) -> dict:
    fld = field(spec.p, spec.f, spec.modulus)

    def attempt(precision):
        res = classify(spec.group,
                       _parse(fld, spec.beta1, precision),
                       _parse(fld, spec.beta2, precision),
                       _parse(fld, spec.kappa3, precision),
                       spec.choice)
        return {'command': 'classify', 'field': _field_doc(fld),
                'inputs': {'group': spec.group, 'choice': res.choice.value,
                           'beta1': spec.beta1, 'beta2': spec.beta2,
                           'kappa3': spec.kappa3},
                'result': res.to_dict()}

    return _with_precision_retry(spec, attempt)


def _cmd_reduce(spec: JobSpec) -> dict:
    fld = field(spec.p, spec.f, spec.modulus)

    def attempt(precision):
        gen = reduce_K(_parse(fld, spec.kappa, precision))
        if gen.df.is_finite:
            brk = -gen.df.value
        else:
            brk = 'unramified' if gen.df.is_zero else 'trivial'
        return {'command': 'reduce', 'field': _field_doc(fld),
                'inputs': {'kappa': spec.kappa},
                'result': {'reduced': format_series(gen.value),
                           'df': _df_doc(gen.df), 'break': brk}}

    return _with_precision_retry(spec, attempt)


def _cmd_decompose(spec: JobSpec) -> dict:
    fld = field(spec.p, spec.f, spec.modulus)

    def attempt(precision):
        from .artin_schreier import normalized_pair
        b1, b2 = normalized_pair(_parse(fld, spec.beta1, precision),
                                 _parse(fld, spec.beta2, precision))
        d = decompose(b1, b2)
        result = {'u1': d.u1, 'u2': d.u2,
                  'mu': [format_series(m) for m in d.mu],
                  'r': d.r, 's': d.s, 't': d.t,
                  'epsilon': format_series(d.epsilon), 'e': d.e,
                  'mu_last_is_minus_one': d.mu_last_is_minus_one,
                  'm': d.m,
                  'omega': repr(d.omega) if d.omega is not None else None}
        return {'command': 'decompose', 'field': _field_doc(fld),
                'inputs': {'beta1': spec.beta1, 'beta2': spec.beta2},
                'result': result}

    return _with_precision_retry(spec, attempt)


def _cell_seed(seed: int, *key) -> int:
    digest = hashlib.sha256(('|'.join(map(str, key))).encode()).digest()
    return seed ^ int.from_bytes(digest[:8], 'big')


def _sweep_cell(spec: JobSpec, fld, group: GroupKind, choice: SubgroupChoice,
                u1: int, u2: int) -> dict:
    rng = random.Random(_cell_seed(spec.seed, group.value, choice.value, u1, u2))
    cell = {'group': group.value, 'choice': choice.value, 'u1': u1, 'u2': u2,
            'samples': 0, 'nonintegral': 0, 'u3': [], 'B': [], 'retries': 0}
    for _ in range(spec.samples):
        pair = random_pair(rng, fld, u1, u2)
        if pair is None:
            cell['note'] = 'no normalized pair with these breaks over this field'
            break
        if spec.kappa3_mode == 'random':
            b3 = rng.choice([0] + coprime_breaks(fld.p, 1, spec.u_max * fld.p))
            kappa3 = (LaurentSeries.zero(fld) if b3 == 0
                      else random_reduced_generator(rng, fld, b3).value)
        else:
            kappa3 = LaurentSeries.zero(fld)
        precision = spec.precision
        for attempt in range(MAX_PRECISION_RETRIES + 1):
            b1v, b2v, k3v = pair[0].value, pair[1].value, kappa3
            if precision is not None:
                b1v, b2v, k3v = (s.truncate(precision) for s in (b1v, b2v, k3v))
            try:
                res = classify(group, b1v, b2v, k3v, choice)
                break
            except InsufficientPrecision:
                if precision is None or attempt == MAX_PRECISION_RETRIES:
                    raise
                precision *= 2
                cell['retries'] += 1
        cell['samples'] += 1
        cell['nonintegral'] += 0 if res.hasse_arf_integral else 1
        u3s = res.to_dict()['u3']
        if u3s not in cell['u3']:
            cell['u3'].append(u3s)
        bs = res.to_dict()['B']
        if bs not in cell['B']:
            cell['B'].append(bs)
    cell['u3'].sort()
    cell['B'].sort()
    return cell


def _cmd_sweep(spec: JobSpec) -> dict:
    fld = field(spec.p, spec.f, spec.modulus)
    groups = ([GroupKind.parse(g) for g in spec.groups]
              if spec.groups else groups_for(spec.p))
    for g in groups:
        g.check_characteristic(spec.p)
    if spec.choices == 'both':
        choices = list(SubgroupChoice)
    else:
        choices = [SubgroupChoice.parse(spec.choices)]
    breaks = coprime_breaks(spec.p, 1, spec.u_max)
    cells = [(g, c, u1, u2) for g in groups for c in choices
             for u1 in breaks for u2 in breaks if u1 <= u2]
    with ThreadPoolExecutor(max_workers=max(1, spec.jobs)) as pool:
        results = list(pool.map(
            lambda args: _sweep_cell(spec, fld, *args), cells))
    results.sort(key=lambda c: (c['group'], c['choice'], c['u1'], c['u2']))
    summary = {}
    for cell in results:
        g = summary.setdefault(cell['group'],
                               {'cells': 0, 'classified': 0, 'nonintegral': 0})
        g['cells'] += 1
        g['classified'] += cell['samples']
        g['nonintegral'] += cell['nonintegral']
    return {'command': 'sweep', 'field': _field_doc(fld),
            'params': {'groups': [g.value for g in groups],
                       'choices': [c.value for c in choices],
                       'u_max': spec.u_max, 'samples': spec.samples,
                       'seed': spec.seed, 'kappa3': spec.kappa3_mode},
            'cells': results, 'summary': summary}


def _cmd_selftest(spec: JobSpec) -> dict:
    report = run_selftest(spec.p, spec.f, trials=spec.trials, seed=spec.seed,
                          umax=spec.u_max)
    return {'command': 'selftest', 'field': _field_doc(field(spec.p, spec.f, spec.modulus)),
            'report': report.to_dict()}


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------

def _flatten(prefix: str, value, into: dict):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f'{prefix}.{k}' if prefix else str(k), v, into)
    elif isinstance(value, list):
        into[prefix] = ';'.join(map(str, value)) if all(
            not isinstance(x, (dict, list)) for x in value) else json.dumps(value)
    else:
        into[prefix] = value


def _to_csv(doc: dict) -> str:
    out = io.StringIO()
    if doc.get('command') == 'sweep':
        rows = []
        for cell in doc['cells']:
            flat = {}
            _flatten('', cell, flat)
            rows.append(flat)
    else:
        flat = {}
        _flatten('', doc, flat)
        rows = [flat]
    headers = sorted({k for row in rows for k in row})
    writer = csv.DictWriter(out, fieldnames=headers)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return out.getvalue()


def _to_table(doc: dict) -> str:
    lines = []
    if doc.get('command') == 'sweep':
        lines.append(f"sweep over F_{doc['field']['q']} "
                     f"(u <= {doc['params']['u_max']}, seed {doc['params']['seed']})")
        header = f"{'group':<6} {'choice':<14} {'u1':>3} {'u2':>3} {'n':>3} " \
                 f"{'nonint':>6}  u3"
        lines.append(header)
        lines.append('-' * len(header))
        for cell in doc['cells']:
            lines.append(f"{cell['group']:<6} {cell['choice']:<14} "
                         f"{cell['u1']:>3} {cell['u2']:>3} {cell['samples']:>3} "
                         f"{cell['nonintegral']:>6}  {','.join(cell['u3'])}")
        lines.append('')
        lines.append('nonintegral third breaks per group:')
        for g, s in sorted(doc['summary'].items()):
            lines.append(f"  {g:<6} {s['nonintegral']}/{s['classified']}")
    else:
        flat = {}
        _flatten('', doc, flat)
        width = max(len(k) for k in flat)
        for k in sorted(flat):
            lines.append(f'{k:<{width}}  {flat[k]}')
    return '\n'.join(lines) + '\n'


def render(doc: dict, output: str) -> str:
    if output == 'json':
        return json.dumps(doc, indent=2, sort_keys=True) + '\n'
    if output == 'csv':
        return _to_csv(doc)
    return _to_table(doc)


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def run(spec: JobSpec) -> tuple[int, str]:
    """Execute a job; returns (exit_code, rendered_document)."""
    handlers = {'classify': _cmd_classify, 'reduce': _cmd_reduce,
                'decompose': _cmd_decompose, 'sweep': _cmd_sweep,
                'selftest': _cmd_selftest}
    doc = handlers[spec.command](spec)
    code = 0
    if spec.command == 'selftest' and not doc['report']['ok']:
        code = 1
    return code, render(doc, spec.output)


def _add_field_args(sub):
    sub.add_argument('-p', type=int, required=True, help='prime characteristic')
    sub.add_argument('-f', type=int, default=1, help='extension degree of F_q over F_p')
    sub.add_argument('--modulus',
                     help='comma-separated modulus coefficients, constant first '
                          '(default: least irreducible)')
    sub.add_argument('--output', choices=('json', 'csv', 'table'), default='json')
    sub.add_argument('--precision', type=int, default=None,
                     help='truncate parsed series to this absolute precision '
                          '(default RAMIFY_PRECISION, else exact)')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog='ramify',
        description='Ramification breaks of nonabelian degree-p^3 towers over F_q((t))')
    subs = ap.add_subparsers(dest='command', required=True)

    c = subs.add_parser('classify', help='classify one tower')
    _add_field_args(c)
    c.add_argument('--group', required=True, choices=[g.value for g in GroupKind])
    c.add_argument('--beta1', required=True)
    c.add_argument('--beta2', required=True)
    c.add_argument('--kappa3', default='0')
    c.add_argument('--choice', default=SubgroupChoice.SIGMA1P_SIGMA2.value,
                   choices=[x.value for x in SubgroupChoice])

    r = subs.add_parser('reduce', help='reduce one generator modulo K^wp')
    _add_field_args(r)
    r.add_argument('--kappa', required=True)

    d = subs.add_parser('decompose', help='decompose beta2 over beta1-powers')
    _add_field_args(d)
    d.add_argument('--beta1', required=True)
    d.add_argument('--beta2', required=True)

    s = subs.add_parser('sweep', help='tabulate breaks over a grid of (u1, u2)')
    _add_field_args(s)
    s.add_argument('--groups', default='', help='comma-separated groups (default: all valid)')
    s.add_argument('--u-max', type=int, default=9)
    s.add_argument('--samples', type=int, default=2)
    s.add_argument('--seed', type=int, default=0)
    s.add_argument('--kappa3', dest='kappa3_mode', choices=('trivial', 'random'),
                   default='trivial')
    s.add_argument('--choices', default='both',
                   choices=('both',) + tuple(x.value for x in SubgroupChoice))
    s.add_argument('--jobs', type=int, default=4)

    t = subs.add_parser('selftest', help='oracle vs closed-form self test')
    _add_field_args(t)
    t.add_argument('--trials', type=int, default=100)
    t.add_argument('--seed', type=int, default=0)
    t.add_argument('--u-max', type=int, default=25)
    return ap


def spec_from_args(args) -> JobSpec:
    precision = args.precision
    if precision is None:
        env = os.environ.get('RAMIFY_PRECISION')
        if env:
            precision = int(env)
    modulus = None
    if getattr(args, 'modulus', None):
        modulus = tuple(int(x) for x in args.modulus.split(','))
    spec = JobSpec(command=args.command, p=args.p, f=args.f, modulus=modulus,
                   output=args.output, precision=precision)
    for name in ('group', 'beta1', 'beta2', 'kappa', 'kappa3', 'choice',
                 'samples', 'seed', 'trials', 'kappa3_mode', 'jobs'):
        if hasattr(args, name):
            setattr(spec, name, getattr(args, name))
    if hasattr(args, 'u_max'):
        spec.u_max = args.u_max
    if getattr(args, 'groups', ''):
        spec.groups = [g for g in args.groups.split(',') if g]
    if hasattr(args, 'choices'):
        spec.choices = args.choices
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = spec_from_args(args)
    try:
        code, doc = run(spec)
    except RamifyError as exc:
        err = {'status': 'error', 'error': type(exc).__name__, 'message': str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    except ValueError as exc:
        err = {'status': 'error', 'error': 'ValueError', 'message': str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    sys.stdout.write(doc)
    return code


if __name__ == '__main__':
    sys.exit(main())
